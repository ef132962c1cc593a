# %% [markdown]
# Volume growth on E^d under a unipotent integer matrix.
#
# f acts on H^{1,0} by A; on H^{1,1} it acts by A (x) A.  For a single Jordan
# block the top self-intersection of Delta_n = omega + f*omega + ... + (f^n)*omega
# grows like n^(d^2).

# %%
from plovlab import jordan_torus, plov
from plovlab.growth import delta_poly, ladder

model, auto = jordan_torus([3])
print(model)
print("k on H^{1,1}:", auto.cert.k, " Jordan blocks:", auto.cert.jordan_partition)

# %%
# Delta_n as a class-valued polynomial: sum_j C(n+1, j+1) N^j omega
for poly, cls in delta_poly(model, auto).terms():
    nz = {model.labels[i]: str(x) for i, x in enumerate(cls) if x}
    print(poly.to_string("n"), " * ", nz)

# %%
rep = plov(model, auto)
print("P(n) =", rep.P)
print("Plov =", rep.plov, " GKdim =", rep.gkdim)
print("two-sided degree:", rep.plov_two_sided, " oracle agrees:", rep.oracle_agreed)

# %%
# the partial degrees deg I(Delta_n^i, omega^(d-i)) climb strictly
print(ladder(model, auto))

# %%
# Mixed Jordan types: the answer is the sum of squared block sizes
for part in ([1, 1, 1], [2, 1], [3], [2, 2], [3, 1]):
    m, a = jordan_torus(part)
    print(part, plov(m, a, ladders=False, two_sided=False, oracle=False).plov)
