# %% [markdown]
# Dimensions of the twisted coordinate ring on abelian models, ampleness of
# Delta_n, and what happens for a hyperbolic matrix.

# %%
from plovlab import InfinitePlov, build_torus, hilbert_sequence, jordan_torus, plov
from plovlab.growth import f_ample_witness, hilbert_degree
from plovlab.models import basis_vector

model, auto = jordan_torus([2])
seq = hilbert_sequence(model, auto, 10)
print([int(v) for v in seq])
print("fitted degree:", hilbert_degree(seq))

# %%
# b_22 alone is only nef; after one step of the orbit it becomes ample
print(f_ample_witness(model, auto, basis_vector(4, 3), 5))

# %%
model, auto = build_torus([[2, 1], [1, 1]])
try:
    plov(model, auto)
except InfinitePlov as exc:
    print(exc)
