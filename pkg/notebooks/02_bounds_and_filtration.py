# %% [markdown]
# Bounds on Plov in terms of d and k, and the filtration behind them.

# %%
from plovlab import bound_report, canonical_sequence, filtration_spaces, jordan_torus, vanishing_diagnostics, verify_quasi_nef

model, auto = jordan_torus([3])
rep = bound_report(model, auto)
for c in rep.checks:
    mark = {True: "pass", False: "FAIL", None: "n/a"}[c.passed]
    print(f"{mark:5s} {c.tag:18s} {c.statement}   [{c.lhs} {c.relation} {c.rhs}]")

# %%
# quasi-nef sequence built from even powers of N applied to omega
seq = canonical_sequence(model, auto)
print(seq.provenance)
ver = verify_quasi_nef(model, auto, seq)
print(ver.status, [(c.index, c.nef_proxy) for c in ver.checks])

# %%
data = filtration_spaces(model, auto, seq)
dims_F, dims_Fp = data.dims()
print("dim F_i :", dims_F)
print("dim F'_i:", dims_Fp)
print("s-sequence:", data.s_sequence, " k = 2r =", 2 * data.r)

# %%
diag = vanishing_diagnostics(model, auto)
for x in diag.diagnostics:
    print("ok " if x.passed else "BAD", x.tag, x.statement)
