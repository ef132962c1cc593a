# %% [markdown]
# Fujiki-type forms I(x^{2m}) = c q(x)^m with a parabolic isometry of q.

# %%
from fractions import Fraction

from plovlab import plov
from plovlab.gallery import HK_INVOLUTION, HK_PARABOLIC, fujiki_pair

for m in (1, 2, 3):
    model, auto = fujiki_pair(HK_PARABOLIC, m, "parabolic")
    rep = plov(model, auto, ladders=False, two_sided=False, oracle=False)
    print(f"half dim {m}: Plov = {rep.plov}  leading coefficient {rep.P.leading_coefficient}")

# %%
# a finite-order isometry only sees the trivial growth
for m in (1, 2):
    model, auto = fujiki_pair(HK_INVOLUTION, m, "involution")
    print(m, auto.order, plov(model, auto, ladders=False, two_sided=False, oracle=False).plov)

# %%
model, _ = fujiki_pair(HK_PARABOLIC, 2, "parabolic")
x = (Fraction(2), Fraction(1), Fraction(3))
print(model.eval_I([x] * 4), model.qform(x, x) ** 2)
