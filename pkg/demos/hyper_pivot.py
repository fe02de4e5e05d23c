"""Regular and Fourier hyper pivots on small instances."""

import numpy as np

from zhscale import nests, rules
from zhscale.diagram import equal_semantics
from zhscale.scalable import BitMatrix, s_equal

A = BitMatrix([[1, 1, 0], [0, 1, 1]], 2, 3)
B = BitMatrix([[1, 0], [1, 1]], 2, 2)
print("regular pivot, plain diagrams:", bool(equal_semantics(*rules.regular_hyper_pivot(A, B))))
print("regular pivot, scalable form:", bool(s_equal(*rules.rhp_scalable(A, B))))
print("bilinearity step:", bool(s_equal(*rules.rhp_lemma(A, B))))
for name in ("hs2", "ba1", "ba2"):
    print(f"pivot reproduces {name}:", rules.check_special_case(name, 2, 2))

rng = np.random.default_rng(1)
for n, m in [(1, 3), (2, 2), (3, 2)]:
    lam = rng.normal(size=n) + 1j * rng.normal(size=n)
    print(f"Fourier pivot n={n} m={m}:", bool(equal_semantics(*nests.fourier_hyper_pivot(n, m, lam))))
fl, fr = nests.fourier_hyper_pivot(2, 2, [-1, -1])
rl, rr = rules.regular_hyper_pivot_instance(2, 2)
print("labels -1 give the regular pivot:", bool(equal_semantics(fl, rl) and equal_semantics(fr, rr)))
