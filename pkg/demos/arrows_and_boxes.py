"""Matrix arrows, their !-box spelling, and the algebra they satisfy."""

from zhscale.bang import arrow_to_bang, bang_to_arrow, instantiate
from zhscale.diagram import equal_semantics, to_dot
from zhscale.scalable import BitMatrix, arrow, arrow_laws_check, interpret_arrow, s_to_dot, strip

A = BitMatrix([[1, 1, 0], [0, 1, 1]], 2, 3)
B = BitMatrix([[1, 0], [1, 1], [0, 1]], 3, 2)
print("red arrow of A on |101>:", interpret_arrow("red", A)[:, 0b101].nonzero()[0])
for law in ("copy-green", "erase-green", "hadamard-flip"):
    print(f"{law}: {arrow_laws_check(law, A)}")
print("compose-red:", arrow_laws_check("compose-red", A, B))
print("compose-yellow:", arrow_laws_check("compose-yellow", A, B))

t = arrow_to_bang("yellow", A)
print("\n!-box form recognised as:", bang_to_arrow(t))
print("instantiation equals the stripped arrow:", bool(equal_semantics(instantiate(t), strip(arrow("yellow", A)))))

print("\n" + s_to_dot(arrow("yellow", A)))
print(to_dot(strip(arrow("red", BitMatrix([[1, 1]], 1, 2)))))
