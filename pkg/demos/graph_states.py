"""Graph states, local complementation and its hypergraph version."""

import numpy as np

from zhscale import rules
from zhscale.bang import graph_state, graph_state_via_incidence, incidence
from zhscale.diagram import equal_semantics, semantics

path = np.array([[0, 1, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0]])
print("P4 amplitudes:", np.round(semantics(graph_state(path))[:, 0].real, 4))
print("incidence:\n", incidence(path).array)
print("incidence route agrees:", bool(equal_semantics(graph_state(path), graph_state_via_incidence(path))))

for v in range(4):
    lhs, rhs = rules.local_complementation(path, v)
    print(f"local complementation at {v}:", bool(equal_semantics(lhs, rhs)))
print("complemented at 1:\n", rules.complement_at(path, 1))

for n in (1, 2, 3):
    lhs, rhs = rules.hyper_local_complementation(n)
    print(f"hyper local complementation, {n} hyper-edges:", bool(equal_semantics(lhs, rhs)))
