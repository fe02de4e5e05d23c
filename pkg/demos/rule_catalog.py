"""Check every generating rule with the tensor oracle and show one rewrite in place."""

from zhscale import rules
from zhscale.diagram import Diagram, equal_semantics

for name, rule in rules.RULES.items():
    ok = rules.verify_rule(name, draws=20, seed=0)
    print(f"{name:4s} {'ok ' if ok else 'FAIL'} {rule.description}")

# fuse two phase spiders inside a bigger diagram
d = Diagram()
a, b, h = d.z(0.25), d.z(0.5), d.h(2)
d.connect(d.add_input(), a)
d.connect(a, b)
d.connect(b, h)
d.connect(h, d.add_output())
site = rules.find_sites("zs1", d)[0]
fused = rules.apply("zs1", d, site)
print(f"\nfused {site}: {len(d.nodes)} -> {len(fused.nodes)} nodes, same map: {bool(equal_semantics(d, fused))}")
