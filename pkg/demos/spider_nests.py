"""Spider nests: phase-gadget compositions that multiply out to the identity."""

from zhscale import nests

for n in (3, 4, 5, 6):
    r = nests.verify_nest(nests.mobius_gadget_identity(n), oracle=True)
    print(f"omega gadget on {n} wires as hyper-edges of weight <= 3: {r.identity} (oracle {r.oracle})")

print("\nToffoli nest with the quoted angles:")
for n in (4, 5, 8):
    r = nests.verify_tof(n, oracle=n <= 5)
    print(f"  n={n}: identity={r.identity}, first bad weight {r.witness}, ratio exp(i pi {r.witness_ratio.exp})")
print("  residues of E(l) mod 2:", sorted({str(nests.residue_E(l)) for l in range(24)}))

print("with every angle doubled:")
for n in (4, 5, 8, 32):
    r = nests.verify_tof(n, corrected=True, oracle=n <= 5)
    profile = {k: str(v) for k, v in nests.tof_profile(n, corrected=True).items()}
    print(f"  n={n}: identity={r.identity}, angles/pi by weight {profile}")

res = nests.mine_nests(4, denominator=16, gadget_weights=(1, 2, 3), nontrivial_only=True)
print(f"\nmined {len(res.specs)} nontrivial nests on 4 wires out of {res.searched} candidates")
print("doubled profile among them:", any(nests.same_profile(s, nests.tof_profile(4, True)) for s in res.specs))
print("quoted profile among them:", any(nests.same_profile(s, nests.tof_profile(4)) for s in res.specs))
