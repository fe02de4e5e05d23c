"""Command line front end: ``zhscale {eval,check,transform,mine,export,list}``.

Exit codes: 0 when everything checked passes, 1 when something fails
(including capacity overruns), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import nests, rules, transforms
from .diagram import DEFAULT_LIMIT, DEFAULT_TOL, CapacityError, equal_semantics, from_json, semantics, to_dot
from .scalable import BitMatrix, s_from_json, s_to_dot, strip

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    tol: float = DEFAULT_TOL
    limit: int = DEFAULT_LIMIT
    seed: int = 0
    format: str = "text"

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError("tolerance must be positive")
        if self.limit < 4:
            raise UsageError("contraction limit must be at least 4")
        if self.format not in ("text", "json"):
            raise UsageError(f"unknown output format {self.format!r}")


def read_config(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"bad config line {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value.strip('"')
    return out


def make_config(args) -> RunConfig:
    base = {}
    if args.config:
        raw = read_config(args.config)
        conv = {"tol": float, "tolerance": float, "limit": int, "seed": int, "format": str}
        for k, v in raw.items():
            if k not in conv:
                raise UsageError(f"unknown config key {k!r}")
            base["tol" if k == "tolerance" else k] = conv[k](v)
    cfg = RunConfig(**base)
    flags = {}
    if args.tol is not None:
        flags["tol"] = args.tol
    if args.limit is not None:
        flags["limit"] = args.limit
    if args.seed is not None:
        flags["seed"] = args.seed
    if args.json:
        flags["format"] = "json"
    return replace(cfg, **flags)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def load_diagram(path: str):
    """Plain diagram, or a scalable one (recognised by ``boundary_sizes``) which is stripped."""
    data = _load_json(path)
    try:
        if "boundary_sizes" in data:
            return strip(s_from_json(data)), s_from_json(data)
        return from_json(data), None
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"malformed diagram {path}: {exc}") from exc


def _complex_json(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _emit(cfg: RunConfig, report: dict, text: str) -> None:
    if cfg.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(text)


# -- eval / export --------------------------------------------------------

def cmd_eval(args, cfg: RunConfig) -> int:
    d, _ = load_diagram(args.file)
    try:
        t = semantics(d, limit=cfg.limit)
    except CapacityError as exc:
        _emit(cfg, {"error": "capacity", "message": str(exc)}, f"capacity exceeded: {exc}")
        return EXIT_FAIL
    report = {"shape": list(t.shape), "tensor": [[_complex_json(z) for z in row] for row in t]}
    with np.printoptions(precision=6, suppress=True):
        _emit(cfg, report, str(t))
    return EXIT_OK


def cmd_export(args, cfg: RunConfig) -> int:
    d, s = load_diagram(args.file)
    text = s_to_dot(s) if s is not None and not args.strip else to_dot(d)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- check ----------------------------------------------------------------

def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not key=value")
        k, v = item.split("=", 1)
        try:
            val = complex(v.replace("i", "j")) if ("j" in v or "i" in v) else float(v)
            if isinstance(val, float) and val.is_integer() and "." not in v:
                val = int(val)
        except ValueError as exc:
            raise UsageError(f"bad value for {k}: {v!r}") from exc
        out[k] = val
    return out


def _random_matrix(rng: random.Random, rows: int, cols: int) -> BitMatrix:
    return BitMatrix([[rng.randint(0, 1) for _ in range(cols)] for _ in range(rows)], rows, cols)


def _eq(a, b, cfg) -> bool:
    return bool(equal_semantics(a, b, tol=cfg.tol, limit=cfg.limit))


def _check_rhp(rng, cfg):
    A = _random_matrix(rng, 2, 2)
    B = _random_matrix(rng, 2, rng.choice([2, 3]))
    lhs, rhs = rules.regular_hyper_pivot(A, B)
    sl, sr = rules.rhp_scalable(A, B)
    ll, lr = rules.rhp_lemma(A, B)
    ok = _eq(lhs, rhs, cfg) and _eq(strip(sl), strip(sr), cfg) and _eq(strip(ll), strip(lr), cfg)
    return {"A": A.tolist(), "B": B.tolist()}, ok


def _check_lc(rng, cfg):
    n = rng.randint(1, 5)
    G = np.zeros((n, n), dtype=int)
    for u in range(n):
        for v in range(u + 1, n):
            G[u, v] = G[v, u] = rng.randint(0, 1)
    v = rng.randrange(n)
    lhs, rhs = rules.local_complementation(G, v)
    return {"adjacency": G.tolist(), "vertex": v}, _eq(lhs, rhs, cfg)


def _check_hlc(rng, cfg):
    n = rng.randint(1, 3)
    lhs, rhs = rules.hyper_local_complementation(n)
    return {"n": n}, _eq(lhs, rhs, cfg)


def _check_fhp(rng, cfg):
    n, m = rng.choice([(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)])
    lam = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)]
    lhs, rhs = nests.fourier_hyper_pivot(n, m, lam)
    return {"n": n, "m": m, "lambda": [_complex_json(a) for a in lam]}, _eq(lhs, rhs, cfg)


def _check_mobius_nest(rng, cfg):
    n = rng.randint(3, 5)
    return {"n": n}, nests.verify_nest(nests.mobius_gadget_identity(n), oracle=True, tol=cfg.tol).identity


def _check_tof(rng, cfg):
    n = rng.randint(4, 7)
    return {"n": n}, nests.verify_tof(n).identity


THEOREMS = {
    "lc": ("local complementation on random graphs", _check_lc),
    "hlc": ("hyper local complementation, !-box form", _check_hlc),
    "rhp": ("regular hyper pivot: diagram, scalable and lemma forms", _check_rhp),
    "fhp": ("Fourier hyper pivot with random labels", _check_fhp),
    "mobius-nest": ("gadget nest from the Mobius transform of the omega gadget", _check_mobius_nest),
    "tof": ("phase-gadget nest for the n-controlled Toffoli, as stated", _check_tof),
}


def cmd_check(args, cfg: RunConfig) -> int:
    name = args.name.lower()
    params = _parse_params(args.param)
    trials = []
    try:
        if name in rules.RULES:
            rule = rules.RULES[name]
            if params:
                samples = [params]
            else:
                rng = random.Random(cfg.seed)
                samples = [rule.sampler(rng) for _ in range(args.seeds or 20)]
            for p in samples:
                lhs, rhs = rule.sides(**p)
                ok = _eq(lhs, rhs, cfg)
                trials.append({"params": {k: (_complex_json(v) if isinstance(v, complex) else v)
                                          for k, v in sorted(p.items())}, "pass": ok})
        elif name in THEOREMS:
            if params:
                raise UsageError(f"{name} takes no parameters, only --seeds")
            fn = THEOREMS[name][1]
            for k in range(args.seeds or 10):
                p, ok = fn(random.Random(cfg.seed * 1000003 + k), cfg)
                trials.append({"params": p, "pass": bool(ok)})
        else:
            raise UsageError(f"unknown rule or theorem {args.name!r}; try `list`")
    except TypeError as exc:
        raise UsageError(f"bad parameters for {name}: {exc}") from exc
    except CapacityError as exc:
        _emit(cfg, {"name": name, "error": "capacity", "message": str(exc)}, f"capacity exceeded: {exc}")
        return EXIT_FAIL
    passed = sum(t["pass"] for t in trials)
    report = {"name": name, "passed": passed, "total": len(trials), "trials": trials,
              "tolerance": cfg.tol, "seed": cfg.seed}
    _emit(cfg, report, f"{name}: {passed}/{len(trials)} pass")
    return EXIT_OK if passed == len(trials) else EXIT_FAIL


# -- transform ------------------------------------------------------------

def _phase_entry(v) -> transforms.Phase:
    """``{"theta_num", "theta_den"}``, ``{"re", "im"}``, an angle string in units of pi like ``"1/2"``,
    or a plain number taken as the value itself."""
    if isinstance(v, dict):
        return transforms.phase_from_json(v)
    if isinstance(v, str):
        return transforms.Phase.exact(Fraction(v))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return transforms.Phase.from_complex(v)
    raise ValueError(f"bad phase {v!r}")


def load_function(path: str):
    data = _load_json(path)
    try:
        if isinstance(data, list):
            vals = tuple(_phase_entry(v) for v in data)
            return transforms.SymmetricPhaseFunction(len(vals) - 1, vals)
        vals = tuple(_phase_entry(v) for v in data["values"])
        n = int(data.get("n", max(len(vals) - 1, 0).bit_length()))
        if data.get("symmetric"):
            return transforms.SymmetricPhaseFunction(n, vals)
        if len(vals) != 2 ** n:
            raise ValueError(f"need 2^{n} values, got {len(vals)}")
        return transforms.PhaseFunction(n, vals)
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed function {path}: {exc}") from exc


TRANSFORMS = {
    "fourier": (transforms.fourier, False),
    "invert-fourier": (lambda f: transforms.invert_fourier(f, f.values[0]), False),
    "mobius": (transforms.mobius, False),
    "invert-mobius": (transforms.invert_mobius, False),
    "mobius-from-fourier": (transforms.mobius_from_fourier, False),
    "fourier-from-mobius": (transforms.fourier_from_mobius, False),
    "kravchuk": (transforms.kravchuk_transform, True),
    "invert-kravchuk": (lambda F: transforms.invert_kravchuk(F, F.F[0]), True),
    "binomial": (transforms.binomial_transform, True),
    "invert-binomial": (transforms.invert_binomial, True),
}


def _phase_row(p: transforms.Phase) -> dict:
    row = {"value": _complex_json(p.value), "exact": p.is_exact}
    if p.is_exact:
        row["exponent"] = str(p.exp)
    return row


def cmd_transform(args, cfg: RunConfig) -> int:
    which = args.which.lower()
    if which not in TRANSFORMS:
        raise UsageError(f"unknown transform {args.which!r}; known: {', '.join(TRANSFORMS)}")
    fn, symmetric = TRANSFORMS[which]
    f = load_function(args.file)
    if symmetric and not isinstance(f, transforms.SymmetricPhaseFunction):
        raise UsageError(f"{which} needs a symmetric function (a list indexed by weight)")
    if not symmetric and isinstance(f, transforms.SymmetricPhaseFunction):
        f = f.expand()
    out = fn(f)
    values = out.F if symmetric else out.values
    rows = [_phase_row(v) for v in values]
    exact = all(r["exact"] for r in rows)
    report = {"transform": which, "n": out.n, "symmetric": symmetric, "exact": exact,
              "canonical_branch": not exact, "values": rows}
    lines = [f"{which} (n={out.n}, {'exact' if exact else 'approximate, principal branch'})"]
    for k, r in enumerate(rows):
        key = str(k) if symmetric else format(k, f"0{out.n}b")[::-1] if out.n else "-"
        z = complex(*r["value"])
        expo = f"  exp(i pi {r['exponent']})" if r["exact"] else ""
        lines.append(f"  {key}: {z.real:+.6f}{z.imag:+.6f}j{expo}")
    _emit(cfg, report, "\n".join(lines))
    return EXIT_OK


# -- mine -----------------------------------------------------------------

def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def cmd_mine(args, cfg: RunConfig) -> int:
    if args.n < 1:
        raise UsageError("n must be positive")
    try:
        res = nests.mine_nests(args.n, denominator=args.denominator,
                               gadget_weights=_int_list(args.gadget_weights),
                               hyper_weights=_int_list(args.hyper_weights), include_n=not args.no_full,
                               nontrivial_only=args.nontrivial)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except CapacityError as exc:
        _emit(cfg, {"error": "capacity", "message": str(exc)}, f"capacity exceeded: {exc}")
        return EXIT_FAIL
    found = []
    for spec in res.specs:
        row = {"gadgets": {}, "hyper": {}}
        for kind, k, phase in spec.profile:
            key = "gadgets" if kind is nests.GadgetKind.PHASE_GADGET else "hyper"
            row[key][str(k)] = str(phase.reduced)
        found.append(row)
    report = {"n": args.n, "denominator": args.denominator, "searched": res.searched, "found": found}
    lines = [f"searched {res.searched} candidates at n={args.n}, found {len(found)} identities"]
    for f in found[: args.show]:
        lines.append(f"  gadgets {f['gadgets']}  hyper-edges {f['hyper']}")
    _emit(cfg, report, "\n".join(lines))
    return EXIT_OK


# -- list -----------------------------------------------------------------

def cmd_list(args, cfg: RunConfig) -> int:
    entries = {name: r.description for name, r in rules.RULES.items()}
    entries.update({name: desc for name, (desc, _) in THEOREMS.items()})
    report = {"rules": sorted(rules.RULES), "theorems": sorted(THEOREMS), "transforms": sorted(TRANSFORMS),
              "descriptions": entries}
    lines = ["rules:"] + [f"  {k:12s} {rules.RULES[k].description}" for k in rules.RULES]
    lines += ["theorems:"] + [f"  {k:12s} {THEOREMS[k][0]}" for k in THEOREMS]
    lines += ["transforms:", "  " + ", ".join(TRANSFORMS)]
    _emit(cfg, report, "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help=f"comparison tolerance (default {DEFAULT_TOL})")
    common.add_argument("--limit", type=int, help=f"max indices per contraction step (default {DEFAULT_LIMIT})")
    common.add_argument("--seed", type=int, help="seed for randomised sweeps")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--config", help="key=value file; flags override it")

    p = argparse.ArgumentParser(prog="zhscale", description="ZH and scalable ZH diagram toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="print the tensor of a JSON diagram")
    e.add_argument("file")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("check", parents=[common], help="verify a rule or theorem with the oracle")
    c.add_argument("name")
    c.add_argument("--seeds", type=int, help="number of random instances")
    c.add_argument("--param", "-p", action="append", help="rule parameter key=value (repeatable)")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("transform", parents=[common], help="apply a transform to a phase function file")
    t.add_argument("which")
    t.add_argument("file")
    t.set_defaults(func=cmd_transform)

    m = sub.add_parser("mine", parents=[common], help="search a lattice of symmetric gadget nests")
    m.add_argument("n", type=int)
    m.add_argument("--denominator", type=int, default=16)
    m.add_argument("--gadget-weights", default="1,2,3")
    m.add_argument("--hyper-weights", default="")
    m.add_argument("--no-full", action="store_true", help="leave out the weight-n gadget")
    m.add_argument("--nontrivial", action="store_true", help="skip the all-zero nest")
    m.add_argument("--show", type=int, default=20)
    m.set_defaults(func=cmd_mine)

    x = sub.add_parser("export", parents=[common], help="write Graphviz source for a diagram")
    x.add_argument("file")
    x.add_argument("--output", "-o")
    x.add_argument("--strip", action="store_true", help="export the stripped plain diagram")
    x.set_defaults(func=cmd_export)

    ls = sub.add_parser("list", parents=[common], help="list rules, theorems and transforms")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = make_config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
