"""Batch command-line front end.

Every invocation runs one computation or checker and emits a deterministic
JSON (or CSV) report on stdout; wall-clock time and other volatile
diagnostics go to stderr so identical configurations produce byte-identical
stdout.  Exit codes: 0 all checks passed within tolerance, 1 a check failed,
2 usage or stabilisation error.

With --server URL the command is posted to a running service instead of
being computed in-process.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import cochains, cosphere, qseries, rep, zeta
from .algebra import AlgebraElement
from .parsing import ParseError, parse
from .rep import from_algebra
from .zeta import StabilizationError


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    q: str = "0.5"
    mode: str = "numeric"
    epsilon: float = 1.0
    tol: float = 1e-10
    n_max: int | None = None
    output: str = "json"
    seed: int = 0

    def q_float(self) -> float:
        return float(Fraction(self.q))

    def q_exact(self) -> Fraction:
        return Fraction(self.q)

    def validate(self):
        if not 0 <= self.q_float() < 1:
            raise UsageError("q must lie in [0, 1)")
        if self.tol <= 0:
            raise UsageError("tol must be positive")
        if self.mode not in ("numeric", "exact"):
            raise UsageError("mode must be 'numeric' or 'exact'")
        if self.output not in ("json", "csv"):
            raise UsageError("output must be 'json' or 'csv'")


def _engine(cfg: RunConfig) -> zeta.ZetaEngine:
    kw = {"eps": cfg.epsilon, "tol": cfg.tol}
    if cfg.n_max:
        kw["n_cap"] = cfg.n_max
        kw["n_start"] = min(40, cfg.n_max)
    return zeta.ZetaEngine(cfg.q_float(), **kw)


def _parse_word(text: str):
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(str(exc)) from exc


def _as_node(parsed):
    return from_algebra(parsed) if isinstance(parsed, AlgebraElement) else parsed


def _load_words(path: str) -> list:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                parsed = _parse_word(line)
                if not isinstance(parsed, AlgebraElement):
                    raise UsageError(f"not an algebra expression: {line!r}")
                out.append((line, parsed))
    return out


def _spectrum_battery() -> dict:
    words = ["1", "a a*", "a* a", "b b*", "b* b",
             "a", "a*", "b", "a b", "a b*", "a a b"]
    battery = {}
    for w in words:
        battery[w] = _as_node(_parse_word(w))
    battery["b* b F"] = _as_node(_parse_word("b* b F"))
    return battery


# ---------------------------------------------------------------------------
# command implementations; each returns (result dict, passed bool)

def _cmd_residue(cfg: RunConfig, params: dict):
    pole = int(params.get("pole") or 0)
    if pole not in (1, 2, 3):
        raise UsageError("--pole must be 1, 2 or 3")
    restriction = params.get("restriction") or "full"
    engine = _engine(cfg)
    node = _as_node(_parse_word(params["word"]))
    value = engine.residue(node, pole, restriction)
    fit = engine.fit(node, restriction)
    return {"residue": value, "certificate": fit.certificate()}, True


def _cmd_zeta0(cfg: RunConfig, params: dict):
    engine = _engine(cfg)
    restriction = params.get("restriction") or "full"
    node = _as_node(_parse_word(params["word"]))
    value = engine.zeta_value_at_zero(node, restriction)
    fit = engine.fit(node, restriction)
    return {"zeta0": value, "certificate": fit.certificate()}, True


def _cmd_level_traces(cfg: RunConfig, params: dict):
    n = int(params.get("n") or 20)
    restriction = params.get("restriction") or "full"
    engine = _engine(cfg)
    node = _as_node(_parse_word(params["word"]))
    series = engine.series(node, restriction, n)
    return {"n": n, "restriction": restriction,
            "traces": [float(x) for x in series]}, True


def _cmd_check_relations(cfg: RunConfig, params: dict):
    n_max = int(params.get("n") or (10 if cfg.mode == "exact" else 20))
    q = cfg.q_exact() if cfg.mode == "exact" else cfg.q_float()
    report = rep.check_relations(q, n_max, cfg.mode)
    passed = (report["exact_zero"] if cfg.mode == "exact"
              else report["max_residual"] < max(cfg.tol, 1e-12))
    return report, passed


def _cmd_check_dimension_spectrum(cfg: RunConfig, params: dict):
    battery_arg = params.get("battery") or "auto"
    if battery_arg == "auto":
        battery = _spectrum_battery()
    else:
        battery = {label: _as_node(elem) for label, elem in _load_words(battery_arg)}
    report = zeta.dimension_spectrum_probe(battery, cfg.q_float(), cfg.tol,
                                           cfg.epsilon)
    return report, report["pass"]


def _cmd_check_theorem3(cfg: RunConfig, params: dict):
    report = cochains.theorem3_check(
        int(params.get("kmax") or 3), int(params.get("lmax") or 3),
        int(params.get("nmax") or 3), cfg.tol)
    return report, report["pass"]


def _cmd_check_theorem4(cfg: RunConfig, params: dict):
    words = None
    if params.get("words"):
        words = _load_words(params["words"])
    report = cosphere.theorem4_check(cfg.q_float(), max(cfg.tol, 1e-8), words)
    return report, report["pass"]


def _cmd_check_theorem5(cfg: RunConfig, params: dict):
    report = cochains.theorem5_check(cfg.q_float(), max(cfg.tol, 1e-8))
    return report, report["pass"]


def _cmd_check_corollary1(cfg: RunConfig, params: dict):
    report = cochains.corollary1_check(cfg.q_float(), max(cfg.tol, 1e-8))
    return report, report["pass"]


def _cmd_check_theorem6(cfg: RunConfig, params: dict):
    report = cochains.theorem6_check(
        r_max=int(params.get("rmax") or 4),
        q_list=(0.3, cfg.q_float()) if cfg.q_float() not in (0.3,) else (0.3,),
        tol=max(cfg.tol, 1e-8))
    return report, report["pass"]


def _cmd_check_equivariance(cfg: RunConfig, params: dict):
    q = cfg.q_float()
    if not 0 < q < 1:
        raise UsageError("equivariance checks need 0 < q < 1")
    rel = rep.check_equivariance(q, int(params.get("n") or 10))
    vac = rep.vacuum_hopf_check(q)
    worst = max(rel["max_residual"], vac["max_residual"])
    report = {"relations": rel, "vacuum_action": vac, "max_residual": worst}
    return report, worst < max(cfg.tol, 1e-12)


def _cmd_check_bicomplex(cfg: RunConfig, params: dict):
    import random
    rng = random.Random(cfg.seed)
    report = bicomplex_check(rng, samples=int(params.get("samples") or 100))
    return report, report["pass"]


def _cmd_symbol(cfg: RunConfig, params: dict):
    parsed = _parse_word(params["word"])
    if not isinstance(parsed, AlgebraElement):
        raise UsageError("symbol expects a pure algebra expression")
    q = cfg.q_float()
    sym = cosphere.rho(parsed, q)
    s0 = sym.degree0()

    def dump(symbol):
        return [{"coeff": t.coeff, "plus": list(t.plus), "minus": list(t.minus),
                 "u_degree": t.udeg} for t in symbol.terms]

    taus = {
        "tau1xtau1": cosphere.pairing(s0, "tau1", "tau1", q, cfg.tol),
        "tau1xtau0": cosphere.pairing(s0, "tau1", "tau0", q, cfg.tol),
        "tau0xtau1": cosphere.pairing(s0, "tau0", "tau1", q, cfg.tol),
        "tau0xtau0": cosphere.pairing(s0, "tau0", "tau0", q, cfg.tol),
    }
    return {"rho": dump(sym), "degree0": dump(s0), "tau": taus}, True


def _cmd_index_pairing(cfg: RunConfig, params: dict):
    report = cochains.index_pairing(cfg.q_float())
    report["raw_cyclic_pairing"] = cochains.cyclic_pairing_raw(cfg.q_float(),
                                                               cfg.tol)
    return report, report["pass"]


def _cmd_qseries(cfg: RunConfig, params: dict):
    kind = params.get("kind")
    if kind == "R":
        r = int(params.get("r") or 1)
        rf = qseries.R(r)
        return {"r": r, "R": repr(rf),
                "poles_at_roots_of_unity": qseries.poles_only_at_roots_of_unity(rf)}, True
    if kind == "c0c1":
        r = int(params.get("r") or 1)
        total = qseries.c0(r) + qseries.c1(r)
        return {"r": r, "c0_plus_c1": repr(total)}, total.is_zero()
    if kind == "G":
        v = qseries.G(float(params.get("qsq") or cfg.q_float() ** 2), cfg.tol)
        return {"value": v.value, "tail_bound": v.tail_bound,
                "terms_used": v.terms_used}, True
    if kind == "eta-identity":
        qsq = float(params.get("qsq") or cfg.q_float() ** 2)
        rep_ = qseries.eta_identity_defect(qsq, cfg.tol)
        return rep_, rep_["defect"] < max(cfg.tol, 1e-8)
    raise UsageError("qseries kind must be R, c0c1, G or eta-identity")


def bicomplex_check(rng, samples: int = 100) -> dict:
    """b^2 = 0, B^2 = 0, bB + Bb = 0 for a pseudo-random multilinear cochain
    over sampled monomials."""
    letters = ("a", "a*", "b", "b*")

    def random_word():
        return tuple(rng.choice(letters) for _ in range(rng.randint(0, 3)))

    table: dict = {}

    def weight(words: tuple) -> float:
        if words not in table:
            table[words] = rng.uniform(-1, 1)
        return table[words]

    def raw(*elems):
        total = 0.0
        for combo, coeff in _expand(elems):
            total += coeff * weight(combo)
        return total

    def _expand(elems, prefix=(), coeff=1.0):
        if not elems:
            yield prefix, coeff
            return
        head, *tail = elems
        for w, c in head.terms.items():
            yield from _expand(tail, prefix + (w,), coeff * float(c))

    phi1 = cochains.Cochain(1, raw, "random1")
    phi2 = cochains.Cochain(2, raw, "random2")
    b, B = cochains.hochschild_b, cochains.connes_B
    worst = 0.0
    for _ in range(samples):
        args3 = tuple(AlgebraElement.from_word(random_word()) for _ in range(4))
        worst = max(worst, abs(b(b(phi1))(*args3)))
        args1 = tuple(AlgebraElement.from_word(random_word()) for _ in range(2))
        worst = max(worst, abs(B(B(cochains.Cochain(3, raw, "r3")))(*args1)))
        mixed = b(B(phi2))(*args3[:3]) + B(b(phi2))(*args3[:3])
        worst = max(worst, abs(mixed))
    return {"samples": samples, "max_residual": worst, "pass": worst < 1e-12}


_CHECKS = {
    "relations": _cmd_check_relations,
    "dimension-spectrum": _cmd_check_dimension_spectrum,
    "theorem3": _cmd_check_theorem3,
    "theorem4": _cmd_check_theorem4,
    "theorem5": _cmd_check_theorem5,
    "corollary1": _cmd_check_corollary1,
    "theorem6": _cmd_check_theorem6,
    "equivariance": _cmd_check_equivariance,
    "bicomplex": _cmd_check_bicomplex,
}

_COMMANDS = {
    "residue": _cmd_residue,
    "zeta0": _cmd_zeta0,
    "level-traces": _cmd_level_traces,
    "symbol": _cmd_symbol,
    "index-pairing": _cmd_index_pairing,
    "qseries": _cmd_qseries,
}


def dispatch(command: str, cfg: RunConfig, params: dict) -> tuple[dict, bool]:
    """Run one command; shared by the CLI and the HTTP service."""
    cfg.validate()
    if command.startswith("check:"):
        name = command.split(":", 1)[1]
        if name not in _CHECKS:
            raise UsageError(f"unknown check {name!r}")
        result, passed = _CHECKS[name](cfg, params)
    elif command in _COMMANDS:
        result, passed = _COMMANDS[command](cfg, params)
    else:
        raise UsageError(f"unknown command {command!r}")
    report = {"command": command, "config": asdict(cfg), "result": result,
              "pass": bool(passed)}
    return report, passed


# ---------------------------------------------------------------------------
# emission

def _flatten(prefix: str, obj, rows: list):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}.{i}", v, rows)
    else:
        rows.append((prefix, obj))


def emit(report: dict, output: str, stream=None) -> None:
    stream = stream or sys.stdout
    if output == "json":
        stream.write(json.dumps(report, sort_keys=True, separators=(",", ":")))
        stream.write("\n")
    else:
        rows: list = []
        _flatten("", report, rows)
        stream.write("key,value\n")
        for key, value in rows:
            stream.write(f"{key},{value}\n")


def _post_to_server(server: str, command: str, cfg: RunConfig, params: dict):
    import httpx

    payload = {"config": asdict(cfg), "params": {k: v for k, v in params.items()
                                                 if v is not None}}
    if command.startswith("check:"):
        url = f"{server.rstrip('/')}/check/{command.split(':', 1)[1]}"
    else:
        url = f"{server.rstrip('/')}/{command}"
    resp = httpx.post(url, json=payload, timeout=3600.0)
    if resp.status_code >= 400:
        raise UsageError(f"server error {resp.status_code}: {resp.text}")
    report = resp.json()
    return report, report.get("pass", False)


# ---------------------------------------------------------------------------
# argument parsing

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", default="0.5", help="deformation parameter in [0,1); accepts p/q or decimals")
    common.add_argument("--mode", default="numeric", choices=["numeric", "exact"])
    common.add_argument("--epsilon", type=float, default=1.0, help="kernel regulariser")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--n-max", dest="n_max", default="auto",
                        help="level cap (integer) or 'auto'")
    common.add_argument("--output", default="json", choices=["json", "csv"])
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--server", default=None,
                        help="POST the command to a running service instead of computing locally")

    parser = argparse.ArgumentParser(
        prog="suq2",
        description="Spectral-triple computations for the quantum group SU_q(2)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("residue", parents=[common])
    p.add_argument("--word", required=True)
    p.add_argument("--pole", type=int, required=True, choices=[1, 2, 3])
    p.add_argument("--restriction", default="full", choices=["full", "p", "hprime"])

    p = sub.add_parser("zeta0", parents=[common])
    p.add_argument("--word", required=True)
    p.add_argument("--restriction", default="full", choices=["full", "p", "hprime"])

    p = sub.add_parser("level-traces", parents=[common])
    p.add_argument("--word", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--restriction", default="full", choices=["full", "p", "hprime"])

    p = sub.add_parser("check", parents=[common])
    p.add_argument("name", choices=sorted(_CHECKS))
    p.add_argument("--battery", default="auto")
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--lmax", type=int, default=3)
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--rmax", type=int, default=4)
    p.add_argument("--words", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--samples", type=int, default=100)

    p = sub.add_parser("symbol", parents=[common])
    p.add_argument("--word", required=True)

    sub.add_parser("index-pairing", parents=[common])

    p = sub.add_parser("qseries", parents=[common])
    p.add_argument("kind", choices=["R", "c0c1", "G", "eta-identity"])
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--qsq", type=float, default=None)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    n_max = None if args.n_max in (None, "auto") else int(args.n_max)
    cfg = RunConfig(q=args.q, mode=args.mode, epsilon=args.epsilon,
                    tol=args.tol, n_max=n_max, output=args.output,
                    seed=args.seed)
    command = args.command
    if command == "check":
        command = f"check:{args.name}"
    params = {k: v for k, v in vars(args).items()
              if k not in ("command", "q", "mode", "epsilon", "tol", "n_max",
                           "output", "seed", "server")}
    started = time.time()
    try:
        if args.server:
            report, passed = _post_to_server(args.server, command, cfg, params)
        else:
            report, passed = dispatch(command, cfg, params)
    except (UsageError, ParseError) as exc:
        json.dump({"error": str(exc), "kind": "usage"}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except StabilizationError as exc:
        json.dump({"error": str(exc), "kind": "stabilization"}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    emit(report, cfg.output)
    json.dump({"wall_time_s": time.time() - started}, sys.stderr)
    sys.stderr.write("\n")
    return 0 if passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
