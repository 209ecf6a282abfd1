"""Command-line front end.

Reports are JSON with fractions written as ``"n/d"`` strings; scans are
CSV.  Exit status: 0 success, 1 validation error, 2 budget refusal,
3 a verified property failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .dispersion import (
    DispersionFunction,
    check_main_inequality,
    dispersion,
    proof_chain,
)
from .dist import IntDist, dist_from_json, dist_to_obj, make_dist, parse_fraction
from .errors import ParseError, RearrangeError, ValidationError
from .oracle import DEFAULT_BUDGET, verify_theorem
from .rearrange import plus_rearrangement
from .sums import (
    DEFAULT_EXACT_BITS,
    DEFAULT_SIGN_BUDGET,
    FloatPMF,
    compare_concentration,
    concentration,
    convolve,
    llt_scan,
    self_convolve,
)

SUBCOMMANDS = (
    "rearrange",
    "dispersion",
    "check",
    "proof-chain",
    "oracle",
    "convolve",
    "concentration",
    "compare",
    "llt-scan",
    "sweep",
)

VERIFICATION_FAILED = 3


@dataclass
class RunConfig:
    subcommand: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    f_name: str = "square"
    seed: int = 0
    budget_enum: int = DEFAULT_BUDGET
    budget_signs: int = DEFAULT_SIGN_BUDGET
    budget_bits: int = DEFAULT_EXACT_BITS
    with_path: Optional[str] = None
    n: Optional[int] = None
    mode: str = "exact"
    a: Optional[str] = None
    probs: Optional[str] = None
    window: Optional[str] = None
    signs: str = "search"
    ns: list[int] = field(default_factory=lambda: [16, 64, 256, 1024, 4096])
    count: int = 100
    oracle_every: int = 10

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise ValidationError(f"unknown subcommand {self.subcommand!r}")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be an unsigned 64-bit integer")
        for name in ("budget_enum", "budget_signs", "budget_bits"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name.replace('_', '-')} must be positive")


# --- serialization helpers ------------------------------------------------


def _num(x: Any) -> Any:
    if isinstance(x, bool):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    return x


def _dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _read_dist(path: Optional[str]) -> IntDist:
    if path is None:
        raise ValidationError("--in is required")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    return dist_from_json(text)


def _parse_window(s: Optional[str]) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*:\s*(-?\d+)\s*", s or "")
    if not m:
        raise ParseError(f"window must look like lo:hi, got {s!r}")
    return int(m.group(1)), int(m.group(2))


def _parse_probs(s: Optional[str]) -> list[Fraction]:
    try:
        items = json.loads(s or "")
    except json.JSONDecodeError as exc:
        raise ParseError(f"--probs is not valid JSON: {exc}") from exc
    if not isinstance(items, list) or not items:
        raise ParseError("--probs must be a non-empty JSON list of fraction strings")
    return [parse_fraction(p) for p in items]


def _parse_a(s: str) -> Any:
    try:
        return parse_fraction(s)
    except ParseError:
        try:
            return float(s)
        except ValueError as exc:
            raise ParseError(f"bad centering value {s!r}") from exc


def _dispersion_obj(f: DispersionFunction, res) -> dict:
    out = {"f": f.name, "value": _num(res.value), "exact": res.exact}
    if res.minimizers.is_point:
        out["minimizer"] = _num(res.minimizers.lo)
    out["minimizers"] = {"lo": _num(res.minimizers.lo), "hi": _num(res.minimizers.hi)}
    if not res.exact:
        out["tolerance"] = _num(res.tolerance)
    return out


def _pmf_obj(d: Any) -> dict:
    if isinstance(d, FloatPMF):
        return {
            "offset": d.offset,
            "probs": [repr(float(p)) for p in d.probs],
            "mass_drift": repr(d.mass_drift),
        }
    return dist_to_obj(d)


# --- subcommands -----------------------------------------------------------


def _cmd_rearrange(cfg: RunConfig) -> tuple[int, str]:
    return 0, _dumps(dist_to_obj(plus_rearrangement(_read_dist(cfg.input_path))))


def _cmd_dispersion(cfg: RunConfig) -> tuple[int, str]:
    f = DispersionFunction.parse(cfg.f_name)
    return 0, _dumps(_dispersion_obj(f, dispersion(_read_dist(cfg.input_path), f)))


def _cmd_check(cfg: RunConfig) -> tuple[int, str]:
    f = DispersionFunction.parse(cfg.f_name)
    d = _read_dist(cfg.input_path)
    rep = check_main_inequality(d, f)
    return 0, _dumps({
        "f": f.name,
        "d_f_x": _num(rep.d_f_x),
        "d_f_x_plus": _num(rep.d_f_x_plus),
        "holds": rep.holds,
        "equality": rep.equality,
        "equivalence_explains_equality": rep.equivalence_explains_equality,
        "strictness_eligible": f.strictness_eligible,
        "x_plus": dist_to_obj(plus_rearrangement(d)),
    })


def _cmd_proof_chain(cfg: RunConfig) -> tuple[int, str]:
    f = DispersionFunction.parse(cfg.f_name)
    d = _read_dist(cfg.input_path)
    a = _parse_a(cfg.a) if cfg.a is not None else dispersion(d, f).minimizers.lo
    tr = proof_chain(d, f, a)
    vec = lambda v: [_num(x) for x in v]  # noqa: E731
    return 0, _dumps({
        "f": f.name,
        "a": _num(tr.a),
        "a_prime": _num(tr.a_prime),
        "p": vec(tr.p_vec),
        "v": vec(tr.v_vec),
        "v_sorted": vec(tr.v_sorted_vec),
        "w": vec(tr.w_vec),
        "dot_pv": _num(tr.dot_pv),
        "dot_pv_sorted": _num(tr.dot_pv_sorted),
        "dot_pw": _num(tr.dot_pw),
    })


def _cmd_oracle(cfg: RunConfig) -> tuple[int, str]:
    f = DispersionFunction.parse(cfg.f_name)
    probs = _parse_probs(cfg.probs)
    window = _parse_window(cfg.window)
    rep = verify_theorem(probs, window, f, cfg.budget_enum)
    return 0, _dumps({
        "f": f.name,
        "window": [window[0], window[1]],
        "num_assignments": rep.num_assignments,
        "min_value": _num(rep.min_value),
        "plus_form_value": _num(rep.plus_form_value),
        "theorem_holds": rep.theorem_holds,
        "equality_cases_all_equivalent": rep.equality_cases_all_equivalent,
        "minimizers": [dist_to_obj(m) for m in rep.minimizers],
    })


def _cmd_convolve(cfg: RunConfig) -> tuple[int, str]:
    d = _read_dist(cfg.input_path)
    if cfg.with_path is not None:
        return 0, _dumps(dist_to_obj(convolve(d, _read_dist(cfg.with_path))))
    n = cfg.n if cfg.n is not None else 1
    return 0, _dumps(_pmf_obj(self_convolve(d, n, cfg.mode, cfg.budget_bits)))


def _cmd_concentration(cfg: RunConfig) -> tuple[int, str]:
    d = _read_dist(cfg.input_path)
    if cfg.n is not None:
        d = self_convolve(d, cfg.n, cfg.mode, cfg.budget_bits)
    rep = concentration(d)
    return 0, _dumps({"argmax_x": rep.argmax_x, "q_max": _num(rep.q_max), "mode": rep.mode})


def _cmd_compare(cfg: RunConfig) -> tuple[int, str]:
    d = _read_dist(cfg.input_path)
    n = cfg.n if cfg.n is not None else 2
    if n < 1:
        raise ValidationError("--n must be positive")
    rep = compare_concentration([d] * n, cfg.budget_signs, cfg.signs)
    return 0, _dumps({
        "n": n,
        "signs": cfg.signs,
        "lhs_q": _num(rep.lhs_q),
        "rhs_q_best": _num(rep.rhs_q_best),
        "all_plus_q": _num(rep.all_plus_q),
        "best_signs": list(rep.best_signs),
        "patterns_searched": rep.patterns_searched,
        "inequality_holds": rep.inequality_holds,
    })


def _cmd_llt_scan(cfg: RunConfig) -> tuple[int, str]:
    d = _read_dist(cfg.input_path)
    rows = llt_scan(d, cfg.ns)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "q_n", "ratio"])
    for r in rows:
        w.writerow([r.n, repr(r.q_n), repr(r.ratio)])
    return 0, buf.getvalue()


def random_dist(rng: random.Random) -> IntDist:
    """N in [1, 6] distinct values in [-6, 6] with integer weights in [1, 64]."""
    n = rng.randint(1, 6)
    values = rng.sample(range(-6, 7), n)
    weights = [rng.randint(1, 64) for _ in range(n)]
    total = sum(weights)
    return make_dist((x, Fraction(w, total)) for x, w in zip(values, weights))


def sweep(cfg: RunConfig) -> dict:
    f = DispersionFunction.parse(cfg.f_name)
    if cfg.count < 0:
        raise ValidationError("--count must be non-negative")
    if cfg.oracle_every < 0:
        raise ValidationError("--oracle-every must be non-negative")
    rng = random.Random(cfg.seed)
    passed = oracle_checks = oracle_passed = 0
    failures = []
    for i in range(cfg.count):
        d = random_dist(rng)
        rep = check_main_inequality(d, f)
        ok = rep.holds
        if f.strictness_eligible:
            ok = ok and rep.equality == rep.equivalence_explains_equality
        if ok:
            passed += 1
        else:
            failures.append({"index": i, "check": "main_inequality", "instance": dist_to_obj(d)})
        if f.exact and cfg.oracle_every and i % cfg.oracle_every == 0:
            oracle_checks += 1
            orep = verify_theorem(list(d.probs), (-4, 4), f, cfg.budget_enum)
            ook = orep.theorem_holds and (
                orep.equality_cases_all_equivalent or not f.strictness_eligible
            )
            if ook:
                oracle_passed += 1
            else:
                failures.append({"index": i, "check": "oracle", "instance": dist_to_obj(d)})
    return {
        "seed": cfg.seed,
        "count": cfg.count,
        "f": f.name,
        "passed": passed,
        "failed": cfg.count - passed,
        "oracle_checks": oracle_checks,
        "oracle_passed": oracle_passed,
        "failures": failures,
    }


def _cmd_sweep(cfg: RunConfig) -> tuple[int, str]:
    report = sweep(cfg)
    status = VERIFICATION_FAILED if report["failures"] else 0
    return status, _dumps(report)


_DISPATCH = {
    "rearrange": _cmd_rearrange,
    "dispersion": _cmd_dispersion,
    "check": _cmd_check,
    "proof-chain": _cmd_proof_chain,
    "oracle": _cmd_oracle,
    "convolve": _cmd_convolve,
    "concentration": _cmd_concentration,
    "compare": _cmd_compare,
    "llt-scan": _cmd_llt_scan,
    "sweep": _cmd_sweep,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    """Dispatch ``cfg``; returns the exit status and the text to emit.

    On error the text is a JSON object ``{"error": code, "message": ...}``.
    """
    try:
        return _DISPATCH[cfg.subcommand](cfg)
    except RearrangeError as exc:
        return exc.exit_status, _dumps({"error": exc.code, "message": str(exc)})


# --- argument parsing ------------------------------------------------------


def _int_list(s: str) -> list[int]:
    try:
        return [int(t) for t in s.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input_path", help="distribution JSON file")
    common.add_argument("--out", dest="output_path", help="write output here instead of stdout")
    common.add_argument("--f", dest="f_name", default="square",
                        help="identity | square | power:<p> (default: square)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-enum", "--budget", dest="budget_enum", type=int,
                        default=DEFAULT_BUDGET, help="oracle assignment budget")
    common.add_argument("--budget-signs", dest="budget_signs", type=int,
                        default=DEFAULT_SIGN_BUDGET, help="sign-pattern budget")
    common.add_argument("--budget-bits", dest="budget_bits", type=int,
                        default=DEFAULT_EXACT_BITS, help="exact convolution denominator bits")

    parser = argparse.ArgumentParser(
        prog="intrearrange",
        description="Integer symmetric-decreasing rearrangement and dispersion checks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("rearrange", parents=[common], help="print the plus rearrangement")
    sub.add_parser("dispersion", parents=[common], help="D_f value and minimizers")
    sub.add_parser("check", parents=[common], help="compare D_f(X) with D_f(X+)")
    p = sub.add_parser("proof-chain", parents=[common], help="trace p.v >= p.v' >= p.w")
    p.add_argument("--a", help="centering value (fraction or decimal); default: a minimizer")
    p = sub.add_parser("oracle", parents=[common], help="exhaustive placement search")
    p.add_argument("--probs", required=True, help='JSON list such as \'["2/3","1/3"]\'')
    p.add_argument("--window", required=True, help="inclusive integer window lo:hi")
    p = sub.add_parser("convolve", parents=[common], help="sum of independent variables")
    p.add_argument("--with", dest="with_path", help="second distribution JSON file")
    p.add_argument("--n", type=int, help="self-convolution count")
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p = sub.add_parser("concentration", parents=[common], help="max point probability")
    p.add_argument("--n", type=int, help="take the n-fold self-convolution first")
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p = sub.add_parser("compare", parents=[common], help="sign-search concentration comparison")
    p.add_argument("--n", type=int, default=2, help="number of i.i.d. copies")
    p.add_argument("--signs", choices=("search", "all-plus"), default="search")
    p = sub.add_parser("llt-scan", parents=[common], help="local limit ratio table (CSV)")
    p.add_argument("--ns", type=_int_list, default=[16, 64, 256, 1024, 4096])
    p = sub.add_parser("sweep", parents=[common], help="seeded random property sweep")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--oracle-every", dest="oracle_every", type=int, default=10,
                   help="run the oracle on every k-th instance (0 disables)")
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse mistakes "-1:1" for an option; bind it to the preceding flag
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and re.match(r"^-\d", argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def config_from_args(argv: list[str]) -> RunConfig:
    ns = build_parser().parse_args(_glue_negative_values(argv))
    kwargs = {k: v for k, v in vars(ns).items() if v is not None}
    return RunConfig(**kwargs)


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(argv)
    except RearrangeError as exc:
        sys.stderr.write(_dumps({"error": exc.code, "message": str(exc)}))
        return exc.exit_status
    status, text = run(cfg)
    if status not in (0, VERIFICATION_FAILED):
        sys.stderr.write(text)
        return status
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
