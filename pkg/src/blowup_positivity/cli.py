"""Command-line front end.  Every invocation prints one JSON object.

Exit codes: 0 success, 1 negative verdict of a check, 2 invalid input,
3 outside the range where the answer is known, 4 internal check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .divisor import CycleIndex, DivisorClass, base_locus, strict_transform
from .log_pairs import (
    InternalCheckError,
    LogPair,
    abundance_condition,
    adjoint_class,
    derived_bounds,
    discrepancies,
)
from .mzero import (
    CertificationError,
    MZeroDivisor,
    embed_strict_transform,
    fulton_certify,
    is_fnef,
)
from .oracle import DEFAULT_PRIMES, h0, sample_config, verify_dimension
from .positivity import GGStatus, GGVerdict, is_bpf_full_transform, is_globally_generated
from .secant import (
    DecompositionError,
    GateError,
    alpha_interval,
    beta_interval,
    decompose,
    join_intersection,
    ldim,
    sldim,
)

OK, NEGATIVE, INVALID, OUT_OF_RANGE, INTERNAL = 0, 1, 2, 3, 4


class InputError(ValueError):
    pass


def parse_mults(text: str) -> tuple[int, ...]:
    """``"2^7"`` is seven twos; entries are comma separated (``"3,2^4,1"``)."""
    text = text.strip()
    if not text:
        return ()
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            if "^" in part:
                val, rep = part.split("^")
                if int(rep) < 0:
                    raise ValueError
                out.extend([int(val)] * int(rep))
            else:
                out.append(int(part))
        except ValueError:
            raise InputError(f"cannot parse multiplicity entry {part!r}") from None
    return tuple(out)


def parse_cycle(text: str) -> CycleIndex:
    """``"1,2/0"`` is the span of points 1, 2; ``"/1"`` the rational normal curve."""
    if "/" in text:
        idx, t = text.split("/")
    else:
        idx, t = text, "0"
    try:
        indices = tuple(int(x) for x in idx.split(",") if x.strip())
        return CycleIndex(indices, int(t))
    except ValueError as exc:
        raise InputError(f"cannot parse cycle {text!r}: {exc}") from None


def parse_epsilon(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"epsilon {text!r} is not an exact rational like '1/4'") from None


def parse_coeff(text: str) -> tuple[tuple[int, ...], int]:
    """``"1,2=-1"``: coefficient -1 on ``E_{12}``."""
    try:
        key, val = text.split("=")
        return tuple(int(x) for x in key.split(",")), int(val)
    except ValueError:
        raise InputError(f"cannot parse coefficient {text!r}; expected like '1,2=-1'") from None


def cycle_json(c: CycleIndex) -> dict:
    return {"I": list(c.indices), "t": c.t, "dim": c.dim}


def cycle_text(c: CycleIndex) -> str:
    return ",".join(map(str, c.indices)) + f"/{c.t}"


def verdict_json(v: GGVerdict) -> dict:
    return {"status": v.status.value, "witness": list(v.witness) if v.witness else None,
            "reason": v.reason}


def _divisor(args, allow_empty=False) -> DivisorClass:
    mults = parse_mults(args.m or "")
    if not mults and not allow_empty:
        raise InputError("at least one point multiplicity is required")
    return DivisorClass(args.n, args.d, mults)


def _verdict_code(v: GGVerdict) -> int:
    return {GGStatus.GLOBALLY_GENERATED: OK, GGStatus.NOT_GLOBALLY_GENERATED: NEGATIVE,
            GGStatus.OUT_OF_THEOREM_RANGE: OUT_OF_RANGE}[v.status]


def cmd_base_locus(args):
    D = _divisor(args)
    bl = base_locus(D, args.secants)
    return {"entries": [{**cycle_json(e.cycle), "k": e.k, "divisorial": e.divisorial} for e in bl],
            "verdict": "empty" if not len(bl) else "nonempty"}, OK


def cmd_strict_transform(args):
    D = _divisor(args)
    T = strict_transform(D, args.r, args.secants)
    return {
        "base": {"d": T.base.d, "m": list(T.base.mults)},
        "exceptional": [{**cycle_json(c), "coefficient": k} for c, k in T.exceptional.items()],
        "subtracted": [{**cycle_json(e.cycle), "k": e.k} for e in T.subtracted],
        "verdict": "computed",
    }, OK


def cmd_gg_check(args):
    v = is_globally_generated(_divisor(args), args.r)
    return {"verdict": v.status.value, **verdict_json(v)}, _verdict_code(v)


def cmd_bpf_check(args):
    v = is_bpf_full_transform(_divisor(args))
    return {"verdict": v.status.value, **verdict_json(v)}, _verdict_code(v)


def cmd_fnef_check(args):
    if args.m is not None:
        D = _divisor(args)
        image = embed_strict_transform(D)
    else:
        coeffs = dict(parse_coeff(c) for c in (args.coeff or []))
        image = MZeroDivisor(args.n, args.d, coeffs)
    res = is_fnef(image)
    return {
        "class": {"d": image.d, "m": {",".join(map(str, k)): v for k, v in sorted(image.coeffs.items())}},
        "verdict": "FNef" if res.is_fnef else "NotFNef",
        "violator": [list(b) for b in res.violator.blocks] if res.violator else None,
        "value": res.value,
    }, OK if res.is_fnef else NEGATIVE


def cmd_fulton(args):
    rep = fulton_certify(_divisor(args))
    return {
        "gg_inequalities": rep.gg_inequalities,
        "bpf_theorem_verdict": verdict_json(rep.bpf),
        "nef": rep.nef,
        "fnef": rep.fnef.is_fnef,
        "violator": [list(b) for b in rep.fnef.violator.blocks] if rep.fnef.violator else None,
        "verdict": "certified" if rep.all_true else "not globally generated",
    }, OK if rep.all_true else NEGATIVE


def cmd_sldim(args):
    D = _divisor(args)
    val = sldim(D)
    return {"sldim": val, "expected_h0": max(0, val), "verdict": "computed"}, OK


def cmd_ldim(args):
    D = _divisor(args, allow_empty=True)
    val = ldim(D)
    return {"ldim": val, "expected_h0": max(0, val), "verdict": "computed"}, OK


def cmd_lc(args):
    p = LogPair(_divisor(args), parse_epsilon(args.epsilon))
    rep = discrepancies(p, args.secants)
    ab = abundance_condition(p)
    if ab and p.divisor.n > 3 and not rep.lc:
        raise InternalCheckError(f"abundance condition holds but discrep = {rep.discrep}")
    return {
        "epsilon": str(p.epsilon),
        "entries": [{**cycle_json(c), "a": str(a)} for c, a in rep.entries],
        "discrep": str(rep.discrep),
        "missing_secant_centers": rep.missing_secant_centers,
        "verdict": "lc" if rep.lc else "not lc",
    }, OK if rep.lc else NEGATIVE


def cmd_abundance(args):
    p = LogPair(_divisor(args), parse_epsilon(args.epsilon))
    ab = abundance_condition(p)
    out = {"epsilon": str(p.epsilon), "adjoint": adjoint_class(p).as_dict(),
           "witness": list(ab.witness) if ab.witness else None, "reason": ab.reason}
    if ab:
        rep = derived_bounds(p)
        out["derived_bounds_checked"] = rep.checked
    out["verdict"] = "holds" if ab else "fails"
    return out, OK if ab else NEGATIVE


def cmd_decompose(args):
    D = _divisor(args)
    if D.s != D.n + 3:
        raise GateError(f"decompose needs s = n + 3 = {D.n + 3} points")
    iv = alpha_interval(D) if D.n % 2 == 0 else beta_interval(D, args.literal_beta)
    out = {"interval": [iv.lo, iv.hi], "kind": "alpha" if D.n % 2 == 0 else "beta"}
    if iv.empty:
        out["verdict"] = "infeasible"
        return out, NEGATIVE
    mult = iv.lo if args.multiple is None else args.multiple
    dec = decompose(D, mult, args.literal_beta)
    out.update({
        "multiple": mult,
        "residual_class": {"d": dec.residual_class.d, "m": list(dec.residual_class.mults)},
        "k_curve_residual": dec.k_curve_residual,
        "residuals": [{**cycle_json(c), "value": v} for c, v in dec.residuals.items() if v],
        "verdict": "decomposed",
    })
    return out, OK


def cmd_oracle_h0(args):
    D = _divisor(args)
    cfg = sample_config(D.n, D.s, args.seed, args.prime)
    res = h0(cfg, D.d, D.mults)
    return {"h0": res.h0, "ncols": res.ncols, "rank": res.rank, "seed": res.seed,
            "prime": res.prime, "retries": cfg.retries, "verdict": "computed"}, OK


def cmd_oracle_verify(args):
    D = _divisor(args)
    rep = verify_dimension(D, args.trials, args.mode, args.seed)
    return {
        "formula": rep.formula,
        "expected_h0": rep.expected_h0,
        "h0_values": [list(r) for r in rep.h0_values],
        "modal_h0": rep.modal_h0,
        "primes_agree": rep.primes_agree,
        "seeds": list(rep.seeds),
        "primes": list(DEFAULT_PRIMES),
        "finding": rep.finding,
        "verdict": "agree" if rep.agree else "disagree",
    }, OK if rep.agree else NEGATIVE


def cmd_join(args):
    c1, c2 = parse_cycle(args.c1), parse_cycle(args.c2)
    res = join_intersection(c1, c2, args.n)
    return {"components": [cycle_json(c) for c in res.components],
            "common_vertex": list(res.common),
            "verdict": "empty" if res.empty else "nonempty"}, OK


def _add_divisor_args(p, m_required=True):
    p.add_argument("--n", type=int, required=True, help="ambient dimension")
    p.add_argument("--d", type=int, required=True, help="degree")
    p.add_argument("--m", required=m_required, default=None,
                   help="multiplicities, comma separated; 2^7 means seven twos")


COMMANDS = {
    "base-locus": cmd_base_locus,
    "strict-transform": cmd_strict_transform,
    "gg-check": cmd_gg_check,
    "bpf-check": cmd_bpf_check,
    "fnef-check": cmd_fnef_check,
    "fulton-certify": cmd_fulton,
    "sldim": cmd_sldim,
    "ldim": cmd_ldim,
    "lc-check": cmd_lc,
    "abundance-check": cmd_abundance,
    "decompose": cmd_decompose,
    "oracle-h0": cmd_oracle_h0,
    "oracle-verify": cmd_oracle_verify,
    "join-intersect": cmd_join,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blowup-positivity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--json", action="store_true", default=True, help="JSON report (default)")
        if name == "join-intersect":
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--c1", required=True, help="cycle as I/t, e.g. 1,2/0 or /1")
            p.add_argument("--c2", required=True)
            continue
        _add_divisor_args(p, m_required=(name not in ("fnef-check", "ldim")))
        if name in ("base-locus", "strict-transform", "lc-check"):
            p.add_argument("--secants", action="store_true", help="include secant joins (s = n + 3)")
        if name in ("strict-transform", "gg-check"):
            p.add_argument("--r", type=int, required=True)
        if name == "fnef-check":
            p.add_argument("--coeff", action="append", help="E_I coefficient as I=value, e.g. 1,2=-1")
        if name in ("lc-check", "abundance-check"):
            p.add_argument("--epsilon", required=True, help="exact rational, e.g. 1/4")
        if name == "decompose":
            p.add_argument("--multiple", type=int, default=None)
            p.add_argument("--literal-beta", action="store_true",
                           help="use m_1 in every numerator of the beta bound")
        if name in ("oracle-h0", "oracle-verify"):
            p.add_argument("--seed", type=int, default=0)
        if name == "oracle-h0":
            p.add_argument("--prime", type=int, default=DEFAULT_PRIMES[0])
        if name == "oracle-verify":
            p.add_argument("--mode", choices=("ldim", "sldim"), default="ldim")
            p.add_argument("--trials", type=int, default=3)
    return parser


def _echo(args) -> dict:
    skip = {"command", "json"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def replay_argv(report: dict) -> list[str]:
    """Arguments that reproduce ``report``."""
    argv = [report["command"]]
    for key, val in report["input"].items():
        if val is None or val is False:
            continue
        flag = "--" + key.replace("_", "-")
        if val is True:
            argv.append(flag)
        elif isinstance(val, list):
            for item in val:
                argv += [flag, str(item)]
        else:
            argv += [flag, str(val)]
    return argv


def run(argv) -> tuple[dict, int]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = INVALID if exc.code else OK
        return {"command": None, "error": "argument parsing failed", "exit_code": code}, code
    report = {"command": args.command, "input": _echo(args), "version": __version__}
    try:
        body, code = COMMANDS[args.command](args)
    except GateError as exc:
        body, code = {"verdict": "OutOfTheoremRange", "error": str(exc)}, OUT_OF_RANGE
    except (InternalCheckError, CertificationError, DecompositionError, AssertionError) as exc:
        body, code = {"verdict": "InternalError", "error": f"{type(exc).__name__}: {exc}"}, INTERNAL
    except (ValueError, TypeError, RuntimeError) as exc:
        body, code = {"verdict": "InvalidInput", "error": str(exc)}, INVALID
    report.update(body)
    report["exit_code"] = code
    return report, code


def main(argv=None) -> int:
    report, code = run(sys.argv[1:] if argv is None else argv)
    print(json.dumps(report, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
