"""Command-line front end.

Every subcommand prints either a short human-readable summary or, with
``--json``, one CommandResult object::

    {"command": ..., "parameters": {...}, "payload": {...}, "elapsed_ms": ...}

Exact rationals and coefficients are written as strings ("a/b", "-17");
counts and sizes are plain JSON integers.  Exit codes: 0 success, 1
computation failed (e.g. a series is not an eta-quotient), 2 invalid
arguments, 3 precondition violated.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from fractions import Fraction

from .cuspgroup import closed_form_Ik, cuspidal_group
from .enumeration import count_eta_quotients, count_genus_zero, eta_quotients
from .errors import EtaSpanError, FractionalValuationError, InvalidArgument, PreconditionViolation, RecognitionFailure
from .etaquot import cusp_orders, format_quotient, parse_quotient, q_expansion, recognize
from .magic import magic_eta
from .qseries import QSeries
from .span import graded_ring_check, span_check, weak_span_check

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3


def exact(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InvalidArgument(message)


def _threads(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("ETASPAN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvalidArgument(f"ETASPAN_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


# -- commands: each returns (payload, human_lines) ------------------------


def cmd_orders(a):
    q = parse_quotient(a.level, a.quotient)
    orders = {str(d): exact(o) for d, o in cusp_orders(q).items()}
    return {"orders": orders}, [f"ord at 1/{d}: {o}" for d, o in orders.items()]


def cmd_expand(a):
    q = parse_quotient(a.level, a.quotient)
    try:
        s = q_expansion(q, a.prec)
    except FractionalValuationError as e:
        raise InvalidArgument(str(e)) from None
    payload = {
        "valuation": s.valuation,
        "precision": s.precision,
        "coefficients": [exact(c) for c in s.coeffs],
    }
    return payload, [s.to_string(a.prec)]


def cmd_enumerate(a):
    threads = _threads(a.threads)
    if a.count_only:
        n = count_eta_quotients(a.level, a.weight, threads=threads)
        return {"count": n}, [str(n)]
    qs = eta_quotients(a.level, a.weight, threads=threads)
    payload = {"count": len(qs), "quotients": [format_quotient(q) for q in qs]}
    return payload, [format_quotient(q) for q in qs] + [f"{len(qs)} eta-quotients"]


def cmd_span(a):
    rep = span_check(a.level, a.weight, "exhaustive" if a.exhaustive else "early-stop")
    payload = {
        "dim": rep.dim,
        "rank": rep.rank,
        "spanned": rep.spanned,
        "candidates_examined": rep.candidates_examined,
        "mode": rep.mode,
        "horizon": rep.horizon,
        "basis": [format_quotient(q) for q in rep.basis],
    }
    lines = [f"dim {rep.dim}, rank {rep.rank}, spanned {str(rep.spanned).lower()}",
             f"{rep.candidates_examined} candidates examined"]
    return payload, lines


def _verdict_json(v) -> dict:
    return {
        "level": v.level,
        "elliptic_free": v.elliptic_free,
        "weight2_spanned": v.weight2_spanned,
        "generated_by_eta": v.generated_by_eta,
        "reason": v.reason,
    }


def cmd_graded_ring(a, out):
    if a.max_level < 1:
        raise InvalidArgument("--max-level must be positive")
    positives = []
    for N in range(1, a.max_level + 1):
        v = graded_ring_check(N)
        if v.generated_by_eta:
            positives.append(N)
        if a.json:
            out.write(json.dumps(_verdict_json(v), sort_keys=True) + "\n")
        else:
            out.write(f"{N}: {'yes' if v.generated_by_eta else 'no'} ({v.reason})\n")
        out.flush()
    payload = {"max_level": a.max_level, "count": len(positives), "levels": positives}
    return payload, [f"{len(positives)} levels: {' '.join(map(str, positives))}"]


def cmd_weak_span(a):
    v = weak_span_check(a.level)
    payload = {"status": v.status, "reason": v.reason, "certificate_weight": v.certificate_weight}
    if v.report is not None:
        payload["dim"] = v.report.dim
        payload["candidates_examined"] = v.report.candidates_examined
    return payload, [f"{v.status}: {v.reason}"]


def cmd_count_genus_zero(a):
    n = count_genus_zero(a.level, a.weight)
    return {"count": n}, [str(n)]


def cmd_magic(a):
    m = magic_eta(a.denominator, a.level)
    payload = {
        "quotient": format_quotient(m.base),
        "weight": m.weight,
        "orders": {str(d): exact(o) for d, o in cusp_orders(m.base).items()},
    }
    return payload, [f"E_{{{a.denominator},{a.level}}} = {format_quotient(m.base)}, weight {m.weight}"]


def _read_series(path: str, prec: int) -> QSeries:
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as e:
        raise InvalidArgument(f"cannot read series file: {e}") from None
    if not lines:
        raise InvalidArgument("series file is empty")
    try:
        v = int(lines[0])
        coeffs = [int(x) for x in lines[1:]]
    except ValueError:
        raise InvalidArgument("series file must contain one integer per line") from None
    if prec > v + len(coeffs):
        raise InvalidArgument(f"--prec {prec} exceeds the {len(coeffs)} coefficients in the file")
    s = QSeries.from_coefficients(coeffs, v, v + len(coeffs))
    if s.is_zero():
        raise InvalidArgument("series is zero")
    return s


def cmd_recognize(a):
    s = _read_series(a.series_file, a.prec)
    c, q = recognize(s, a.level, a.prec)
    return {"multiplier": exact(c), "quotient": format_quotient(q)}, [f"{c} * [{format_quotient(q)}]"]


def cmd_cuspidal(a):
    rep = cuspidal_group(a.log2_level)
    payload = {
        "invariant_factors": [str(f) for f in rep.invariant_factors],
        "closed_form": [str(i) for i in closed_form_Ik(a.log2_level)],
        "matches_closed_form": rep.matches_closed_form,
    }
    human = " + ".join(f"Z/{f}" for f in rep.invariant_factors) or "trivial"
    return payload, [human]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="etaspan", description="Eta-quotients and spaces of modular forms on Gamma0(N).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        sp.add_argument("--json", action="store_true", help="print a CommandResult JSON object")
        sp.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0 (reproducible output)")
        return sp

    sp = add("orders", cmd_orders, "orders of an eta-quotient at all cusps")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--quotient", required=True, help='exponents as "delta:r,delta:r,..."')

    sp = add("expand", cmd_expand, "q-expansion at infinity")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--quotient", required=True)
    sp.add_argument("--prec", type=int, required=True, help="exact below q^PREC")

    sp = add("enumerate", cmd_enumerate, "all holomorphic eta-quotients of a weight and level")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--count-only", action="store_true")
    sp.add_argument("--csv", action="store_true", help="CSV with header level,weight,exponents")
    sp.add_argument("--threads", type=int)

    sp = add("span", cmd_span, "is M_k(Gamma0(N)) spanned by eta-quotients")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--threads", type=int)

    sp = add("graded-ring", None, "scan levels for rings generated by eta-quotients")
    sp.add_argument("--max-level", type=int, required=True)

    sp = add("weak-span", cmd_weak_span, "certificate for weakly holomorphic spanning")
    sp.add_argument("--level", type=int, required=True)

    sp = add("count-genus-zero", cmd_count_genus_zero, "count eta-quotients on a genus-zero level")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--weight", type=int, required=True)

    sp = add("magic", cmd_magic, "eta-quotient vanishing only at one cusp denominator")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--denominator", type=int, required=True)

    sp = add("recognize", cmd_recognize, "write an integer series as c times an eta-quotient")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--series-file", required=True, help="first line valuation, then one coefficient per line")
    sp.add_argument("--prec", type=int, required=True, help="check agreement below q^PREC")

    sp = add("cuspidal", cmd_cuspidal, "rational cuspidal subgroup of J0(2^k)")
    sp.add_argument("--log2-level", type=int, required=True)
    return p


def _parameters(a) -> dict:
    skip = {"func", "command", "json", "no_timing", "csv", "threads"}
    return {k.replace("_", "-"): v for k, v in sorted(vars(a).items()) if k not in skip}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        a = build_parser().parse_args(argv)
        if a.command == "enumerate" and a.csv and (a.json or a.count_only):
            raise InvalidArgument("--csv cannot be combined with --json or --count-only")
        t0 = time.perf_counter()
        if a.command == "graded-ring":
            payload, lines = cmd_graded_ring(a, out)
        else:
            payload, lines = a.func(a)
        elapsed = 0 if a.no_timing else int((time.perf_counter() - t0) * 1000)
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_USAGE
    except InvalidArgument as e:
        err.write(f"error: {e}\n")
        return EXIT_USAGE
    except PreconditionViolation as e:
        err.write(f"precondition violated: {e}\n")
        return EXIT_PRECONDITION
    except RecognitionFailure as e:
        err.write(f"not an eta-quotient: {e}\n")
        return EXIT_FAILED
    except EtaSpanError as e:
        err.write(f"error: {e}\n")
        return EXIT_FAILED
    if a.json:
        result = {"command": a.command, "parameters": _parameters(a), "payload": payload, "elapsed_ms": elapsed}
        out.write(json.dumps(result, sort_keys=True) + "\n")
    elif getattr(a, "csv", False):
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["level", "weight", "exponents"])
        for q in payload["quotients"]:
            w.writerow([a.level, a.weight, q])
    else:
        for ln in lines:
            out.write(ln + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
