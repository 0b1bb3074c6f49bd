"""Command-line harness: exact counts, formula comparisons and trace laws."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import asymptotics as asy
from . import dist, exact, saddle
from .core import DegreeSequence, DensityError, ParityError, lbar, mu

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_RESOURCE = 4
EXIT_USAGE = 3

LOG_DIGITS = 12


def fmt_real(x) -> str:
    """Real numbers are reported with 12 significant digits."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, f".{LOG_DIGITS}g")


def fmt_bool(b: bool) -> str:
    return "true" if b else "false"


# -- output --------------------------------------------------------------------

def render(rows: list[dict], columns: list[str], fmt: str, command: str) -> str:
    """CSV (header row, LF endings) or a JSON object with a "rows" array.

    Every cell is already a string, so both formats carry identical content.
    Missing cells are empty in CSV and null in JSON.
    """
    if fmt == "json":
        body = [{c: row.get(c) for c in columns} for row in rows]
        return json.dumps({"command": command, "columns": columns, "rows": body}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row.get(c) is None else row[c] for c in columns])
    return buf.getvalue()


# -- run context -----------------------------------------------------------------

@dataclass
class RunSpec:
    command: str
    seq: DegreeSequence | None
    instance: str
    model: int
    fmt: str | None
    counter: exact.Counter
    threads: int


def _parse_seq(text: str) -> DegreeSequence:
    text = text.strip()
    if not text:
        return DegreeSequence(())
    try:
        return DegreeSequence(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad degree sequence {text!r}: {exc}") from exc


def _instance(args) -> tuple[DegreeSequence | None, str]:
    if getattr(args, "seq", None) is not None:
        return args.seq, "seq:" + ",".join(map(str, args.seq.degrees))
    if getattr(args, "regular", None) is not None:
        n, d = args.regular
        if n < 0 or d < 0:
            raise ValueError("--regular needs nonnegative n and d")
        return DegreeSequence.regular(n, d), f"regular:{n},{d}"
    return None, ""


def _make_counter(args) -> exact.Counter:
    cache = exact.CountCache(None if args.no_cache else args.cache)
    return exact.Counter(cache=cache)


# -- exact -----------------------------------------------------------------------

def cmd_exact(spec: RunSpec, args) -> tuple[str, int]:
    seq, D = spec.seq, spec.model
    if args.by_trace:
        profile = spec.counter.trace_profile(seq, D, threads=spec.threads)
        pairs = [(ell, c) for ell, c in enumerate(profile) if c]
        if spec.fmt is None:
            return "".join(f"{ell},{c}\n" for ell, c in pairs), EXIT_OK
        rows = [{"instance": spec.instance, "model": str(D), "ell": str(ell), "count": str(c)}
                for ell, c in pairs]
        return render(rows, ["instance", "model", "ell", "count"], spec.fmt, spec.command), EXIT_OK
    total = spec.counter.count_loopy(seq, D, threads=spec.threads)
    if spec.fmt is None:
        return f"{total}\n", EXIT_OK
    rows = [{"instance": spec.instance, "model": str(D), "count": str(total)}]
    return render(rows, ["instance", "model", "count"], spec.fmt, spec.command), EXIT_OK


# -- formulas --------------------------------------------------------------------

def _inapplicable(exc: Exception) -> str:
    if isinstance(exc, ParityError):
        return "parity: inapplicable"
    if isinstance(exc, DensityError):
        return "density: inapplicable"
    return f"inapplicable: {exc}"


def _formulas(seq: DegreeSequence, D: int) -> list[tuple[str, Callable[[], asy.LogEstimate]]]:
    out: list[tuple[str, Callable[[], asy.LogEstimate]]] = [
        ("sparse", lambda: asy.sparse_GD(seq, D)),
    ]
    if seq.stats.S % 2 == 0:
        out.append(("sparse_factorial", lambda: asy.sparse_GD(seq, D, factorial_form=True)))
    out.append(("dense", lambda: asy.dense_GD_total(seq, D)))
    if seq.is_regular:
        n, d = seq.n, seq.degrees[0]
        out.append(("sparse_regular", lambda: asy.sparse_regular(n, d, D)))
        if D == 2:
            out.append(("naive", lambda: asy.naive_G2(n, d)))
            out.append(("conjecture", lambda: asy.conjecture_G2(n, d)))
    return out


def _evaluate(seq: DegreeSequence, D: int):
    """Yield (formula, estimate or None, note) for every formula family."""
    if not seq.is_regular:
        yield "sparse_regular", None, "not regular: inapplicable"
    for name, fn in _formulas(seq, D):
        if D == 2 and seq.stats.S % 2:
            yield name, None, "parity: inapplicable"
            continue
        if name.startswith("sparse") and 0 in seq.degrees:
            yield name, None, "zero degrees: inapplicable"
            continue
        try:
            yield name, fn(), ""
        except (ValueError, ZeroDivisionError) as exc:
            yield name, None, _inapplicable(exc)


ASYMPTOTIC_COLUMNS = ["instance", "model", "formula", "log_estimate", "error_order", "mu", "lbar",
                      "note"]


def cmd_asymptotic(spec: RunSpec, args) -> tuple[str, int]:
    seq, D = spec.seq, spec.model
    rows = []
    if seq.n == 0:
        rows.append({"instance": spec.instance, "model": str(D), "note": "empty sequence: skipped"})
        return render(rows, ASYMPTOTIC_COLUMNS, spec.fmt or "csv", spec.command), EXIT_OK
    st = seq.stats
    m = fmt_real(mu(seq, D))
    lb = fmt_real(lbar(seq, D)) if 0 <= st.d <= seq.n else None
    for name, est, note in _evaluate(seq, D):
        rows.append({
            "instance": spec.instance, "model": str(D), "formula": name,
            "log_estimate": fmt_real(est.log_value) if est else None,
            "error_order": est.error_order.value if est else None,
            "mu": m, "lbar": lb, "note": note,
        })
    return render(rows, ASYMPTOTIC_COLUMNS, spec.fmt or "csv", spec.command), EXIT_OK


COMPARE_COLUMNS = ["instance", "model", "formula", "exact", "log_estimate", "log_ratio",
                   "error_order", "note"]


def cmd_compare(spec: RunSpec, args) -> tuple[str, int]:
    seq, D = spec.seq, spec.model
    base = {"instance": spec.instance, "model": str(D)}
    if seq.n == 0:
        rows = [dict(base, exact="1", note="empty sequence: estimates skipped")]
        return render(rows, COMPARE_COLUMNS, spec.fmt or "csv", spec.command), EXIT_OK
    count = spec.counter.count_loopy(seq, D, threads=spec.threads)
    rows = []
    for name, est, note in _evaluate(seq, D):
        row = dict(base, formula=name, exact=str(count), note=note)
        if est is not None:
            row["log_estimate"] = fmt_real(est.log_value)
            row["error_order"] = est.error_order.value
            if count > 0:
                row["log_ratio"] = fmt_real(est.log_ratio(count))
        rows.append(row)
    return render(rows, COMPARE_COLUMNS, spec.fmt or "csv", spec.command), EXIT_OK


# -- trace laws ------------------------------------------------------------------

TRACE_COLUMNS = ["instance", "model", "section", "key", "exact", "dense", "sparse", "note"]


def cmd_trace_dist(spec: RunSpec, args) -> tuple[str, int]:
    seq, D = spec.seq, spec.model
    base = {"instance": spec.instance, "model": str(D)}
    law = dist.trace_law_exact(seq, D, spec.counter)
    approx: dict[str, dist.TraceLaw | None] = {}
    notes = []
    for name, fn in (("dense", dist.trace_law_dense), ("sparse", dist.trace_law_sparse)):
        try:
            approx[name] = fn(seq, D)
        except ValueError as exc:
            approx[name] = None
            notes.append(f"{name} {_inapplicable(exc)}")

    def cell(name, fn):
        a = approx[name]
        return fmt_real(fn(a)) if a is not None else None

    rows = []
    for ell in range(seq.n + 1):
        rows.append(dict(base, section="pmf", key=str(ell), exact=fmt_real(law.pmf[ell]),
                         dense=cell("dense", lambda a: a.pmf[ell]),
                         sparse=cell("sparse", lambda a: a.pmf[ell])))
    rows.append(dict(base, section="summary", key="mean", exact=fmt_real(law.mean()),
                     dense=cell("dense", dist.TraceLaw.mean), sparse=cell("sparse", dist.TraceLaw.mean)))
    rows.append(dict(base, section="summary", key="variance", exact=fmt_real(law.variance_pairwise()),
                     dense=cell("dense", dist.TraceLaw.variance_pairwise),
                     sparse=cell("sparse", dist.TraceLaw.variance_pairwise)))
    rows.append(dict(base, section="summary", key="tv",
                     dense=cell("dense", law.tv), sparse=cell("sparse", law.tv)))
    # the closed-form expansions of the mean and variance
    expansions = {}
    if approx["dense"] is not None:
        expansions["dense"] = dist.dense_trace_mean_var(seq, D)
    try:
        if seq.stats.S > 0:
            expansions["sparse"] = (dist.sparse_trace_mean(seq, D), dist.sparse_trace_var(seq, D))
    except ValueError:
        pass
    for i, key in enumerate(("mean_expansion", "variance_expansion")):
        rows.append(dict(base, section="summary", key=key,
                         dense=fmt_real(expansions["dense"][i]) if "dense" in expansions else None,
                         sparse=fmt_real(expansions["sparse"][i]) if "sparse" in expansions else None))
    if notes:
        rows.append(dict(base, section="note", note="; ".join(notes)))
    return render(rows, TRACE_COLUMNS, spec.fmt or "csv", spec.command), EXIT_OK


# -- conjecture scan ---------------------------------------------------------------

SCAN_COLUMNS = ["n", "d", "exact", "log_conjecture", "residual", "residual_n2", "in_interval"]


def scan_grid(n_min: int, n_max: int):
    for n in range(max(n_min, 1), n_max + 1):
        for d in range(1, n + 1):
            if n * d % 2 == 0:
                yield n, d


def cmd_conjecture_scan(spec: RunSpec, args) -> tuple[str, int]:
    if spec.seq is not None:
        if not spec.seq.is_regular or spec.seq.n == 0:
            raise ValueError("conjecture-scan takes --regular n d, not an arbitrary sequence")
        pairs = [(spec.seq.n, spec.seq.degrees[0])]
        pairs = [(n, d) for n, d in pairs if n * d % 2 == 0]
    else:
        pairs = list(scan_grid(args.n_min, args.n_max))
    rows = []
    status = EXIT_OK
    for n, d in pairs:
        count = spec.counter.count_loopy(DegreeSequence.regular(n, d), 2, threads=spec.threads)
        est = asy.conjecture_G2(n, d)
        r = est.log_ratio(count)
        ok = -2 / asy.mp.mpf(n) ** 2 < r < 0
        if n >= 4 and not ok:
            status = EXIT_VIOLATION
        rows.append({"n": str(n), "d": str(d), "exact": str(count),
                     "log_conjecture": fmt_real(est.log_value), "residual": fmt_real(r),
                     "residual_n2": fmt_real(r * n * n), "in_interval": fmt_bool(ok)})
        spec.counter.cache.flush()
    return render(rows, SCAN_COLUMNS, spec.fmt or "csv", spec.command), status


# -- saddle check ------------------------------------------------------------------

SADDLE_COLUMNS = ["n", "ell", "log_exact", "log_asymptotic", "log_ratio"]


def cmd_saddle_check(spec: RunSpec, args) -> tuple[str, int]:
    if args.beta is not None:
        beta = np.array([float(x) for x in args.beta.split(",")]) if args.beta else np.zeros(0)
    else:
        beta = args.amplitude * np.where(np.arange(args.n) % 2 == 0, 1.0, -1.0)
    w = saddle.WeightVector(beta)
    logs = saddle.log_u_row(w)
    rows = []
    for ell in range(w.n + 1):
        la = saddle.log_u_asymptotic(w, ell)
        rows.append({"n": str(w.n), "ell": str(ell), "log_exact": fmt_real(logs[ell]),
                     "log_asymptotic": fmt_real(la), "log_ratio": fmt_real(logs[ell] - la)})
    return render(rows, SADDLE_COLUMNS, spec.fmt or "csv", spec.command), EXIT_OK


# -- parser ------------------------------------------------------------------------

COMMANDS = {
    "exact": cmd_exact,
    "asymptotic": cmd_asymptotic,
    "compare": cmd_compare,
    "trace-dist": cmd_trace_dist,
    "conjecture-scan": cmd_conjecture_scan,
    "saddle-check": cmd_saddle_check,
}

NEEDS_INSTANCE = {"exact", "asymptotic", "compare", "trace-dist"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopcount",
        description="Exact and asymptotic counts of symmetric 0-1 matrices with given row sums.")
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--seq", type=_parse_seq, metavar="a,b,c", help="explicit degree sequence")
    src.add_argument("--regular", type=int, nargs=2, metavar=("N", "D"),
                     help="regular sequence of length N and degree D")
    common.add_argument("--model", type=int, choices=(1, 2), default=2,
                        help="loop model: a loop adds 1 or 2 to its row sum (default 2)")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default=None)
    common.add_argument("--cache", default="loopcount.cache", help="memo snapshot path")
    common.add_argument("--no-cache", action="store_true", help="do not read or write a snapshot")
    common.add_argument("--threads", type=int, default=1)

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("exact", parents=[common], help="exact count (plain decimal unless --format)")
    p.add_argument("--by-trace", action="store_true", help="nonzero counts per trace as ell,count")
    sub.add_parser("asymptotic", parents=[common], help="log-estimates from every closed formula")
    sub.add_parser("compare", parents=[common], help="exact count against every formula")
    sub.add_parser("trace-dist", parents=[common], help="exact and approximate trace laws")
    p = sub.add_parser("conjecture-scan", parents=[common],
                       help="check the conjectured G_2(n,d) residual interval on a grid")
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=12)
    p = sub.add_parser("saddle-check", parents=[common],
                       help="exact vs asymptotic elementary symmetric sums of exp(beta)")
    p.add_argument("--beta", default=None, metavar="b1,b2,...")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--amplitude", type=float, default=0.05,
                   help="alternating +-amplitude weights when --beta is absent")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        seq, instance = _instance(args)
    except ValueError as exc:
        parser.error(str(exc))
    if args.command in NEEDS_INSTANCE and seq is None:
        parser.error(f"{args.command} needs --seq or --regular")
    if args.threads < 1:
        parser.error("--threads must be positive")
    counter = _make_counter(args)
    spec = RunSpec(command=args.command, seq=seq, instance=instance, model=args.model,
                   fmt=args.fmt, counter=counter, threads=args.threads)
    try:
        text, status = COMMANDS[args.command](spec, args)
    except exact.ResourceLimitError as exc:
        print(f"loopcount: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"loopcount: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        counter.cache.flush()
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
