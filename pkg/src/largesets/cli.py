"""Command-line front end.

Every command prints a JSON report on stdout (or writes it to ``--out``) and
may write a plot-ready artifact with ``--emit``.  Flags can also come from a
JSON file given with ``--config``; explicit flags win over the file.  All
parameters are kept as the strings the user typed, so the resolved config
round-trips through JSON and its hash identifies the run.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 precision
shortfall.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import re
import sys
import tempfile
from fractions import Fraction
from typing import Callable, Sequence

from .constructions import (
    AvoiderSet,
    DepthError,
    build_enumeration_avoider,
    build_integer_power,
    build_lemma_avoider,
    build_power_strip,
    positive_rationals,
)
from .intervals import Interval, PeriodicSet, Window
from .orbits import (
    CongruenceCase,
    Grid,
    box_dimension_estimate,
    chung_erdos_check,
    exceptional_probe,
    fractional_orbit,
    lemma41_exact_measure,
    orbit_stats,
)
from .rationals import PrecisionError, as_rat, parse_scalar, rat_str
from .sequences import SequenceError, SequenceSpec, banach_density_estimate, sequence_from_json
from .verification import (
    INCONCLUSIVE,
    WITNESS,
    eventual_period,
    find_escape_witness,
    grid_escape_scan,
    verify_largeness,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3

# flags that name output files; excluded from the config hash
_OUTPUT_KEYS = ("out", "emit", "config")
_NEGATIVE = re.compile(r"-[\d.]")


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers (each reports the offending field)

def _field(name: str, fn: Callable, text):
    try:
        return fn(text)
    except PrecisionError:
        raise
    except (ValueError, ZeroDivisionError, TypeError, KeyError, SequenceError) as exc:
        raise UsageError(f"{name}: {exc}") from None


def _need(args, name: str):
    v = getattr(args, name)
    if v is None or v == "":
        raise UsageError(f"{name}: required")
    return v


def _rat(args, name: str) -> Fraction:
    return _field(name, as_rat, _need(args, name))


def _scalar(args, name: str):
    """Rational or ``name@precision``; returns (value, approximant-or-None)."""
    return _field(name, parse_scalar, _need(args, name))


def _int(args, name: str) -> int:
    return _field(name, int, _need(args, name))


def _window(args, name: str = "window") -> Window:
    return _field(name, Window.parse, _need(args, name))


def _sequence(args) -> SequenceSpec:
    return _field("sequence", sequence_from_json, _need(args, "sequence"))


def _rat_list(text: str) -> list[Fraction]:
    return [as_rat(p) for p in text.split(",") if p.strip()]


def _grid_points(text: str) -> list[Fraction]:
    """``lo:hi:step`` (closed arithmetic grid) or a comma list."""
    if ":" in text:
        lo, hi, step = text.split(":")
        return Grid.over(lo, hi, step).points()
    return _rat_list(text)


def _grid(args, name: str = "grid") -> Grid:
    def parse(text):
        lo, hi, step = text.split(":")
        return Grid.over(lo, hi, step)

    return _field(name, parse, _need(args, name))


def _avoider(args) -> AvoiderSet:
    kind = _need(args, "kind")
    if kind == "lemma2":
        eps = _rat(args, "epsilon")
        y, src = _scalar(args, "y")
        return _field("epsilon", lambda _: build_lemma_avoider(eps, src or y), None)
    if kind == "power_strip":
        b, eps = _rat(args, "b"), _rat(args, "epsilon")
        return _field("epsilon", lambda _: build_power_strip(b, eps), None)
    if kind == "integer_power":
        b, eps = _int(args, "b"), _rat(args, "epsilon")
        N = _int(args, "N") if args.N else None
        return _field("epsilon", lambda _: build_integer_power(b, eps, N), None)
    if kind == "enumeration":
        seq, eps, depth = _sequence(args), _rat(args, "epsilon"), _int(args, "depth")
        B = _field("B", _rat_list, args.B) if args.B else positive_rationals(_int(args, "B_count"))
        return _field("B", lambda _: build_enumeration_avoider(seq, B, eps, depth), None)
    raise UsageError(f"kind: unknown avoider kind {kind!r}")


# ---------------------------------------------------------------------------
# output

def config_of(args) -> dict:
    """Resolved parameters as a JSON-ready dict (output paths excluded)."""
    return {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in _OUTPUT_KEYS and k != "handler" and v is not None
    }


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def atomic_write(path: str, text: str) -> None:
    """Write via a temp file in the same directory, then rename over ``path``."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(cfg: dict, header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write(f"# config_sha256={config_hash(cfg)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


class Run:
    """Collects the report and an optional artifact for one command."""

    def __init__(self, args):
        self.args = args
        self.cfg = config_of(args)
        self.code = EXIT_PASS

    def emit_csv(self, header, rows) -> None:
        if self.args.emit:
            atomic_write(self.args.emit, csv_text(self.cfg, header, rows))

    def emit_json(self, obj) -> None:
        if self.args.emit:
            atomic_write(self.args.emit, json_text(obj))

    def report(self, body: dict) -> dict:
        return {"command": self.args.command, "config": self.cfg,
                "config_sha256": config_hash(self.cfg), "result": body}


# ---------------------------------------------------------------------------
# commands

def cmd_construct(run: Run) -> dict:
    a = _avoider(run.args)
    w = _window(run.args)
    s = a.materialize(w)
    run.emit_json({"descriptor": a.descriptor(), "window": [rat_str(w.lo), rat_str(w.hi)],
                   "intervals": s.to_json()})
    return {"descriptor": a.descriptor(), "parts": len(s), "measure": rat_str(s.measure()),
            "target": rat_str(a.target)}


def cmd_verify_large(run: Run) -> dict:
    a = _avoider(run.args)
    rep = verify_largeness(a, _window(run.args))
    if not rep.passed:
        run.code = EXIT_FAIL
    return rep.to_json()


def cmd_witness(run: Run) -> dict:
    a, s = _avoider(run.args), _sequence(run.args)
    x, xs = _scalar(run.args, "x")
    t, ts = _scalar(run.args, "t")
    w = find_escape_witness(a, s, x, t, _int(run.args, "depth"),
                            xs.error_bound if xs else 0, ts.error_bound if ts else 0)
    if w.status == WITNESS and not w.certified:
        run.code = EXIT_PRECISION
        out = w.to_json()
        out["message"] = "witness margin is below the approximation error; use a finer precision"
        return out
    if w.status == INCONCLUSIVE:
        run.code = EXIT_FAIL
    return w.to_json()


def cmd_scan(run: Run) -> dict:
    a, s = _avoider(run.args), _sequence(run.args)
    xs = _field("x_grid", _grid_points, _need(run.args, "x_grid"))
    ts = _field("t_grid", _grid_points, _need(run.args, "t_grid"))
    if any(x == 0 for x in xs):
        raise UsageError("x_grid: dilation 0 is not allowed")
    res = grid_escape_scan(a, s, xs, ts, _int(run.args, "depth"), _int(run.args, "workers"))
    run.emit_csv(("x", "t", "witness_index"), res.csv_rows())
    if res.inconclusive:
        run.code = EXIT_FAIL
    return res.summary()


def cmd_orbit(run: Run) -> dict:
    s = _sequence(run.args)
    x, _ = _scalar(run.args, "x")
    t, _ = _scalar(run.args, "t")
    N = _int(run.args, "N")
    st = orbit_stats(s, x, N, t, _int(run.args, "bins"))
    if run.args.emit:
        pts = fractional_orbit(s, x, t, N)
        run.emit_csv(("rank", "value", "float"), [(k, rat_str(p), float(p)) for k, p in enumerate(pts)])
    return {"x": rat_str(st.x), "t": rat_str(st.t), "N": st.N, "max_gap": rat_str(st.max_gap),
            "max_gap_float": float(st.max_gap), "star_discrepancy": rat_str(st.star_discrepancy),
            "star_discrepancy_float": float(st.star_discrepancy), "histogram": list(st.histogram)}


def _probe(run: Run):
    s = _sequence(run.args)
    return exceptional_probe(s, _rat(run.args, "delta"), _int(run.args, "N"), _grid(run.args))


def cmd_probe(run: Run) -> dict:
    p = _probe(run)
    run.emit_csv(("x", "max_gap", "star_discrepancy"), p.csv_rows())
    return {"delta": rat_str(p.delta), "N": p.N, "grid": p.grid.to_json(),
            "hits": len(p.hits), "hit_fraction": len(p.hits) / p.grid.count if p.grid.count else 0.0}


def cmd_dim_est(run: Run) -> dict:
    p = _probe(run)
    scales = _field("scales", _rat_list, _need(run.args, "scales"))
    d = _field("scales", lambda sc: box_dimension_estimate(p, sc), scales)
    run.emit_csv(("scale", "boxes"), d.csv_rows())
    return {"hits": len(p.hits), "scales": [rat_str(v) for v in d.scales], "counts": list(d.counts),
            "slope": d.slope, "raw_slope": d.raw_slope, "r2": d.r2}


def cmd_lemma41(run: Run) -> dict:
    alpha, _ = _scalar(run.args, "alpha")
    beta, _ = _scalar(run.args, "beta")
    eps = _rat(run.args, "epsilon")
    c = _field("epsilon", lambda _: CongruenceCase(alpha, beta, eps, _window(run.args)), None)
    r = lemma41_exact_measure(c)
    return {"exact": rat_str(r.exact), "asymptotic": rat_str(r.asymptotic),
            "relative_error": float(r.relative_error), "exact_float": float(r.exact),
            "asymptotic_float": float(r.asymptotic)}


def _strips(text: str) -> list[PeriodicSet]:
    """``period:width`` strips, comma separated, or a JSON list of {period, pattern}."""
    text = text.strip()
    if text.startswith("["):
        out = []
        for k, e in enumerate(json.loads(text)):
            try:
                pat = [Interval(as_rat(lo), as_rat(hi)) for lo, hi in e["pattern"]]
                out.append(PeriodicSet(as_rat(e["period"]), tuple(pat)))
            except (KeyError, ValueError, TypeError) as exc:
                raise ValueError(f"[{k}]: {exc}") from None
        return out
    out = []
    for part in text.split(","):
        period, width = part.split(":")
        out.append(PeriodicSet.strip(period, width))
    return out


def cmd_chung_erdos(run: Run) -> dict:
    ev = _field("events", _strips, _need(run.args, "events"))
    r = chung_erdos_check(ev, _window(run.args))
    if not r.holds:
        run.code = EXIT_FAIL
    return {"lhs": rat_str(r.lhs), "rhs": rat_str(r.rhs), "holds": r.holds}


def cmd_density(run: Run) -> dict:
    s = _sequence(run.args)

    def hr(text):
        lo, hi = text.split(":")
        return int(lo), int(hi)

    h = _field("h_range", hr, _need(run.args, "h_range"))
    n, terms = _int(run.args, "length"), _int(run.args, "terms")
    d = _field("length", lambda _: banach_density_estimate(s, n, h, terms), None)
    return {"window_length": d.window_length, "best_offset": d.best_offset, "count": d.count,
            "ratio": rat_str(d.ratio), "complete": d.complete}


def cmd_period(run: Run) -> dict:
    b, m = _int(run.args, "b"), _int(run.args, "modulus")
    c = _field("modulus", lambda _: eventual_period(b, m), None)
    return {"b": c.b, "modulus": c.modulus, "preperiod": c.preperiod, "period": c.period,
            "verified": c.verify()}


# ---------------------------------------------------------------------------
# parser

def _avoider_flags(p):
    p.add_argument("--kind", help="lemma2 | power_strip | integer_power | enumeration")
    p.add_argument("--epsilon", "--eps", dest="epsilon", help="rational, e.g. 1/4")
    p.add_argument("--y", help="lemma2 ratio y > 1, rational or golden@1e-12")
    p.add_argument("--b", help="base (power_strip: rational; integer_power: integer)")
    p.add_argument("--N", help="integer_power bin count (default floor(2/eps)+1)")
    p.add_argument("--B", help="enumeration dilations, comma separated")
    p.add_argument("--B-count", dest="B_count", default="10",
                   help="use the first K positive rationals when --B is absent")
    p.add_argument("--depth", help="enumeration depth / witness search depth")


def _seq_flag(p):
    p.add_argument("--sequence", help='JSON, e.g. \'{"kind":"geometric","b":"2"}\'')


def _probe_flags(p):
    _seq_flag(p)
    p.add_argument("--delta", default="2/5", help="empty-arc threshold")
    p.add_argument("--N", default="2000", help="orbit length")
    p.add_argument("--grid", default="0:1:1/4096", help="lo:hi:step")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="largesets", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add(name, handler, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="JSON file of flag values")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--emit", help="write the command's artifact (JSON or CSV) here")
        p.set_defaults(handler=handler)
        return p

    p = add("construct", cmd_construct, "materialize an avoider on a window")
    _avoider_flags(p)
    _seq_flag(p)
    p.add_argument("--window", help="lo:hi")

    p = add("verify-large", cmd_verify_large, "exact minimum unit-window measure vs target")
    _avoider_flags(p)
    _seq_flag(p)
    p.add_argument("--window", help="lo:hi")

    p = add("witness", cmd_witness, "least n with x a_n + t outside the avoider")
    _avoider_flags(p)
    _seq_flag(p)
    p.add_argument("--x", help="dilation")
    p.add_argument("--t", default="0", help="translation")
    p.set_defaults(depth="10000")

    p = add("scan", cmd_scan, "witness search over an (x, t) grid")
    _avoider_flags(p)
    _seq_flag(p)
    p.add_argument("--x-grid", dest="x_grid", help="lo:hi:step or comma list")
    p.add_argument("--t-grid", dest="t_grid", help="lo:hi:step or comma list")
    p.add_argument("--workers", default="1")
    p.set_defaults(depth="10000")

    p = add("orbit", cmd_orbit, "max gap, star discrepancy and histogram of <x a_n + t>")
    _seq_flag(p)
    p.add_argument("--x")
    p.add_argument("--t", default="0")
    p.add_argument("--N", default="1000")
    p.add_argument("--bins", default="10")

    p = add("probe", cmd_probe, "grid points whose orbit leaves an empty arc >= delta")
    _probe_flags(p)

    p = add("dim-est", cmd_dim_est, "box-counting slope of the probe's hit set")
    _probe_flags(p)
    p.add_argument("--scales", default="1/16,1/32,1/64,1/128,1/256")

    p = add("lemma41", cmd_lemma41, "overlap of two strip lattices vs eps^2 y/(alpha beta)")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--epsilon", "--eps", dest="epsilon")
    p.add_argument("--window", help="lo:hi")

    p = add("chung-erdos", cmd_chung_erdos, "Chung-Erdos lower bound for periodic events")
    p.add_argument("--events", help="period:width,... or JSON [{period, pattern}]")
    p.add_argument("--window", help="lo:hi")

    p = add("density", cmd_density, "best-window hit ratio of the integer parts")
    _seq_flag(p)
    p.add_argument("--length", help="window length")
    p.add_argument("--h-range", dest="h_range", help="lo:hi offsets")
    p.add_argument("--terms", default="10000", help="number of terms generated")

    p = add("period", cmd_period, "eventual period of b^n mod q")
    p.add_argument("--b")
    p.add_argument("--modulus")
    return parser


def _glue_negatives(argv: list[str]) -> list[str]:
    """Turn ``--window -10:10`` into ``--window=-10:10`` so argparse accepts it."""
    out: list[str] = []
    for tok in argv:
        if out and _NEGATIVE.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def _apply_config(parser, argv: list[str]) -> argparse.Namespace:
    argv = _glue_negatives(argv)
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("command: required")
    if not args.config:
        return args
    try:
        with open(args.config) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"config: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config: expected a JSON object")
    known = set(vars(args))
    cfg = {}
    for k, v in data.items():
        key = k.lstrip("-").replace("-", "_")
        if key not in known or key in ("handler", "command", "config"):
            raise UsageError(f"config.{k}: unknown field for {args.command}")
        cfg[key] = json.dumps(v) if isinstance(v, (dict, list)) else str(v)
    # explicit flags win: re-parse with the file as defaults
    sub = parser._subparsers._group_actions[0].choices[args.command]
    sub.set_defaults(**cfg)
    return parser.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
        run = Run(args)
        body = args.handler(run)
        text = json_text(run.report(body))
        if args.out:
            atomic_write(args.out, text)
        else:
            sys.stdout.write(text)
        return run.code
    except SystemExit as exc:  # argparse
        return EXIT_USAGE if exc.code else EXIT_PASS
    except PrecisionError as exc:
        print(f"precision shortfall: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (UsageError, DepthError, SequenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
