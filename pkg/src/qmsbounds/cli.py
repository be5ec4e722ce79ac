"""Command line front end: ``analyze``, ``verify`` and ``sweep``.

Exit codes: 0 success, 2 property violation, 3 input error.
"""

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np
from scipy.stats import linregress

from . import __version__
from .concentration import matrix_bernstein_mc
from .errors import (
    ModularMismatch,
    PreconditionFailed,
    QMSError,
    SingularReference,
    SpecParseError,
)
from .matcore import DEFAULT_TOL
from .semigroups import REPORT_COLUMNS, mlsi_lower_bounds
from .verify import run_all
from .zoo import model_from_spec

FORMAT_VERSION = 1
EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 2, 3
BERNSTEIN_COLUMNS = ("d", "n", "trials", "mean_norm", "v", "ratio")


class InputError(Exception):
    """Bad command line input (exit code 3)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


@dataclass
class RunConfig:
    """Effective configuration embedded in every output."""

    command: str
    model: object = None
    epsilon: float = 0.1
    seed: int = 0
    out: str = None
    format: str = "json"
    d_range: list = None
    n_range: list = None
    beta: float = 1.0
    tol_psd: float = DEFAULT_TOL.psd_tol
    tol_bisect: float = DEFAULT_TOL.bisect_rel
    inject: str = None
    trials: int = 200
    threads: int = 1

    @property
    def tolerances(self):
        return replace(DEFAULT_TOL, psd_tol=self.tol_psd, bisect_rel=self.tol_bisect)

    def audit(self):
        out = asdict(self)
        out.pop("out")
        out.pop("threads")
        return out


def parse_range(text):
    """``"a:b"`` or ``"a:b:step"`` (inclusive) or a comma list."""
    if text is None:
        return None
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] <= 0):
                raise ValueError
            step = parts[2] if len(parts) == 3 else 1
            values = list(range(parts[0], parts[1] + 1, step))
        else:
            values = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise InputError(f"bad range {text!r}") from None
    if not values:
        raise InputError(f"empty range {text!r}")
    return values


def load_model_arg(text):
    """Model spec from a path or inline JSON."""
    if text is None:
        raise InputError("--model is required")
    stripped = text.strip()
    if stripped.startswith("{"):
        raw = stripped
    elif os.path.exists(text):
        with open(text) as fh:
            raw = fh.read()
    elif stripped.isidentifier():
        raw = json.dumps({"type": stripped})
    else:
        raise InputError(f"--model is neither JSON nor an existing file: {text!r}")
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON: {exc}") from exc


def _threads():
    try:
        cap = int(os.environ.get("QMS_THREADS", "0"))
    except ValueError:
        raise InputError("QMS_THREADS must be an integer") from None
    return max(1, cap) if cap else max(1, min(4, os.cpu_count() or 1))


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else None
    return obj


def _header(kind, config):
    return (f"# qmsbounds {kind} format v{FORMAT_VERSION}; "
            f"config={json.dumps(_clean(config.audit()), sort_keys=True)}")


def render(kind, config, rows, columns, extra=None):
    """Deterministic JSON or CSV text."""
    if config.format == "csv":
        buf = io.StringIO()
        buf.write(_header(kind, config) + "\n")
        if extra:
            buf.write(f"# {kind} summary={json.dumps(_clean(extra), sort_keys=True)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in _clean(r)])
        return buf.getvalue()
    payload = {"format": f"qmsbounds-{kind}", "format_version": FORMAT_VERSION,
               "config": config.audit(),
               "columns": list(columns), "rows": rows}
    if extra is not None:
        payload["summary"] = extra
    return json.dumps(_clean(payload), sort_keys=True, indent=2) + "\n"


def emit(text, config):
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(spec, config):
    L = model_from_spec(spec)
    return mlsi_lower_bounds(L, eps=config.epsilon, seed=config.seed,
                             tol=config.tolerances)


def cmd_analyze(config):
    rep = _report(config.model, config)
    extra = {"invariants": rep.invariants, "diagnostics": rep.diagnostics,
             "k_cb_snapshot": rep.k_cb_snapshot}
    emit(render("report", config, [rep.row()], REPORT_COLUMNS, extra), config)
    if not rep.ok:
        failed = sorted(k for k, v in rep.invariants.items() if not v)
        if not rep.decay_pass:
            failed.append("decay_pass")
        sys.stderr.write(f"invariant violation: {', '.join(failed)}\n")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_verify(config):
    results = run_all(config.seed, inject=config.inject)
    rows = [[r.name, r.passed, r.count, r.worst_slack] for r in results]
    ok = all(r.passed for r in results)
    emit(render("verify", config, rows, ("property", "passed", "count", "worst_slack"),
                {"all_passed": ok}), config)
    return EXIT_OK if ok else EXIT_VIOLATION


def _fit(xs, ys):
    if len(xs) < 2:
        return {"slope": None, "stderr": None, "intercept": None}
    fit = linregress(np.log(xs), np.log(ys))
    return {"slope": float(fit.slope), "stderr": float(fit.stderr),
            "intercept": float(fit.intercept)}


def cmd_sweep(config):
    kind = config.model.get("type")
    if kind == "bernstein":
        dims = config.d_range or [2, 4, 8, 16, 32, 64]
        n = (config.n_range or [50])[0]

        def point(k):
            rec = matrix_bernstein_mc(dims[k], n, 1.0, config.trials, config.seed + k,
                                      config.model.get("ensemble", "diagonal"))
            return [rec.d, rec.n, rec.trials, rec.mean_norm, rec.v, rec.ratio]

        with ThreadPoolExecutor(config.threads) as pool:
            rows = list(pool.map(point, range(len(dims))))
        fit = _fit(dims, [r[-1] for r in rows])
        fit["max_ratio"] = max(r[-1] for r in rows)
        emit(render("bernstein", config, rows, BERNSTEIN_COLUMNS, {"fit": fit}), config)
        return EXIT_OK
    if kind == "nc_birth_death":
        values = config.n_range or list(range(4, 21))
        specs = [{"type": kind, "n": v, "beta": config.beta} for v in values]
    elif kind in ("cyclic_graph", "depolarizing"):
        values = config.d_range or list(range(5, 42, 2))
        specs = [{"type": kind, "d": v} for v in values]
    else:
        raise InputError(f"sweep supports cyclic_graph, depolarizing, nc_birth_death "
                         f"and bernstein, not {kind!r}")
    with ThreadPoolExecutor(config.threads) as pool:
        reports = list(pool.map(lambda s: _report(s, config), specs))
    rows = [r.row() for r in reports]
    fit = _fit(values, [r.t_cb for r in reports])
    fit["variable"] = "n" if kind == "nc_birth_death" else "d"
    emit(render("sweep", config, rows, REPORT_COLUMNS, {"fit_t_cb": fit}), config)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_VIOLATION


def build_parser():
    p = _Parser(prog="qmsbounds", description="MLSI lower bounds for quantum Markov semigroups")
    p.add_argument("--version", action="version", version=f"qmsbounds {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("analyze", "verify", "sweep"):
        s = sub.add_parser(name)
        s.add_argument("--model", help="model spec: JSON file, inline JSON or a type name")
        s.add_argument("--epsilon", type=float, default=0.1)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out")
        s.add_argument("--format", choices=("json", "csv"), default="json")
        s.add_argument("--d-range")
        s.add_argument("--n-range")
        s.add_argument("--beta", type=float, default=1.0)
        s.add_argument("--tol-psd", type=float, default=DEFAULT_TOL.psd_tol)
        s.add_argument("--tol-bisect", type=float, default=DEFAULT_TOL.bisect_rel)
        s.add_argument("--trials", type=int, default=200)
        if name == "verify":
            s.add_argument("--inject", choices=("non-cp",),
                           help="add a negative-control fixture")
    return p


def make_config(argv):
    args = build_parser().parse_args(argv)
    if not 0.0 < args.epsilon < 1.0:
        raise InputError("--epsilon must lie in (0, 1)")
    if args.tol_psd <= 0 or args.tol_bisect <= 0:
        raise InputError("tolerances must be positive")
    model = None
    if args.command in ("analyze", "sweep"):
        model = load_model_arg(args.model)
        if not isinstance(model, dict):
            raise SpecParseError("model spec must be a JSON object")
    return RunConfig(args.command, model, args.epsilon, args.seed, args.out, args.format,
                     parse_range(args.d_range), parse_range(args.n_range), args.beta,
                     args.tol_psd, args.tol_bisect, getattr(args, "inject", None),
                     args.trials, _threads())


COMMANDS = {"analyze": cmd_analyze, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv=None):
    try:
        config = make_config(sys.argv[1:] if argv is None else argv)
        return COMMANDS[config.command](config)
    except (InputError, SpecParseError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except QMSError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_INPUT if _is_input_error(exc) else EXIT_VIOLATION


def _is_input_error(exc):
    return isinstance(exc, (ModularMismatch, PreconditionFailed, SingularReference))


if __name__ == "__main__":
    sys.exit(main())
