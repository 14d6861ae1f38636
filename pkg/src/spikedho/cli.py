"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain error (alpha outside the
convergence region, bad parameters), 3 numerical failure (a verification
suite failed or the eigensolver did not converge).
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import sys
from dataclasses import dataclass

from .errors import DomainDiverges, IndexOutOfTable, InvalidIndex, NoConvergence
from .gk_basis import BasisParams, energy, energy_goldman, from_goldman
from .matrix_elements import METHODS, MatElemQuery, evaluate, matel_gk_detailed
from .variational import DEFAULT_MAX_SWEEPS, DEFAULT_TOL, FILL_SOURCES, ground_state_sweep, lambda_sweep, spectrum

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_FAILURE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    params: BasisParams
    goldman: tuple[float, float] | None
    alpha: float
    lambda_c: float
    m: int
    n: int
    N: int
    method: str
    output_format: str
    tol: float
    timestamp: bool


def _num(x: float) -> str:
    # shortest repr that round-trips
    return repr(float(x))


def _params_dict(cfg: RunConfig) -> dict:
    p = cfg.params
    d = {"A": p.A, "B": p.B, "gamma": p.gamma_p, "alpha_max": p.alpha_max}
    if cfg.goldman is not None:
        d["V0"], d["a"] = cfg.goldman
    return d


def _emit_json(obj: dict, cfg: RunConfig, out) -> None:
    if cfg.timestamp:
        obj["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    out.write(json.dumps(obj, indent=2, allow_nan=True))
    out.write("\n")


def _emit_csv(header, rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in row])


def _domain_note(cfg: RunConfig) -> dict:
    return {
        "alpha": cfg.alpha,
        "alpha_max": cfg.params.alpha_max,
        "converges": cfg.alpha < cfg.params.alpha_max,
    }


def cmd_matel(cfg: RunConfig, out) -> int:
    q = MatElemQuery(cfg.m, cfg.n, cfg.alpha, cfg.params, method=cfg.method)
    value = evaluate(q)
    detail = matel_gk_detailed(q)
    diagnostics = {
        "severity": detail.severity,
        "low_confidence": detail.low_confidence,
        "domain": _domain_note(cfg),
    }
    if cfg.output_format == "csv":
        _emit_csv(
            ["m", "n", "alpha", "method", "value", "severity"],
            [[q.m, q.n, q.alpha, q.method, value, detail.severity]],
            out,
        )
    else:
        _emit_json(
            {
                "params": _params_dict(cfg),
                "query": {"m": q.m, "n": q.n, "alpha": q.alpha, "method": q.method},
                "result": {"value": value},
                "diagnostics": diagnostics,
            },
            cfg,
            out,
        )
    return EXIT_OK


def cmd_table(cfg: RunConfig, out) -> int:
    N = cfg.N
    mat = [
        [evaluate(MatElemQuery(m, n, cfg.alpha, cfg.params, method=cfg.method)) for n in range(N)]
        for m in range(N)
    ]
    asym = max(
        (abs(mat[m][n] - mat[n][m]) / max(abs(mat[m][n]), abs(mat[n][m]), 1e-300)
         for m in range(N) for n in range(m)),
        default=0.0,
    )
    if cfg.output_format == "csv":
        _emit_csv(["m", "n", "value"], [[m, n, mat[m][n]] for m in range(N) for n in range(N)], out)
    else:
        _emit_json(
            {
                "params": _params_dict(cfg),
                "query": {"alpha": cfg.alpha, "N": N, "method": cfg.method},
                "result": mat,
                "diagnostics": {"max_asymmetry": asym, "domain": _domain_note(cfg)},
            },
            cfg,
            out,
        )
    return EXIT_OK


def _parse_list(text: str, conv) -> list:
    try:
        return [conv(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse list {text!r}") from None


def cmd_spectrum(
    cfg: RunConfig,
    out,
    sweep_N=None,
    sweep_lambda=None,
    nev=5,
    fill="closed",
    max_sweeps=DEFAULT_MAX_SWEEPS,
) -> int:
    if sweep_N is not None and sweep_lambda is not None:
        raise UsageError("--sweep-N and --sweep-lambda are mutually exclusive")
    solver = {"tol": cfg.tol, "max_sweeps": max_sweeps}
    if sweep_N is not None:
        results = ground_state_sweep(cfg.params, cfg.alpha, cfg.lambda_c, sweep_N, fill, **solver)
        key = "N"
    elif sweep_lambda is not None:
        results = lambda_sweep(cfg.params, cfg.alpha, sweep_lambda, cfg.N, fill, **solver)
        key = "lambda"
    else:
        results = [spectrum(cfg.params, cfg.alpha, cfg.lambda_c, cfg.N, fill, **solver)]
        key = "N"

    def label(r):
        return r.N if key == "N" else r.lambda_c

    if cfg.output_format == "csv":
        rows = []
        for r in results:
            for k, e in enumerate(r.eigenvalues[:nev]):
                rows.append([label(r), k, e])
        _emit_csv([key, "k", "eigenvalue"], rows, out)
    else:
        _emit_json(
            {
                "params": _params_dict(cfg),
                "alpha": cfg.alpha,
                "query": {
                    "alpha": cfg.alpha,
                    "lambda": cfg.lambda_c,
                    "N": cfg.N,
                    "fill": fill,
                    "tol": cfg.tol,
                },
                "rows": [{key: label(r), "eigenvalues": list(r.eigenvalues[:nev])} for r in results],
                "residuals": [r.residual_norm for r in results],
                "diagnostics": {"sweeps": [r.sweeps for r in results]},
            },
            cfg,
            out,
        )
    return EXIT_OK


def cmd_energies(cfg: RunConfig, out) -> int:
    rows = []
    for n in range(cfg.N):
        row = [n, energy(cfg.params, n)]
        if cfg.goldman is not None:
            row.append(energy_goldman(*cfg.goldman, n, shifted=False))
        rows.append(row)
    header = ["n", "energy"] + (["energy_goldman_unshifted"] if cfg.goldman else [])
    if cfg.output_format == "csv":
        _emit_csv(header, rows, out)
    else:
        _emit_json(
            {
                "params": _params_dict(cfg),
                "query": {"N": cfg.N},
                "rows": [dict(zip(header, r)) for r in rows],
                "diagnostics": {},
            },
            cfg,
            out,
        )
    return EXIT_OK


def cmd_verify(suite: str, cfg: RunConfig, out) -> int:
    from .verify import SUITES, run_suite

    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    report = run_suite(suite)
    body = report.to_dict()
    _emit_json(body, cfg, out)
    return EXIT_OK if report.passed else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("potential")
    g.add_argument("--A", type=float, default=None, help="coefficient of x^-2 (default 0)")
    g.add_argument("--B", type=float, default=None, help="coefficient of x^2 (default 1)")
    g.add_argument("--V0", type=float, default=None, help="alternative form V0 (a/x - x/a)^2")
    g.add_argument("--a", type=float, default=None, dest="a_len")
    common.add_argument("--alpha", type=float, default=1.0)
    common.add_argument("--lambda", type=float, default=0.0, dest="lambda_c")
    common.add_argument("--m", type=int, default=0)
    common.add_argument("--n", type=int, default=0)
    common.add_argument("--N", type=int, default=4)
    common.add_argument("--method", choices=METHODS, default="closed")
    common.add_argument("--format", choices=("csv", "json"), default="json", dest="output_format")
    common.add_argument("--out", default=None, metavar="PATH")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--no-timestamp", action="store_true")

    parser = _Parser(prog="spikedho", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("matel", parents=[common], help="one matrix element <m|x^-alpha|n>")
    sub.add_parser("table", parents=[common], help="N x N matrix of elements")
    sp = sub.add_parser("spectrum", parents=[common], help="truncated-Hamiltonian spectrum")
    sp.add_argument("--sweep-N", default=None, help="comma-separated basis sizes")
    sp.add_argument("--sweep-lambda", default=None, help="comma-separated couplings")
    sp.add_argument("--nev", type=int, default=5, help="eigenvalues reported per row")
    sp.add_argument("--fill", choices=FILL_SOURCES, default="closed")
    sp.add_argument("--max-sweeps", type=int, default=DEFAULT_MAX_SWEEPS)
    sub.add_parser("energies", parents=[common], help="unperturbed levels E_0..E_{N-1}")
    vp = sub.add_parser("verify", parents=[common], help="run a verification suite")
    vp.add_argument("--suite", required=True)
    return parser


def _config(args) -> RunConfig:
    goldman = None
    if args.V0 is not None or args.a_len is not None:
        if args.A is not None or args.B is not None:
            raise UsageError("--V0/--a and --A/--B are mutually exclusive")
        if args.V0 is None or args.a_len is None:
            raise UsageError("--V0 and --a must be given together")
        params = from_goldman(args.V0, args.a_len)
        goldman = (args.V0, args.a_len)
    else:
        params = BasisParams(
            0.0 if args.A is None else args.A, 1.0 if args.B is None else args.B
        )
    if args.N < 1:
        raise UsageError("--N must be >= 1")
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    if not math.isfinite(args.alpha):
        raise UsageError("--alpha must be finite")
    return RunConfig(
        params=params,
        goldman=goldman,
        alpha=args.alpha,
        lambda_c=args.lambda_c,
        m=args.m,
        n=args.n,
        N=args.N,
        method=args.method,
        output_format=args.output_format,
        tol=args.tol,
        timestamp=not args.no_timestamp,
    )


def _dispatch(args, cfg: RunConfig, out) -> int:
    if args.command == "matel":
        return cmd_matel(cfg, out)
    if args.command == "table":
        return cmd_table(cfg, out)
    if args.command == "spectrum":
        return cmd_spectrum(
            cfg,
            out,
            sweep_N=None if args.sweep_N is None else _parse_list(args.sweep_N, int),
            sweep_lambda=None if args.sweep_lambda is None else _parse_list(args.sweep_lambda, float),
            nev=args.nev,
            fill=args.fill,
            max_sweeps=args.max_sweeps,
        )
    if args.command == "energies":
        return cmd_energies(cfg, out)
    return cmd_verify(args.suite, cfg, out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    buf = io.StringIO()
    try:
        cfg = _config(args)
        code = _dispatch(args, cfg, buf)
    except (UsageError, InvalidIndex, IndexOutOfTable) as exc:
        print(f"spikedho: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainDiverges as exc:
        print(f"spikedho: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"spikedho: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NoConvergence as exc:
        print(f"spikedho: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if args.out is None:
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
