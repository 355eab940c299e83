"""Command-line interface: rank | sweep | equiv | synth.

Outputs are deterministic: identical inputs and flags produce byte-identical
CSVs (floats at 6 significant digits, no timestamps). Every output CSV
starts with a metadata comment line carrying the tool version, input file
hashes, and parameter values. Exit codes: 0 success, 1 user or data error,
2 internal numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .bayes import posterior_alpha_skeptic
from .dataio import (
    DEFAULT_MISSING_CODES,
    Dataset,
    ModelSpec,
    ReturnsPanel,
    build_dataset,
    concat_panels,
    load_models,
    load_panel,
)
from .equiv import solve_equiv, sweep
from .errors import FactorDistError, InputError, NotBracketedError
from .metrics import build_report, rank_models
from .regression import fit_ols, grs_test
from .synth import RNG_ALGORITHM, SynthConfig, generate
from .transport import distance_breakdown

DEFAULT_GRID = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".6g")


def _sanitize(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", name)


def _file_tag(path: str | Path) -> str:
    digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()[:12]
    return f"{Path(path).name}:{digest}"


class _Parser(argparse.ArgumentParser):
    # Usage problems are user errors: exit 1, not argparse's default 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(f"error: {message}")


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None


class _OutputSet:
    """Buffered CSV outputs, flushed together so failures leave nothing behind."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self._files: list[tuple[Path, str]] = []

    def add(self, name: str, metadata: str, header: str, rows: list[str]) -> None:
        body = "\n".join([f"# {metadata}", header, *rows]) + "\n"
        self._files.append((self.out_dir / name, body))

    def flush(self) -> list[Path]:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []
        try:
            for path, body in self._files:
                path.write_text(body, encoding="utf-8")
                written.append(path)
        except BaseException:
            for path in written:
                path.unlink(missing_ok=True)
            raise
        return written


def _load_dataset(args) -> Dataset:
    missing = _parse_floats(args.missing)
    panels = [load_panel(p, missing) for p in args.portfolios]
    portfolios = concat_panels(panels)
    factors = load_panel(args.factors, missing)
    return build_dataset(portfolios, factors, args.rf)


def _metadata(args, command: str, extra: str = "") -> str:
    parts = [
        f"factordist {__version__}",
        f"cmd={command}",
        "portfolios=" + ",".join(_file_tag(p) for p in args.portfolios),
        f"factors={_file_tag(args.factors)}",
        f"models={_file_tag(args.models)}",
        f"rf={args.rf}",
        f"missing={args.missing}",
    ]
    if extra:
        parts.append(extra)
    return " | ".join(parts)


def _model_reports(dataset: Dataset, models: list[ModelSpec], jobs: int):
    def one(model):
        fit = fit_ols(dataset, model)
        skeptic = posterior_alpha_skeptic(fit)
        breakdown = distance_breakdown(skeptic)
        report = build_report(fit, skeptic, breakdown, grs_test(fit))
        return report, skeptic
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, models))
    return [one(m) for m in models]


def cmd_rank(args) -> int:
    dataset = _load_dataset(args)
    models = load_models(args.models)
    results = _model_reports(dataset, models, args.jobs)
    table = rank_models([r for r, _ in results])
    meta = _metadata(args, "rank")
    out = _OutputSet(Path(args.out))

    header = ("model,n,T,k,TD,AD,RMSE_alpha,RMSE_sigma,ratio_var,"
              "GRS,GRS_pvalue,MAE,MAE_over_Ar,mean_R2")
    rows = []
    for r in table.ranked():
        rows.append(",".join([
            r.model_name, str(r.n), str(r.T), str(r.k),
            _fmt(r.td), _fmt(r.ad), _fmt(r.rmse_alpha), _fmt(r.rmse_sigma),
            _fmt(r.ratio_var), _fmt(r.grs), _fmt(r.grs_pvalue),
            _fmt(r.mae), _fmt(r.mae_over_ar), _fmt(r.mean_r2),
        ]))
    out.add("report.csv", meta, header, rows)

    assets = dataset.portfolios.names
    for (report, skeptic) in results:
        sigma = np.sqrt(np.clip(np.diag(skeptic.cov), 0.0, None))
        with np.errstate(divide="ignore", invalid="ignore"):
            tstat = np.where(sigma > 0.0, skeptic.mean / sigma, np.inf)
        lines = [
            ",".join([assets[i], _fmt(skeptic.mean[i]), _fmt(sigma[i]),
                      _fmt(tstat[i]), _fmt(report.marginal[i])])
            for i in range(len(assets))
        ]
        out.add(f"marginal_{_sanitize(report.model_name)}.csv", meta,
                "asset,alpha,sigma_alpha,t_stat,marginal", lines)
    out.flush()
    return 0


def cmd_sweep(args) -> int:
    grid = _parse_floats(args.grid)
    dataset = _load_dataset(args)
    models = load_models(args.models)

    def one(model):
        return [(model.name, row) for row in sweep(dataset, model, grid)]
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(one, models))
    else:
        chunks = [one(m) for m in models]

    rows = [
        ",".join([name, _fmt(r.sigma_alpha_annual), _fmt(r.ad),
                  _fmt(r.rmse_alpha), _fmt(r.rmse_sigma), _fmt(r.ratio_var)])
        for chunk in chunks for name, r in chunk
    ]
    out = _OutputSet(Path(args.out))
    out.add("sweep.csv", _metadata(args, "sweep", f"grid={args.grid}"),
            "model,sigma_alpha_annual,AD,RMSE_alpha,RMSE_sigma,ratio", rows)
    out.flush()
    return 0


def cmd_equiv(args) -> int:
    dataset = _load_dataset(args)
    models = load_models(args.models)
    by_name = {m.name: m for m in models}
    if args.benchmark not in by_name:
        raise InputError(f"benchmark model {args.benchmark!r} not in model file")
    alternatives = args.alternatives or [m.name for m in models
                                         if m.name != args.benchmark]
    for name in alternatives:
        if name not in by_name:
            raise InputError(f"alternative model {name!r} not in model file")

    benchmark_ad = sweep(dataset, by_name[args.benchmark], [0.0])[0].ad
    rows = []
    for name in alternatives:
        try:
            res = solve_equiv(dataset, by_name[name], benchmark_ad,
                              bracket_hi=args.bracket_hi,
                              benchmark_name=args.benchmark)
            rows.append(",".join([
                res.alt_model, res.benchmark_model, _fmt(res.sigma_star_annual),
                _fmt(res.ad_at_star), str(res.iterations),
                str(res.converged).lower(), "ok",
            ]))
        except NotBracketedError:
            rows.append(",".join([name, args.benchmark, "", "", "0",
                                  "false", "not_bracketed"]))
    out = _OutputSet(Path(args.out))
    out.add("equiv.csv",
            _metadata(args, "equiv",
                      f"benchmark={args.benchmark} | bracket_hi={args.bracket_hi}"),
            "alt_model,benchmark_model,sigma_star_annual,ad_at_star,"
            "iterations,converged,status", rows)
    out.flush()
    return 0


def cmd_synth(args) -> int:
    config = SynthConfig(
        T=args.T,
        n=args.n,
        k=args.k,
        true_alpha=np.full(args.n, args.alpha),
        true_beta=np.ones((args.n, args.k)),
        factor_mean=np.full(args.k, args.factor_mean),
        factor_cov=args.factor_vol**2 * np.eye(args.k),
        resid_cov=args.resid_vol**2 * np.eye(args.n),
        seed=args.seed,
    )
    dataset = generate(config)
    meta = " | ".join([
        f"factordist {__version__}", "cmd=synth",
        f"T={args.T}", f"n={args.n}", f"k={args.k}", f"seed={args.seed}",
        f"alpha={_fmt(args.alpha)}", f"resid_vol={_fmt(args.resid_vol)}",
        f"factor_mean={_fmt(args.factor_mean)}",
        f"factor_vol={_fmt(args.factor_vol)}", f"rng={RNG_ALGORITHM}",
    ])
    factors = dataset.factors
    with_rf = ReturnsPanel(
        factors.dates, factors.names + ("RF",),
        np.hstack([factors.values, np.zeros((factors.t_obs, 1))]),
    )
    out = _OutputSet(Path(args.out))
    ports = dataset.portfolios
    out.add("portfolios.csv", meta, "date," + ",".join(ports.names),
            [str(d) + "," + ",".join(_fmt(v) for v in row)
             for d, row in zip(ports.dates, ports.values)])
    out.add("factors.csv", meta, "date," + ",".join(with_rf.names),
            [str(d) + "," + ",".join(_fmt(v) for v in row)
             for d, row in zip(with_rf.dates, with_rf.values)])
    out.flush()
    return 0


def _add_data_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--portfolios", nargs="+", required=True,
                   help="portfolio returns CSV(s); several files are "
                        "column-concatenated after date alignment")
    p.add_argument("--factors", required=True, help="factor returns CSV")
    p.add_argument("--models", required=True, help="model definition file")
    p.add_argument("--rf", default="RF", help="risk-free column name")
    p.add_argument("--missing", default=",".join(str(c) for c in DEFAULT_MISSING_CODES),
                   help="comma-separated missing-value codes")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel model evaluations (results identical)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="factordist",
                     description="Distance-based comparison of asset-pricing "
                                 "factor models.")
    parser.add_argument("--version", action="version",
                        version=f"factordist {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="fit models and rank by average distance")
    _add_data_options(p_rank)
    p_rank.set_defaults(func=cmd_rank)

    p_sweep = sub.add_parser("sweep", help="distance metrics over a sigma grid")
    _add_data_options(p_sweep)
    p_sweep.add_argument("--grid", default=",".join(str(g) for g in DEFAULT_GRID),
                         help="comma-separated annualized sigma values (percent)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_equiv = sub.add_parser("equiv", help="solve for distance-equivalent sigma")
    _add_data_options(p_equiv)
    p_equiv.add_argument("--benchmark", required=True, help="benchmark model name")
    p_equiv.add_argument("--alternatives", nargs="*", default=None,
                         help="alternative model names (default: all others)")
    p_equiv.add_argument("--bracket-hi", type=float, default=100.0,
                         help="upper bisection bracket, annual percent")
    p_equiv.set_defaults(func=cmd_equiv)

    p_synth = sub.add_parser("synth", help="write synthetic returns CSVs")
    p_synth.add_argument("--out", default=".", help="output directory")
    p_synth.add_argument("--T", type=int, default=600, help="months")
    p_synth.add_argument("--n", type=int, default=5, help="assets")
    p_synth.add_argument("--k", type=int, default=1, help="factors")
    p_synth.add_argument("--seed", type=int, default=0, help="RNG seed")
    p_synth.add_argument("--alpha", type=float, default=0.0,
                         help="common true alpha, percent per month")
    p_synth.add_argument("--resid-vol", type=float, default=2.0,
                         help="residual vol, percent per month")
    p_synth.add_argument("--factor-mean", type=float, default=0.5,
                         help="factor mean, percent per month")
    p_synth.add_argument("--factor-vol", type=float, default=4.5,
                         help="factor vol, percent per month")
    p_synth.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        if exc.code in (0, None):
            return 0
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 1
        return int(exc.code)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FactorDistError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
