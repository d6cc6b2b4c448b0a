"""Command-line experiment runner, one subcommand per verified estimate.

Every run writes ``report.json``, ``report.csv`` (the ``n, metric`` plot data)
and ``config.txt`` into its output directory. Exit codes: 0 on success, 2 when
a precondition fails (unknown function id, window overflow, bad range), 3 when
``--strict`` is set and an exponential integral saturated.
"""
from __future__ import annotations

import argparse
import datetime
import math
import sys
from pathlib import Path

import numpy as np

from . import _parallel
from .catalog import make_function, parse_function_id
from .config import ExperimentConfig
from .majorant import exceptional_set, majorant, write_majorant
from .oracles import constant_field_norm_k1
from .orlicz import luxemburg_norm, orlicz_integral
from .singular import conjugate_dd, hl_maximal_1d
from .spectral import (conjugate_square_partial_sum, spectral_conjugate,
                       square_partial_sum)
from .torus import lp_norm, make_grid, write_field_csv
from .verify import (DYADIC_LAMBDAS, PhiModulus, VerificationReport, calibrate_c1,
                     exceptional_exp_sweep, exp_mean_convergence, lemma2_gap,
                     log_growth_check, parse_report_csv, phi_modulus_decay, report_csv,
                     sweep_exp_bound, weak_type_constant, weak_type_table)

EXIT_OK, EXIT_PRECONDITION, EXIT_SATURATED = 0, 2, 3

SUBCOMMANDS = ("gen", "sums", "conj", "maximal", "norms", "majorant", "verify-1d",
               "verify-theorem1", "verify-cor1", "verify-cor2", "verify-cor3",
               "lemma2", "phi-modulus")

PHI_CHOICES = {
    "exp": lambda t: np.exp(-t),
    "inverse": lambda t: 1.0 / (1.0 + t),
    "zero": lambda t: np.zeros_like(t),
}


def emit_plot_data(report: VerificationReport) -> str:
    """Two-column ``n,metric`` CSV; header only when the report has no rows."""
    return report_csv(report)


def parse_plot_data(text: str) -> list:
    return parse_report_csv(text)


# experiments ---------------------------------------------------------------

def _field(cfg: ExperimentConfig):
    fid = cfg.function_id
    entry, params = parse_function_id(fid)
    if entry.id == "random" and len(params) < 2:
        fid = f"random:{params[0] if params else entry.defaults[0]},{cfg.seed}"
    return make_function(fid, make_grid(cfg.dim, cfg.grid_n))


def _base_params(cfg: ExperimentConfig) -> dict:
    return {"dim": cfg.dim, "grid_n": cfg.grid_n, "function_id": cfg.function_id,
            "seed": cfg.seed}


def _majorant(cfg, f):
    return majorant(f, None if cfg.dim == 1 else cfg.n_max)


def _gen(cfg, outdir):
    f = _field(cfg)
    write_field_csv(f, outdir / "field.csv")
    rep = VerificationReport.build("gen", _base_params(cfg), [])
    rep.extra = {"l1_norm": lp_norm(f, 1), "sup_norm": float(np.max(np.abs(f.values)))}
    return rep


def _sums(cfg, outdir):
    f = _field(cfg)
    per_n = []
    for n in cfg.n_range:
        s = square_partial_sum(f, n)
        per_n.append((n, float(np.max(np.abs(s.values - f.values)))))
    n = cfg.n_max
    write_field_csv(square_partial_sum(f, n), outdir / "square_sum.csv")
    write_field_csv(conjugate_square_partial_sum(f, n), outdir / "conjugate_square_sum.csv")
    p = _base_params(cfg) | {"n_min": cfg.n_min, "n_max": cfg.n_max, "metric": "max|S_n f - f|"}
    return VerificationReport.build("sums", p, per_n)


def _conj(cfg, outdir):
    f = _field(cfg)
    pv = conjugate_dd(f)
    sp = spectral_conjugate(f)
    write_field_csv(pv, outdir / "conjugate.csv")
    rep = VerificationReport.build("conj", _base_params(cfg), [])
    rep.extra = {"max_abs_pv_vs_spectral": float(np.max(np.abs(pv.values - sp.values)))}
    return rep


def _maximal(cfg, outdir):
    f = _field(cfg)
    if cfg.dim != 1:
        raise ValueError("maximal is defined for dim = 1")
    mf = hl_maximal_1d(f)
    write_field_csv(mf, outdir / "maximal.csv")
    norm = lp_norm(f, 1)
    rep = VerificationReport.build("maximal", _base_params(cfg), [])
    rep.extra = {"weak_type_table": weak_type_table(mf.values, f.grid.cell_measure, DYADIC_LAMBDAS),
                 "weak_type_constant": weak_type_constant(mf.values, f.grid.cell_measure,
                                                          DYADIC_LAMBDAS, norm),
                 "l1_norm": norm}
    return rep


def _norms(cfg, outdir):
    f = _field(cfg)
    res = luxemburg_norm(f, cfg.k)
    rep = VerificationReport.build("norms", _base_params(cfg) | {"k": cfg.k}, [])
    rep.extra = {"luxemburg_norm": res.value, "residual": res.residual,
                 "orlicz_integral": orlicz_integral(f, cfg.k)}
    entry, params = parse_function_id(cfg.function_id)
    if entry.id == "const" and cfg.k == 1 and cfg.dim == 1:
        c = float(params[0]) if params else float(entry.defaults[0])
        ref = constant_field_norm_k1(c, f.grid.total_measure)
        rep.extra["closed_form"] = ref
        rep.extra["closed_form_rel_error"] = abs(res.value - ref) / abs(ref) if ref else 0.0
    return rep


def _majorant_cmd(cfg, outdir):
    f = _field(cfg)
    F = _majorant(cfg, f)
    write_majorant(F, outdir / "majorant.csv", outdir / "majorant.json")
    rep = VerificationReport.build("majorant", _base_params(cfg) | {"n_max": cfg.n_max}, [])
    rep.extra = {"floor": F.floor, "scale": F.scale, "l1_mass": F.masses()}
    return rep


def _verify_1d(cfg, outdir):
    if cfg.dim != 1:
        raise ValueError("verify-1d needs dim = 1")
    f = _field(cfg)
    F = _majorant(cfg, f)
    rep = sweep_exp_bound(f, F, cfg.n_range, cfg.c, experiment="verify-1d",
                          params=_base_params(cfg))
    if cfg.budget > 0:
        rep.calibration = {"c1": calibrate_c1(f, F, cfg.n_range, cfg.budget),
                           "c2_budget": cfg.budget}
    return rep


def _verify_theorem1(cfg, outdir):
    f = _field(cfg)
    F = _majorant(cfg, f)
    rep = sweep_exp_bound(f, F, cfg.n_range, cfg.c, experiment="verify-theorem1",
                          params=_base_params(cfg) | {"majorant_n_max": cfg.n_max})
    k = max(cfg.dim - 1, 0)
    norm = luxemburg_norm(f, k).value
    cell = f.grid.cell_measure
    rep.extra = {
        "weak_type_table": weak_type_table(F.values, cell, DYADIC_LAMBDAS),
        "weak_type_constant": weak_type_constant(F.values, cell, DYADIC_LAMBDAS, norm),
        "luxemburg_norm": norm,
        "orlicz_index": k,
    }
    return rep


def _exceptional(cfg, f):
    F = _majorant(cfg, f)
    return F, exceptional_set(F, cfg.eps)


def _verify_cor1(cfg, outdir):
    f = _field(cfg)
    F = _majorant(cfg, f)
    rep = exceptional_exp_sweep(f, F, cfg.eps, cfg.n_range)
    rep.params.update(_base_params(cfg))
    return rep


def _verify_cor2(cfg, outdir):
    f = _field(cfg)
    _, E = _exceptional(cfg, f)
    rep = exp_mean_convergence(f, E, cfg.A, cfg.n_range)
    rep.params.update(_base_params(cfg) | {"eps": cfg.eps})
    return rep


def _verify_cor3(cfg, outdir):
    f = _field(cfg)
    _, E = _exceptional(cfg, f)
    seq = cfg.subsequence or [2 ** k for k in range(cfg.k_start, cfg.k_start + 6)]
    rep = log_growth_check(f, E, seq, k_start=cfg.k_start, clamp=True)
    rep.params.update(_base_params(cfg) | {"eps": cfg.eps})
    return rep


def _lemma2(cfg, outdir):
    f = _field(cfg)
    plain, conj = lemma2_gap(f, cfg.n_max)
    rep = VerificationReport.build("lemma2", _base_params(cfg) | {"n_max": cfg.n_max},
                                   [(cfg.n_max, plain)])
    rep.extra = {"gap_plain": plain, "gap_conjugate": conj}
    return rep


def _phi_modulus(cfg, outdir, phi="exp"):
    f = _field(cfg)
    _, E = _exceptional(cfg, f)
    rep = phi_modulus_decay(f, E, PhiModulus(PHI_CHOICES[phi]), cfg.n_range)
    rep.params.update(_base_params(cfg) | {"phi": phi, "eps": cfg.eps})
    return rep


RUNNERS = {
    "gen": _gen, "sums": _sums, "conj": _conj, "maximal": _maximal, "norms": _norms,
    "majorant": _majorant_cmd, "verify-1d": _verify_1d, "verify-theorem1": _verify_theorem1,
    "verify-cor1": _verify_cor1, "verify-cor2": _verify_cor2, "verify-cor3": _verify_cor3,
    "lemma2": _lemma2, "phi-modulus": _phi_modulus,
}


def default_output_dir(experiment: str) -> Path:
    stamp = datetime.datetime.now().strftime("%Y%m%d-%H%M%S-%f")
    return Path("out") / f"{experiment}-{stamp}"


def run(cfg: ExperimentConfig, strict: bool = False, **runner_kw) -> tuple[int, VerificationReport | None]:
    """Run one experiment and write its artifacts. Returns ``(exit_code, report)``."""
    try:
        cfg.validate()
        runner = RUNNERS[cfg.experiment]
        outdir = Path(cfg.output) if cfg.output else default_output_dir(cfg.experiment)
        outdir.mkdir(parents=True, exist_ok=True)
        report = runner(cfg, outdir, **runner_kw)
    except (KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_PRECONDITION, None
    (outdir / "report.json").write_text(report.to_json())
    (outdir / "report.csv").write_text(emit_plot_data(report))
    cfg.replace(output=str(outdir)).save(outdir / "config.txt")
    print(f"{cfg.experiment}: sup_metric={report.sup_metric!r} "
          f"trend_slope={report.trend_slope!r} -> {outdir}")
    if strict and report.saturated:
        print("error: exponential integral saturated", file=sys.stderr)
        return EXIT_SATURATED, report
    return EXIT_OK, report


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file; flags override it")
    common.add_argument("--dim", type=int)
    common.add_argument("--grid", dest="grid_n", type=int, help="points per axis")
    common.add_argument("--fn", dest="function_id", help="catalog id, e.g. logsing:16")
    common.add_argument("--nmin", dest="n_min", type=int)
    common.add_argument("--nmax", dest="n_max", type=int)
    common.add_argument("--subseq", dest="subsequence",
                        type=lambda s: [int(v) for v in s.split(",") if v])
    common.add_argument("--k-start", dest="k_start", type=int)
    common.add_argument("--eps", type=float)
    common.add_argument("--k", type=int, help="Orlicz index")
    common.add_argument("--c", type=float)
    common.add_argument("--A", type=float)
    common.add_argument("--budget", type=float, help="c2 budget for calibration")
    common.add_argument("--seed", type=int)
    common.add_argument("--output", help="output directory")
    common.add_argument("--threads", type=int,
                        help=f"worker threads (default ${_parallel.ENV_VAR} or all cores)")
    common.add_argument("--strict", action="store_true", help="exit 3 on saturation")

    p = argparse.ArgumentParser(prog="torus-harmonics", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="experiment", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "phi-modulus":
            sp.add_argument("--phi", choices=sorted(PHI_CHOICES), default="exp")
    return p


_CONFIG_FLAGS = ("dim", "grid_n", "function_id", "n_min", "n_max", "subsequence", "k_start",
                 "eps", "k", "c", "A", "budget", "seed", "output")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    cfg = cfg.replace(experiment=args.experiment,
                      **{k: getattr(args, k) for k in _CONFIG_FLAGS})
    if args.threads is not None:
        if args.threads < 1:
            print("error: --threads must be >= 1", file=sys.stderr)
            return EXIT_PRECONDITION
        _parallel.set_threads(args.threads)
    kw = {"phi": args.phi} if args.experiment == "phi-modulus" else {}
    code, _ = run(cfg, strict=args.strict, **kw)
    return code


if __name__ == "__main__":
    sys.exit(main())
