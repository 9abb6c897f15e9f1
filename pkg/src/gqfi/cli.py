"""Command-line experiment runner.

Usage::

    gqfi <mode> --config run.cfg [--out DIR] [--jobs N]

Modes are ``trajectory``, ``sweep``, ``asymptotics``, ``validate``,
``bounds``, ``dephasing`` and ``skin``. Every run writes one CSV whose
header comment lines record the package version and the fully resolved
configuration, so identical configurations produce identical bytes.

Exit status is 0 on success, 1 for configuration errors and 2 for
numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Iterable

import numpy as np

from . import __version__
from .bounds import check_bounds
from .config import MODES, load_config, render, validate
from .dynamics import IntegratorConfig, run_trajectory
from .errors import AllGapsDegenerate, ConfigError, GqfiError
from .models import MODEL_REGISTRY, build_model, trapped_hoppings
from .spectral import (
    asymptotic_report,
    chain_matrix,
    dephasing_time,
    fit_profile_exponent,
    skin_spectrum,
)
from .core import assemble_generators

NAN = float("nan")

DEFAULTS: dict[str, Any] = {
    "integrator.dt": 0.01,
    "integrator.t_max": 100.0,
    "integrator.scheme": "rk4",
    "integrator.record_stride": 100,
    "output.dir": ".",
    "output.extra": [],
    "validate.t": 10.0,
    "validate.cutoff": 20,
    "validate.eps": 1e-3,
    "validate.dt": 1e-3,
    "validate.tol": 0.01,
    "skin.w": 0.0,
    "bounds.tolerance": 0.10,
}


def figure_recipes() -> dict[str, dict[str, Any]]:
    """Named preset configurations, one per plotted scaling curve.

    Trajectory presets use ``M = 60``; sweep presets cover ``M = 2..60``.
    """
    half_pi = -math.pi / 2
    cav = {"model.name": "cavity_local", "model.delta": 0.5, "model.zeta": 0.3, "model.E": 0.1}
    hyb = {"model.name": "cavity_hybrid", "model.delta": 0.5, "model.zeta": 0.1,
           "model.gamma": 0.3, "model.E": 0.1}
    tl = {"model.name": "trapped_local", "model.gamma": 0.1, "model.E": 0.1}
    tg = {"model.name": "trapped_global", "model.gamma": 0.1, "model.E": 0.1}
    nr = {"model.name": "trapped_nonreciprocal", "model.gamma": 0.1, "model.E": 0.1}
    sweep = {"sweep.M_list": list(range(2, 61, 2))}
    traj = {"model.M": 60, "integrator.dt": 0.02, "integrator.record_stride": 50}
    return {
        "fig2a": {"mode": "trajectory", **cav, **traj, "integrator.t_max": 100.0},
        "fig2b": {"mode": "sweep", **cav, **sweep, "output.extra": ["IG_over_nbar"]},
        "fig3a": {"mode": "trajectory", **hyb, **traj, "integrator.t_max": 200.0},
        "fig3b": {"mode": "sweep", **hyb, **sweep, "output.extra": ["IG_over_nbar"]},
        "fig4a": {"mode": "trajectory", **tl, **traj, "integrator.t_max": 500.0},
        "fig4b": {"mode": "trajectory", **tl, **traj, "integrator.t_max": 500.0},
        "fig4c": {"mode": "sweep", **tl, **sweep, "output.extra": ["IG_over_nbar"]},
        "fig4d": {"mode": "sweep", **tl, **sweep},
        "fig5b": {"mode": "trajectory", **tg, **traj, "integrator.t_max": 500.0},
        "fig5c": {"mode": "trajectory", **tg, **traj, "integrator.t_max": 500.0},
        "fig5d": {"mode": "sweep", **tg, **sweep, "output.extra": ["IG_over_nbar"]},
        "fig5e": {"mode": "sweep", **tg, **sweep},
        "fig6b": {"mode": "trajectory", **nr, "model.dphi": 0.0, **traj,
                  "integrator.t_max": 500.0},
        "fig6c": {"mode": "trajectory", **nr, "model.dphi": 0.0, **traj,
                  "integrator.t_max": 500.0},
        "fig6d": {"mode": "trajectory", **nr, "model.dphi": half_pi, **traj,
                  "integrator.t_max": 1500.0},
        "fig6e": {"mode": "trajectory", **nr, "model.dphi": half_pi, **traj,
                  "integrator.t_max": 1500.0},
        "fig6f": {"mode": "sweep", **nr, "model.dphi": half_pi, **sweep,
                  "output.extra": ["exp_2M_over_xi"]},
        "fig6g": {"mode": "sweep", **nr, "model.dphi": half_pi, **sweep,
                  "output.extra": ["exp_2M_over_xi"]},
        "fig7a": {"mode": "trajectory", **nr, "model.dphi": half_pi, **traj,
                  "integrator.t_max": 1500.0},
        "fig7b": {"mode": "sweep", **nr, "model.dphi": half_pi, **sweep},
        "fig8": {"mode": "dephasing", **nr, "sweep.M_list": list(range(10, 61, 5)),
                 "sweep.dphi_list": [0.0, -math.pi / 4, half_pi]},
        "figH": {"mode": "skin", "skin.t_R": 1.0, "skin.t_L": 0.3, "skin.w": 0.0,
                 "skin.L_list": [30]},
    }


# --------------------------------------------------------------------------
# helpers


def _model_params(cfg: dict[str, Any], **override) -> dict[str, Any]:
    params = {k.split(".", 1)[1]: v for k, v in cfg.items()
              if k.startswith("model.") and k != "model.name"}
    params.update(override)
    return params


def _fmt(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(path: str, cfg: dict[str, Any], header: list[str], rows: Iterable[list]) -> None:
    """Write rows with a comment header; ``\\n`` line endings for byte stability."""
    buf = io.StringIO()
    buf.write(f"# gqfi {__version__}\n")
    for line in render(cfg):
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def _map(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# sweep workers (top level so they pickle)


def _localization_length(name: str, params: dict[str, Any]) -> float:
    if not name.startswith("trapped_nonreciprocal"):
        return NAN
    t_R, t_L = trapped_hoppings(params.get("K", 1.0), params.get("gamma", 0.1),
                                params.get("dphi", 0.0))
    k = abs(0.5 * math.log(t_R / t_L))
    return math.inf if k == 0 else 1 / k


def _sweep_point(job: tuple[str, dict[str, Any]]) -> dict[str, Any]:
    name, params = job
    model = build_model(name, **params)
    rep = asymptotic_report(model, with_dephasing=False)
    t_star = NAN
    if rep.zero_damping and model.mode_count > 1:
        try:
            t_star = dephasing_time(assemble_generators(model)).t_star
        except AllGapsDegenerate:
            pass
    return {"M": model.mode_count, "rate_IG": rep.rate_IG, "rate_IE": rep.rate_IE,
            "nbar": rep.nbar, "t_star": t_star,
            "localization_length": _localization_length(name, params),
            "rate_dI": rep.rate_dI, "opt_IG": rep.opt_IG, "opt_IE": rep.opt_IE,
            "zero_damping": rep.zero_damping}


def _dephasing_point(job: tuple[str, dict[str, Any]]) -> list:
    name, params = job
    model = build_model(name, **params)
    try:
        r = dephasing_time(assemble_generators(model))
        return [params["dphi"], model.mode_count, r.t_star, r.sigma_gap, r.mean_gap]
    except AllGapsDegenerate:
        return [params["dphi"], model.mode_count, NAN, 0.0, NAN]


# --------------------------------------------------------------------------
# modes


def _need(cfg: dict[str, Any], *keys: str) -> None:
    for k in keys:
        if k not in cfg:
            raise ConfigError(f"missing required key {k!r}")


def run_trajectory_mode(cfg: dict[str, Any], jobs: int) -> tuple[list[str], list[list]]:
    _need(cfg, "model.name", "model.M")
    model = build_model(cfg["model.name"], **_model_params(cfg))
    ic = IntegratorConfig(cfg["integrator.dt"], cfg["integrator.t_max"],
                          cfg["integrator.scheme"], cfg["integrator.record_stride"])
    states = run_trajectory(model, ic)
    M = model.mode_count
    header = ["t", "nbar", "I_G", "I_E", "delta_I"] + [f"gamma_diag_{i}" for i in range(1, 2 * M + 1)]
    rows = [[s.t, s.nbar, s.I_G, s.I_E, s.delta_I, *np.diag(s.gamma)] for s in states]
    return header, rows


def run_sweep_mode(cfg: dict[str, Any], jobs: int) -> tuple[list[str], list[list]]:
    _need(cfg, "model.name", "sweep.M_list")
    name = cfg["model.name"]
    jobs_list = [(name, _model_params(cfg, M=M)) for M in sorted(set(cfg["sweep.M_list"]))]
    pts = sorted(_map(_sweep_point, jobs_list, jobs), key=lambda d: d["M"])
    zd = pts[0]["zero_damping"]
    nb = "nbar_rate" if zd else "nbar_st"
    header = ["M", "rate_IG", "rate_IE", nb, "t_star", "localization_length",
              "rate_dI", "opt_IG", "opt_IE"]
    extra = list(cfg.get("output.extra", []))
    header += extra
    rows = []
    for p in pts:
        row = [p["M"], p["rate_IG"], p["rate_IE"], p["nbar"], p["t_star"],
               p["localization_length"], p["rate_dI"], p["opt_IG"], p["opt_IE"]]
        for col in extra:
            if col == "IG_over_nbar":
                row.append(p["rate_IG"] / p["nbar"])
            elif col == "exp_2M_over_xi":
                row.append(math.exp(2 * p["M"] / p["localization_length"]))
            else:
                raise ConfigError(f"unknown extra column {col!r}")
        rows.append(row)
    return header, rows


def run_asymptotics_mode(cfg: dict[str, Any], jobs: int) -> tuple[list[str], list[list]]:
    _need(cfg, "model.name", "model.M")
    model = build_model(cfg["model.name"], **_model_params(cfg))
    rep = asymptotic_report(model)
    rows = [["class", rep.dynamics.tag.value], ["spectral_margin", rep.dynamics.spectral_margin],
            ["rate_IG", rep.rate_IG], ["rate_IE", rep.rate_IE], ["rate_dI", rep.rate_dI],
            ["nbar_rate" if rep.zero_damping else "nbar_st", rep.nbar],
            ["opt_IG", rep.opt_IG], ["opt_IE", rep.opt_IE],
            ["t_star", NAN if rep.t_star is None else rep.t_star]]
    return ["quantity", "value"], rows


def run_validate_mode(cfg: dict[str, Any], jobs: int) -> tuple[list[str], list[list]]:
    from .fock import fidelity_qfis

    _need(cfg, "model.name")
    params = _model_params(cfg)
    params.setdefault("M", 1)
    model = build_model(cfg["model.name"], **params)
    t = cfg["validate.t"]
    dt = cfg["validate.dt"]
    states = run_trajectory(model, IntegratorConfig(dt, t, "rk4", 10 ** 9))
    g = states[-1]
    f = fidelity_qfis(model, eps=cfg["validate.eps"], t=t, cutoff=cfg["validate.cutoff"], dt=dt)
    rows = []
    for q, gv, fv in (("I_G", g.I_G, f.I_G), ("I_E", g.I_E, f.I_E),
                      ("delta_I", g.delta_I, f.I_G - f.I_E)):
        rows.append([q, gv, fv, abs(gv - fv) / abs(fv) if fv else abs(gv)])
    return ["quantity", "gaussian_value", "fock_value", "rel_err"], rows


def run_bounds_mode(cfg: dict[str, Any], jobs: int) -> tuple[list[str], list[list]]:
    header, rows = run_sweep_mode({**cfg, "output.extra": []}, jobs)
    M = [r[0] for r in rows]
    res = [r[3] for r in rows]
    cg = check_bounds(M, [r[7] for r in rows], res, cfg["bounds.tolerance"])
    ce = check_bounds(M, [r[8] for r in rows], 1.0, cfg["bounds.tolerance"])
    out = []
    for i, m in enumerate(M):
        out.append([m, res[i], rows[i][7], rows[i][8], cg.lower_ratio[i], cg.upper_ratio[i],
                    ce.lower_ratio[i], ce.upper_ratio[i]])
    return ["M", header[3], "opt_IG", "opt_IE", "IG_over_resource_M", "IG_over_resource_M2",
            "IE_over_M", "IE_over_M2"], out


def run_dephasing_mode(cfg: dict[str, Any], jobs: int) -> tuple[list[str], list[list]]:
    _need(cfg, "model.name", "sweep.M_list")
    dphis = cfg.get("sweep.dphi_list", [cfg.get("model.dphi", 0.0)])
    items = [(cfg["model.name"], _model_params(cfg, M=M, dphi=d))
             for d in dphis for M in sorted(set(cfg["sweep.M_list"]))]
    rows = _map(_dephasing_point, items, jobs)
    return ["dphi", "M", "t_star", "sigma_gap", "mean_gap"], rows


def run_skin_mode(cfg: dict[str, Any], jobs: int) -> tuple[list[str], list[list]]:
    _need(cfg, "skin.t_R", "skin.t_L", "skin.L_list")
    t_R, t_L, w = cfg["skin.t_R"], cfg["skin.t_L"], cfg["skin.w"]
    rows = []
    for L in sorted(set(cfg["skin.L_list"])):
        s = skin_spectrum(t_R, t_L, w, L)
        fit = fit_profile_exponent(chain_matrix(t_R, t_L, w, L)) if L > 1 else NAN
        rows.append([L, t_R, t_L, w, s.localization_length, s.profile_exponent, fit,
                     s.max_abs_error, float(s.eigenvalues.min()), float(s.eigenvalues.max())])
    return ["L", "t_R", "t_L", "w", "localization_length", "profile_exponent",
            "fitted_profile_exponent", "max_abs_error", "E_min", "E_max"], rows


RUNNERS = {
    "trajectory": run_trajectory_mode,
    "sweep": run_sweep_mode,
    "asymptotics": run_asymptotics_mode,
    "validate": run_validate_mode,
    "bounds": run_bounds_mode,
    "dephasing": run_dephasing_mode,
    "skin": run_skin_mode,
}


def resolve(mode: str, raw: dict[str, Any], out_dir: str | None = None) -> dict[str, Any]:
    """Merge defaults, preset and file values into a validated config."""
    raw = dict(raw)
    preset = raw.get("preset")
    cfg: dict[str, Any] = dict(DEFAULTS)
    if preset is not None:
        recipes = figure_recipes()
        if preset not in recipes:
            raise ConfigError(f"unknown preset {preset!r}; known: {sorted(recipes)}")
        cfg.update(recipes[preset])
    cfg.update(raw)
    if cfg.get("mode", mode) != mode:
        raise ConfigError(f"config mode {cfg['mode']!r} does not match {mode!r}")
    cfg["mode"] = mode
    if out_dir is not None:
        cfg["output.dir"] = out_dir
    cfg.setdefault("output.prefix", preset or mode)
    keys = None
    if "model.name" in cfg:
        name = cfg["model.name"]
        if name not in MODEL_REGISTRY:
            raise ConfigError(f"unknown model {name!r}")
        keys = MODEL_REGISTRY[name].keys
    return validate(cfg, keys)


def run(mode: str, config_path: str, out_dir: str | None = None, jobs: int = 1) -> str:
    """Run one mode and return the CSV path.

    Raises
    ------
    ConfigError
    GqfiError
    """
    cfg = resolve(mode, load_config(config_path), out_dir)
    try:
        header, rows = RUNNERS[mode](cfg, jobs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    os.makedirs(cfg["output.dir"], exist_ok=True)
    path = os.path.join(cfg["output.dir"], f"{cfg['output.prefix']}_{mode}.csv")
    write_csv(path, cfg, header, rows)
    if mode == "validate":
        bad = [r for r in rows if r[3] >= cfg["validate.tol"]]
        if bad:
            raise ValidationFailed(", ".join(f"{r[0]} rel_err={r[3]:.3g}" for r in bad))
    return path


class ValidationFailed(GqfiError):
    """Gaussian and Fock values disagree beyond tolerance."""


def _jobs(arg: int | None) -> int:
    if arg is not None:
        return max(arg, 1)
    env = os.environ.get("GQFI_JOBS")
    if env:
        try:
            return max(int(env), 1)
        except ValueError:
            raise ConfigError(f"GQFI_JOBS must be an integer, got {env!r}") from None
    return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gqfi", description=__doc__.split("\n\n")[0])
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", required=True, help="key = value configuration file")
    p.add_argument("--out", default=None, help="output directory (overrides output.dir)")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes for sweeps (default: $GQFI_JOBS or 1)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        path = run(args.mode, args.config, args.out, _jobs(args.jobs))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except GqfiError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
