"""
Command-line driver producing the CSV data for each experiment family.

    depletion <command> --config run.yaml [--outdir DIR] [--jobs K] [--seedless]

Commands: density, modes, strongsweep, compensate, mimic, entropy.
Output goes to ``<outdir>/<command>/<profile>_nu<nu>.csv`` (one file per
job). Exit status is 0 on success, 2 for configuration errors and 3 for
numerical failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
import yaml

from . import profiles as prof
from .chain import build_chain, compensating_potential, mimicking_chain
from .continuum import (
    fit_density,
    friedel_window,
    mode_kfa,
    semiclassical_density,
    upper_envelope,
    window_mean,
    wkb_envelope,
)
from .eigen import diagonalize
from .errors import ConfigError, ConvergenceError, DomainError, ValidationError
from .manybody import OccupiedState, density, entropy_profile, write_density_csv, write_entropy_csv
from .sdrg import run_sdrg, sdrg_density

log = logging.getLogger("depletion")

COMMANDS = ("density", "modes", "strongsweep", "compensate", "mimic", "entropy")
H_CAP = 30.0

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


@dataclass
class ExperimentConfig:
    command: str
    N: int
    profiles: list
    fillings: list = field(default_factory=list)
    modes: list = field(default_factory=list)
    h_values: list = field(default_factory=list)
    mu0: object = "auto"
    fit: bool = True
    outdir: Path = Path("out")


def _parse_fraction(v):
    try:
        return float(Fraction(str(v)))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot read filling fraction {v!r}") from None


def load_config(path, command, outdir=None) -> ExperimentConfig:
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh) or {}
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    return parse_config(raw, command, outdir)


def parse_config(raw: dict, command, outdir=None) -> ExperimentConfig:
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    try:
        N = int(raw["N"])
    except (KeyError, TypeError, ValueError):
        raise ConfigError("config needs an integer N") from None
    if N < 2 or N % 2:
        raise ConfigError(f"N must be an even integer >= 2, got {N}")

    blocks = raw.get("profiles", [raw["profile"]] if "profile" in raw else None)
    if not blocks and command == "strongsweep":
        blocks = []
    elif not blocks:
        raise ConfigError("config needs a 'profile' block or a 'profiles' list")
    try:
        profiles = [prof.from_config(b) for b in blocks]
    except (ValidationError, TypeError, KeyError) as exc:
        raise ConfigError(f"bad profile block: {exc}") from None

    fillings = [_parse_fraction(v) for v in raw.get("fillings", [])]
    for nu in fillings:
        m = nu * N
        if not 0 < nu < 1 or abs(m - round(m)) > 1e-9:
            raise ConfigError(f"filling {nu} must lie in (0, 1) with nu*N integer (N={N})")
    if command != "modes" and not fillings:
        raise ConfigError("fillings list is empty")

    modes = [int(k) for k in raw.get("modes", [])]
    if command == "modes":
        if not modes:
            raise ConfigError("modes list is empty")
        for k in modes:
            if not 1 <= k <= N:
                raise ConfigError(f"mode index {k} outside 1..{N}")

    h_values = [float(h) for h in raw.get("h_values", [])]
    if command == "strongsweep":
        if not h_values:
            raise ConfigError("strongsweep needs an h_values list")
        if any(h < 0 for h in h_values):
            raise ConfigError("h values must be >= 0")

    mu0 = raw.get("mu0", "auto")
    if mu0 != "auto":
        try:
            mu0 = float(mu0)
        except (TypeError, ValueError):
            raise ConfigError(f"mu0 must be a number or 'auto', got {mu0!r}") from None

    out = Path(outdir if outdir is not None else raw.get("outdir", "out"))
    return ExperimentConfig(
        command=command,
        N=N,
        profiles=profiles,
        fillings=fillings,
        modes=modes,
        h_values=h_values,
        mu0=mu0,
        fit=bool(raw.get("fit", True)),
        outdir=out,
    )


# -- jobs -------------------------------------------------------------------


def _nu_tag(nu):
    return f"nu{nu:g}"


def _sites(N):
    return np.arange(1, N + 1) / N


def _ground_state(hoppings, m, potentials=None):
    spec = diagonalize(build_chain(hoppings, potentials))
    return spec, OccupiedState(spec, m)


def _semiclassical_column(profile, N, m, spec):
    """Prediction at the Fermi energy; above half filling use the particle-hole mirror."""
    x = _sites(N)
    if 2 * m == N:
        return np.full(N, 0.5)
    if 2 * m < N:
        return semiclassical_density(profile, abs(spec.energies[m - 1]), x, m)
    mh = N - m
    return 1.0 - semiclassical_density(profile, abs(spec.energies[mh - 1]), x, mh)


def _fitted_column(profile, n, m, N):
    x = _sites(N)
    J = np.asarray(prof.eval_profile(profile, x))
    smooth = window_mean(n, friedel_window(N))
    if 2 * m > N:
        fit = fit_density(1.0 - smooth, J)
        return 1.0 - fit.A * np.sqrt(np.maximum(fit.B - 1.0 / J, 0.0))
    fit = fit_density(smooth, J)
    return fit.A * np.sqrt(np.maximum(fit.B - 1.0 / J, 0.0))


def job_density(profile, N, nu, fit, path):
    m = int(round(nu * N))
    J = prof.sample_chain(profile, N)
    spec, state = _ground_state(J, m)
    n = density(state)
    cols = {
        "n_exact": n,
        "n_sdrg": sdrg_density(run_sdrg(J), m),
        "n_semiclassical": _semiclassical_column(profile, N, m, spec),
    }
    if fit:
        cols["n_fitted"] = _fitted_column(profile, n, m, N)
    write_density_csv(path, _sites(N), cols)


def job_modes(profile, N, k, path):
    J = prof.sample_chain(profile, N)
    spec = diagonalize(build_chain(J))
    psi = spec.modes[k - 1]
    x = _sites(N)
    env = wkb_envelope(profile, spec.energies[k - 1], mode_kfa(k, N), x)
    ue = upper_envelope(psi)
    # scale the prediction onto the lattice envelope over the trusted region
    scale = (ue[env.mask] @ env.envelope[env.mask]) / (env.envelope[env.mask] @ env.envelope[env.mask])
    write_density_csv(
        path,
        x,
        {
            "psi_abs": np.abs(psi),
            "psi_upper_envelope": ue,
            "wkb_envelope": scale * env.envelope,
            "wkb_mask": env.mask.astype(float),
        },
    )


def job_strongsweep(h, N, nu, path):
    m = int(round(nu * N))
    J = prof.sample_chain(prof.rainbow(h), N)
    _, state = _ground_state(J, m)
    write_density_csv(
        path, _sites(N), {"n_exact": density(state), "n_sdrg": sdrg_density(run_sdrg(J), m)}
    )


def job_compensate(profile, N, nu, path):
    m = int(round(nu * N))
    J = prof.sample_chain(profile, N)
    mu = compensating_potential(J, nu)
    _, comp = _ground_state(J, m, mu)
    _, orig = _ground_state(J, m)
    _, hom = _ground_state(np.ones(N - 1), m)
    write_density_csv(
        path,
        _sites(N),
        {
            "mu": mu,
            "n_compensated": density(comp),
            "n_original": density(orig),
            "n_homogeneous": density(hom),
        },
    )


def job_mimic(profile, N, nu, mu0, path):
    m = int(round(nu * N))
    J = prof.sample_chain(profile, N)
    mim = mimicking_chain(J, nu, mu0)
    _, orig = _ground_state(J, m)
    _, mstate = _ground_state(mim.hoppings, m, mim.potentials)
    write_density_csv(
        path,
        _sites(N),
        {"mu_mimic": mim.potentials, "n_original": density(orig), "n_mimic": density(mstate)},
    )


def job_entropy(profile, N, nu, mu0, path):
    m = int(round(nu * N))
    J = prof.sample_chain(profile, N)
    mim = mimicking_chain(J, nu, mu0)
    _, orig = _ground_state(J, m)
    _, mstate = _ground_state(mim.hoppings, m, mim.potentials)
    write_entropy_csv(
        path, {"S_original": entropy_profile(orig), "S_mimic": entropy_profile(mstate)}
    )


def plan_jobs(cfg: ExperimentConfig):
    """List of ``(function, args)`` pairs; every job writes exactly one file."""
    out = cfg.outdir / cfg.command
    jobs = []
    if cfg.command == "strongsweep":
        for h in cfg.h_values:
            if h > H_CAP:
                log.warning("h=%g exceeds %g; accuracy of graded couplings degrades", h, H_CAP)
            for nu in cfg.fillings:
                path = out / f"rainbow_h{h:g}_{_nu_tag(nu)}.csv"
                jobs.append((job_strongsweep, (h, cfg.N, nu, path)))
        return jobs
    for p in cfg.profiles:
        if p.kind == "rainbow" and p.params["h"] > H_CAP:
            log.warning("h=%g exceeds %g; accuracy of graded couplings degrades", p.params["h"], H_CAP)
        if cfg.command == "modes":
            for k in cfg.modes:
                jobs.append((job_modes, (p, cfg.N, k, out / f"{p.label}_mode{k}.csv")))
            continue
        for nu in cfg.fillings:
            path = out / f"{p.label}_{_nu_tag(nu)}.csv"
            if cfg.command == "density":
                jobs.append((job_density, (p, cfg.N, nu, cfg.fit, path)))
            elif cfg.command == "compensate":
                jobs.append((job_compensate, (p, cfg.N, nu, path)))
            elif cfg.command == "mimic":
                jobs.append((job_mimic, (p, cfg.N, nu, cfg.mu0, path)))
            elif cfg.command == "entropy":
                jobs.append((job_entropy, (p, cfg.N, nu, cfg.mu0, path)))
    return jobs


def _call(job):
    fn, args = job
    fn(*args)
    return args[-1]


def run(cfg: ExperimentConfig, jobs=1):
    """Execute every job of ``cfg``; returns the written paths in plan order."""
    planned = plan_jobs(cfg)
    (cfg.outdir / cfg.command).mkdir(parents=True, exist_ok=True)
    if jobs > 1 and len(planned) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_call, planned))
    return [_call(j) for j in planned]


def build_parser():
    p = argparse.ArgumentParser(prog="depletion", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, type=Path, help="YAML experiment file")
    p.add_argument("--outdir", type=Path, default=None, help="overrides 'outdir' in the config")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument(
        "--seedless",
        action="store_true",
        help="assert deterministic execution (the code uses no randomness)",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.jobs < 1:
        log.error("--jobs must be >= 1")
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config, args.command, args.outdir)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    try:
        paths = run(cfg, args.jobs)
    except (ConvergenceError, DomainError, ValidationError, FloatingPointError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    for path in paths:
        log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
