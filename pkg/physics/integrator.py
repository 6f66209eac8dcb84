# physics/integrator.py
"""
Seeded Euler-Maruyama integration of the atom-field Langevin equations.
"""

import time
import warnings
from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional

import numpy as np

from configs.experiment_config import INTEGRATOR_SETTINGS
from logger.logger_manager import LoggerManager
from physics.dynamics import SystemState, noise_covariance, field_rate, field_source, forces
from physics.exceptions import IntegrationError, RegimeWarning
from physics.observables import sample_observables
from physics.params import PhysicalParams, DerivedParams
from physics.records import ObservableSeries, RunRecord

log = LoggerManager.get_logger()


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for trajectory ``stream`` of an ensemble seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream),)))


@dataclass(frozen=True)
class IntegratorConfig:
    duration: float = 1000.0
    dt: Optional[float] = None
    seed: int = 0
    stream: int = 0
    record_every: int = INTEGRATOR_SETTINGS['record_every']
    noise_mode: str = 'full'
    field_update: str = 'euler'
    freeze_atoms: bool = False

    def __post_init__(self):
        if self.dt is not None and self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}.")
        if self.duration < 0:
            raise ValueError(f"duration must be non-negative, got {self.duration}.")
        if self.record_every < 1:
            raise ValueError(f"record_every must be at least 1, got {self.record_every}.")
        if self.noise_mode not in INTEGRATOR_SETTINGS['noise_modes']:
            raise ValueError(f"Invalid noise_mode '{self.noise_mode}'. "
                             f"Supported: {INTEGRATOR_SETTINGS['noise_modes']}")
        if self.field_update not in INTEGRATOR_SETTINGS['field_updates']:
            raise ValueError(f"Invalid field_update '{self.field_update}'. "
                             f"Supported: {INTEGRATOR_SETTINGS['field_updates']}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def resolve_dt(cfg: IntegratorConfig, p: PhysicalParams, d: DerivedParams) -> float:
    """
    Step size: the configured one, else 1e-3 of the fastest field time scale. Exceeding the
    stiffness guards only warns.
    """
    detuning = abs(d.delta_c - p.n_atoms * d.u0)
    if cfg.dt is not None:
        dt = float(cfg.dt)
    else:
        fastest = max(p.kappa, detuning)
        dt = INTEGRATOR_SETTINGS['dt_factor'] / fastest

    if dt * p.kappa > INTEGRATOR_SETTINGS['kappa_guard']:
        warnings.warn(f"dt * kappa = {dt * p.kappa:.3g} exceeds {INTEGRATOR_SETTINGS['kappa_guard']}.", RegimeWarning)
    if dt * detuning > INTEGRATOR_SETTINGS['detuning_guard']:
        warnings.warn(f"dt * |delta_C - N U0| = {dt * detuning:.3g} exceeds "
                      f"{INTEGRATOR_SETTINGS['detuning_guard']}.", RegimeWarning)
    return dt


@dataclass(frozen=True)
class InitSpec:
    mode: str = 'uniform'
    kT_init: float = 0.5
    cells: int = 1

    def __post_init__(self):
        if self.mode not in INTEGRATOR_SETTINGS['init_modes']:
            raise ValueError(f"Invalid init mode '{self.mode}'. Supported: {INTEGRATOR_SETTINGS['init_modes']}")
        if self.kT_init <= 0:
            raise ValueError(f"kT_init must be positive, got {self.kT_init}.")
        if int(self.cells) != self.cells or self.cells < 1:
            raise ValueError(f"cells must be a positive integer number of wavelengths, got {self.cells}.")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def init_ensemble(spec: InitSpec, p: PhysicalParams, rng: np.random.Generator) -> SystemState:
    """
    Empty cavity, thermal momenta with <p^2> = m kT per axis, positions uniform over ``cells``
    wavelengths or on the even/odd points of maximal coupling.
    """
    n = p.n_atoms
    span = 2.0 * np.pi * spec.cells
    momentum_std = np.sqrt(spec.kT_init / (2.0 * p.omega_rec))

    if spec.mode == 'uniform':
        pos = rng.uniform(0.0, span, size=(n, 2))
    else:
        lattice = 2.0 * np.pi * (np.arange(n) % spec.cells)
        offset = 0.0 if spec.mode == 'organized-even' else np.pi
        pos = np.column_stack((lattice, lattice + offset))
    mom = rng.normal(0.0, momentum_std, size=(n, 2))
    return SystemState(t=0.0, alpha=0j, pos=pos, mom=mom)


def step(s: SystemState, cfg: IntegratorConfig, p: PhysicalParams, d: DerivedParams,
         rng: np.random.Generator, dt: Optional[float] = None) -> SystemState:
    """
    One Euler-Maruyama step. Positions advance with the momentum at the start of the step; with
    ``field_update='exponential'`` the linear part of the field equation is integrated exactly.
    """
    dt = resolve_dt(cfg, p, d) if dt is None else dt

    if cfg.noise_mode == 'off':
        xi_alpha, xi_mom = 0j, 0.0
    else:
        covariance = noise_covariance(s, p, d, cross=cfg.noise_mode == 'full', validate=False)
        xi_alpha, xi_mom = covariance.sample(rng, dt)

    if cfg.field_update == 'exponential':
        rate = field_rate(s.kz, p, d)
        growth = np.exp(rate * dt)
        alpha = s.alpha * growth + field_source(s.pos, d) * (growth - 1.0) / rate + xi_alpha
    else:
        d_alpha = field_rate(s.kz, p, d) * s.alpha + field_source(s.pos, d)
        alpha = s.alpha + d_alpha * dt + xi_alpha

    if cfg.freeze_atoms:
        pos, mom = s.pos, s.mom
    else:
        pos = s.pos + 2.0 * p.omega_rec * s.mom * dt
        mom = s.mom + forces(s, d).reshape(-1, 2) * dt + xi_mom

    new_state = SystemState(t=s.t + dt, alpha=complex(alpha), pos=pos, mom=mom)
    if not new_state.is_finite():
        raise IntegrationError("Non-finite state after Euler-Maruyama step", new_state.t)
    return new_state


def run_trajectory(init: SystemState, cfg: IntegratorConfig, p: PhysicalParams, d: DerivedParams,
                   rng: Optional[np.random.Generator] = None, init_spec: Optional[InitSpec] = None) -> RunRecord:
    """
    Integrates ``init`` over ``cfg.duration``, sampling observables every ``cfg.record_every`` steps
    and at the final time.
    """
    if init.n_atoms != p.n_atoms:
        raise ValueError(f"Initial state holds {init.n_atoms} atoms but the parameters describe {p.n_atoms}.")
    rng = make_rng(cfg.seed, cfg.stream) if rng is None else rng
    dt = resolve_dt(cfg, p, d)
    n_steps = int(round(cfg.duration / dt))

    started = time.perf_counter()
    log.debug(f"Trajectory seed={cfg.seed} stream={cfg.stream}: N={p.n_atoms}, eta={p.eta:g}, "
              f"dt={dt:.3g}, steps={n_steps}, noise={cfg.noise_mode}")

    series = ObservableSeries()
    state = init
    series.append(sample_observables(state, p))
    for index in range(1, n_steps + 1):
        try:
            state = step(state, cfg, p, d, rng, dt=dt)
        except IntegrationError:
            raise
        except Exception as e:
            raise IntegrationError(f"Step failed: {e}", state.t) from e
        if index % cfg.record_every == 0 or index == n_steps:
            series.append(sample_observables(state, p))

    wall_clock = time.perf_counter() - started
    log.debug(f"Trajectory seed={cfg.seed} stream={cfg.stream} finished in {wall_clock:.2f} s")

    return RunRecord(
        params=p,
        integrator=cfg.to_dict(),
        init=init_spec.to_dict() if init_spec is not None else {},
        seed=cfg.seed,
        stream=cfg.stream,
        series=series.to_frame(),
        final_state=state,
        metadata={'wall_clock_s': wall_clock, 'dt': dt, 'n_steps': n_steps},
    )
