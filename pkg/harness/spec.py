# harness/spec.py
"""
Experiment specifications: a base parameter set, optional sweep and atom-number axes with
coupling constraints, initial-condition modes and the ensemble settings. ``grid`` expands a
specification into grid points, ``tasks`` into individually seeded trajectories.
"""

from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Tuple

from configs.experiment_config import EXPERIMENT_DEFAULTS, HARNESS_SETTINGS, INTEGRATOR_SETTINGS
from configs.physics_config import PHYSICAL_KEYS
from harness.config_file import PRESET_KEY, validate_config
from physics.integrator import IntegratorConfig, InitSpec
from physics.observables import CLASSIFIERS
from physics.params import PhysicalParams

CONSTRAINTS = {'ng2': 2.0, 'ng4': 4.0}   # power of g held against N
UP_MODE = 'uniform'
MIN_SCALING_POINTS = 4


def constrained_coupling(base: PhysicalParams, n_atoms: int, constraint: Optional[str]) -> float:
    """g at ``n_atoms`` such that N g^power stays at the base value."""
    if constraint is None:
        return base.g
    if constraint not in CONSTRAINTS:
        raise ValueError(f"Invalid constraint '{constraint}'. Supported: {sorted(CONSTRAINTS)}")
    if base.n_atoms == 0 or n_atoms <= 0:
        raise ValueError("Coupling constraints need a positive atom number in both the base and the target.")
    return base.g * (base.n_atoms / n_atoms) ** (1.0 / CONSTRAINTS[constraint])


class GridPoint(NamedTuple):
    index: int
    point: Dict[str, Any]
    params: PhysicalParams
    init: InitSpec


class RunTask(NamedTuple):
    index: int
    point_index: int
    point: Dict[str, Any]
    params: PhysicalParams
    init: InitSpec
    integrator: IntegratorConfig


@dataclass(frozen=True)
class ExperimentSpec:
    base: PhysicalParams = field(default_factory=PhysicalParams)
    sweep_axis: Optional[str] = EXPERIMENT_DEFAULTS['sweep_axis']
    sweep_values: Tuple[float, ...] = ()
    n_values: Tuple[int, ...] = ()
    constraint: Optional[str] = EXPERIMENT_DEFAULTS['constraint']
    init_modes: Tuple[str, ...] = (EXPERIMENT_DEFAULTS['init_mode'],)
    ensemble: int = EXPERIMENT_DEFAULTS['ensemble']
    master_seed: int = EXPERIMENT_DEFAULTS['master_seed']
    duration: float = EXPERIMENT_DEFAULTS['duration']
    record_every: int = EXPERIMENT_DEFAULTS['record_every']
    dt: Optional[float] = EXPERIMENT_DEFAULTS['dt']
    noise_mode: str = EXPERIMENT_DEFAULTS['noise_mode']
    field_update: str = EXPERIMENT_DEFAULTS['field_update']
    kT_init: Optional[float] = EXPERIMENT_DEFAULTS['kT_init']
    cells: int = EXPERIMENT_DEFAULTS['cells']
    transition_threshold: float = EXPERIMENT_DEFAULTS['transition_threshold']
    classifier: str = EXPERIMENT_DEFAULTS['classifier']

    def __post_init__(self):
        object.__setattr__(self, 'sweep_values', tuple(float(v) for v in self.sweep_values or ()))
        object.__setattr__(self, 'n_values', tuple(self.n_values or ()))
        object.__setattr__(self, 'init_modes', tuple(self.init_modes or ()))

        if isinstance(self.ensemble, bool) or int(self.ensemble) != self.ensemble or self.ensemble < 1:
            raise ValueError(f"ensemble must be a positive integer, got {self.ensemble}.")
        if self.sweep_axis is not None:
            if self.sweep_axis not in PHYSICAL_KEYS or self.sweep_axis in ('n_atoms', 'delta_c'):
                raise ValueError(f"Invalid sweep_axis '{self.sweep_axis}'. Use a continuous physical "
                                 f"parameter; atom numbers go into n_values.")
            if not self.sweep_values:
                raise ValueError(f"sweep_axis '{self.sweep_axis}' needs sweep_values.")
        elif self.sweep_values:
            raise ValueError("sweep_values given without a sweep_axis.")
        for n in self.n_values:
            if isinstance(n, bool) or int(n) != n or n < 1:
                raise ValueError(f"n_values must hold positive integers, got {n}.")
        if not self.init_modes:
            raise ValueError("At least one init mode is required.")
        for mode in self.init_modes:
            if mode not in INTEGRATOR_SETTINGS['init_modes']:
                raise ValueError(f"Invalid init mode '{mode}'. Supported: {INTEGRATOR_SETTINGS['init_modes']}")
        if self.constraint is not None:
            if self.constraint not in CONSTRAINTS:
                raise ValueError(f"Invalid constraint '{self.constraint}'. Supported: {sorted(CONSTRAINTS)}")
            if not self.n_values:
                raise ValueError(f"Constraint '{self.constraint}' needs n_values to vary.")
            if self.base.g == 0 or self.base.n_atoms == 0:
                raise ValueError("Coupling constraints need g > 0 and n_atoms > 0 in the base parameters.")
        if self.classifier not in CLASSIFIERS:
            raise ValueError(f"Invalid classifier '{self.classifier}'. Supported: {CLASSIFIERS}")
        if not 0 < self.transition_threshold < 1:
            raise ValueError(f"transition_threshold must lie in (0, 1), got {self.transition_threshold}.")
        # validates duration, dt, record_every and the integrator modes
        self.integrator_config(0)
        self.init_spec(self.init_modes[0])

    def validate_for(self, kind: str) -> None:
        """Checks the experiment-specific requirements of ``kind`` before any trajectory runs."""
        if kind not in HARNESS_SETTINGS['sweep_kinds']:
            raise ValueError(f"Invalid experiment kind '{kind}'. Supported: {HARNESS_SETTINGS['sweep_kinds']}")
        if kind == 'hysteresis':
            if self.sweep_axis != 'eta':
                raise ValueError("The hysteresis experiment sweeps eta; set sweep_axis to 'eta'.")
            if UP_MODE not in self.init_modes or all(mode == UP_MODE for mode in self.init_modes):
                raise ValueError(f"The hysteresis experiment needs the '{UP_MODE}' init mode and an organized "
                                 f"one, got {self.init_modes}.")
        elif kind == 'scaling':
            if len(self.n_values) < MIN_SCALING_POINTS:
                raise ValueError(f"A scaling experiment needs at least {MIN_SCALING_POINTS} atom numbers, "
                                 f"got {len(self.n_values)}.")

    @property
    def defect_column(self) -> str:
        return 'defect_ratio_2d' if self.classifier == 'checkerboard' else 'defect_ratio'

    def integrator_config(self, stream: int) -> IntegratorConfig:
        return IntegratorConfig(duration=self.duration, dt=self.dt, seed=self.master_seed, stream=stream,
                                record_every=self.record_every, noise_mode=self.noise_mode,
                                field_update=self.field_update)

    def init_spec(self, mode: str, params: Optional[PhysicalParams] = None) -> InitSpec:
        params = self.base if params is None else params
        kT_init = params.kT if self.kT_init is None else self.kT_init
        return InitSpec(mode=mode, kT_init=kT_init, cells=self.cells)

    def params_at(self, n_atoms: Optional[int] = None, value: Optional[float] = None) -> PhysicalParams:
        changes = {}
        if n_atoms is not None:
            changes['n_atoms'] = int(n_atoms)
            changes['g'] = constrained_coupling(self.base, int(n_atoms), self.constraint)
        if value is not None:
            changes[self.sweep_axis] = value
        return self.base.replace(**changes)

    def grid(self) -> List[GridPoint]:
        """Atom numbers outermost, then the sweep axis, then the init modes."""
        n_axis = self.n_values or (None,)
        value_axis = self.sweep_values or (None,)
        points = []
        for n_atoms in n_axis:
            for value in value_axis:
                params = self.params_at(n_atoms, value)
                for mode in self.init_modes:
                    point = {'n_atoms': params.n_atoms, 'g': params.g, 'init_mode': mode}
                    if self.sweep_axis is not None:
                        point[self.sweep_axis] = value
                    points.append(GridPoint(len(points), point, params, self.init_spec(mode, params)))
        return points

    def tasks(self) -> List[RunTask]:
        """One task per (grid point, ensemble member); the run index doubles as the RNG stream."""
        tasks = []
        for grid_point in self.grid():
            for _ in range(self.ensemble):
                index = len(tasks)
                tasks.append(RunTask(index, grid_point.index, grid_point.point, grid_point.params,
                                     grid_point.init, self.integrator_config(index)))
        return tasks

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload['base'] = self.base.to_dict()
        return payload

    @classmethod
    def from_config(cls, config: Mapping[str, Any]) -> 'ExperimentSpec':
        """Builds a spec from a flat config mapping (see harness.config_file)."""
        config = validate_config(dict(config))
        physical = {key: value for key, value in config.items() if key in PHYSICAL_KEYS}
        base = PhysicalParams.from_mapping(physical, preset=config.get(PRESET_KEY))

        experiment = {key: value for key, value in config.items()
                      if key not in PHYSICAL_KEYS and key != PRESET_KEY}
        init_modes = experiment.pop('init_modes', None)
        init_mode = experiment.pop('init_mode', EXPERIMENT_DEFAULTS['init_mode'])
        if init_modes is None:
            init_modes = (init_mode,)
        elif isinstance(init_modes, str):
            init_modes = (init_modes,)
        for key in ('sweep_values', 'n_values'):
            if experiment.get(key) is None:
                experiment.pop(key, None)
            elif not isinstance(experiment[key], (list, tuple)):
                experiment[key] = (experiment[key],)
        return cls(base=base, init_modes=tuple(init_modes), **experiment)
