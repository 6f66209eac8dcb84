# physics/dynamics.py
"""
Drift and Langevin noise of the semiclassical atom-field equations.

Positions are stored as the phases (kx, kz), momenta in units of hbar k. With
E(r) = cos(kz) alpha + cos(kx) eta/g the momentum noise reads

    <xi_n xi_m>     = 2 Gamma0 |E|^2 u_n^2 delta_nm + 2 Gamma0 Re(d_n E* d_m E)
    <xi_n xi_alpha> = i Gamma0 d_n E cos(kz)
    <xi_alpha* xi_alpha> = kappa + Gamma0 sum_j cos^2(kz_j),   <xi_alpha xi_alpha> = 0.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from physics.exceptions import NoiseModelError
from physics.params import PhysicalParams, DerivedParams

PSD_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SystemState:
    t: float
    alpha: complex
    pos: np.ndarray = field(repr=False)   # (N, 2): kx, kz
    mom: np.ndarray = field(repr=False)   # (N, 2): p_x, p_z in hbar k

    def __post_init__(self):
        pos = np.asarray(self.pos, dtype=float).reshape(-1, 2)
        mom = np.asarray(self.mom, dtype=float).reshape(-1, 2)
        if pos.shape != mom.shape:
            raise ValueError(f"pos and mom must have the same number of atoms, got {pos.shape} and {mom.shape}.")
        object.__setattr__(self, 'pos', pos)
        object.__setattr__(self, 'mom', mom)
        object.__setattr__(self, 'alpha', complex(self.alpha))
        object.__setattr__(self, 't', float(self.t))

    @property
    def n_atoms(self) -> int:
        return self.pos.shape[0]

    @property
    def kx(self) -> np.ndarray:
        return self.pos[:, 0]

    @property
    def kz(self) -> np.ndarray:
        return self.pos[:, 1]

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.alpha.real) and np.isfinite(self.alpha.imag)
                    and np.all(np.isfinite(self.pos)) and np.all(np.isfinite(self.mom)))


@dataclass(frozen=True)
class DriftVector:
    d_alpha: complex
    d_pos: np.ndarray
    d_mom: np.ndarray


def _check_arity(s: SystemState, p: PhysicalParams) -> None:
    if s.n_atoms != p.n_atoms:
        raise ValueError(f"State holds {s.n_atoms} atoms but the parameters describe {p.n_atoms}.")


def field_rate(kz: np.ndarray, p: PhysicalParams, d: DerivedParams) -> complex:
    """Coefficient lambda of the linear part d(alpha)/dt = lambda alpha + source."""
    bunch_sum = float(np.sum(np.cos(kz) ** 2))
    return 1j * (d.delta_c - d.u0 * bunch_sum) - (p.kappa + d.gamma0 * bunch_sum)


def field_source(pos: np.ndarray, d: DerivedParams) -> complex:
    """Pump scattering into the cavity, -eta_eff sum_j cos(kz_j) cos(kx_j)."""
    pos = np.asarray(pos, dtype=float).reshape(-1, 2)
    return -d.eta_eff * float(np.sum(np.cos(pos[:, 0]) * np.cos(pos[:, 1])))


def forces(s: SystemState, d: DerivedParams) -> np.ndarray:
    """Deterministic forces (N, 2) in hbar k gamma."""
    cx, sx = np.cos(s.kx), np.sin(s.kx)
    cz, sz = np.cos(s.kz), np.sin(s.kz)
    # -i (eta_eff* alpha - eta_eff alpha*) = 2 Im(eta_eff* alpha)
    interference = 2.0 * (np.conj(d.eta_eff) * s.alpha).imag
    f_x = d.pump_lattice * np.sin(2.0 * s.kx) - interference * sx * cz
    f_z = d.u0 * abs(s.alpha) ** 2 * np.sin(2.0 * s.kz) - interference * cx * sz
    return np.column_stack((f_x, f_z))


def drift(s: SystemState, p: PhysicalParams, d: DerivedParams) -> DriftVector:
    _check_arity(s, p)
    d_alpha = field_rate(s.kz, p, d) * s.alpha + field_source(s.pos, d)
    return DriftVector(
        d_alpha=complex(d_alpha),
        d_pos=2.0 * p.omega_rec * s.mom,
        d_mom=forces(s, d).reshape(-1, 2),
    )


@dataclass(frozen=True)
class NoiseCovariance:
    """
    Langevin correlations at one state, stored in the structured form used for sampling:

    - ``kappa``: cavity-loss part of the field variance
    - ``emission``: sqrt(Gamma0) cos(kz_j), weight of atom j's emission noise in the field
    - ``coupling``: q_nj = i sqrt(Gamma0) d_n E(r_j), complex (N, 2)
    - ``recoil_var``: 2 Gamma0 |E(r_j)|^2 u_n^2, real (N, 2)

    Per atom a circular complex Gaussian zeta_j (<zeta* zeta> = 1) enters the field as
    emission_j zeta_j and the momenta as 2 Re(q_nj* zeta_j); the recoil part is independent.
    """
    kappa: float
    emission: np.ndarray
    coupling: np.ndarray
    recoil_var: np.ndarray
    cross_enabled: bool = True

    @property
    def n_atoms(self) -> int:
        return self.emission.shape[0]

    @property
    def field_var(self) -> float:
        return float(self.kappa + np.sum(self.emission ** 2))

    @property
    def cross(self) -> np.ndarray:
        """<xi_n xi_alpha> per atom, complex (N, 2)."""
        if not self.cross_enabled:
            return np.zeros_like(self.coupling)
        return self.emission[:, None] * self.coupling

    @property
    def momentum_blocks(self) -> np.ndarray:
        """<xi_n xi_m> per atom, real (N, 2, 2)."""
        q = self.coupling
        blocks = 2.0 * np.real(np.conj(q)[:, :, None] * q[:, None, :])
        blocks[:, 0, 0] += self.recoil_var[:, 0]
        blocks[:, 1, 1] += self.recoil_var[:, 1]
        return blocks

    def assemble(self) -> np.ndarray:
        """
        Real covariance over (Re xi_alpha, Im xi_alpha, xi_x1, xi_z1, ..., xi_xN, xi_zN).
        """
        n = self.n_atoms
        matrix = np.zeros((2 + 2 * n, 2 + 2 * n))
        matrix[0, 0] = matrix[1, 1] = 0.5 * self.field_var
        cross = self.cross.reshape(-1)
        matrix[2:, 0] = matrix[0, 2:] = cross.real
        matrix[2:, 1] = matrix[1, 2:] = cross.imag
        blocks = self.momentum_blocks
        for j in range(n):
            matrix[2 + 2 * j:4 + 2 * j, 2 + 2 * j:4 + 2 * j] = blocks[j]
        return matrix

    def check_psd(self, tol: float = PSD_TOLERANCE) -> float:
        """Returns the smallest eigenvalue of the assembled matrix, raising if it is below -tol."""
        matrix = self.assemble()
        scale = max(1.0, float(np.max(np.abs(matrix))))
        smallest = float(np.linalg.eigvalsh(matrix)[0])
        if smallest < -tol * scale:
            raise NoiseModelError(f"Assembled noise covariance is not PSD: smallest eigenvalue {smallest:.3e}.")
        return smallest

    def sample(self, rng: np.random.Generator, dt: float,
               size: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
        """
        Draws Wiener increments with covariance ``assemble() * dt``.

        Returns:
            (d_xi_alpha, d_xi_mom): complex array of shape ``size`` (scalar shape if None) and real
            array of shape ``size + (N, 2)``.
        """
        shape = () if size is None else (size,)
        n = self.n_atoms
        root = np.sqrt(dt)
        zeta = _circular_normal(rng, shape + (n,))
        if self.cross_enabled:
            xi_alpha = np.sqrt(self.kappa) * _circular_normal(rng, shape) + np.sum(self.emission * zeta, axis=-1)
        else:
            xi_alpha = np.sqrt(self.field_var) * _circular_normal(rng, shape)
        xi_mom = 2.0 * np.real(np.conj(self.coupling) * zeta[..., None])
        xi_mom = xi_mom + np.sqrt(self.recoil_var) * rng.standard_normal(shape + (n, 2))
        return root * xi_alpha, root * xi_mom


def _circular_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Complex Gaussian with <z* z> = 1 and <z z> = 0."""
    parts = rng.standard_normal(tuple(shape) + (2,)) * np.sqrt(0.5)
    return parts[..., 0] + 1j * parts[..., 1]


def noise_covariance(s: SystemState, p: PhysicalParams, d: DerivedParams,
                     cross: bool = True, validate: bool = True) -> NoiseCovariance:
    """
    Evaluates the Langevin correlations at ``s``. With ``validate`` the assembled (2+2N) matrix is
    checked for positive semidefiniteness; the integrator skips that check and samples the
    structured factor, which is PSD by construction.
    """
    _check_arity(s, p)
    cx, sx = np.cos(s.kx), np.sin(s.kx)
    cz, sz = np.cos(s.kz), np.sin(s.kz)
    root_weight = np.sqrt(d.scatter_weight)

    # sqrt(Gamma0) E and its gradient, written without dividing by g
    scaled_e = root_weight * (p.g * cz * s.alpha + p.eta * cx)
    scaled_dx = root_weight * (-p.eta * sx) + 0j
    scaled_dz = root_weight * (-p.g * sz * s.alpha)

    coupling = 1j * np.column_stack((scaled_dx, scaled_dz)).reshape(-1, 2)
    recoil = 2.0 * np.abs(scaled_e)[:, None] ** 2 * np.array([p.u2_x, p.u2_z])[None, :]

    covariance = NoiseCovariance(
        kappa=p.kappa,
        emission=np.sqrt(d.gamma0) * cz,
        coupling=coupling,
        recoil_var=recoil.reshape(-1, 2),
        cross_enabled=cross,
    )
    if validate:
        covariance.check_psd()
    return covariance


def steady_state_field(positions: np.ndarray, p: PhysicalParams, d: DerivedParams) -> complex:
    """
    Field amplitude that makes the noiseless field equation stationary for frozen atoms.
    """
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    if positions.shape[0] == 0:
        return 0j
    bunch_sum = float(np.sum(np.cos(positions[:, 1]) ** 2))
    denominator = p.kappa + d.gamma0 * bunch_sum - 1j * (d.delta_c - d.u0 * bunch_sum)
    return complex(field_source(positions, d) / denominator)
