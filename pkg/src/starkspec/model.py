"""Parameters and closed-form analytics of the quantum Rabi-Stark model.

The Hamiltonian, in units of the oscillator frequency (omega = 1), is

    H = a^dag a + delta * sigma_z + g * sigma_x (a + a^dag) + gamma * sigma_z a^dag a

with two-level splitting ``delta``, Rabi coupling ``g`` and nonlinear Stark
coupling ``gamma``.  H commutes with the parity operator
P = (-1)^(a^dag a) sigma_z, so the spectrum splits into two sectors; the
negative sector is obtained from the positive one by flipping the signs of
both ``delta`` and ``gamma``.

This module owns the parameter bundle, the twelve constants that drive the
coupled series recursion of the solver, the ladder of candidate singular
energies of the connection functions, and the exact g = 0 spectrum.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "ParitySector",
    "ModelParams",
    "ConstantSet",
    "Branch",
    "GZeroLevel",
    "validate_params",
    "sector_couplings",
    "constants",
    "pole_energies",
    "pole_index",
    "normalization_pole_energy",
    "g0_levels",
]


class DomainError(ValueError):
    """Parameter values outside the model's domain."""


class ParitySector(enum.Enum):
    """Z2 parity sector selector (PLUS is the reference sector)."""

    PLUS = 1
    MINUS = -1

    @property
    def sign(self) -> int:
        return self.value


@dataclass(frozen=True)
class ModelParams:
    """Physical couplings in units of omega = 1.

    ``w = g / sqrt(1 - gamma**2)`` locates the two regular singular points
    z = +/- w of the first-order equations solved by the series engine.
    Instances should be built through :func:`validate_params`.
    """

    delta: float
    gamma: float
    g: float
    w: float


def validate_params(delta: float, gamma: float, g: float) -> ModelParams:
    """Validate raw couplings and attach the derived singular-point scale w.

    Raises:
        DomainError: if ``gamma**2 >= 1`` (w undefined), ``g < 0`` or
            ``delta < 0``.  Negative ``delta``/``gamma`` sign flips are an
            internal device of the parity sectors, not public input.
    """
    delta = float(delta)
    gamma = float(gamma)
    g = float(g)
    if not gamma * gamma < 1.0:
        raise DomainError(
            f"gamma**2 < 1 is required (got gamma={gamma}); "
            "w = g/sqrt(1-gamma**2) is undefined otherwise"
        )
    if g < 0.0:
        raise DomainError(f"g >= 0 is required (got g={g})")
    if delta < 0.0:
        raise DomainError(f"delta >= 0 is required at the public API (got delta={delta})")
    if not (math.isfinite(delta) and math.isfinite(gamma) and math.isfinite(g)):
        raise DomainError("parameters must be finite")
    w = g / math.sqrt(1.0 - gamma * gamma)
    return ModelParams(delta=delta, gamma=gamma, g=g, w=w)


def sector_couplings(params: ModelParams, sector: ParitySector) -> tuple[float, float]:
    """Sector-signed (delta, gamma); the MINUS sector flips both signs."""
    s = sector.sign
    return s * params.delta, s * params.gamma


@dataclass(frozen=True)
class ConstantSet:
    """The twelve constants of the coupled recursion at a given energy.

    All twelve depend on (delta, gamma, g) and, except for ``k2``, ``kbar2``,
    ``cbar2`` and ``c2``, affinely on the energy.  They satisfy the identity
    ``k0*cbar0 - kbar0*c0 == 0`` for every parameter set and energy, which is
    what makes the homogeneous n = 0 equations solvable.
    """

    k2: float
    k1: float
    k0: float
    kbar2: float
    kbar1: float
    kbar0: float
    cbar2: float
    cbar1: float
    cbar0: float
    c2: float
    c1: float
    c0: float
    energy: float

    def identity_residual(self) -> float:
        """|k0*cbar0 - kbar0*c0| relative to the magnitude of its terms."""
        a = self.k0 * self.cbar0
        b = self.kbar0 * self.c0
        return abs(a - b) / (abs(a) + abs(b) + 1.0)


def _constant_values(delta, gamma, g, w, energy):
    """The twelve recursion constants; works on scalar or ndarray ``energy``.

    Note (1-gamma**2)*w**2 == g**2 exactly, but (1-gamma**2)*w != g; the
    cbar2/cbar1 forms below must keep the distinction.
    """
    beta = 1.0 - gamma * gamma
    gw = g * w
    k2 = beta * w - g
    k1 = energy - g * g + 2.0 * gw + gamma * delta
    k0 = -((energy + gw) * (w + g) + gamma * delta * w)
    kbar2 = -gamma * g
    kbar1 = -(delta + gamma * (energy - 2.0 * gw))
    kbar0 = delta * (w + g) + gamma * w * (energy - gw)
    cbar2 = g + beta * w
    cbar1 = energy - g * g - 2.0 * gw + gamma * delta
    cbar0 = -((energy - gw) * (w - g) + gamma * delta * w)
    c2 = gamma * g
    c1 = -(gamma * (energy + 2.0 * gw) + delta)
    c0 = gamma * w * (energy + gw) + delta * (w - g)
    return k2, k1, k0, kbar2, kbar1, kbar0, cbar2, cbar1, cbar0, c2, c1, c0


def constants(params: ModelParams, sector: ParitySector, energy: float) -> ConstantSet:
    """Build the twelve recursion constants for one sector and energy."""
    delta_s, gamma_s = sector_couplings(params, sector)
    values = _constant_values(delta_s, gamma_s, params.g, params.w, float(energy))
    return ConstantSet(*values, energy=float(energy))


def pole_energies(
    params: ModelParams, sector: ParitySector, n_max: int
) -> list[tuple[int, float]]:
    """Candidate singular energies E(n) = n(1-gamma^2) - g^2 - gamma*delta.

    These are the zeros of the step determinant of the recursion, where the
    series coefficients diverge and the connection functions develop poles.
    The product gamma*delta is invariant under the sector sign flip, so both
    sectors share one ladder.  Sorted ascending (the ladder is affine in n
    with positive slope 1 - gamma^2).
    """
    if n_max < 1:
        raise ValueError(f"n_max >= 1 required (got {n_max})")
    delta_s, gamma_s = sector_couplings(params, sector)
    beta = 1.0 - gamma_s * gamma_s
    g2 = params.g * params.g
    return [(n, n * beta - g2 - gamma_s * delta_s) for n in range(1, n_max + 1)]


def pole_index(params: ModelParams, sector: ParitySector, energy: float) -> float:
    """Continuous coordinate along the pole ladder.

    Integer values >= 1 are the singular energies of :func:`pole_energies`;
    it also equals the non-trivial indicial exponent of the series solutions
    at the singular points z = +/- w.
    """
    delta_s, gamma_s = sector_couplings(params, sector)
    beta = 1.0 - gamma_s * gamma_s
    return (energy + params.g * params.g + gamma_s * delta_s) / beta


def normalization_pole_energy(params: ModelParams, sector: ParitySector) -> float:
    """Energy at which the series normalization degenerates (k0 = c0 = 0).

    The identity k0*cbar0 == kbar0*c0 forces k0 and c0 to vanish together;
    there the leading coefficient alpha_0 = -kbar0/k0 diverges and the
    connection functions have a sector-independent pole that is *not* part of
    the :func:`pole_energies` ladder (for gamma = 0 it sits at E = -g^2, the
    bottom rung of the plain-Rabi ladder).  Root finders must treat it like
    any other singular energy.
    """
    delta_s, gamma_s = sector_couplings(params, sector)
    g, w = params.g, params.w
    if w + g == 0.0:
        return 0.0
    return -g * w - gamma_s * delta_s * w / (w + g)


class Branch(enum.Enum):
    """Branch label of the g = 0 eigenvalues E = (1 +/- gamma) n +/- delta.

    This is *not* the parity label; parity is (-1)^n times the branch sign.
    """

    UPPER_PLUS = 1
    LOWER_MINUS = -1


@dataclass(frozen=True)
class GZeroLevel:
    n: int
    branch: Branch
    energy: float
    parity: int


def g0_levels(params: ModelParams, count: int) -> list[GZeroLevel]:
    """The ``count`` lowest exact eigenvalues of the decoupled g = 0 limit.

    At g = 0 the Hamiltonian is diagonal in the number/spin product basis
    with eigenvalues (1 + gamma) n + delta (upper branch) and
    (1 - gamma) n - delta (lower branch), n = 0, 1, 2, ...; the parity of
    the eigenstate is (-1)^n times the branch sign.
    """
    if count < 1:
        raise ValueError(f"count >= 1 required (got {count})")
    # The slow branch grows by 1 - |gamma| per step; enumerate enough rungs.
    span = max(1.0 - abs(params.gamma), 1e-6)
    n_top = int(count / span) + count + 2
    levels = []
    for n in range(n_top + 1):
        sign_n = -1 if n % 2 else 1
        levels.append(
            GZeroLevel(
                n=n,
                branch=Branch.UPPER_PLUS,
                energy=(1.0 + params.gamma) * n + params.delta,
                parity=sign_n,
            )
        )
        levels.append(
            GZeroLevel(
                n=n,
                branch=Branch.LOWER_MINUS,
                energy=(1.0 - params.gamma) * n - params.delta,
                parity=-sign_n,
            )
        )
    levels.sort(key=lambda lv: (lv.energy, lv.branch.value, lv.n))
    return levels[:count]
