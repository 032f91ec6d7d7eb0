"""Parametric Nikiforov-Uvarov machinery and the Hellmann energy conditions.

The radial equations reduce, with s = exp(-delta r), to

    psi'' + (c1 - c2 s)/(s (1 - c3 s)) psi'
          + (-p2 s^2 + p1 s - p0)/(s^2 (1 - c3 s)^2) psi = 0

with c1 = c2 = c3 = 1 and (p2, p1, p0) = (A, B, C).  The closed-form energy
condition used here is the one that follows from the generic NU condition
with those identifications; both codings are evaluated and cross-checked on
every call to :func:`energy_residual`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    DomainError,
    Limit,
    PotentialParams,
    QuantumNumbers,
    RelativisticSetup,
    SpectroscopicLabel,
    state_label,
)

# Relative agreement demanded between the compact and generic residuals.
PATH_RTOL = 1e-9
EPS = np.finfo(float).eps


class OutsideRepresentableRegion(ValueError):
    """A square root in the NU constants has a negative argument."""

    def __init__(self, constant: str, value: float):
        super().__init__(f"{constant} = {value!r} < 0: outside the representable region")
        self.constant = constant
        self.value = value


@dataclass(frozen=True)
class NuCoefficients:
    c1: float
    c2: float
    c3: float
    p0: float
    p1: float
    p2: float


@dataclass(frozen=True)
class NuConstants:
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float
    c7: float
    c8: float
    c9: float
    c10: float
    c11: float
    c12: float
    c13: float


def derive_constants(coeffs: NuCoefficients) -> NuConstants:
    c1, c2, c3 = coeffs.c1, coeffs.c2, coeffs.c3
    if c3 == 0:
        raise DomainError("c3 must be nonzero")
    c4 = 0.5 * (1 - c1)
    c5 = 0.5 * (c2 - 2 * c3)
    c6 = c5 ** 2 + coeffs.p2
    c7 = 2 * c4 * c5 - coeffs.p1
    c8 = c4 ** 2 + coeffs.p0
    c9 = c3 * (c7 + c3 * c8) + c6
    # exact zeros that rounding pushed below zero
    if -8 * EPS * (abs(c4 ** 2) + abs(coeffs.p0)) <= c8 < 0:
        c8 = 0.0
    if -8 * EPS * (abs(c3 * c7) + abs(c3 * c3 * c8) + abs(c6)) <= c9 < 0:
        c9 = 0.0
    if c8 < 0:
        raise OutsideRepresentableRegion("c8", c8)
    if c9 < 0:
        raise OutsideRepresentableRegion("c9", c9)
    r8, r9 = math.sqrt(c8), math.sqrt(c9)
    return NuConstants(
        c1=c1, c2=c2, c3=c3, c4=c4, c5=c5, c6=c6, c7=c7, c8=c8, c9=c9,
        c10=c1 + 2 * c4 + 2 * r8 - 1,
        c11=1 - c1 - 2 * c4 + (2 / c3) * r9,
        c12=c4 + r8,
        c13=-c4 + (r9 - c5) / c3,
    )


def nu_energy_residual(consts: NuConstants, n: int) -> float:
    """Left-hand side of the generic NU bound-state condition."""
    k = consts
    r8, r9 = math.sqrt(k.c8), math.sqrt(k.c9)
    return (k.c2 * n - (2 * n + 1) * k.c5 + (2 * n + 1) * (r9 + k.c3 * r8)
            + n * (n - 1) * k.c3 + k.c7 + 2 * k.c3 * k.c8 + 2 * math.sqrt(k.c8 * k.c9))


@dataclass(frozen=True)
class EffectiveProblem:
    """Energy-dependent data of the transformed radial equation.

    ``eta_raw`` is kappa + H + 1 (spin) or kappa + H (pspin); ``gamma`` and
    ``beta2`` are the coupling to the potential and the tail constant.
    """

    eta_raw: float
    eta_eff: float
    gamma: float
    beta2: float
    A: float
    B: float
    C: float

    @property
    def centrifugal(self) -> float:
        return self.eta_raw * (self.eta_raw - 1)

    def coefficients(self) -> NuCoefficients:
        return NuCoefficients(c1=1.0, c2=1.0, c3=1.0, p0=self.C, p1=self.B, p2=self.A)


def effective_index(kappa: int, H: float, limit: Limit) -> float:
    return kappa + H + 1 if limit is Limit.SPIN else kappa + H


def branch_index(eta_raw: float) -> float:
    """The root of x(x-1) = eta_raw(eta_raw-1) with x >= 1/2."""
    return 0.5 + abs(eta_raw - 0.5)


def build_problem(eta_raw: float, gamma: float, beta2: float, a: float, b: float, delta: float) -> EffectiveProblem:
    A = -gamma * b / delta + beta2 / delta ** 2
    B = -gamma * a / delta - gamma * b / delta + 2 * beta2 / delta ** 2
    C = eta_raw * (eta_raw - 1) - gamma * a / delta + beta2 / delta ** 2
    return EffectiveProblem(eta_raw=eta_raw, eta_eff=branch_index(eta_raw),
                            gamma=gamma, beta2=beta2, A=A, B=B, C=C)


def couplings(E: float, setup: RelativisticSetup) -> tuple[float, float]:
    """(gamma, beta^2) at energy E."""
    M, Cc = setup.M, setup.C_sym
    if setup.limit is Limit.SPIN:
        return M + E - Cc, (M - E) * (M + E - Cc)
    return E - M - Cc, (M + E) * (M - E + Cc)


def effective_problem(E: float, p: PotentialParams, setup: RelativisticSetup, kappa: int) -> EffectiveProblem:
    lo, hi = setup.window
    if not lo < E < hi:
        raise DomainError(f"E = {E} outside the bound-state window ({lo}, {hi})")
    if kappa == 0:
        raise DomainError("kappa must be nonzero")
    gamma, beta2 = couplings(E, setup)
    return build_problem(effective_index(kappa, p.H, setup.limit), gamma, beta2, p.a, p.b, p.delta)


def _compact_terms(prob: EffectiveProblem, n: int, delta: float, a: float, b: float) -> tuple[float, ...]:
    if prob.C < 0:
        raise OutsideRepresentableRegion("C", prob.C)
    e = prob.eta_eff
    return (n * n, (2 * n + 1) * e, 2 * (n + e) * math.sqrt(prob.C),
            2 * e * (e - 1), prob.gamma / delta * (b - a))


def condition_residual(prob: EffectiveProblem, n: int, a: float, b: float, delta: float) -> float:
    """Compact energy condition, checked against the generic NU route."""
    terms = _compact_terms(prob, n, delta, a, b)
    compact = math.fsum(terms)
    generic = nu_energy_residual(derive_constants(prob.coefficients()), n)
    big = abs(prob.A) + abs(prob.B) + abs(prob.C)
    scale = math.fsum(abs(t) for t in terms) + big
    # c9 = A - B + C + 1/4 cancels down to (eta - 1/2)^2; near eta = 1/2 the
    # generic route inherits sqrt(rounding of c9) through sqrt(c9)
    sqrt_loss = (2 * n + 1 + 2 * math.sqrt(prob.C)) * math.sqrt(8 * EPS * (big + 0.25))
    if abs(compact - generic) > PATH_RTOL * max(scale, 1.0) + sqrt_loss:
        raise AssertionError(
            f"energy condition paths disagree: compact={compact!r} generic={generic!r}")
    return compact


def residual_scale(prob: EffectiveProblem, n: int, a: float, b: float, delta: float) -> float:
    """Magnitude of the largest contributions to the residual, for tolerances."""
    return math.fsum(abs(t) for t in _compact_terms(prob, n, delta, a, b))


def energy_residual(E: float, p: PotentialParams, setup: RelativisticSetup, qn: QuantumNumbers) -> float:
    prob = effective_problem(E, p, setup, qn.kappa)
    return condition_residual(prob, qn.n, p.a, p.b, p.delta)


@dataclass(frozen=True)
class EnergyLevel:
    E: float
    qn: QuantumNumbers
    limit: Limit
    label: SpectroscopicLabel
    residual_at_root: float
    multiple_roots: bool = False


def _defined_residual(E, p, setup, qn) -> float:
    try:
        return energy_residual(E, p, setup, qn)
    except OutsideRepresentableRegion:
        return math.nan


def bisect(f, lo: float, hi: float, f_lo: float, xtol: float = 1e-10, maxiter: int = 200) -> float:
    """Plain bisection on a bracket with sign(f(lo)) == sign(f_lo) != sign(f(hi))."""
    for _ in range(maxiter):
        if hi - lo < xtol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (f_lo > 0):
            lo, f_lo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_levels(p: PotentialParams, setup: RelativisticSetup, qn: QuantumNumbers,
                 window: tuple[float, float] | None = None, n_grid: int = 4000,
                 xtol: float = 1e-13) -> list[EnergyLevel]:
    """All roots of the energy condition inside the window, ascending."""
    lo, hi = window if window is not None else setup.shrunk_window()
    grid = np.linspace(lo, hi, n_grid)
    vals = np.array([_defined_residual(E, p, setup, qn) for E in grid])
    defined = np.isfinite(vals)
    if not defined.any():
        raise OutsideRepresentableRegion("C", float("nan"))
    f = lambda E: energy_residual(E, p, setup, qn)
    roots = []
    for i in range(n_grid - 1):
        if not (defined[i] and defined[i + 1]):
            continue
        if vals[i] == 0:
            roots.append(grid[i])
        elif vals[i] * vals[i + 1] < 0:
            roots.append(bisect(f, grid[i], grid[i + 1], vals[i], xtol=xtol))
    if defined[-1] and vals[-1] == 0:
        roots.append(grid[-1])
    label = state_label(qn.n, qn.kappa, setup.limit)
    many = len(roots) > 1
    return [EnergyLevel(E=float(E), qn=qn, limit=setup.limit, label=label,
                        residual_at_root=f(E), multiple_roots=many) for E in roots]


def solve_level(p: PotentialParams, setup: RelativisticSetup, qn: QuantumNumbers, **kw) -> EnergyLevel | None:
    """The lowest root, or None if the condition has no root in the window."""
    levels = solve_levels(p, setup, qn, **kw)
    return levels[0] if levels else None


# -- non-relativistic and Coulomb limits -------------------------------------

def nonrel_sqrt_c(n: int, l: int, a: float, b: float, delta: float, m: float) -> float:
    """Decay exponent sqrt(C) of the s = exp(-delta r) power; negative means unbound."""
    N = n + l + 1
    return ((2 * m / delta) * (a - b) - N ** 2 - l * (l + 1)) / (2 * N)


def nonrel_energy(n: int, l: int, a: float, b: float, delta: float, m: float) -> float:
    if n < 0 or l < 0:
        raise DomainError("n and l must be nonnegative")
    if not (delta > 0 and m > 0):
        raise DomainError("delta and m must be positive")
    X = nonrel_sqrt_c(n, l, a, b, delta, m)
    return -(delta ** 2 / (2 * m)) * (X ** 2 - l * (l + 1) + 2 * m * a / delta)


def nonrel_is_bound(n: int, l: int, a: float, b: float, delta: float, m: float) -> bool:
    return nonrel_sqrt_c(n, l, a, b, delta, m) > 0


def coulomb_energy(n: int, l: int, a: float, m: float) -> float:
    return -m * a ** 2 / (2 * (n + l + 1) ** 2)
