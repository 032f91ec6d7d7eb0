"""Numerov shooting solver for the radial equations, independent of the NU route.

Every radial problem here has the form u''(r) = W(r; E) u(r) with

    W = ell * K(r) + gamma(E) * V(r) + beta2(E),

ell = eta (eta - 1), K = 1/r^2 (exact) or delta^2/(1 - exp(-delta r))^2
(approximated), V the exact or approximated Hellmann potential.  In the
Schrodinger limit gamma = 2m and beta2 = -2mE.  Since gamma and beta2 both
move with E, the relativistic problem is nonlinear in E; shooting treats E
as the only unknown and rebuilds W at every trial energy.

Integration runs in x = ln r with u = exp(x/2) w, which turns the equation
into w'' = (r^2 W + 1/4) w.  The new coefficient stays bounded at the origin
for any centrifugal index, including the fractional ones a tensor term
produces, so regular and irregular solutions separate cleanly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

from . import _numerov
from .model import (
    DomainError,
    Limit,
    PotentialParams,
    QuantumNumbers,
    RelativisticSetup,
    approx_potential,
    hellmann_potential,
    nonrel_label,
    state_label,
)
from .nu import branch_index, couplings, effective_index, nonrel_energy, solve_levels

DEFAULT_POINTS = 20000
TAIL_FACTOR = 40.0
R_CAP = 2000.0


class EigenvalueNotFound(RuntimeError):
    pass


class Form(enum.Enum):
    APPROXIMATED = "approximated"
    EXACT = "exact"


@dataclass(frozen=True)
class RadialGrid:
    r_min: float
    r_max: float
    N: int = DEFAULT_POINTS

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise DomainError(f"need 0 < r_min < r_max, got ({self.r_min}, {self.r_max})")
        if self.N < 1000:
            raise DomainError(f"grid needs at least 1000 points, got {self.N}")

    @property
    def h(self) -> float:
        """Step in x = ln r."""
        return math.log(self.r_max / self.r_min) / (self.N - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(math.log(self.r_min), math.log(self.r_max), self.N)

    @property
    def r(self) -> np.ndarray:
        return np.exp(self.x)

    def refined(self) -> "RadialGrid":
        """Same interval with the spacing halved."""
        return RadialGrid(self.r_min, self.r_max, 2 * self.N - 1)


@dataclass(frozen=True)
class EffectiveEquation:
    limit: Limit
    form: Form
    p: PotentialParams
    setup: RelativisticSetup | None = None
    kappa: int | None = None
    l: int | None = None
    mass: float | None = None

    @classmethod
    def relativistic(cls, p: PotentialParams, setup: RelativisticSetup, kappa: int,
                     form: Form | str = Form.APPROXIMATED) -> "EffectiveEquation":
        if kappa == 0:
            raise DomainError("kappa must be nonzero")
        return cls(limit=setup.limit, form=Form(form), p=p, setup=setup, kappa=int(kappa))

    @classmethod
    def nonrelativistic(cls, p: PotentialParams, l: int, mass: float,
                        form: Form | str = Form.APPROXIMATED) -> "EffectiveEquation":
        if l < 0 or not mass > 0:
            raise DomainError("need l >= 0 and mass > 0")
        return cls(limit=Limit.NONREL, form=Form(form), p=p, l=int(l), mass=float(mass))

    @property
    def eta_raw(self) -> float:
        if self.limit is Limit.NONREL:
            return self.l + 1.0
        return effective_index(self.kappa, self.p.H, self.limit)

    @property
    def eta_eff(self) -> float:
        return branch_index(self.eta_raw)

    @property
    def ell(self) -> float:
        return self.eta_raw * (self.eta_raw - 1)

    def couplings(self, E: float) -> tuple[float, float]:
        if self.limit is Limit.NONREL:
            return 2 * self.mass, -2 * self.mass * E
        lo, hi = self.setup.window
        if not lo < E < hi:
            raise DomainError(f"E = {E} outside the bound-state window ({lo}, {hi})")
        return couplings(E, self.setup)

    def coulomb_coefficient(self, E: float) -> float:
        """Coefficient w1 of 1/r in W as r -> 0."""
        gamma, _ = self.couplings(E)
        w1 = gamma * (self.p.b - self.p.a)
        if self.form is Form.APPROXIMATED:
            w1 += self.ell * self.p.delta
        return w1

    def tail_value(self, E: float) -> float:
        """lim W(r; E) as r -> infinity."""
        gamma, beta2 = self.couplings(E)
        if self.form is Form.APPROXIMATED:
            d = self.p.delta
            return self.ell * d * d - gamma * self.p.a * d + beta2
        return beta2

    def window(self, eps: float = 1e-8) -> tuple[float, float]:
        if self.limit is not Limit.NONREL:
            lo, hi = self.setup.shrunk_window(eps)
            if self.form is Form.EXACT:
                return lo, hi
            # tail_value is quadratic in E; bound states need it positive
            probe = np.array([lo, 0.5 * (lo + hi), hi])
            coef = np.polyfit(probe, [self.tail_value(E) for E in probe], 2)
            roots = np.sort(np.real(np.roots(coef)[np.isreal(np.roots(coef))]))
            for z in roots:
                if lo < z < hi:
                    if np.polyval(coef, 0.5 * (lo + z)) > 0:
                        hi = z
                    else:
                        lo = z
            if not np.polyval(coef, 0.5 * (lo + hi)) > 0:
                raise EigenvalueNotFound("no energy in the window keeps the solution decaying")
            pad = eps * (hi - lo)
            return (lo + pad, hi - pad)
        p, m = self.p, self.mass
        if self.form is Form.APPROXIMATED:
            top = -p.delta * p.a + self.ell * p.delta ** 2 / (2 * m)
        else:
            top = 0.0
        g = max(p.a, 0.0) + max(-p.b, 0.0)
        if g == 0:
            raise EigenvalueNotFound("potential has no attractive Coulomb part")
        bottom = -1.5 * (m * g * g / 2 + g * p.delta) - 1e-3
        pad = eps * (top - bottom)
        return (bottom + pad, top - pad)


def effective_W(eq: EffectiveEquation, E: float, r):
    r = np.asarray(r, dtype=float)
    gamma, beta2 = eq.couplings(E)
    if eq.form is Form.APPROXIMATED:
        K = (eq.p.delta / -np.expm1(-eq.p.delta * r)) ** 2
        V = approx_potential(r, eq.p)
    else:
        K = 1.0 / r ** 2
        V = hellmann_potential(r, eq.p)
    return eq.ell * K + gamma * V + beta2


def default_grid(eq: EffectiveEquation, E: float, N: int = DEFAULT_POINTS,
                 tail_factor: float = TAIL_FACTOR, r_cap: float = R_CAP) -> RadialGrid:
    tail = eq.tail_value(E)
    r_max = tail_factor / math.sqrt(tail) if tail > 0 else r_cap
    r_max = min(r_max, r_cap)
    r_min = min(1e-6 / eq.p.delta, 1e-6 * r_max)
    return RadialGrid(r_min, r_max, N)


def _start_values(eq: EffectiveEquation, E: float, r0: float, r1: float) -> tuple[float, float]:
    # u ~ r^eta (1 + c r) near the origin, c = w1 / (2 eta), and w = u / sqrt(r);
    # scaled so w(r1) ~ 1
    eta = eq.eta_eff
    c = eq.coulomb_coefficient(E) / (2 * eta)
    return (r0 / r1) ** (eta - 0.5) * (1 + c * r0), 1 + c * r1


def _matching_index(W: np.ndarray) -> int:
    allowed = np.nonzero(W < 0)[0]
    m = int(allowed[-1]) + 1 if allowed.size else int(np.argmin(W))
    return min(max(m, 2), W.size - 3)


@dataclass
class _Sweep:
    r: np.ndarray
    w_out: np.ndarray
    w_in: np.ndarray | None
    nodes: int
    match: int
    mismatch: float


def _sweep(eq: EffectiveEquation, E: float, grid: RadialGrid, with_inward: bool = True) -> _Sweep:
    r = grid.r
    h = grid.h
    W = effective_W(eq, E, r)
    Wx = r * r * W + 0.25
    w0, w1 = _start_values(eq, E, r[0], r[1])
    w_out, nodes = _numerov.outward(Wx, h, w0, w1, r.size - 1)
    m = _matching_index(W)
    if not with_inward:
        return _Sweep(r, w_out, None, int(nodes), m, math.nan)
    # u ~ exp(-k r) beyond the last turning point
    k = math.sqrt(max(W[-1], 1e-300))
    ratio = math.exp(k * (r[-1] - r[-2])) * math.sqrt(r[-1] / r[-2])
    w_in = _numerov.inward(Wx, h, 1e-100, 1e-100 * ratio, m - 2)
    if w_out[m] == 0 or w_in[m] == 0:
        mismatch = math.inf
    else:
        L_out = (w_out[m + 1] - w_out[m - 1]) / (2 * h * w_out[m])
        L_in = (w_in[m + 1] - w_in[m - 1]) / (2 * h * w_in[m])
        mismatch = L_out - L_in
    return _Sweep(r, w_out, w_in, int(nodes), m, mismatch)


def numerov_count_nodes(eq: EffectiveEquation, E: float, grid: RadialGrid) -> tuple[int, float]:
    """Sign changes of the outward solution and the log-derivative mismatch
    (outward minus inward) at the outermost classical turning point."""
    s = _sweep(eq, E, grid)
    return s.nodes, s.mismatch


@dataclass(frozen=True)
class ShootResult:
    E: float
    grid: RadialGrid
    refinements: int = 0
    richardson_delta: float | None = None
    history: tuple = field(default=())


def _node_bisect(count, lo, hi, n_target, width):
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if count(mid) > n_target:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _oriented(window, sgn):
    a, b = sgn * window[0], sgn * window[1]
    return (min(a, b), max(a, b))


def _shoot_on_grid(eq, n_target, lo, hi, grid, window, xtol, sgn=1):
    """Refine a node bracket on a fixed grid and solve the matching condition.

    Works in t = sgn * E so that the node count grows with t; ``lo``, ``hi``
    and ``window`` are given in t.
    """
    count = lambda t: _sweep(eq, sgn * t, grid, with_inward=False).nodes
    wlo, whi = window
    span = hi - lo
    for _ in range(60):
        if count(lo) <= n_target:
            break
        lo = max(wlo, lo - span)
        span *= 2
    span = hi - lo
    for _ in range(60):
        if count(hi) > n_target:
            break
        hi = min(whi, hi + span)
        span *= 2
    if not (count(lo) <= n_target < count(hi)):
        raise EigenvalueNotFound(f"no state with {n_target} nodes in [{lo}, {hi}]")
    lo, hi = _node_bisect(count, lo, hi, n_target, 1e-7 * (window[1] - window[0]))
    mis = lambda t: _sweep(eq, sgn * t, grid).mismatch
    f_lo, f_hi = mis(lo), mis(hi)
    if np.isfinite(f_lo) and np.isfinite(f_hi) and f_lo * f_hi < 0:
        return sgn * brentq(mis, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    lo, hi = _node_bisect(count, lo, hi, n_target, xtol)
    return sgn * 0.5 * (lo + hi)


def shoot_eigenvalue(eq: EffectiveEquation, n_target: int, window: tuple[float, float] | None = None,
                     grid: RadialGrid | None = None, N: int = DEFAULT_POINTS, richardson: bool = True,
                     xtol: float | None = None, max_refinements: int = 3) -> ShootResult:
    """Eigenvalue whose eigenfunction has ``n_target`` interior nodes.

    Without an explicit grid the node bracket is located on grids sized for
    each trial energy, then the matching condition is solved on a fixed grid
    and checked by halving the spacing.
    """
    if n_target < 0:
        raise DomainError("n_target must be nonnegative")
    window = window if window is not None else eq.window()
    wlo, whi = window
    width = whi - wlo
    if xtol is None:
        xtol = 1e-13 * max(1.0, abs(wlo), abs(whi))
    if grid is not None:
        count_E = lambda E: _sweep(eq, E, grid, with_inward=False).nodes
    else:
        count_E = lambda E: _sweep(eq, E, default_grid(eq, E, N), with_inward=False).nodes
    # the node count rises with E in the spin and Schrodinger limits and
    # falls with E in the pspin limit; orient so that it rises with t
    sgn = -1 if count_E(wlo) > count_E(whi) else 1
    count = lambda t: count_E(sgn * t)
    tlo, thi = _oriented(window, sgn)
    if count(tlo) > n_target or count(thi) <= n_target:
        raise EigenvalueNotFound(f"no eigenvalue with {n_target} nodes in ({wlo}, {whi})")
    lo, hi = _node_bisect(count, tlo, thi, n_target, 1e-6 * width)
    fixed = grid if grid is not None else default_grid(eq, sgn * 0.5 * (lo + hi), N)
    E = _shoot_on_grid(eq, n_target, lo, hi, fixed, (tlo, thi), xtol, sgn)
    history = [(fixed.N, E)]
    if not richardson:
        return ShootResult(E, fixed, history=tuple(history))
    delta = None
    for k in range(1, max_refinements + 1):
        finer = fixed.refined()
        pad = max(1e-6 * width, 10 * abs(E - history[-2][1]) if len(history) > 1 else 0)
        t = sgn * E
        E2 = _shoot_on_grid(eq, n_target, max(tlo, t - pad), min(thi, t + pad), finer, (tlo, thi), xtol, sgn)
        history.append((finer.N, E2))
        delta = abs(E2 - E)
        E, fixed = E2, finer
        if delta <= 1e-6 * max(abs(E), 1e-300):
            return ShootResult(E, fixed, refinements=k, richardson_delta=delta, history=tuple(history))
    return ShootResult(E, fixed, refinements=max_refinements, richardson_delta=delta, history=tuple(history))


def oracle_eigenfunction(eq: EffectiveEquation, E: float, grid: RadialGrid) -> tuple[np.ndarray, np.ndarray]:
    """Glued outward/inward Numerov solution at E, unit-normalized, positive near the origin."""
    s = _sweep(eq, E, grid)
    m = s.match
    w = s.w_out.copy()
    w[m:] = s.w_in[m:] * (s.w_out[m] / s.w_in[m])
    # prepend the origin, where u vanishes
    r = np.concatenate(([0.0], s.r))
    u = np.concatenate(([0.0], w * np.sqrt(s.r)))
    u /= math.sqrt(simpson(u * u, x=r))
    first = u[np.nonzero(u)[0][0]]
    return r, u if first > 0 else -u


@dataclass(frozen=True)
class ComparisonRow:
    state: str
    n: int
    kappa: int | None
    l: int | None
    E_nu: float
    E_oracle_approx: float
    E_oracle_exact: float | None

    @property
    def deviation(self) -> float:
        return abs(self.E_nu - self.E_oracle_approx)

    @property
    def approximation_shift(self) -> float | None:
        if self.E_oracle_exact is None:
            return None
        return abs(self.E_oracle_exact - self.E_oracle_approx)


def _exact_or_none(eq, n, N):
    try:
        return shoot_eigenvalue(eq, n, N=N).E
    except EigenvalueNotFound:
        return None


def compare_nu_vs_oracle(p: PotentialParams, setup: "RelativisticSetup | float",
                         states: Sequence, N: int = DEFAULT_POINTS, exact: bool = True) -> list[ComparisonRow]:
    """Closed-form energies beside shooting energies for the approximated and exact equations.

    ``setup`` is a RelativisticSetup, or the particle mass for the Schrodinger
    limit, in which case ``states`` holds (n, l) pairs.
    """
    rows = []
    for st in states:
        if isinstance(setup, RelativisticSetup):
            qn = st if isinstance(st, QuantumNumbers) else QuantumNumbers(*st)
            levels = solve_levels(p, setup, qn)
            if not levels:
                raise EigenvalueNotFound(f"no closed-form root for {qn}")
            E_nu = levels[0].E
            approx = EffectiveEquation.relativistic(p, setup, qn.kappa, Form.APPROXIMATED)
            ex = EffectiveEquation.relativistic(p, setup, qn.kappa, Form.EXACT)
            name = state_label(qn.n, qn.kappa, setup.limit).name
            n, kappa, l = qn.n, qn.kappa, None
        else:
            n, l = st
            m = float(setup)
            E_nu = nonrel_energy(n, l, p.a, p.b, p.delta, m)
            approx = EffectiveEquation.nonrelativistic(p, l, m, Form.APPROXIMATED)
            ex = EffectiveEquation.nonrelativistic(p, l, m, Form.EXACT)
            name, kappa = nonrel_label(n, l), None
        E_ap = shoot_eigenvalue(approx, n, N=N).E
        E_ex = _exact_or_none(ex, n, N) if exact else None
        rows.append(ComparisonRow(name, n, kappa, l, E_nu, E_ap, E_ex))
    return rows
