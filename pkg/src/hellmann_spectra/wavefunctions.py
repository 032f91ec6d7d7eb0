"""Closed-form radial wave functions, Jacobi polynomials and normalization."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import simpson

from .model import DomainError, Limit, PotentialParams, QuantumNumbers, RelativisticSetup
from .nu import (
    build_problem,
    condition_residual,
    effective_problem,
    nonrel_energy,
    residual_scale,
)

ROOT_RTOL = 1e-9


class NotBoundError(ValueError):
    """The requested state has no normalizable closed-form solution."""


class NumericError(RuntimeError):
    pass


class Component(enum.Enum):
    UPPER_F = "F"
    LOWER_G = "G"
    NONREL_R = "R"


class Normalization(enum.Enum):
    SINGLE = "single"
    SPINOR = "spinor"


# -- Jacobi polynomials --------------------------------------------------------

def _check_jacobi(n, alpha, beta):
    if int(n) != n or n < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {n}")
    if not (alpha > -1 and beta > -1):
        raise DomainError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")


def jacobi(n: int, alpha: float, beta: float, x):
    """P_n^(alpha, beta)(x) by the forward three-term recurrence."""
    _check_jacobi(n, alpha, beta)
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return float(p_prev) if x.ndim == 0 else p_prev
    ab = alpha + beta
    p = (alpha + 1) + (ab + 2) * (x - 1) / 2
    for k in range(2, int(n) + 1):
        c = 2 * k + ab
        a1 = 2 * k * (k + ab) * (c - 2)
        a2 = (c - 1) * (c * (c - 2) * x + alpha ** 2 - beta ** 2)
        a3 = 2 * (k + alpha - 1) * (k + beta - 1) * c
        p_prev, p = p, (a2 * p - a3 * p_prev) / a1
    return float(p) if x.ndim == 0 else p


def jacobi_derivative(n: int, alpha: float, beta: float, x):
    _check_jacobi(n, alpha, beta)
    if n == 0:
        x = np.asarray(x, dtype=float)
        z = np.zeros_like(x)
        return float(z) if x.ndim == 0 else z
    return 0.5 * (n + alpha + beta + 1) * jacobi(n - 1, alpha + 1, beta + 1, x)


# -- radial functions ----------------------------------------------------------

@dataclass(frozen=True)
class RadialFunction:
    """A radial function of the NU family, or its Dirac partner component.

    Closed-form members (``source is None``) evaluate

        norm * exp(-delta sqrt_c r) (1 - exp(-delta r))^eta_eff
             * P_n^(2 sqrt_c, 2 eta_eff - 1)(1 - 2 exp(-delta r)).

    Partner members evaluate (source' + shift * source / r) / denom.
    """

    kind: Component
    n: int
    energy: float
    delta: float
    sqrt_c: float
    eta_eff: float
    norm: float = 1.0
    kappa: int | None = None
    l: int | None = None
    source: "RadialFunction | None" = None
    shift: float = 0.0
    denom: float = 1.0
    samples: tuple | None = None

    @property
    def closed_form(self) -> bool:
        return self.source is None

    @property
    def decay_rate(self) -> float:
        base = self.source if self.source is not None else self
        return base.delta * base.sqrt_c

    def scaled(self, factor: float) -> "RadialFunction":
        if self.source is not None:
            return replace(self, source=self.source.scaled(factor), samples=None)
        return replace(self, norm=self.norm * factor, samples=None)

    def _parts(self, r):
        s = np.exp(-self.delta * r)
        w = -np.expm1(-self.delta * r)
        x = 1 - 2 * s
        a, b = 2 * self.sqrt_c, 2 * self.eta_eff - 1
        return s, w, x, a, b

    def _closed(self, r):
        s, w, x, a, b = self._parts(r)
        env = np.exp(-self.delta * self.sqrt_c * r) * w ** self.eta_eff
        return self.norm * env * jacobi(self.n, a, b, x)

    def _closed_derivative(self, r):
        s, w, x, a, b = self._parts(r)
        d, e = self.delta, self.eta_eff
        decay = np.exp(-d * self.sqrt_c * r)
        P = jacobi(self.n, a, b, x)
        dP = jacobi_derivative(self.n, a, b, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            # e * d * s * w^(e-1): finite at w = 0 only when e >= 1
            wpow = np.where(w > 0, w ** (e - 1), 0.0 if e > 1 else (1.0 if e == 1 else np.inf))
        out = decay * ((-d * self.sqrt_c * P + 2 * d * s * dP) * w ** e + e * d * s * wpow * P)
        return self.norm * out

    def _partner(self, r):
        src = self.source
        with np.errstate(divide="ignore", invalid="ignore"):
            val = (src._closed_derivative(r) + self.shift * src._closed(r) / r) / self.denom
        at0 = r == 0
        if np.any(at0):
            val = np.where(at0, self._partner_at_origin(), val)
        return val

    def _partner_at_origin(self) -> float:
        src = self.source
        e = src.eta_eff
        lead = src.norm * src.delta ** e * jacobi(src.n, 2 * src.sqrt_c, 2 * e - 1, -1.0) * (e + self.shift)
        if e > 1 or lead == 0:
            return 0.0
        if e == 1:
            return lead / self.denom
        return math.copysign(math.inf, lead / self.denom)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise DomainError("r must be nonnegative")
        out = self._closed(r) if self.source is None else self._partner(r)
        return float(out) if out.ndim == 0 else out

    def derivative(self, r):
        """Analytic first derivative (closed-form members only)."""
        if self.source is not None:
            raise NotImplementedError("analytic derivative is available for closed-form components")
        r = np.asarray(r, dtype=float)
        out = self._closed_derivative(r)
        return float(out) if out.ndim == 0 else out

    def sample(self, r) -> "RadialFunction":
        r = np.asarray(r, dtype=float)
        return replace(self, samples=tuple(zip(r.tolist(), np.asarray(self(r)).tolist())))


def _require_root(prob, n, p: PotentialParams, E):
    res = condition_residual(prob, n, p.a, p.b, p.delta)
    if abs(res) > ROOT_RTOL * max(residual_scale(prob, n, p.a, p.b, p.delta), 1.0):
        raise DomainError(f"E = {E!r} is not a root of the energy condition (residual {res:.3e})")


def _closed_member(kind, n, E, delta, prob, **kw) -> RadialFunction:
    if not prob.C > 0:
        raise NotBoundError(f"sqrt(C) must be positive for a bound state, C = {prob.C}")
    f = RadialFunction(kind=kind, n=n, energy=E, delta=delta, sqrt_c=math.sqrt(prob.C),
                       eta_eff=prob.eta_eff, **kw)
    return normalize(f)


def upper_component(E: float, p: PotentialParams, setup: RelativisticSetup, qn: QuantumNumbers,
                    check_root: bool = True) -> RadialFunction:
    """Normalized upper component F of a spin-symmetric state."""
    if setup.limit is not Limit.SPIN:
        raise DomainError("upper_component solves the spin limit; use pspin_lower_component")
    prob = effective_problem(E, p, setup, qn.kappa)
    if check_root:
        _require_root(prob, qn.n, p, E)
    return _closed_member(Component.UPPER_F, qn.n, E, p.delta, prob, kappa=qn.kappa)


def pspin_lower_component(E: float, p: PotentialParams, setup: RelativisticSetup, qn: QuantumNumbers,
                          check_root: bool = True) -> RadialFunction:
    """Normalized lower component G of a pseudospin-symmetric state."""
    if setup.limit is not Limit.PSPIN:
        raise DomainError("pspin_lower_component needs the pspin limit")
    prob = effective_problem(E, p, setup, qn.kappa)
    if check_root:
        _require_root(prob, qn.n, p, E)
    return _closed_member(Component.LOWER_G, qn.n, E, p.delta, prob, kappa=qn.kappa)


def solved_component(E, p, setup, qn, check_root: bool = True) -> RadialFunction:
    if setup.limit is Limit.SPIN:
        return upper_component(E, p, setup, qn, check_root)
    return pspin_lower_component(E, p, setup, qn, check_root)


def lower_component(F: RadialFunction, E: float, p: PotentialParams, setup: RelativisticSetup,
                    kappa: int) -> RadialFunction:
    """G = (d/dr + kappa/r - H/r) F / (M + E - C_s)."""
    if setup.limit is not Limit.SPIN:
        raise DomainError("lower_component applies to the spin limit")
    denom = setup.M + E - setup.C_sym
    if abs(denom) < 1e-12:
        raise NumericError("M + E - C_s vanishes: lower component is singular")
    return RadialFunction(kind=Component.LOWER_G, n=F.n, energy=E, delta=F.delta, sqrt_c=F.sqrt_c,
                          eta_eff=F.eta_eff, kappa=kappa, source=F, shift=kappa - p.H, denom=denom)


def pspin_upper_component(G: RadialFunction, E: float, p: PotentialParams, setup: RelativisticSetup,
                          kappa: int) -> RadialFunction:
    """F = (d/dr - kappa/r + H/r) G / (M - E + C_ps)."""
    if setup.limit is not Limit.PSPIN:
        raise DomainError("pspin_upper_component applies to the pspin limit")
    denom = setup.M - E + setup.C_sym
    if abs(denom) < 1e-12:
        raise NumericError("M - E + C_ps vanishes: upper component is singular")
    return RadialFunction(kind=Component.UPPER_F, n=G.n, energy=E, delta=G.delta, sqrt_c=G.sqrt_c,
                          eta_eff=G.eta_eff, kappa=kappa, source=G, shift=p.H - kappa, denom=denom)


def partner_component(f: RadialFunction, E, p, setup, kappa) -> RadialFunction:
    if setup.limit is Limit.SPIN:
        return lower_component(f, E, p, setup, kappa)
    return pspin_upper_component(f, E, p, setup, kappa)


def nonrel_problem(E: float, l: int, a: float, b: float, delta: float, m: float):
    """Transformed-equation data of the Schrodinger limit (gamma = 2m, beta^2 = -2mE)."""
    return build_problem(l + 1.0, 2 * m, -2 * m * E, a, b, delta)


def nonrel_radial(n: int, l: int, a: float, b: float, delta: float, m: float,
                  E: float | None = None) -> RadialFunction:
    """Normalized reduced radial function R(r) with integral R^2 dr = 1."""
    if E is None:
        E = nonrel_energy(n, l, a, b, delta, m)
    radicand = -2 * m * (E + delta * a) / delta ** 2 + l * (l + 1)
    if not radicand > 0:
        raise NotBoundError(f"state n={n}, l={l} is not bound (radicand {radicand:.6g})")
    f = RadialFunction(kind=Component.NONREL_R, n=n, energy=E, delta=delta,
                       sqrt_c=math.sqrt(radicand), eta_eff=l + 1.0, l=l)
    return normalize(f)


# -- quadrature ----------------------------------------------------------------

TAIL_DIGITS = 12


def integration_limit(f: RadialFunction) -> float:
    """r_max with exp(-delta sqrt(C) r_max) below 10^-TAIL_DIGITS, extended past polynomial tails."""
    k = f.decay_rate
    r_max = TAIL_DIGITS * math.log(10) / k
    peak = float(np.max(np.abs(f(np.linspace(0, r_max, 2001)[1:]))))
    for _ in range(20):
        tail = abs(f(r_max))
        if tail <= 1e-7 * peak:
            break
        r_max *= 1.5
    return r_max


def square_integral(funcs, r_max: float, rtol: float = 1e-10, start: int = 512,
                    max_points: int = 2 ** 22 + 1) -> float:
    """Composite Simpson integral of sum f^2 over [0, r_max] with panel doubling."""
    npts = start + 1
    prev = None
    while npts <= max_points:
        r = np.linspace(0.0, r_max, npts)
        y = sum(np.asarray(g(r)) ** 2 for g in funcs)
        if not np.all(np.isfinite(y)):
            y = np.where(np.isfinite(y), y, 0.0)
        val = simpson(y, x=r)
        if prev is not None and abs(val - prev) <= rtol * abs(val):
            return val
        prev = val
        npts = 2 * (npts - 1) + 1
    raise NumericError("normalization integral did not converge")


def normalize(f: RadialFunction, partner: RadialFunction | None = None,
              mode: Normalization | str = Normalization.SINGLE):
    """Scale to unit norm.

    SINGLE: integral of f^2 is one.  SPINOR: integral of f^2 + partner^2 is
    one; the partner must be derived from ``f`` and (f, partner) is returned.
    """
    mode = Normalization(mode)
    r_max = integration_limit(f)
    if mode is Normalization.SINGLE:
        total = square_integral([f], r_max)
        return f.scaled(1 / math.sqrt(total))
    if partner is None or partner.source is None:
        raise DomainError("spinor normalization needs the partner derived from f")
    total = square_integral([f, partner], r_max)
    k = 1 / math.sqrt(total)
    g = replace(partner, source=partner.source.scaled(k), samples=None)
    return f.scaled(k), g


def count_nodes(values) -> int:
    """Sign changes in a sampled function, ignoring exact zeros."""
    v = np.asarray(values, dtype=float)
    v = v[v != 0]
    return int(np.count_nonzero(np.signbit(v[1:]) != np.signbit(v[:-1])))
