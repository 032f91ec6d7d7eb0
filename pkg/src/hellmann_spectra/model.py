"""Domain types, the Hellmann potential and its exponential approximation.

Units are hbar = c = 1 throughout; relativistic masses, energies and the
screening parameter are in fm^-1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class Limit(enum.Enum):
    SPIN = "spin"
    PSPIN = "pspin"
    NONREL = "nonrel"

    @classmethod
    def parse(cls, value: "str | Limit") -> "Limit":
        if isinstance(value, Limit):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        aliases = {"spin": cls.SPIN, "pspin": cls.PSPIN, "pseudospin": cls.PSPIN,
                   "nonrel": cls.NONREL, "nonrelativistic": cls.NONREL}
        try:
            return aliases[key]
        except KeyError:
            raise DomainError(f"unknown symmetry limit {value!r}") from None


@dataclass(frozen=True)
class PotentialParams:
    """Hellmann strengths ``a`` (Coulomb), ``b`` (Yukawa), screening ``delta``
    and Coulomb-like tensor strength ``H`` (tensor potential U(r) = H/r)."""

    a: float
    b: float
    delta: float
    H: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "delta", "H"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not self.delta > 0:
            raise DomainError(f"delta must be positive, got {self.delta}")


@dataclass(frozen=True)
class RelativisticSetup:
    """Fermion mass ``M`` and symmetry constant ``C_sym`` (C_s or C_ps)."""

    M: float
    C_sym: float
    limit: Limit = Limit.SPIN

    def __post_init__(self):
        object.__setattr__(self, "limit", Limit.parse(self.limit))
        if self.limit is Limit.NONREL:
            raise DomainError("RelativisticSetup needs the spin or pspin limit")
        if not self.M > 0:
            raise DomainError(f"M must be positive, got {self.M}")
        lo, hi = self.window
        if not lo < hi:
            raise DomainError(f"empty bound-state window ({lo}, {hi})")

    @property
    def window(self) -> tuple[float, float]:
        """Open energy interval in which beta^2 > 0."""
        if self.limit is Limit.SPIN:
            return (self.C_sym - self.M, self.M)
        return (-self.M, self.M + self.C_sym)

    def shrunk_window(self, eps: float = 1e-8) -> tuple[float, float]:
        lo, hi = self.window
        pad = eps * (hi - lo)
        return (lo + pad, hi - pad)


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    kappa: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"n must be a nonnegative integer, got {self.n}")
        if int(self.kappa) != self.kappa or self.kappa == 0:
            raise DomainError(f"kappa must be a nonzero integer, got {self.kappa}")


ORBITAL_LETTERS = "spdfghiklmnoqrtuvwxyz"


def orbital_letter(l: int) -> str:
    if l < len(ORBITAL_LETTERS):
        return ORBITAL_LETTERS[l]
    return f"[l={l}]"


@dataclass(frozen=True)
class SpectroscopicLabel:
    """Orbital data of a Dirac state.

    ``l`` is the orbital quantum number of the upper component; in the
    pseudospin limit ``l_tilde`` holds the pseudo-orbital number.
    ``n_display`` is None until a radial number is attached.
    """

    l: int
    j: Fraction
    l_tilde: int | None = None
    n_display: int | None = None

    @property
    def name(self) -> str:
        core = f"{orbital_letter(self.l)}{self.j.numerator}/{self.j.denominator}"
        if self.n_display is None:
            return core
        return f"{self.n_display}{core}"


def kappa_label(kappa: int, limit: "Limit | str") -> SpectroscopicLabel:
    """Map kappa to (l, j) in the spin limit or (l_tilde, j) in the pspin limit."""
    limit = Limit.parse(limit)
    if int(kappa) != kappa or kappa == 0:
        raise DomainError(f"kappa must be a nonzero integer, got {kappa}")
    kappa = int(kappa)
    half = Fraction(1, 2)
    l = -kappa - 1 if kappa < 0 else kappa
    if limit is Limit.PSPIN:
        l_tilde = -kappa if kappa < 0 else kappa - 1
        j = l_tilde - half if kappa < 0 else l_tilde + half
        return SpectroscopicLabel(l=l, j=j, l_tilde=l_tilde)
    j = l + half if kappa < 0 else l - half
    return SpectroscopicLabel(l=l, j=j)


def state_label(n: int, kappa: int, limit: "Limit | str") -> SpectroscopicLabel:
    """kappa_label with the display radial number attached.

    Pseudospin partners with kappa > 0 are listed one radial number lower
    than the node count that enters the energy condition.
    """
    limit = Limit.parse(limit)
    lab = kappa_label(kappa, limit)
    shown = n - 1 if (limit is Limit.PSPIN and kappa > 0) else n
    return SpectroscopicLabel(l=lab.l, j=lab.j, l_tilde=lab.l_tilde, n_display=shown)


def nonrel_label(n: int, l: int) -> str:
    """Principal-number label such as '2p' for (n=0, l=1)."""
    return f"{n + l + 1}{orbital_letter(l)}"


def _check_r(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError("r must be positive")
    return r


def _scalar_or_array(x: np.ndarray):
    return float(x) if x.ndim == 0 else x


def hellmann_potential(r, p: PotentialParams):
    """V(r) = -a/r + b exp(-delta r)/r."""
    r = _check_r(r)
    return _scalar_or_array((-p.a + p.b * np.exp(-p.delta * r)) / r)


def approx_potential(r, p: PotentialParams):
    """Hellmann potential with 1/r replaced by delta/(1 - exp(-delta r))."""
    r = _check_r(r)
    s = np.exp(-p.delta * r)
    return _scalar_or_array(p.delta * (-p.a + p.b * s) / -np.expm1(-p.delta * r))


def approximation_error_scan(p: PotentialParams, r_values: Iterable[float]) -> list[tuple[float, float, float]]:
    """Rows (r, exact V, approximated V)."""
    r = np.asarray(list(r_values), dtype=float)
    if r.size == 0:
        return []
    exact = np.atleast_1d(hellmann_potential(r, p))
    approx = np.atleast_1d(approx_potential(r, p))
    return [(float(x), float(v), float(w)) for x, v, w in zip(r, exact, approx)]
