from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hellmann_spectra.model import (
    DomainError,
    Limit,
    PotentialParams,
    QuantumNumbers,
    RelativisticSetup,
    approx_potential,
    approximation_error_scan,
    hellmann_potential,
    kappa_label,
    nonrel_label,
    state_label,
)


def test_potential_values():
    p = PotentialParams(1.0, -4.0, 0.01)
    assert hellmann_potential(2.0, p) == pytest.approx((-1 - 4 * np.exp(-0.02)) / 2, rel=1e-15)
    assert isinstance(hellmann_potential(2.0, p), float)
    r = np.array([0.5, 1.0, 3.0])
    np.testing.assert_allclose(hellmann_potential(r, p), (-1 - 4 * np.exp(-0.01 * r)) / r)


def test_approximation_matches_small_delta_r():
    p = PotentialParams(2.0, -4.0, 0.01)
    # delta/(1 - e^{-delta r}) = 1/r + delta/2 + O(delta^2 r)
    r = 0.1
    expected = hellmann_potential(r, p) + (-2 - 4 * np.exp(-0.001)) * 0.005
    assert approx_potential(r, p) == pytest.approx(expected, rel=1e-6)


def test_approximation_error_scan_trend():
    p = PotentialParams(2.0, -4.0, 0.01)
    rows = approximation_error_scan(p, np.linspace(0.1, 50, 200))
    assert [r for r, _, _ in rows] == pytest.approx(list(np.linspace(0.1, 50, 200)))
    # the relative gap rises with delta r; the absolute gap slowly falls
    # from 3 delta to 2.4 delta over this range
    rel = [abs(v - w) / abs(v) for _, v, w in rows]
    assert all(x < y for x, y in zip(rel, rel[1:]))
    gap = [abs(v - w) for _, v, w in rows]
    assert gap[0] == pytest.approx(0.03, rel=1e-3)
    assert approximation_error_scan(p, []) == []


def test_approximation_reference_points():
    # -0.02 / (1 - e^{-0.01})
    assert approx_potential(1.0, PotentialParams(2, 0, 0.01)) == pytest.approx(-2.0100166666389, rel=1e-12)
    assert approx_potential(3.0, PotentialParams(0, 0, 0.3)) == 0.0
    p = PotentialParams(2, -4, 1e-3)
    r = 1e-3
    assert abs(approx_potential(r, p) / hellmann_potential(r, p) - 1) < 1e-5
    r, v, w = approximation_error_scan(PotentialParams(2, 0, 0.01), [4.0])[0]
    assert v == pytest.approx(-0.5) and w == approx_potential(4.0, PotentialParams(2, 0, 0.01))


@pytest.mark.parametrize("r", [0.0, -1.0, np.nan])
def test_potential_rejects_nonpositive_r(r):
    with pytest.raises(DomainError):
        hellmann_potential(r, PotentialParams(1, 1, 0.1))
    with pytest.raises(DomainError):
        approx_potential(np.array([1.0, r]), PotentialParams(1, 1, 0.1))


def test_parameter_validation():
    with pytest.raises(DomainError, match="delta"):
        PotentialParams(1, 1, 0.0)
    with pytest.raises(DomainError):
        PotentialParams(np.inf, 1, 0.1)
    with pytest.raises(DomainError):
        RelativisticSetup(0.0, 1.0, "spin")
    with pytest.raises(DomainError, match="window"):
        RelativisticSetup(5.0, 10.0, "spin")
    with pytest.raises(DomainError):
        RelativisticSetup(5.0, 1.0, "nonrel")
    with pytest.raises(DomainError):
        QuantumNumbers(0, 0)
    with pytest.raises(DomainError):
        QuantumNumbers(-1, 1)


def test_windows():
    assert RelativisticSetup(5, 5.5, Limit.SPIN).window == (0.5, 5)
    assert RelativisticSetup(5, -5.5, "pseudospin").window == (-5, -0.5)
    lo, hi = RelativisticSetup(5, 5.5).shrunk_window()
    assert 0.5 < lo < hi < 5


def test_limit_parse():
    assert Limit.parse("p-spin") is Limit.PSPIN
    assert Limit.parse("NonRel") is Limit.NONREL
    with pytest.raises(DomainError):
        Limit.parse("vector")


@pytest.mark.parametrize("kappa,limit,l,j,lt", [
    (-1, "spin", 0, Fraction(1, 2), None),
    (1, "spin", 1, Fraction(1, 2), None),
    (-3, "spin", 2, Fraction(5, 2), None),
    (2, "spin", 2, Fraction(3, 2), None),
    (-1, "pspin", 0, Fraction(1, 2), 1),
    (2, "pspin", 2, Fraction(3, 2), 1),
    (-3, "pspin", 2, Fraction(5, 2), 3),
    (4, "pspin", 4, Fraction(7, 2), 3),
])
def test_kappa_label(kappa, limit, l, j, lt):
    lab = kappa_label(kappa, limit)
    assert (lab.l, lab.j, lab.l_tilde) == (l, j, lt)


@given(st.integers(-30, 30).filter(bool), st.sampled_from(["spin", "pspin"]))
def test_kappa_label_j_relation(kappa, limit):
    # |kappa| = j + 1/2 in both limits
    lab = kappa_label(kappa, limit)
    assert abs(kappa) == lab.j + Fraction(1, 2)
    if lab.l_tilde is not None:
        assert abs(lab.l_tilde - lab.l) == 1


def test_display_labels():
    assert state_label(1, -2, "spin").name == "1p3/2"
    assert state_label(1, 2, "pspin").name == "0d3/2"
    assert state_label(1, -1, "pspin").name == "1s1/2"
    assert nonrel_label(0, 1) == "2p"
    assert nonrel_label(0, 3) == "4f"
    with pytest.raises(DomainError):
        kappa_label(0, "spin")
