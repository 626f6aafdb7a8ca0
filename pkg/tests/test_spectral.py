import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmvwalk import cmv
from cmvwalk.errors import NoAtom, OutsideSupport, QuadratureNonconvergence
from cmvwalk.spectral import (
    ac_density,
    atom_mass_radial,
    atoms,
    band_edges,
    caratheodory,
    caratheodory_I,
    caratheodory_II,
    caratheodory_ratio,
    integrate_band,
    m_of_b,
    moment_integral,
    moment_table,
    ratio_order,
    spectral_measure,
)

angles = st.floats(-math.pi, math.pi)
params = st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(0.0, 0.9), angles)
FAMILY_I = [0.6, -0.4, 0.3 + 0.4j, 0.5j]
FAMILY_II = [1 / 3, -1 / 3, 0.2 + 0.3j, -0.5 + 0.5j, 0.5 - 0.2j]


def same_angle(t1, t2, tol=1e-12):
    return abs(cmath.exp(1j * t1) - cmath.exp(1j * t2)) < tol


# --- Caratheodory functions -------------------------------------------------

@pytest.mark.parametrize("a", FAMILY_I + [0.0, 0.9])
def test_F_I_at_origin(a):
    assert caratheodory_I(0.0, a) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("b", FAMILY_II + [0.0])
def test_F_II_at_origin(b):
    assert caratheodory_II(0.0, b) == pytest.approx(1.0, abs=1e-12)


def test_F_I_reference_value():
    assert caratheodory_I(0.5, 0.6) == pytest.approx(2.0807, abs=1e-4)


@settings(max_examples=200, deadline=None)
@given(params, st.floats(0.0, 0.99), angles, st.sampled_from([1, 2]))
def test_positive_real_part(alpha, r, theta, family):
    assert caratheodory(r * cmath.exp(1j * theta), family, alpha).real > 0


def test_printed_second_family_formula_has_wrong_sign():
    """The unflipped expression gives F(0) = -1 or (1 - conj b)/(1 + conj b), never 1."""
    b = 0.2 + 0.3j
    z = 1e-9
    root = cmath.sqrt((z - 1 / z) ** 2 + 4 * abs(b) ** 2)
    values = sorted(
        (-((1 - b) * z - (1 - b.conjugate()) / z) / (b * z + b.conjugate() / z - s * root) for s in (1, -1)),
        key=lambda v: v.real,
    )
    assert values[0] == pytest.approx(-1, abs=1e-6)
    assert values[1] == pytest.approx((1 - b.conjugate()) / (1 + b.conjugate()), abs=1e-6)
    # with the analytic square root, the flipped expression is the implemented F
    for zz in (0.3 + 0.2j, -0.5j, 0.8):
        S = (1 - zz * zz) * cmath.sqrt(1 + 4 * abs(b) ** 2 * zz * zz / (1 - zz * zz) ** 2)
        printed = -((1 - b) * zz * zz - (1 - b.conjugate())) / (b * zz * zz + b.conjugate() - S)
        assert -printed == pytest.approx(caratheodory_II(zz, b))


def test_closed_forms_reject_outside_disk():
    with pytest.raises(ValueError):
        caratheodory_I(1.0, 0.3)
    with pytest.raises(ValueError):
        caratheodory_II(1.2j, 0.3)


def test_b_zero_is_lebesgue():
    z = 0.7 * np.exp(1j * np.linspace(-3, 3, 13))
    assert np.allclose(caratheodory_II(z, 0.0), 1.0)
    theta = np.linspace(-3, 3, 13)
    theta = theta[np.abs(np.cos(theta)) < 1]
    assert np.allclose(ac_density(theta, 2, 0.0), 1.0)


# --- ratio limit -------------------------------------------------------------

def test_ratio_reference_values():
    assert caratheodory_ratio(0.5, 1, 0.6, 50) == pytest.approx(caratheodory_I(0.5, 0.6), abs=1e-6)
    z = 0.9 * cmath.exp(0.3j)
    assert caratheodory_ratio(z, 2, 1 / 3, 60) == pytest.approx(caratheodory_II(z, 1 / 3), abs=1e-5)


def test_ratio_free_case_is_exact():
    for j in range(1, 6):
        assert caratheodory_ratio(0.3 + 0.2j, 1, 0.0, j) == pytest.approx(1.0)


@pytest.mark.parametrize("family, alpha", [(1, 0.6), (1, 0.3 + 0.4j), (2, 1 / 3), (2, 0.2 + 0.3j)])
def test_ratio_is_stable_in_j(family, alpha):
    z = 0.5 * np.exp(1j * np.linspace(-3.1, 3.1, 101))
    diff = caratheodory_ratio(z, family, alpha, 30) - caratheodory_ratio(z, family, alpha, 60)
    assert np.abs(diff).max() < 1e-8


@pytest.mark.parametrize("family, alpha", [(1, 0.6), (1, -0.4), (2, 1 / 3), (2, 0.2 + 0.3j)])
def test_ratio_converges_geometrically_near_circle(family, alpha):
    # truncation error behaves like |z|^j: quadrupling j collapses it
    z = 0.9 * np.exp(1j * np.linspace(-3.1, 3.1, 101))
    F = caratheodory(z, family, alpha)
    e60 = np.abs(caratheodory_ratio(z, family, alpha, 60) - F).max()
    e240 = np.abs(caratheodory_ratio(z, family, alpha, 240) - F).max()
    assert e240 < 1e-9
    assert e240 < 1e-4 * e60


@pytest.mark.parametrize("family, good, bad", [(1, 41, 40), (2, 40, 41)])
def test_ratio_converges_along_one_parity(family, good, bad):
    from cmvwalk.laurent import chi, tilde_variant, x_hat

    poly = x_hat if family == 1 else chi
    raw = lambda alpha, j: tilde_variant(j, z, alpha, family) / poly(j, z, alpha)
    z = 0.4 + 0.1j
    F = caratheodory(z, family, 0.6)
    assert raw(0.6, good) == pytest.approx(F, abs=1e-10)
    # the other parity tends to -F, but not uniformly: at alpha = 0 it stays at +1
    assert raw(0.6, bad) == pytest.approx(-F, abs=1e-6)
    assert raw(0.0, bad) == pytest.approx(1.0)
    assert caratheodory_ratio(z, family, 0.6, bad) == pytest.approx(F, abs=1e-10)


@pytest.mark.parametrize("family, j, order", [(1, 60, 61), (1, 61, 61), (2, 60, 60), (2, 59, 60)])
def test_ratio_order(family, j, order):
    assert ratio_order(family, j) == order


def test_ratio_rejects_bad_arguments():
    with pytest.raises(ValueError):
        caratheodory_ratio(0.0, 1, 0.6, 30)
    with pytest.raises(ValueError):
        caratheodory_ratio(0.5, 3, 0.6, 30)


# --- densities and atoms ----------------------------------------------------

def test_density_at_quarter_turn():
    assert ac_density(math.pi / 2, 1, 0.6) == pytest.approx(0.8)


def test_density_outside_band():
    with pytest.raises(OutsideSupport):
        ac_density(0.0, 1, 0.6)


@pytest.mark.parametrize("family, alpha, mass", [(1, 0.6, 0.4), (2, 1 / 3, 0.5)])
def test_continuous_mass(family, alpha, mass):
    assert integrate_band(np.ones_like, family, alpha) == pytest.approx(mass, abs=1e-6)


@pytest.mark.parametrize("family, alpha", [(1, a) for a in FAMILY_I] + [(2, b) for b in FAMILY_II])
def test_total_mass(family, alpha):
    m = spectral_measure(family, alpha)
    assert m.total_mass() == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("family, alpha", [(1, 0.6), (1, 0.3 + 0.4j), (2, 1 / 3), (2, 0.2 + 0.3j)])
def test_density_is_radial_limit(family, alpha):
    (lo1, hi1), (lo2, hi2) = band_edges(alpha)
    theta = np.concatenate([np.linspace(lo1, hi1, 27)[1:-1], np.linspace(lo2, hi2, 27)[1:-1]])
    r = 1 - 1e-6
    radial = caratheodory(r * np.exp(1j * theta), family, alpha).real
    assert np.abs(radial - ac_density(theta, family, alpha)).max() < 1e-4


def test_atom_examples():
    assert atoms(1, 0.6) == [(0.0, pytest.approx(0.6))]
    assert atoms(1, 0.5j) == []
    found = atoms(2, 1 / 3)
    assert len(found) == 2
    assert {round(abs(t), 12) for t, _ in found} == {0.0, round(math.pi, 12)}
    assert all(m == pytest.approx(0.25) for _, m in found)


def test_m_of_b_examples():
    assert m_of_b(1 / 3) == pytest.approx(0.5)
    assert m_of_b(0.0) == 0.0
    assert m_of_b(-0.5 + 0.5j) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize(
    "a, theta0",
    [(0.6, 0.0), (-0.4, math.pi), (0.3 - 0.5j, math.pi / 6), (-0.3 + 0.4j, -2.7301), (-0.2 - 0.7j, 2.3662)],
)
def test_first_family_atom_angle(a, theta0):
    (t, m), = atoms(1, a)
    assert same_angle(t, theta0, 1e-4)
    assert -math.pi <= t < math.pi
    assert atom_mass_radial(t, 1, a) == pytest.approx(m, abs=1e-5)


@settings(max_examples=100, deadline=None)
@given(params, st.sampled_from([1, 2]))
def test_atoms_lie_off_band(alpha, family):
    rho = math.sqrt(1 - abs(alpha) ** 2)
    for t, m in atoms(family, alpha):
        assert abs(math.cos(t)) >= rho - 1e-12
        assert 0 < m <= 1


@settings(max_examples=300, deadline=None)
@given(params)
def test_atom_presence_conditions(alpha):
    assert bool(atoms(1, alpha)) == (abs(alpha.real) / math.sqrt(1 - alpha.imag ** 2) >= 1e-8)
    q = abs(alpha) ** 2 + alpha.real
    if abs(q) > 1e-7:
        assert bool(atoms(2, alpha)) == (q > 0)


@pytest.mark.parametrize("family, alpha, theta, mass", [(1, 0.6, 0.0, 0.6), (2, 1 / 3, math.pi, 0.25), (2, 1 / 3, 0.0, 0.25)])
def test_radial_mass(family, alpha, theta, mass):
    assert atom_mass_radial(theta, family, alpha) == pytest.approx(mass, abs=1e-5)


def test_radial_mass_inside_band():
    with pytest.raises(NoAtom):
        atom_mass_radial(math.pi / 2, 1, 0.6)


# --- moments ----------------------------------------------------------------

@pytest.mark.parametrize("family, alpha", [(1, 0.6), (1, 0.3 + 0.4j), (2, 1 / 3), (2, 0.2 + 0.3j)])
def test_orthonormality(family, alpha):
    gram = moment_table(0, 8, family, alpha)[0]
    assert np.abs(gram - np.eye(9)).max() < 1e-6


def test_moment_matches_matrix_power():
    C = cmv.build(cmv.null_odd(0.6), 30)
    assert moment_integral(6, 0, 0, 1, 0.6) == pytest.approx(cmv.power_entry(C, 6, 0, 0), abs=1e-6)


@pytest.mark.parametrize("family, alpha", [(1, -0.4), (1, 0.5j), (2, -1 / 3), (2, 0.5 - 0.2j)])
def test_moment_table_matches_dense_powers(family, alpha):
    t_max, l_max, N = 10, 6, 40
    seq = cmv.null_odd(alpha) if family == 1 else cmv.null_even(alpha)
    C = cmv.build(seq, N).to_dense()
    table = moment_table(t_max, l_max, family, alpha)
    P = np.eye(N)
    for t in range(t_max + 1):
        assert np.abs(table[t] - P[: l_max + 1, : l_max + 1]).max() < 1e-6
        P = C @ P


def test_quadrature_nonconvergence():
    with pytest.raises(QuadratureNonconvergence):
        integrate_band(lambda th: np.cos(400 * th), 1, 0.6, tol=1e-15, n_start=8, n_max=16)


def test_measure_json_schema():
    doc = json.loads(json.dumps(spectral_measure(1, 0.6, samples=16).to_json()))
    assert set(doc) >= {"ac", "atoms", "total_mass"}
    assert set(doc["ac"][0]) == {"theta", "w"}
    assert doc["atoms"] == [{"theta": 0.0, "mass": pytest.approx(0.6)}]
    assert doc["total_mass"] == pytest.approx(1.0, abs=1e-6)
    thetas = [p["theta"] for p in doc["ac"]]
    assert thetas == sorted(thetas)
