"""
Caratheodory functions and spectral measures of the null-odd (family 1) and
null-even (family 2) CMV matrices.

Both measures have the same absolutely continuous band {theta : |cos theta| <
rho} made of two arcs, plus at most one (family 1) or two antipodal (family 2)
point masses outside the band.

The closed-form Caratheodory functions are written with numerator and
denominator multiplied by z, so they are regular at the origin.  The square
root S(z) of (z^2 - 1)^2 + 4|alpha|^2 z^2 is taken as

    S(z) = (1 - z^2) * sqrt(1 + 4|alpha|^2 z^2 / (1 - z^2)^2)

with the principal root.  The radicand never touches the cut inside the open
disk, so S is the analytic branch with S(0) = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from .errors import (
    BranchFailure,
    NoAtom,
    OutsideSupport,
    QuadratureNonconvergence,
    Underflow,
)
from .laurent import chi, tilde_variant, x_hat

__all__ = [
    "SpectralMeasure",
    "caratheodory_I",
    "caratheodory_II",
    "caratheodory",
    "caratheodory_ratio",
    "ratio_order",
    "ac_density",
    "band_edges",
    "band_quadrature",
    "integrate_band",
    "m_of_b",
    "atoms",
    "atom_mass_radial",
    "laurent_row",
    "moment_integral",
    "moment_table",
    "spectral_measure",
]

ATOM_TOL = 1e-8
QUAD_TOL = 1e-8


def _check_family(family: int) -> int:
    if family not in (1, 2):
        raise ValueError(f"family must be 1 or 2, got {family!r}")
    return family


def _rho(alpha: complex) -> float:
    if not abs(alpha) < 1.0:
        raise ValueError(f"need |alpha| < 1, got {abs(alpha)}")
    return math.sqrt(1.0 - abs(alpha) ** 2)


def _S(z: NDArray, mod2: float) -> NDArray:
    one_m = 1.0 - z * z
    return one_m * np.sqrt(1.0 + 4.0 * mod2 * z * z / (one_m * one_m))


def _finish(F, z):
    if np.any(np.real(F) <= 0.0) or not np.all(np.isfinite(F)):
        raise BranchFailure(f"Re F <= 0 at some z in {np.ravel(z)[:4]}")
    return complex(F) if np.ndim(F) == 0 else F


def _disk(z) -> NDArray:
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("Caratheodory functions are evaluated inside the unit disk")
    return z


def caratheodory_I(z, a: complex):
    """F(z) = -(z^2 - 1 - 2i Im(a) z) / (S(z) - 2 Re(a) z) for the null-odd family."""
    a = complex(a)
    _rho(a)
    z = _disk(z)
    F = -(z * z - 1.0 - 2j * a.imag * z) / (_S(z, abs(a) ** 2) - 2.0 * a.real * z)
    return _finish(F, z)


def caratheodory_II(z, b: complex):
    """F(z) = ((1 - b) z^2 - (1 - conj b)) / (b z^2 + conj b - S(z)) for the null-even family.

    F(0) = 1.  With the opposite overall sign the value at the origin is
    -1 or (1 - conj b) / (1 + conj b) depending on the root, never 1, so
    the sign is fixed by the normalization and cross-checked against the
    ratio limit.
    """
    b = complex(b)
    _rho(b)
    z = _disk(z)
    F = ((1.0 - b) * z * z - (1.0 - b.conjugate())) / (b * z * z + b.conjugate() - _S(z, abs(b) ** 2))
    return _finish(F, z)


def caratheodory(z, family: int, alpha: complex):
    return caratheodory_I(z, alpha) if _check_family(family) == 1 else caratheodory_II(z, alpha)


def ratio_order(family: int, j: int) -> int:
    """Smallest admissible order >= j: odd for family 1, even for family 2."""
    want = 1 if _check_family(family) == 1 else 0
    return j if j % 2 == want else j + 1


def caratheodory_ratio(z, family: int, alpha: complex, j: int = 60):
    """Ratio of the sign-flipped to the original Laurent polynomial.

    The ratio converges to F(z) only along odd orders for family 1 and
    even orders for family 2; along the other parity it drifts towards
    -F(z) at a rate that degrades as alpha -> 0 (at alpha = 0 it is
    identically 1).  The ratio is therefore evaluated at
    ``ratio_order(family, j)``.  Its truncation error behaves like |z|^j.
    """
    _check_family(family)
    if j < 1:
        raise ValueError("j must be >= 1")
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0) or np.any(np.abs(z) >= 1.0):
        raise ValueError("ratio limit needs 0 < |z| < 1")
    n = ratio_order(family, j)
    poly = x_hat if family == 1 else chi
    with np.errstate(over="ignore", invalid="ignore"):
        num = tilde_variant(n, z, alpha, family)
        den = poly(n, z, alpha)
        r = np.asarray(num) / np.asarray(den)
    if not np.all(np.isfinite(r)):
        raise Underflow(f"lambda^{(n + 1) // 2} overflowed at |z| = {np.abs(z).min():.3g}")
    return complex(r) if r.ndim == 0 else r


def band_edges(alpha: complex) -> list[tuple[float, float]]:
    """The two arcs of {theta : |cos theta| < rho} inside [-pi, pi)."""
    tc = math.acos(_rho(complex(alpha)))
    return [(-math.pi + tc, -tc), (tc, math.pi - tc)]


def _density(theta: NDArray, family: int, alpha: complex) -> NDArray:
    rho = _rho(alpha)
    num = np.sqrt(np.clip(rho * rho - np.cos(theta) ** 2, 0.0, None))
    if family == 1:
        den = np.abs(np.sin(theta) + alpha.imag)
    else:
        den = np.abs(np.imag((alpha + 1.0) * np.exp(1j * theta)))
    return num / den


def ac_density(theta, family: int, alpha: complex):
    """Absolutely continuous density w(theta); dmu = w dtheta / (2 pi) on the band.

    family 1: sqrt(rho^2 - cos^2) / |sin theta + Im a|
    family 2: sqrt(rho^2 - cos^2) / |Im((b + 1) e^{i theta})|
    """
    _check_family(family)
    alpha = complex(alpha)
    th = np.asarray(theta, dtype=float)
    if np.any(np.abs(np.cos(th)) >= _rho(alpha)):
        raise OutsideSupport(f"theta outside the band |cos theta| < {_rho(alpha):.6g}")
    w = _density(th, family, alpha)
    return float(w) if w.ndim == 0 else w


@lru_cache(maxsize=32)
def _gauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def band_quadrature(alpha: complex, n: int) -> tuple[NDArray, NDArray]:
    """Nodes and weights for integrals d theta over the band, n nodes per arc.

    Each arc [lo, hi] is mapped by theta = mid - half * cos(u), u in [0, pi],
    and Gauss-Legendre is applied in u.  The Jacobian half * sin(u) cancels
    the inverse square-root edge singularity the density develops when an
    atom merges into a band edge, and smooths the square-root edges.
    """
    x, w = _gauss(n)
    u = 0.5 * math.pi * (x + 1.0)
    nodes, weights = [], []
    for lo, hi in band_edges(alpha):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        nodes.append(mid - half * np.cos(u))
        weights.append(w * 0.5 * math.pi * half * np.sin(u))
    return np.concatenate(nodes), np.concatenate(weights)


def integrate_band(f, family: int, alpha: complex, tol: float = QUAD_TOL,
                   n_start: int = 32, n_max: int = 4096):
    """(1/2pi) * integral over the band of f(theta) * w(theta) d theta.

    ``f`` maps an array of angles to an array whose leading axis matches
    (extra trailing axes are integrated elementwise).  Node counts double
    until successive results agree within ``tol``.
    """
    _check_family(family)
    alpha = complex(alpha)
    prev = None
    n = n_start
    while n <= n_max:
        th, wt = band_quadrature(alpha, n)
        vals = np.asarray(f(th))
        weight = wt * _density(th, family, alpha) / (2.0 * math.pi)
        cur = np.tensordot(weight, vals, axes=(0, 0))
        if prev is not None and np.max(np.abs(cur - prev)) <= tol:
            return cur
        prev = cur
        n *= 2
    raise QuadratureNonconvergence(f"band integral not stable to {tol} with {n_max} nodes per arc")


def m_of_b(b: complex) -> float:
    """Total point mass of the null-even family:
    {1 + sgn(|b|^2 + Re b)} * |(|b|^2 + Re b) / (1 + b)^2|."""
    b = complex(b)
    q = abs(b) ** 2 + b.real
    return (1.0 + float(np.sign(q))) * abs(q / (1.0 + b) ** 2)


def atoms(family: int, alpha: complex) -> list[tuple[float, float]]:
    """Point masses (theta0, m0), theta0 in [-pi, pi), sorted by angle.

    Family 1 has one atom with sin(theta0) = -Im a on the side cos(theta0)
    ~ sgn(Re a) and mass |Re a| / sqrt(1 - Im^2 a).  Family 2 has two
    antipodal atoms where Im((b + 1) e^{i theta}) = 0, each of mass M(b)/2.
    Masses below 1e-8 are dropped.
    """
    _check_family(family)
    alpha = complex(alpha)
    _rho(alpha)
    out = []
    if family == 1:
        c = math.sqrt(1.0 - alpha.imag ** 2)
        m0 = abs(alpha.real) / c
        if m0 >= ATOM_TOL:
            theta0 = math.atan2(-alpha.imag, math.copysign(c, alpha.real))
            out.append((_wrap(theta0), m0))
    else:
        M = m_of_b(alpha)
        if M >= ATOM_TOL:
            t0 = -math.atan2(alpha.imag, 1.0 + alpha.real)
            out.extend([(_wrap(t0), M / 2.0), (_wrap(t0 + math.pi), M / 2.0)])
    return sorted(out)


def _wrap(theta: float) -> float:
    w = (theta + math.pi) % (2.0 * math.pi) - math.pi
    # round-off can land a hair below +pi; fold it onto -pi
    return -math.pi if math.isclose(w, math.pi, abs_tol=1e-15) else w


def atom_mass_radial(theta0: float, family: int, alpha: complex,
                     steps=(1e-3, 1e-4, 1e-5)) -> float:
    """lim_{r -> 1} (1 - r)/2 * F(r e^{i theta0}) by Richardson extrapolation in 1 - r."""
    h = np.asarray(steps, dtype=float)
    vals = [0.5 * hk * caratheodory((1.0 - hk) * np.exp(1j * theta0), family, alpha) for hk in h]
    # Neville extrapolation of the interpolating polynomial to h = 0
    p = list(vals)
    for k in range(1, len(h)):
        for i in range(len(h) - k):
            p[i] = (h[i] * p[i + 1] - h[i + k] * p[i]) / (h[i] - h[i + k])
    mass = p[0]
    if abs(mass) < ATOM_TOL:
        raise NoAtom(f"no point mass at theta = {theta0:.6g}")
    return float(mass.real)


def laurent_row(l_max: int, z, family: int, alpha: complex) -> NDArray:
    """Array [l, ...] of x_l(z) (family 1) or chi_l(z) (family 2) for l <= l_max."""
    poly = x_hat if _check_family(family) == 1 else chi
    z = np.asarray(z, dtype=complex)
    return np.array([np.broadcast_to(poly(l, z, alpha), z.shape) for l in range(l_max + 1)])


def moment_table(t_max: int, l_max: int, family: int, alpha: complex,
                 tol: float = QUAD_TOL) -> NDArray:
    """Spectral moments M[t, l, m] for t <= t_max and l, m <= l_max.

    family 1: integral z^t x_l conj(x_m) d mu
    family 2: integral z^t conj(chi_l) chi_m d mu
    Each entry equals (C^t)_{l,m} of the corresponding CMV matrix.
    """
    alpha = complex(alpha)
    ts = np.arange(t_max + 1)

    def kernel(z, P):
        # P has shape [l, k]; returns [k, t, l, m]
        if family == 1:
            pair = P[:, None, :] * np.conj(P)[None, :, :]
        else:
            pair = np.conj(P)[:, None, :] * P[None, :, :]
        zt = z[None, :] ** ts[:, None]
        return np.einsum("tk,lmk->ktlm", zt, pair)

    def integrand(theta):
        z = np.exp(1j * theta)
        return kernel(z, laurent_row(l_max, z, family, alpha))

    out = integrate_band(integrand, family, alpha, tol=tol)
    for theta0, m0 in atoms(family, alpha):
        z0 = np.array([np.exp(1j * theta0)])
        out = out + m0 * kernel(z0, laurent_row(l_max, z0, family, alpha))[0]
    return out


def moment_integral(t: int, l: int, m: int, family: int, alpha: complex) -> complex:
    return complex(moment_table(t, max(l, m), family, alpha)[t, l, m])


@dataclass(frozen=True)
class SpectralMeasure:
    """Absolutely continuous samples on a quadrature grid plus point masses."""

    family: int
    alpha: complex
    theta: NDArray[np.float64] = field(repr=False)
    w: NDArray[np.float64] = field(repr=False)
    quad_weights: NDArray[np.float64] = field(repr=False)
    atoms: tuple[tuple[float, float], ...] = ()

    @property
    def ac_samples(self) -> list[tuple[float, float]]:
        return list(zip(self.theta.tolist(), self.w.tolist()))

    def ac_mass(self) -> float:
        return float(np.dot(self.quad_weights, self.w) / (2.0 * math.pi))

    def total_mass(self) -> float:
        return self.ac_mass() + sum(m for _, m in self.atoms)

    def to_json(self) -> dict:
        order = np.argsort(self.theta, kind="stable")
        return {
            "family": self.family,
            "alpha": [self.alpha.real, self.alpha.imag],
            "ac": [{"theta": float(self.theta[i]), "w": float(self.w[i])} for i in order],
            "atoms": [{"theta": float(t), "mass": float(m)} for t, m in self.atoms],
            "total_mass": self.total_mass(),
        }


def spectral_measure(family: int, alpha: complex, samples: int = 256) -> SpectralMeasure:
    """Sample the measure on ``samples`` nodes per band arc."""
    _check_family(family)
    alpha = complex(alpha)
    th, wt = band_quadrature(alpha, samples)
    return SpectralMeasure(family, alpha, th, _density(th, family, alpha), wt,
                           tuple(atoms(family, alpha)))
