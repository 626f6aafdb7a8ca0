"""
Closed-form long-time behaviour of the half-line walks.

Only the point masses of the spectral measure survive as t -> infinity, so
every limit here is assembled from the atoms of the null-odd (Type I) or
null-even (Type II) family.

Type II atoms come in an antipodal pair z0, -z0, whose contributions
interfere with sign (-1)^t.  Its probabilities therefore converge only
along the subsequence with x + t even (the other parity is exactly zero).
``LimitDistribution.p`` holds these subsequence values; the time-averaged
(Cesaro) value is half of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .coin import QuantumCoin, extract_params, real_coin
from .errors import NoAtoms
from .laurent import chi, x_hat
from .spectral import atoms, m_of_b

__all__ = [
    "LimitDistribution",
    "nu_I",
    "nu_II",
    "m_of_b",
    "limit_dist_I",
    "limit_dist_II",
    "localized_I",
    "localized_II",
    "tree_b",
    "tree_coin",
    "tree_limit",
    "atom_total",
    "p0_limit",
    "asymptotic_passage",
]

ZERO_TOL = 1e-12


@dataclass(frozen=True)
class LimitDistribution:
    """Limit probabilities p[x] for x = 0..xmax.

    ``localized_mass`` is the exact (untruncated) probability that stays
    near the origin at a single large time; ``escape_mass`` is its
    complement.  For Type II (``parity_resolved``) p[x] is the limit along
    times t with x + t even, and only one parity class is occupied at a time.
    """

    walk_type: int
    parity_resolved: bool
    p: NDArray[np.float64] = field(repr=False)
    localized_mass: float

    @property
    def escape_mass(self) -> float:
        return 1.0 - self.localized_mass

    @property
    def xmax(self) -> int:
        return self.p.size - 1

    def at_time(self, t: int) -> NDArray[np.float64]:
        """Limit profile at large times of the given parity (zeroes the wrong parity)."""
        if not self.parity_resolved:
            return self.p.copy()
        x = np.arange(self.p.size)
        return np.where((x + t) % 2 == 0, self.p, 0.0)

    @property
    def cesaro(self) -> NDArray[np.float64]:
        """Time-averaged limit."""
        return self.p / 2.0 if self.parity_resolved else self.p.copy()

    def to_json(self) -> dict:
        return {
            "walk_type": self.walk_type,
            "parity_resolved": self.parity_resolved,
            "p": [{"x": int(x), "probability": float(v)} for x, v in enumerate(self.p)],
            "localized_mass": self.localized_mass,
            "escape_mass": self.escape_mass,
        }


def _frozen(p: NDArray) -> NDArray:
    p = np.asarray(p, dtype=float)
    p.flags.writeable = False
    return p


def _check_xmax(xmax: int) -> int:
    if xmax < 0:
        raise ValueError("xmax must be >= 0")
    return xmax


def nu_I(a: complex) -> float:
    """sgn(Re a) / rho * (sqrt(1 - Im^2 a) - |Re a|); zero when Re a = 0."""
    a = complex(a)
    if not abs(a) < 1.0:
        raise ValueError("need |a| < 1")
    rho = math.sqrt(1.0 - abs(a) ** 2)
    return float(np.sign(a.real)) / rho * (math.sqrt(1.0 - a.imag ** 2) - abs(a.real))


def nu_II(b: complex) -> float:
    """sqrt(1 - |b|^2) / |1 + b|."""
    b = complex(b)
    if not abs(b) < 1.0:
        raise ValueError("need |b| < 1")
    return math.sqrt(1.0 - abs(b) ** 2) / abs(1.0 + b)


def _overlap_I(a: complex, phi: float, alpha0: complex, beta0: complex) -> complex:
    return alpha0 * np.exp(0.5j * phi) + beta0 * np.exp(-0.5j * phi) * nu_I(a)


def _check_init(alpha0: complex, beta0: complex) -> None:
    if abs(abs(alpha0) ** 2 + abs(beta0) ** 2 - 1.0) > 1e-10:
        raise ValueError("need |alpha0|^2 + |beta0|^2 = 1")


def limit_dist_I(a: complex, phi: float = 0.0, alpha0: complex = 1.0, beta0: complex = 0.0,
                 xmax: int = 20) -> LimitDistribution:
    """Type I limit p(x) = Re^2 a / (1 - Im^2 a) |alpha e^{i phi/2} + beta e^{-i phi/2} nu|^2 (1 + nu^2) nu^{2x}."""
    a = complex(a)
    _check_init(alpha0, beta0)
    nu = nu_I(a)
    K = a.real ** 2 / (1.0 - a.imag ** 2) * abs(_overlap_I(a, phi, alpha0, beta0)) ** 2
    x = np.arange(_check_xmax(xmax) + 1)
    p = K * (1.0 + nu * nu) * (nu * nu) ** x
    total = K * (1.0 + nu * nu) / (1.0 - nu * nu)
    return LimitDistribution(1, False, _frozen(p), float(total))


def localized_I(a: complex, phi: float = 0.0, alpha0: complex = 1.0, beta0: complex = 0.0) -> bool:
    """Re a != 0 and alpha e^{i phi/2} + beta e^{-i phi/2} nu != 0."""
    a = complex(a)
    return abs(a.real) > ZERO_TOL and abs(_overlap_I(a, phi, alpha0, beta0)) > ZERO_TOL


def limit_dist_II(b: complex, xmax: int = 20) -> LimitDistribution:
    """Type II subsequence limit: p(0) = M^2, p(x) = M^2 (1 + 1/nu^2) nu^{2x} for x >= 1.

    Independent of the initial phase.  The mass present at one time equals M(b).
    """
    b = complex(b)
    x = np.arange(_check_xmax(xmax) + 1)
    if not localized_II(b):
        return LimitDistribution(2, True, _frozen(np.zeros(x.size)), 0.0)
    M = m_of_b(b)
    nu2 = nu_II(b) ** 2
    p = M * M * (1.0 + 1.0 / nu2) * nu2 ** x
    p[0] = M * M
    # per parity class: M^2 / (1 - nu^2), and 1 - nu^2 = M whenever M > 0
    return LimitDistribution(2, True, _frozen(p), float(M * M / (1.0 - nu2)))


def localized_II(b: complex) -> bool:
    """|b|^2 + Re b > 0, i.e. b outside the closed disk |b + 1/2| <= 1/2."""
    b = complex(b)
    if not abs(b) < 1.0:
        raise ValueError("need |b| < 1")
    return abs(b) ** 2 + b.real > ZERO_TOL


def _check_kappa(kappa: int) -> int:
    if int(kappa) != kappa or kappa < 2:
        raise ValueError(f"kappa must be an integer >= 2, got {kappa!r}")
    return int(kappa)


def tree_b(kappa: int, case: str) -> float:
    """Case A: b = 2/kappa - 1; case B: b = 1 - 2/kappa."""
    kappa = _check_kappa(kappa)
    case = case.upper()
    if case not in ("A", "B"):
        raise ValueError(f"case must be 'A' or 'B', got {case!r}")
    b = 2.0 / kappa - 1.0
    return b if case == "A" else -b


def tree_coin(kappa: int, case: str) -> tuple[QuantumCoin, float]:
    """Coin and reflection phase of the Type II walk that reproduces the tree walk.

    Both cases use the real coin C(2/kappa - 1); case B adds gamma = pi,
    which flips the sign of b.
    """
    tree_b(kappa, case)
    return real_coin(2.0 / kappa - 1.0), (0.0 if case.upper() == "A" else math.pi)


def atom_total(kappa: int) -> float:
    """Total point mass (kappa - 2) / (kappa - 1) of the case-B tree measure."""
    kappa = _check_kappa(kappa)
    return (kappa - 2) / (kappa - 1)


def p0_limit(kappa: int, case: str = "B") -> float:
    """Limit return probability; equals atom_total(kappa)**2 in case B, 0 in case A."""
    return m_of_b(tree_b(kappa, case)) ** 2


def tree_limit(kappa: int, case: str, xmax: int = 20) -> LimitDistribution:
    return limit_dist_II(tree_b(kappa, case), xmax)


def _D(theta: float) -> NDArray:
    return np.diag([np.exp(0.5j * theta), np.exp(-0.5j * theta)])


def asymptotic_passage(k: int, t: int, walk_type: int, coin: QuantumCoin,
                       gamma: float = 0.0) -> NDArray[np.complex128]:
    """Atom contribution to the passage weight Xi_{k,0}(t) from the origin to site k.

    Rows index the final direction and columns the initial one, each in the
    order (R, L); at the Type I origin R means the self-loop state S, and the
    nonexistent Type II label (0, R) gives zero entries.  The block is

        D(theta)^* B(t) D(theta),  B[d1, d2] = sum over atoms m0 z0^t P_{y,d2} conj(P_{k,d1})

    with P the Laurent polynomials at z0 (conjugation order swapped for
    Type II) and theta = phi (Type I) or psi (Type II).  The global factor
    of unit modulus that multiplies the exact passage weight is stripped.
    ``t`` only matters through the relative sign of the two Type II atoms.
    Raises NoAtoms when the spectral measure is purely continuous.
    """
    if walk_type not in (1, 2):
        raise ValueError(f"walk_type must be 1 or 2, got {walk_type!r}")
    if k < 0 or t < 0:
        raise ValueError("k and t must be nonnegative")
    prm = extract_params(coin, gamma)
    family = walk_type
    alpha = prm.a if walk_type == 1 else prm.b
    found = atoms(family, alpha)
    if not found:
        raise NoAtoms(f"no point masses for alpha = {alpha}")

    def idx(x, d):
        if walk_type == 1:
            return 2 * x + d
        if x == 0:
            return 0 if d == 1 else None
        return 2 * x - 1 + d

    B = np.zeros((2, 2), dtype=complex)
    for theta0, m0 in found:
        z0 = np.exp(1j * theta0)
        for d1 in (0, 1):
            l = idx(k, d1)
            for d2 in (0, 1):
                m = idx(0, d2)
                if l is None or m is None:
                    continue
                if walk_type == 1:
                    val = x_hat(m, z0, alpha) * np.conj(x_hat(l, z0, alpha))
                else:
                    val = np.conj(chi(l, z0, alpha)) * chi(m, z0, alpha)
                B[d1, d2] += m0 * z0 ** t * val
    theta = prm.phi if walk_type == 1 else prm.psi
    return _D(theta).conj() @ B @ _D(theta)
