"""
Quantum coins for half-line walks and the scalars derived from them.

Storage order
-------------
A coin is stored as the 2x2 matrix acting on the direction basis
(|R>, |L>) with row = outgoing direction and column = incoming direction::

    [[c_RR, c_RL],
     [c_LR, c_LL]]

so that one step sends |x,R> to c_RR|x+1,R> + c_LR|x-1,L> and |x,L> to
c_RL|x+1,R> + c_LL|x-1,L>.  With this order the real coin
``real_coin(alpha)`` reduces a Type I walk exactly to the CMV matrix with
Verblunsky coefficients (alpha, 0, alpha, 0, ...).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.typing import NDArray

from .errors import DegenerateCoin, NonUnitary

__all__ = [
    "QuantumCoin",
    "CoinParams",
    "validate",
    "extract_params",
    "hadamard",
    "real_coin",
    "haar_coin",
    "parse_complex",
    "parse_coin_spec",
]

UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class QuantumCoin:
    c_RR: complex
    c_RL: complex
    c_LR: complex
    c_LL: complex

    @classmethod
    def from_matrix(cls, m) -> "QuantumCoin":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"coin must be 2x2, got shape {m.shape}")
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    @property
    def matrix(self) -> NDArray[np.complex128]:
        return np.array([[self.c_RR, self.c_RL], [self.c_LR, self.c_LL]], dtype=complex)

    def gram_deviation(self) -> float:
        m = self.matrix
        return float(np.abs(m.conj().T @ m - np.eye(2)).max())


@dataclass(frozen=True)
class CoinParams:
    """Scalars extracted from a coin and the Type II reflection phase.

    ``a`` and ``b`` are the Verblunsky scalars of the Type I and Type II
    walks; ``sqrt_Delta`` is the branch exp(i(sigma_R + sigma_L)/2).
    """

    rho: float
    sigma_R: float
    sigma_L: float
    Delta: complex
    sqrt_Delta: complex
    a: complex
    b: complex
    phi: float
    psi: float
    gamma: float


def validate(coin: QuantumCoin, tol: float = UNITARY_TOL) -> QuantumCoin:
    """Return ``coin`` unchanged if unitary within ``tol``, else raise NonUnitary."""
    dev = coin.gram_deviation()
    if not dev <= tol:
        raise NonUnitary(dev)
    return coin


def extract_params(coin: QuantumCoin, gamma: float = 0.0, tol: float = UNITARY_TOL) -> CoinParams:
    """Derive rho, the phases, Delta and the Verblunsky scalars a, b.

    Arguments use numpy's principal range (-pi, pi].  A coin with
    c_RR = 0 has no defined sigma_R, sigma_L and raises DegenerateCoin; a
    coin with c_LR = 0 is fine and yields a = b = 0.
    """
    validate(coin, tol)
    if abs(coin.c_RR) == 0.0 or abs(coin.c_LL) == 0.0:
        raise DegenerateCoin("c_RR = 0: sigma_R and sigma_L are undefined")
    rho = abs(coin.c_RR)
    sigma_R = cmath.phase(coin.c_RR)
    sigma_L = cmath.phase(coin.c_LL)
    Delta = cmath.exp(1j * (sigma_R + sigma_L))
    sqrt_Delta = cmath.exp(0.5j * (sigma_R + sigma_L))
    a = coin.c_LR.conjugate() * sqrt_Delta
    b = coin.c_LR.conjugate() * Delta * cmath.exp(-1j * gamma)
    return CoinParams(
        rho=rho,
        sigma_R=sigma_R,
        sigma_L=sigma_L,
        Delta=Delta,
        sqrt_Delta=sqrt_Delta,
        a=a,
        b=b,
        phi=0.5 * (sigma_R - sigma_L),
        psi=sigma_R - gamma,
        gamma=float(gamma),
    )


def hadamard() -> QuantumCoin:
    s = 1.0 / math.sqrt(2.0)
    return QuantumCoin(s, s, s, -s)


def real_coin(alpha: complex) -> QuantumCoin:
    """The coin [[rho, -alpha], [conj(alpha), rho]] with rho = sqrt(1 - |alpha|^2)."""
    alpha = complex(alpha)
    if abs(alpha) > 1.0:
        raise ValueError(f"|alpha| must be <= 1, got {abs(alpha)}")
    rho = math.sqrt(max(0.0, 1.0 - abs(alpha) ** 2))
    return QuantumCoin(rho, -alpha, alpha.conjugate(), rho)


def haar_coin(rng: np.random.Generator) -> QuantumCoin:
    """Haar-random U(2) coin (QR of a complex Ginibre matrix, phase-fixed)."""
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return QuantumCoin.from_matrix(q * (d / np.abs(d)))


def parse_complex(text: str) -> complex:
    """Parse a real or complex literal; the imaginary unit may be written i or j,
    and a real value may be a fraction such as ``-1/3``."""
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        if "/" in t and "j" not in t:
            return complex(float(Fraction(t)))
        return complex(t)
    except ValueError:
        raise ValueError(f"not a complex number: {text!r}") from None


def parse_coin_spec(spec: str) -> QuantumCoin:
    """Parse ``hadamard``, ``real:<alpha>`` or ``matrix:<re>,<im>;...`` (row-major).

    ``real:`` accepts a real or complex literal, e.g. ``real:0.6`` or
    ``real:0.3+0.4i``.
    """
    spec = spec.strip()
    kind, _, rest = spec.partition(":")
    kind = kind.lower()
    if kind == "hadamard" and not rest:
        return hadamard()
    if kind == "real":
        alpha = parse_complex(rest)
        if not abs(alpha) < 1.0 + 1e-15:
            raise ValueError(f"real coin needs |alpha| <= 1, got {rest!r}")
        return real_coin(alpha)
    if kind == "matrix":
        parts = [p for p in rest.split(";") if p.strip()]
        if len(parts) != 4:
            raise ValueError(f"matrix coin needs 4 entries, got {len(parts)}")
        entries = []
        for p in parts:
            re_im = p.split(",")
            if len(re_im) != 2:
                raise ValueError(f"matrix entry must be <re>,<im>: {p!r}")
            entries.append(complex(float(re_im[0]), float(re_im[1])))
        return QuantumCoin(*entries)
    raise ValueError(f"unknown coin spec {spec!r}")
