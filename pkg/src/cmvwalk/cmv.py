"""
CMV matrices built from Verblunsky sequences.

The semi-infinite CMV matrix is five-diagonal.  With the convention
alpha_{-1} = -1 (so rho_{-1} = 0) every pair of rows k >= 0 follows one
pattern::

    row 2k   : col 2k-1  rho_{2k-1} conj(a_{2k})   col 2k  -a_{2k-1} conj(a_{2k})
               col 2k+1  rho_{2k}   conj(a_{2k+1}) col 2k+2 rho_{2k} rho_{2k+1}
    row 2k+1 : col 2k-1  rho_{2k-1} rho_{2k}        col 2k  -a_{2k-1} rho_{2k}
               col 2k+1 -a_{2k} conj(a_{2k+1})      col 2k+2 -a_{2k} rho_{2k+1}

An N x N truncation is exact on columns m with m + 2 < N; its last rows and
columns are not unitary and callers mask them.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from numpy.typing import NDArray

from .coin import QuantumCoin, extract_params
from .errors import DimensionMismatch, InvalidVerblunsky, TruncationOverflow

__all__ = [
    "VerblunskySeq",
    "null_odd",
    "null_even",
    "explicit",
    "CmvMatrix",
    "build",
    "apply",
    "apply_left",
    "power_entry",
    "walk_verblunsky",
    "walk_phases",
    "walk_matrix",
    "rotate_verblunsky",
    "rotated_atom_angle",
    "locate_atoms",
    "wrap_angle",
]


def wrap_angle(theta: float) -> float:
    """Map an angle to [-pi, pi)."""
    return (theta + math.pi) % (2.0 * math.pi) - math.pi


@dataclass(frozen=True)
class VerblunskySeq:
    """Verblunsky coefficients alpha_j, optionally rotated.

    ``kind`` is one of ``null_odd`` (a, 0, a, 0, ...), ``null_even``
    (0, b, 0, b, ...) or ``explicit`` (a finite list, zero beyond it).  A
    nonzero ``rotation`` w multiplies alpha_j by exp(i (j+1) w).
    """

    kind: str
    value: complex = 0j
    coeffs: tuple[complex, ...] = ()
    rotation: float = 0.0

    def __post_init__(self):
        if self.kind not in ("null_odd", "null_even", "explicit"):
            raise ValueError(f"unknown Verblunsky family {self.kind!r}")

    def _base(self, j: int) -> complex:
        if self.kind == "null_odd":
            return self.value if j % 2 == 0 else 0j
        if self.kind == "null_even":
            return self.value if j % 2 == 1 else 0j
        return complex(self.coeffs[j]) if j < len(self.coeffs) else 0j

    def alpha(self, j: int) -> complex:
        if j < 0:
            raise IndexError("Verblunsky index must be >= 0")
        a = self._base(j)
        if self.rotation and a:
            a *= cmath.exp(1j * (j + 1) * self.rotation)
        return a

    def rho(self, j: int) -> float:
        return math.sqrt(max(0.0, 1.0 - abs(self.alpha(j)) ** 2))

    def array(self, n: int) -> NDArray[np.complex128]:
        return np.array([self.alpha(j) for j in range(n)], dtype=complex)


def null_odd(a: complex) -> VerblunskySeq:
    return VerblunskySeq("null_odd", complex(a))


def null_even(b: complex) -> VerblunskySeq:
    return VerblunskySeq("null_even", complex(b))


def explicit(coeffs) -> VerblunskySeq:
    return VerblunskySeq("explicit", coeffs=tuple(complex(c) for c in coeffs))


def _bands(alphas: NDArray, N: int) -> NDArray:
    """Five diagonals of the N x N truncation; bands[k, r] = C[r, r + k - 2]."""
    al = np.concatenate(([-1.0 + 0j], alphas))  # al[j + 1] = alpha_j
    rh = np.sqrt(np.clip(1.0 - np.abs(al) ** 2, 0.0, None))
    A = lambda j: al[j + 1]
    P = lambda j: rh[j + 1]
    B = np.zeros((5, N), dtype=complex)
    for k in range((N + 1) // 2):
        r = 2 * k
        B[1, r] = P(r - 1) * np.conj(A(r))
        B[2, r] = -A(r - 1) * np.conj(A(r))
        B[3, r] = P(r) * np.conj(A(r + 1))
        B[4, r] = P(r) * P(r + 1)
        if r + 1 < N:
            B[0, r + 1] = P(r - 1) * P(r)
            B[1, r + 1] = -A(r - 1) * P(r)
            B[2, r + 1] = -A(r) * np.conj(A(r + 1))
            B[3, r + 1] = -A(r) * P(r + 1)
    # drop entries whose column falls outside the truncation
    for k in range(5):
        off = k - 2
        if off > 0:
            B[k, N - off:] = 0.0
    return B


@dataclass(frozen=True)
class CmvMatrix:
    seq: VerblunskySeq
    N: int
    bands: NDArray[np.complex128] = field(repr=False, compare=False)

    def entry(self, r: int, c: int) -> complex:
        k = c - r + 2
        if not (0 <= r < self.N and 0 <= c < self.N) or not 0 <= k < 5:
            return 0j
        return complex(self.bands[k, r])

    def row(self, r: int) -> dict[int, complex]:
        """Nonzero pattern of row r as {column: value}."""
        return {r + k - 2: complex(self.bands[k, r]) for k in range(5)
                if 0 <= r + k - 2 < self.N and self.bands[k, r] != 0}

    def to_dense(self) -> NDArray[np.complex128]:
        out = np.zeros((self.N, self.N), dtype=complex)
        for k in range(5):
            off = k - 2
            r = np.arange(max(0, -off), min(self.N, self.N - off))
            out[r, r + off] = self.bands[k, r]
        return out

    @cached_property
    def sparse(self) -> sp.csr_matrix:
        offsets = list(range(-2, 3))
        # dia_matrix stores data[k, c] = A[c - offset, c]
        data = np.zeros((5, self.N), dtype=complex)
        for k, off in enumerate(offsets):
            r = np.arange(max(0, -off), min(self.N, self.N - off))
            data[k, r + off] = self.bands[k, r]
        return sp.dia_matrix((data, offsets), shape=(self.N, self.N)).tocsr()


def build(seq: VerblunskySeq, N: int, unitary_cap: bool = False) -> CmvMatrix:
    """N x N truncation of the CMV matrix of ``seq``.

    With ``unitary_cap`` the coefficient alpha_{N-1} is pushed to the unit
    circle (alpha / |alpha|, or 1 if zero), which makes the truncation an
    exactly unitary matrix.
    """
    if N < 6:
        raise ValueError("CMV truncation needs N >= 6")
    alphas = seq.array(N + 1)
    bad = np.flatnonzero(np.abs(alphas[: N - 1 if unitary_cap else N + 1]) >= 1.0)
    if bad.size:
        j = int(bad[0])
        raise InvalidVerblunsky(f"|alpha_{j}| = {abs(alphas[j])} >= 1")
    if unitary_cap:
        a = alphas[N - 1]
        alphas = alphas.copy()
        alphas[N - 1] = a / abs(a) if abs(a) > 0 else 1.0
    return CmvMatrix(seq, N, _bands(alphas, N))


def apply(C: CmvMatrix, v) -> NDArray[np.complex128]:
    """C @ v by banded multiplication."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (C.N,):
        raise DimensionMismatch(f"vector of length {v.shape} for a {C.N}x{C.N} matrix")
    vp = np.concatenate((np.zeros(2), v, np.zeros(2)))
    out = np.zeros(C.N, dtype=complex)
    for k in range(5):
        out += C.bands[k] * vp[k:k + C.N]
    return out


def apply_left(v, C: CmvMatrix) -> NDArray[np.complex128]:
    """Row vector times matrix, v @ C."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (C.N,):
        raise DimensionMismatch(f"vector of length {v.shape} for a {C.N}x{C.N} matrix")
    acc = np.zeros(C.N + 4, dtype=complex)
    for k in range(5):
        acc[k:k + C.N] += v * C.bands[k]
    return acc[2:C.N + 2]


def power_entry(C: CmvMatrix, t: int, l: int, m: int) -> complex:
    """(C^t)_{l,m} of the semi-infinite matrix via t banded products on e_m."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if m + 2 * t >= C.N - 1 or l >= C.N:
        raise TruncationOverflow(f"(C^{t})[{l},{m}] needs N > {max(m + 2 * t + 1, l)}, have {C.N}")
    v = np.zeros(C.N, dtype=complex)
    v[m] = 1.0
    for _ in range(t):
        v = apply(C, v)
    return complex(v[l])


def walk_verblunsky(coin: QuantumCoin, gamma: float, walk_type: int) -> VerblunskySeq:
    """Verblunsky sequence of the CMV matrix conjugate to W^{(J,U)}.

    Type I: a_j = a sqrt(Delta)^{-(j+1)} on even j.
    Type II: b_j = b (exp(-i gamma) sqrt(Delta))^{-(j+1)} on odd j.
    """
    p = extract_params(coin, gamma)
    half = 0.5 * (p.sigma_R + p.sigma_L)
    if walk_type == 1:
        return rotate_verblunsky(null_odd(p.a), -half)
    if walk_type == 2:
        return rotate_verblunsky(null_even(p.b), gamma - half)
    raise ValueError(f"walk_type must be 1 or 2, got {walk_type!r}")


def walk_phases(coin: QuantumCoin, gamma: float, walk_type: int, N: int) -> NDArray[np.complex128]:
    """Diagonal of the phase matrix Lambda_J (length N)."""
    p = extract_params(coin, gamma)
    lam = np.empty(N, dtype=complex)
    for j in range(N):
        if walk_type == 1:
            lam[j] = (cmath.exp(-1j * (j // 2) * p.sigma_R) if j % 2 == 0
                      else cmath.exp(1j * ((j + 1) // 2) * p.sigma_L))
        else:
            lam[j] = (cmath.exp(-1j * (j // 2) * (p.sigma_L - gamma)) if j % 2 == 0
                      else cmath.exp(1j * ((j - 1) // 2) * (p.sigma_R - gamma)))
    return lam


def walk_matrix(coin: QuantumCoin, gamma: float, walk_type: int, N: int) -> NDArray[np.complex128]:
    """Dense N x N walk operator rebuilt from its CMV matrix.

    Type I:  W = Lambda^* C^T Lambda
    Type II: W = e^{i gamma} Lambda C Lambda^*
    """
    seq = walk_verblunsky(coin, gamma, walk_type)
    C = build(seq, N).to_dense()
    lam = walk_phases(coin, gamma, walk_type, N)
    if walk_type == 1:
        return lam.conj()[:, None] * C.T * lam[None, :]
    return cmath.exp(1j * gamma) * lam[:, None] * C * lam.conj()[None, :]


def rotate_verblunsky(seq: VerblunskySeq, w: float) -> VerblunskySeq:
    """alpha_j -> alpha_j exp(i (j+1) w).

    The spectral measure rotates by -w: a point mass at angle theta moves
    to theta - w (see ``rotated_atom_angle``).
    """
    return replace(seq, rotation=seq.rotation + w)


def rotated_atom_angle(theta: float, w: float) -> float:
    return wrap_angle(theta - w)


def locate_atoms(seq: VerblunskySeq, N: int = 200, tail_tol: float = 1e-8,
                 mass_tol: float = 1e-8) -> list[tuple[float, float]]:
    """Point masses of the spectral measure of ``seq`` at e_0.

    Uses the unitary-capped N x N truncation: eigenvectors whose weight on
    the back half of the basis is below ``tail_tol`` are bound states of the
    semi-infinite matrix, and their eigenvalues are exact up to a tail that
    decays geometrically in N.  Returns (angle in [-pi, pi), mass) pairs.
    """
    C = build(seq, N, unitary_cap=True).to_dense()
    T, Q = scipy.linalg.schur(C, output="complex")
    ev = np.diag(T)
    mass = np.abs(Q[0, :]) ** 2
    tail = np.sum(np.abs(Q[N // 2:, :]) ** 2, axis=0)
    found = [(wrap_angle(float(np.angle(z))), float(m))
             for z, m, tl in zip(ev, mass, tail) if tl < tail_tol and m > mass_tol]
    return sorted(found)
