"""
Direct simulation of Type I and Type II quantum walks on a truncated half line.

Basis enumeration (flat amplitude index):

* Type I  : (0,S) -> 0, (0,L) -> 1, (k,R) -> 2k, (k,L) -> 2k+1
* Type II : (0,L) -> 0, (k,R) -> 2k-1, (k,L) -> 2k

For Type I the self-loop state (0,S) occupies the R slot of site 0, so the
two walk types share the per-site view ``R[x], L[x]``.  At the origin the
Type I rules are

    W|0,S> = c_RR|1,R> + c_LR|0,S>,   W|0,L> = c_RL|1,R> + c_LL|0,S>,

i.e. everything leaving site 0 to the left re-enters through S.  This is the
unitary completion of the bulk rules and agrees with the CMV conjugation
identity entrywise.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray

from .coin import QuantumCoin, validate
from .errors import TruncationOverflow

__all__ = [
    "WalkState",
    "PassageWeight",
    "initial_state",
    "basis_state",
    "basis_index",
    "step",
    "evolve",
    "distribution",
    "time_average",
    "passage_weight",
    "walk_operator",
    "sites_for",
]

NORM_TOL = 1e-10
GUARD_TOL = 1e-12


def _check_type(walk_type: int) -> int:
    if walk_type not in (1, 2):
        raise ValueError(f"walk_type must be 1 or 2, got {walk_type!r}")
    return walk_type


def sites_for(steps: int) -> int:
    """Number of sites (0..steps+2) that holds ``steps`` steps exactly."""
    return steps + 3


def _size(walk_type: int, n_sites: int) -> int:
    return 2 * n_sites if walk_type == 1 else 2 * n_sites - 1


def basis_index(walk_type: int, x: int, d: int) -> int | None:
    """Flat index of (x, d) with d = 0 for R (S at the Type I origin), 1 for L.

    Returns None for labels that do not exist, i.e. (0,R) of Type II.
    """
    if x < 0 or d not in (0, 1):
        raise ValueError(f"bad basis label ({x}, {d})")
    if walk_type == 1:
        return 2 * x + d
    if x == 0:
        return 0 if d == 1 else None
    return 2 * x - 1 + d


@dataclass(frozen=True)
class WalkState:
    walk_type: int
    amplitudes: NDArray[np.complex128] = field(repr=False)

    def __post_init__(self):
        _check_type(self.walk_type)
        amp = np.array(self.amplitudes, dtype=complex)
        if amp.ndim != 1:
            raise ValueError("amplitudes must be a vector")
        if (self.walk_type == 1 and amp.size % 2) or (self.walk_type == 2 and amp.size % 2 == 0):
            raise ValueError(f"amplitude length {amp.size} does not fit a Type {self.walk_type} basis")
        norm = float(np.vdot(amp, amp).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: |psi|^2 = {norm}")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    @property
    def truncation_size(self) -> int:
        return self.amplitudes.size

    @property
    def n_sites(self) -> int:
        return (self.amplitudes.size + 1) // 2

    def sites(self) -> tuple[NDArray, NDArray]:
        """Per-site (R, L) amplitude arrays; Type II R[0] is identically 0."""
        amp = self.amplitudes
        if self.walk_type == 1:
            return amp[0::2], amp[1::2]
        R = np.concatenate(([0.0], amp[1::2]))
        L = amp[0::2]
        return R, L

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))


def _from_sites(walk_type: int, R: NDArray, L: NDArray) -> NDArray:
    n = R.size
    if walk_type == 1:
        out = np.empty(2 * n, dtype=complex)
        out[0::2] = R
        out[1::2] = L
    else:
        out = np.empty(2 * n - 1, dtype=complex)
        out[0::2] = L
        out[1::2] = R[1:]
    return out


def initial_state(walk_type: int, n_sites: int, alpha: complex = 1.0, beta: complex = 0.0,
                  delta: float = 0.0) -> WalkState:
    """Localized initial state at the origin.

    Type I: alpha|0,S> + beta|0,L> with |alpha|^2 + |beta|^2 = 1.
    Type II: exp(i delta)|0,L>.
    """
    _check_type(walk_type)
    if n_sites < 3:
        raise ValueError("need at least 3 sites")
    amp = np.zeros(_size(walk_type, n_sites), dtype=complex)
    if walk_type == 1:
        if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > NORM_TOL:
            raise ValueError("Type I initial coin state must satisfy |alpha|^2 + |beta|^2 = 1")
        amp[0], amp[1] = alpha, beta
    else:
        amp[0] = cmath.exp(1j * delta)
    return WalkState(walk_type, amp)


def basis_state(walk_type: int, n_sites: int, x: int, d: int) -> WalkState:
    idx = basis_index(walk_type, x, d)
    if idx is None:
        raise ValueError(f"label ({x}, {'RL'[d]}) does not exist for Type {walk_type}")
    amp = np.zeros(_size(walk_type, n_sites), dtype=complex)
    if idx >= amp.size:
        raise TruncationOverflow(f"site {x} outside a {n_sites}-site truncation")
    amp[idx] = 1.0
    return WalkState(walk_type, amp)


def _apply(walk_type: int, amp: NDArray, coin: QuantumCoin, gamma: float) -> NDArray:
    if walk_type == 1:
        R, L = amp[0::2], amp[1::2]
    else:
        R = np.concatenate(([0.0], amp[1::2]))
        L = amp[0::2]
    out_R = coin.c_RR * R + coin.c_RL * L
    out_L = coin.c_LR * R + coin.c_LL * L
    new_R = np.zeros_like(out_R)
    new_L = np.zeros_like(out_L)
    new_R[1:] = out_R[:-1]
    new_L[:-1] = out_L[1:]
    if walk_type == 1:
        new_R[0] = out_L[0]
    else:
        # site 0 holds only |0,L>, reflected to |1,R> with phase e^{i gamma}
        new_R[1] = cmath.exp(1j * gamma) * L[0]
    return _from_sites(walk_type, new_R, new_L)


def step(state: WalkState, coin: QuantumCoin, gamma: float = 0.0) -> WalkState:
    """One application of W^{(J,U)}.  Raises TruncationOverflow at the guard band."""
    amp = state.amplitudes
    if np.abs(amp[-2:]).max() >= GUARD_TOL:
        raise TruncationOverflow(
            f"amplitude {np.abs(amp[-2:]).max():.2e} in the guard band of a size-{amp.size} truncation"
        )
    return WalkState(state.walk_type, _apply(state.walk_type, amp, coin, gamma))


def evolve(initial: WalkState, coin: QuantumCoin, gamma: float = 0.0, t: int = 0) -> WalkState:
    validate(coin)
    if t < 0:
        raise ValueError("t must be nonnegative")
    state = initial
    for _ in range(t):
        state = step(state, coin, gamma)
    return state


def distribution(state: WalkState) -> NDArray[np.float64]:
    """P(X = x) for every retained site x."""
    R, L = state.sites()
    return np.abs(R) ** 2 + np.abs(L) ** 2


def time_average(initial: WalkState, coin: QuantumCoin, gamma: float, times) -> NDArray[np.float64]:
    """Mean of P(X_t = x) over the given times, from a single evolution.

    The initial state must have room for ``max(times)`` steps.
    """
    times = sorted(set(int(t) for t in times))
    if not times or times[0] < 0:
        raise ValueError("times must be a nonempty set of nonnegative integers")
    validate(coin)
    acc = np.zeros(initial.n_sites)
    state, now = initial, 0
    for t in times:
        state = evolve(state, coin, gamma, t - now)
        now = t
        acc += distribution(state)
    return acc / len(times)


@dataclass(frozen=True)
class PassageWeight:
    """<x,d1| W^t |y,d2> for d1, d2 in {R, L}; rows index d1, columns d2."""

    x: int
    y: int
    t: int
    block: NDArray[np.complex128] = field(repr=False)


def passage_weight(x: int, y: int, t: int, walk_type: int, coin: QuantumCoin,
                   gamma: float = 0.0) -> PassageWeight:
    """Total passage weight from site y to site x in t steps.

    Entries whose labels do not exist (the (0,R) slot of a Type II walk) are
    zero.  For Type I the R slot at the origin is the self-loop state S.
    """
    _check_type(walk_type)
    validate(coin)
    n_sites = max(x, y) + t + 3
    block = np.zeros((2, 2), dtype=complex)
    for d2 in (0, 1):
        if basis_index(walk_type, y, d2) is None:
            continue
        psi = evolve(basis_state(walk_type, n_sites, y, d2), coin, gamma, t)
        for d1 in (0, 1):
            idx = basis_index(walk_type, x, d1)
            if idx is not None:
                block[d1, d2] = psi.amplitudes[idx]
    return PassageWeight(x, y, t, block)


def walk_operator(walk_type: int, coin: QuantumCoin, gamma: float, size: int) -> sp.csr_matrix:
    """Sparse matrix of W^{(J,U)} on the first ``size`` basis elements.

    Columns near the cut lose the amplitude that would leave the truncation,
    so only the leading block away from the last few indices is unitary.
    """
    _check_type(walk_type)
    padded = size + 4
    if (walk_type == 1) == bool(padded % 2):
        padded += 1
    rows, cols, vals = [], [], []
    for c in range(size):
        e = np.zeros(padded, dtype=complex)
        e[c] = 1.0
        col = _apply(walk_type, e, coin, gamma)[:size]
        nz = np.flatnonzero(col)
        rows.extend(nz)
        cols.extend([c] * nz.size)
        vals.extend(col[nz])
    return sp.csr_matrix((vals, (rows, cols)), shape=(size, size), dtype=complex)
