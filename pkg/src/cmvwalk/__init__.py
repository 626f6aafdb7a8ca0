"""
Half-line quantum walks through their CMV matrices.

Modules
-------
coin      quantum coin, unitarity check, derived scalars (rho, Delta, a, b, ...)
walk      direct simulation of Type I and Type II walks
cmv       CMV matrices from Verblunsky sequences, walk conjugation, rotations
laurent   closed-form Laurent polynomials of the null-odd / null-even families
spectral  Caratheodory functions, spectral densities, point masses, moments
limits    limit distributions, localization predicates, tree specialization
verify    cross-module verification suites
cli       command-line entry point
"""

from . import cmv, coin, laurent, limits, spectral, verify, walk
from .coin import QuantumCoin, extract_params, hadamard, parse_coin_spec, real_coin
from .errors import CmvWalkError
from .walk import WalkState, evolve, initial_state

__all__ = [
    "cmv",
    "coin",
    "laurent",
    "limits",
    "spectral",
    "verify",
    "walk",
    "QuantumCoin",
    "extract_params",
    "hadamard",
    "parse_coin_spec",
    "real_coin",
    "CmvWalkError",
    "WalkState",
    "evolve",
    "initial_state",
]

__version__ = "0.1.0"
