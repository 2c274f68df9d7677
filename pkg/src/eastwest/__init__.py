"""East-West spin chains: embedded tight-binding subspace, dynamics and spectra.

Basis convention: site 1 is the most significant bit of the basis index and
bit value 0 is the spin state ``|0>`` (the one projected by ``P``).
"""

from .core import ChainGeometry, basis_state, entanglement_entropy, vacuum
from .dynamics import EvolveConfig, Trajectory, evolve
from .hamiltonians import (
    build_bloch,
    build_blockade,
    build_hpx,
    build_hpx_g,
    build_hpxp,
    build_model,
    build_ssh,
)
from .leakage import lambda_tau, p_predict
from .tb import TBRing, momentum_state, scarred_state, wavepacket, WavepacketParams, ScarParams

__version__ = "0.1.0"

__all__ = [
    "ChainGeometry",
    "EvolveConfig",
    "ScarParams",
    "TBRing",
    "Trajectory",
    "WavepacketParams",
    "basis_state",
    "build_bloch",
    "build_blockade",
    "build_hpx",
    "build_hpx_g",
    "build_hpxp",
    "build_model",
    "build_ssh",
    "entanglement_entropy",
    "evolve",
    "lambda_tau",
    "momentum_state",
    "p_predict",
    "scarred_state",
    "vacuum",
    "wavepacket",
]
