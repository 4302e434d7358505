"""Deterministic simulator for relativistic two-party quantum protocols.

Bell-pair swapping and teleportation are tracked two ways, by Pauli label
arithmetic (:mod:`relqc.pauli`) and by an explicit state vector
(:mod:`relqc.oracle`). Message timing follows 1+1D light cones
(:mod:`relqc.spacetime`), protocol runs live in :mod:`relqc.engine` and
cheating strategies in :mod:`relqc.adversary`.
"""
from .kernels import BACKEND
from .pauli import BasisMode, BellIndex, PauliOp
from .spacetime import Geometry
from .engine import ProtocolInputs, Transcript, run_protocol

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BasisMode",
    "BellIndex",
    "Geometry",
    "PauliOp",
    "ProtocolInputs",
    "Transcript",
    "run_protocol",
    "__version__",
]
