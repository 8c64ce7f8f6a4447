"""Reduction of quantum circuits written with dressed CNOTs (DC-NOTs)."""

from .circuit import Circuit, DcNot, GlobalPhase, LocalRot, circuit_unitary, parse, serialize
from .optimizer import OptimizeConfig, OptimizeReport, optimize, simplify_run

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "DcNot",
    "GlobalPhase",
    "LocalRot",
    "OptimizeConfig",
    "OptimizeReport",
    "circuit_unitary",
    "optimize",
    "parse",
    "serialize",
    "simplify_run",
]
