"""Stabilizer-code based distillation of Bell and GHZ states."""
from .decoder import SyndromeTable, build_table, decode, min_distance
from .diagclifford import CliffordInfeasible, SymmetricBinaryMatrix, clifford_for
from .induce import Placement, Topology, bell_partner, charlie_code, ghz_bc_code
from .pauli import PauliError, PauliOperator, parse
from .protocol import (
    ChannelModel,
    DistillationReport,
    Protocol,
    ProtocolConfig,
    estimate,
    output_state,
    qec_baseline,
)
from .stabcode import BUILTIN_CODES, CodeError, StabilizerCode, load_code
from .tableau import StabilizerTableau, new_bell, new_ghz

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_CODES",
    "ChannelModel",
    "CliffordInfeasible",
    "CodeError",
    "DistillationReport",
    "PauliError",
    "PauliOperator",
    "Placement",
    "Protocol",
    "ProtocolConfig",
    "StabilizerCode",
    "StabilizerTableau",
    "SymmetricBinaryMatrix",
    "SyndromeTable",
    "Topology",
    "bell_partner",
    "build_table",
    "charlie_code",
    "clifford_for",
    "decode",
    "estimate",
    "ghz_bc_code",
    "load_code",
    "min_distance",
    "new_bell",
    "new_ghz",
    "output_state",
    "parse",
    "qec_baseline",
]
