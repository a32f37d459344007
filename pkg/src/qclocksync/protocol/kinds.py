from enum import Enum


class ProtocolKind(str, Enum):
    GHZ = "GHZ"
    PAIRS = "PAIRS"
    DICKE = "DICKE"


class Quadrature(str, Enum):
    COSINE = "COSINE"
    SINE = "SINE"


def round_qubit_cost(protocol: ProtocolKind, n: int) -> int:
    """Qubits consumed by one round (one round-set of N-1 pairs for PAIRS)."""
    if protocol is ProtocolKind.PAIRS:
        return 2 * (n - 1)
    return n
