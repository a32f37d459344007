"""Balanced flip assignments {f_i} distributed to the parties."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.special import comb

from ..errors import CapacityError, InvalidEnsembleError

DEFAULT_SEQUENCE_CAP = 10**6


@dataclass(frozen=True)
class DistributionSequence:
    """Flip flags of one distribution; ``index`` is its lexicographic rank."""

    flags: tuple[int, ...]
    index: int

    def __post_init__(self) -> None:
        flags = tuple(int(f) for f in self.flags)
        if any(f not in (0, 1) for f in flags):
            raise InvalidEnsembleError(f"flags must be bits, got {flags}")
        if len(flags) % 2 or 2 * sum(flags) != len(flags):
            raise InvalidEnsembleError(f"sequence {flags} is not balanced")
        object.__setattr__(self, "flags", flags)

    @property
    def n(self) -> int:
        return len(self.flags)

    def __len__(self) -> int:
        return len(self.flags)

    def __iter__(self) -> Iterator[int]:
        return iter(self.flags)

    def __getitem__(self, i: int) -> int:
        return self.flags[i]

    def signs(self) -> np.ndarray:
        """(-1)^f_i per party."""
        return 1 - 2 * np.asarray(self.flags, dtype=np.int64)

    @property
    def designated_party(self) -> int:
        """Lowest unflipped party; it carries the quadrature shift."""
        return self.flags.index(0)

    def complement(self) -> tuple[int, ...]:
        return tuple(1 - f for f in self.flags)


def sequence_count(n: int) -> int:
    return int(comb(n, n // 2, exact=True))


def _check_n(n: int) -> None:
    if n < 2 or n % 2:
        raise InvalidEnsembleError(f"N must be even and at least 2, got {n}")


def enumerate_sequences(n: int, cap: int = DEFAULT_SEQUENCE_CAP) -> list[DistributionSequence]:
    """All C(N, N/2) balanced sequences in lexicographic order."""
    _check_n(n)
    count = sequence_count(n)
    if count > cap:
        raise CapacityError(
            f"N={n} has {count} distribution sequences, above the cap of {cap}"
        )
    return list(_enumerate(n))


@lru_cache(maxsize=32)
def _enumerate(n: int) -> tuple[DistributionSequence, ...]:
    # Choosing the positions of the *zeros* in increasing order walks the bitstrings
    # in lexicographic order, since an earlier zero means a smaller string.
    out = []
    for j, zeros in enumerate(combinations(range(n), n // 2)):
        flags = [1] * n
        for z in zeros:
            flags[z] = 0
        out.append(DistributionSequence(tuple(flags), j))
    return tuple(out)


def sign_matrix(sequences: list[DistributionSequence]) -> np.ndarray:
    """(J, N) matrix of (-1)^f_i(j)."""
    return np.stack([s.signs() for s in sequences])
