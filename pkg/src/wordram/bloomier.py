"""Dynamic approximate key-value store for sparse vectors.

A universal hash compresses keys from a universe of size u down to a range
sized so that collisions are rare; hashed keys and their values live in one
exact dictionary, and the few keys whose hashes collide with earlier ones
live (unhashed) in a second exact dictionary.  Lookups of stored keys are
always exact; lookups of absent keys return 0 except when the hash collides
with a live key's hash, which happens with probability at most the
configured error rate.

Updates are assumed valid: insert only keys currently mapped to 0, delete
only keys currently mapped to nonzero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .hashing import MultiplyShiftHash, derive_seed


def _next_pow2(x: int) -> int:
    return 1 << max(0, (x - 1).bit_length())


@dataclass(frozen=True)
class BloomierConfig:
    max_items: int
    universe_bits: int
    value_bits: int
    error_rate: float
    hash_range_bits: int

    @classmethod
    def create(cls, max_items: int, universe_bits: int, value_bits: int,
               error_rate: float) -> "BloomierConfig":
        if max_items < 1:
            raise ValueError("max_items must be positive")
        if value_bits < 1:
            raise ValueError("value_bits must be positive")
        if not 0 < error_rate <= 1:
            raise ValueError("error_rate must be in (0, 1]")
        universe = 1 << universe_bits
        if universe < 2 * max_items:
            raise ValueError("universe must be at least twice max_items")
        spread = max_items * math.log2(universe / max_items)
        hash_range = _next_pow2(max(math.ceil(spread), math.ceil(max_items / error_rate)))
        return cls(max_items, universe_bits, value_bits, error_rate,
                   hash_range.bit_length() - 1)

    @property
    def hash_range(self) -> int:
        return 1 << self.hash_range_bits


class BloomierFilter:
    def __init__(self, config: BloomierConfig, seed: int):
        self.config = config
        self._hash = MultiplyShiftHash(
            derive_seed(seed, 0xB100), config.universe_bits, config.hash_range_bits
        )
        self._exact: dict[int, int] = {}   # colliding keys, stored verbatim
        self._hashed: dict[int, int] = {}  # hash image -> value
        self._count = 0

    @property
    def live_count(self) -> int:
        return self._count

    def insert(self, key: int, value: int) -> None:
        if value == 0:
            raise ValueError("value 0 means absent; use delete")
        if value >> self.config.value_bits:
            raise ValueError(f"value {value} exceeds {self.config.value_bits} bits")
        if self._count >= self.config.max_items:
            raise ValueError("capacity exceeded")
        hk = self._hash(key)
        if hk in self._hashed:
            self._exact[key] = value
        else:
            self._hashed[hk] = value
        self._count += 1

    def delete(self, key: int) -> None:
        if key in self._exact:
            del self._exact[key]
            self._count -= 1
        elif self._hashed.pop(self._hash(key), None) is not None:
            self._count -= 1

    def replace(self, key: int, value: int) -> None:
        """Delete followed by insert of a live key, hashing only once.

        A key leaving the verbatim dictionary may fall back into the hashed
        one (its collision partner may have gone); a hashed key's slot is
        free again by the time the insert half runs, so it stays hashed.
        """
        if value == 0:
            raise ValueError("value 0 means absent; use delete")
        hk = self._hash(key)
        if key in self._exact:
            del self._exact[key]
            if hk in self._hashed:
                self._exact[key] = value
            else:
                self._hashed[hk] = value
        elif hk in self._hashed:
            self._hashed[hk] = value

    def lookup(self, key: int) -> int:
        v = self._exact.get(key)
        if v is not None:
            return v
        return self._hashed.get(self._hash(key), 0)

    def space_bits(self) -> int:
        """Serialized size: header, hash seed, and both dictionaries."""
        cfg = self.config
        per_exact = cfg.universe_bits + cfg.value_bits
        per_hashed = cfg.hash_range_bits + cfg.value_bits
        return (
            192
            + self._hash.representation_bits()
            + len(self._exact) * per_exact
            + len(self._hashed) * per_hashed
        )
