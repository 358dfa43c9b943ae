"""Dynamic perfect hashing in space sublinear in the key length.

Keys are first reduced to O(log n) bits, then scattered over ~n/log^2(n)
buckets, each a SmallDict of short bucket-local keys whose slot index gives
the key's position inside the bucket's value interval.  Keys that land in a
full bucket or collide inside one spill into an exact dictionary covering a
small dedicated interval at the end of the range.  A live key keeps its
value until deleted; reinserting may assign a different value.

Evaluating an absent key returns an arbitrary in-range value, as perfect
hashing semantics permit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .compactdict import SmallDict
from .hashing import BucketHashFamily, MultiplyShiftHash, derive_seed


class RebuildRequired(RuntimeError):
    """Spill interval exhausted; the caller must rebuild with a fresh seed."""


@dataclass(frozen=True)
class PerfectHashConfig:
    capacity: int
    universe_bits: int
    reduced_bits: int
    bucket_count: int
    bucket_key_bits: int
    bucket_capacity: int
    spill_capacity: int
    summary_block: int
    c: int
    spill_factor: int

    @classmethod
    def create(cls, capacity: int, universe_bits: int, c: int = 0,
               spill_factor: int = 8) -> "PerfectHashConfig":
        if capacity < 1:
            raise ValueError("capacity must be positive")
        if universe_bits < 3 or universe_bits > 128:
            raise ValueError("universe_bits out of range")
        lg_n = max(2.0, math.log2(capacity))
        ceil_lg_n = max(2, math.ceil(math.log2(max(2, capacity))))
        # reducing never widens a key
        reduced = min(3 * ceil_lg_n + 16, universe_bits)
        buckets = max(1, math.ceil(capacity / lg_n**2))
        lglg_u = math.log2(universe_bits)
        key_bits = max(4, math.ceil((6 + 2 * c) * lglg_u))
        key_bits = min(key_bits, reduced)
        bucket_cap = max(16, math.ceil(lg_n**2 + lg_n ** (5 / 3)))
        spill = spill_factor * math.ceil(capacity / universe_bits)
        block = max(4, ceil_lg_n)
        return cls(capacity, universe_bits, reduced, buckets, key_bits,
                   bucket_cap, spill, block, c, spill_factor)

    @property
    def range_size(self) -> int:
        return self.bucket_count * self.bucket_capacity + self.spill_capacity

    @property
    def bucket_range(self) -> int:
        return self.bucket_count * self.bucket_capacity


class PerfectHash:
    def __init__(self, config: PerfectHashConfig, seed: int):
        self.config = config
        self.seed = seed
        self._reduce = MultiplyShiftHash(
            derive_seed(seed, 0xF00D), config.universe_bits, config.reduced_bits
        )
        self._family = BucketHashFamily(
            derive_seed(seed, 0xFEED), config.reduced_bits,
            config.bucket_count, config.bucket_key_bits,
        )
        self._buckets = [
            SmallDict(config.bucket_capacity, config.bucket_key_bits, config.summary_block)
            for _ in range(config.bucket_count)
        ]
        self._spill: dict[int, int] = {}
        # stack of vacant spill slots; popping from the tail hands out the
        # lowest index first on a fresh structure
        self._spill_free = list(range(config.spill_capacity - 1, -1, -1))
        self.live_count = 0
        self.spill_peak = 0

    def _route(self, key: int) -> tuple[int, int]:
        reduced = self._reduce(key)
        bucket = self._family.bucket_of(reduced)
        return bucket, self._family.member(bucket)(reduced)

    def insert(self, key: int) -> tuple[int, bool]:
        """Assign a stable in-range value to `key`; returns (value, inserted).

        A key already resident in the spill dictionary is flagged as a
        duplicate; duplicates hiding in a bucket are indistinguishable from
        genuine collisions and are routed to the spill (callers must not
        insert live keys).
        """
        if key >> self.config.universe_bits:
            raise ValueError("key does not fit the universe")
        if key in self._spill:
            return self.config.bucket_range + self._spill[key], False
        if self.live_count >= self.config.capacity:
            raise ValueError("capacity exceeded")
        bucket_i, short = self._route(key)
        d = self._buckets[bucket_i - 1]
        if d.full or d.lookup(short) is not None:
            if not self._spill_free:
                raise RebuildRequired("rebuild required")
            slot = self._spill_free.pop()
            self._spill[key] = slot
            self.live_count += 1
            if len(self._spill) > self.spill_peak:
                self.spill_peak = len(self._spill)
            return self.config.bucket_range + slot, True
        slot = d.insert(short)
        self.live_count += 1
        return (bucket_i - 1) * self.config.bucket_capacity + slot, True

    def delete(self, key: int) -> bool:
        slot = self._spill.pop(key, None)
        if slot is not None:
            self._spill_free.append(slot)
            self.live_count -= 1
            return True
        bucket_i, short = self._route(key)
        d = self._buckets[bucket_i - 1]
        if d.lookup(short) is not None:
            d.delete(short)
            self.live_count -= 1
            return True
        return False

    def evaluate(self, key: int) -> int:
        slot = self._spill.get(key)
        if slot is not None:
            return self.config.bucket_range + slot
        bucket_i, short = self._route(key)
        slot = self._buckets[bucket_i - 1].lookup(short)
        base = (bucket_i - 1) * self.config.bucket_capacity
        if slot is None:
            return base  # arbitrary in-range answer for non-live keys
        return base + slot

    def space_bits(self) -> int:
        """Exact serialized size of every component."""
        cfg = self.config
        spill_slot_bits = max(1, (cfg.spill_capacity - 1).bit_length())
        spill_bits = 64 + cfg.spill_capacity + len(self._spill) * (
            cfg.universe_bits + spill_slot_bits
        )
        return (
            5 * 64
            + self._reduce.representation_bits()
            + self._family.representation_bits()
            + sum(d.occupied_space_bits() for d in self._buckets)
            + spill_bits
        )

    def rebuild(self, live_keys, seed: int) -> "PerfectHash":
        """Fresh structure over the caller-supplied live keys.

        Values are reassigned; the structure itself cannot enumerate live
        keys, which is the point of its size.
        """
        fresh = PerfectHash(self.config, seed)
        for key in live_keys:
            fresh.insert(key)
        return fresh
