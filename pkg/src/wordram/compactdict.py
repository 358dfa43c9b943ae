"""Small fixed-capacity dictionaries with bit-exact space accounting.

A SmallDict holds short keys in a packed slot array; the slot index doubles
as the key's associated value, so storage is one field per slot plus an
occupancy vector with block summaries.  Slot allocation always returns the
lowest vacant index, found by scanning full-block summary bits and then one
occupancy word.
"""

from __future__ import annotations

from .wordops import lsb


class VacancyTracker:
    """Occupancy bit vector with per-block full/not-full summary bits.

    Summary bit b is set when block b is completely allocated, so the
    lowest vacant slot is found from the lowest clear summary bit.
    """

    def __init__(self, slots: int, block: int):
        if slots < 1 or block < 1:
            raise ValueError("slots and block must be positive")
        self.slots = slots
        self.block = block
        self.n_blocks = -(-slots // block)
        self._occ = 0
        self._full = 0
        self._free = slots

    def _block_size(self, b: int) -> int:
        return min(self.block, self.slots - b * self.block)

    @property
    def free_count(self) -> int:
        return self._free

    def allocated(self, slot: int) -> bool:
        return bool(self._occ >> slot & 1)

    def alloc(self) -> int:
        if self._free == 0:
            raise ValueError("no vacant slot")
        open_blocks = ~self._full & ((1 << self.n_blocks) - 1)
        b = lsb(open_blocks)
        size = self._block_size(b)
        word = (self._occ >> (b * self.block)) & ((1 << size) - 1)
        slot = b * self.block + lsb(~word & ((1 << size) - 1))
        self._occ |= 1 << slot
        self._free -= 1
        if (self._occ >> (b * self.block)) & ((1 << size) - 1) == (1 << size) - 1:
            self._full |= 1 << b
        return slot

    def free(self, slot: int) -> None:
        if not self.allocated(slot):
            raise ValueError(f"slot {slot} is not allocated")
        self._occ &= ~(1 << slot)
        self._full &= ~(1 << (slot // self.block))
        self._free += 1

    def space_bits(self) -> int:
        return self.slots + self.n_blocks

    @property
    def occupancy_word(self) -> int:
        return self._occ


class SmallDict:
    """Capacity-j dictionary of s-bit keys; each key owns one slot in [0, j).

    The packed key array is the canonical storage; a plain dict mirrors it
    for constant-time lookups.  Capacity and key width are clamped to 4
    because the sizing formulas degenerate below that.
    """

    def __init__(self, capacity: int, key_bits: int, summary_block: int = 8):
        self.capacity = max(4, capacity)
        self.key_bits = max(4, key_bits)
        self._vt = VacancyTracker(self.capacity, summary_block)
        self._packed = 0
        self._slot_of: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._slot_of)

    @property
    def full(self) -> bool:
        return len(self._slot_of) >= self.capacity

    def insert(self, key: int) -> int:
        if key >> self.key_bits:
            raise ValueError(f"key {key} does not fit in {self.key_bits} bits")
        if key in self._slot_of:
            raise ValueError("duplicate")
        if self.full:
            raise ValueError("bucket full")
        slot = self._vt.alloc()
        self._packed |= key << (slot * self.key_bits)
        self._slot_of[key] = slot
        return slot

    def lookup(self, key: int) -> int | None:
        return self._slot_of.get(key)

    def delete(self, key: int) -> None:
        slot = self._slot_of.pop(key, None)
        if slot is None:
            raise KeyError(f"key {key} absent")
        self._vt.free(slot)
        self._packed &= ~(((1 << self.key_bits) - 1) << (slot * self.key_bits))

    def key_at(self, slot: int) -> int:
        return (self._packed >> (slot * self.key_bits)) & ((1 << self.key_bits) - 1)

    def space_bits(self) -> int:
        """Serialized size: header, key array, occupancy vector, summaries."""
        return 64 + self.capacity * self.key_bits + self._vt.space_bits()

    def occupied_space_bits(self) -> int:
        """Sparse serialization: header, occupancy, summaries, stored keys only."""
        return 64 + self._vt.space_bits() + len(self._slot_of) * self.key_bits
