"""Ordered list of set elements interleaved with branching-node extreme points.

Entries are kept in buckets of Theta(sqrt(width)) consecutive entries, with
superbuckets of Theta(sqrt(width)) buckets above them.  Each bucket carries
a summary word (one bit per entry in list order: is it a set element) and a
permutation word mapping list order to physical slots, so an insertion only
appends to the slot array and splices two machine words.  Superbuckets
carry one bit per bucket: does it contain at least one element.

The structure answers "nearest element at or before/after this entry" by
examining a bounded number of summary words; runs of non-element entries
are short by construction, so the walk never inspects more than a few
buckets.  Handles are stable integers, unaffected by splits and merges.
"""

from __future__ import annotations

import math

ELEMENT = 1
OPEN = 2
CLOSE = 3


class _Entry:
    __slots__ = ("kind", "value", "owner", "hint", "prev", "next", "bucket")

    def __init__(self, kind: int, value: int | None, owner: int | None,
                 hint: int | None = None):
        self.kind = kind
        self.value = value  # element key, or span coordinate for audits
        self.owner = owner  # encoded branching-node key for parentheses
        self.hint = hint    # caller-supplied total-order key, audit only
        self.prev: int | None = None
        self.next: int | None = None
        self.bucket: int = -1


class _Bucket:
    __slots__ = ("id", "slots", "free", "perm", "summary", "size", "sup")

    def __init__(self, b_id: int, sup: int):
        self.id = b_id
        self.slots: list[int | None] = []
        self.free: list[int] = []
        self.perm = 0
        self.summary = 0
        self.size = 0
        self.sup = sup


class _Super:
    __slots__ = ("buckets", "summary", "prev", "next")

    def __init__(self):
        self.buckets: list[int] = []
        self.summary = 0
        self.prev: int | None = None
        self.next: int | None = None


class NavList:
    def __init__(self, width: int, audit: bool = False):
        self.width = width
        self.audit = audit
        self.base = math.isqrt(width)
        if self.base * self.base < width:
            self.base += 1
        self.cap = 2 * self.base
        # a merge may transiently hold cap + base - 1 entries before the
        # re-split; permutation fields must address every such slot
        self._slot_bits = (self.cap + self.base).bit_length()
        self._entries: dict[int, _Entry] = {}
        self._buckets: dict[int, _Bucket] = {}
        self._sups: dict[int, _Super] = {}
        self._head_sup: int | None = None
        self._next_id = 0
        self.n_elements = 0
        self.max_examined = 0

    def __len__(self) -> int:
        return len(self._entries)

    def entry(self, handle: int) -> _Entry:
        return self._entries[handle]

    # -- permutation word helpers -----------------------------------------

    def _perm_get(self, bucket: _Bucket, pos: int) -> int:
        sb = self._slot_bits
        return (bucket.perm >> (pos * sb)) & ((1 << sb) - 1)

    def _perm_insert(self, bucket: _Bucket, pos: int, slot: int) -> None:
        sb = self._slot_bits
        low = bucket.perm & ((1 << (pos * sb)) - 1)
        high = bucket.perm >> (pos * sb)
        bucket.perm = low | (slot << (pos * sb)) | (high << ((pos + 1) * sb))

    def _perm_remove(self, bucket: _Bucket, pos: int) -> None:
        sb = self._slot_bits
        low = bucket.perm & ((1 << (pos * sb)) - 1)
        high = bucket.perm >> ((pos + 1) * sb)
        bucket.perm = low | (high << (pos * sb))

    @staticmethod
    def _bit_insert(word: int, pos: int, bit: int) -> int:
        low = word & ((1 << pos) - 1)
        high = word >> pos
        return low | (bit << pos) | (high << (pos + 1))

    @staticmethod
    def _bit_remove(word: int, pos: int) -> int:
        low = word & ((1 << pos) - 1)
        return low | ((word >> (pos + 1)) << pos)

    def _position_of(self, handle: int) -> tuple[_Bucket, int]:
        bucket = self._buckets[self._entries[handle].bucket]
        slots = bucket.slots
        perm = bucket.perm
        sb = self._slot_bits
        mask = (1 << sb) - 1
        for pos in range(bucket.size):
            if slots[(perm >> (pos * sb)) & mask] == handle:
                return bucket, pos
        raise AssertionError("entry missing from its bucket")

    def _at(self, bucket: _Bucket, pos: int) -> int:
        return bucket.slots[self._perm_get(bucket, pos)]  # type: ignore[return-value]

    # -- insertion ----------------------------------------------------------

    def insert_first(self, kind: int, value: int | None = None,
                     owner: int | None = None, hint: int | None = None) -> int:
        return self._insert(None, kind, value, owner, hint)

    def insert_after(self, after: int, kind: int, value: int | None = None,
                     owner: int | None = None, hint: int | None = None) -> int:
        if after not in self._entries:
            raise KeyError(f"invalid handle {after}")
        return self._insert(after, kind, value, owner, hint)

    def _insert(self, after: int | None, kind: int, value: int | None,
                owner: int | None, hint: int | None = None) -> int:
        handle = self._next_id
        self._next_id += 1
        e = _Entry(kind, value, owner, hint)

        if self._head_sup is None:
            sup_id = self._new_sup()
            self._head_sup = sup_id
            b_id = self._new_bucket(sup_id)
            self._sups[sup_id].buckets.append(b_id)
            bucket, pos = self._buckets[b_id], 0
        elif after is None:
            bucket = self._buckets[self._sups[self._head_sup].buckets[0]]
            pos = 0
        else:
            bucket, prev_pos = self._position_of(after)
            pos = prev_pos + 1

        prev_nb = after
        next_nb = self._entries[after].next if after is not None else self._first_handle()
        if self.audit and hint is not None:
            for nb, side in ((prev_nb, "left"), (next_nb, "right")):
                if nb is None:
                    continue
                other = self._entries[nb].hint
                if other is None:
                    continue
                in_order = other < hint if side == "left" else hint < other
                if not in_order:
                    raise ValueError(f"ordering violation against {side} neighbor")

        e.prev, e.next = prev_nb, next_nb
        if prev_nb is not None:
            self._entries[prev_nb].next = handle
        if next_nb is not None:
            self._entries[next_nb].prev = handle
        self._entries[handle] = e
        self._place(bucket, pos, handle)
        if kind == ELEMENT:
            self.n_elements += 1
        return handle

    def _first_handle(self) -> int | None:
        if self._head_sup is None:
            return None
        sup = self._sups[self._head_sup]
        if not sup.buckets:
            return None
        bucket = self._buckets[sup.buckets[0]]
        if bucket.size == 0:
            return None
        return self._at(bucket, 0)

    def _place(self, bucket: _Bucket, pos: int, handle: int) -> None:
        if bucket.free:
            slot = bucket.free.pop()
            bucket.slots[slot] = handle
        else:
            slot = len(bucket.slots)
            bucket.slots.append(handle)
        self._perm_insert(bucket, pos, slot)
        bucket.summary = self._bit_insert(
            bucket.summary, pos, 1 if self._entries[handle].kind == ELEMENT else 0
        )
        bucket.size += 1
        self._entries[handle].bucket = bucket.id
        self._refresh_sup_bit(bucket)
        if bucket.size > self.cap:
            self._split_bucket(bucket)

    def _new_bucket(self, sup: int) -> int:
        b_id = self._next_id
        self._next_id += 1
        self._buckets[b_id] = _Bucket(b_id, sup)
        return b_id

    def _new_sup(self) -> int:
        s_id = self._next_id
        self._next_id += 1
        self._sups[s_id] = _Super()
        return s_id

    def _refresh_sup_bit(self, bucket: _Bucket) -> None:
        sup = self._sups[bucket.sup]
        b_pos = sup.buckets.index(bucket.id)
        if bucket.summary:
            sup.summary |= 1 << b_pos
        else:
            sup.summary &= ~(1 << b_pos)

    def _ordered_handles(self, bucket: _Bucket) -> list[int]:
        return [self._at(bucket, i) for i in range(bucket.size)]

    def _rebuild(self, bucket: _Bucket, handles: list[int]) -> None:
        bucket.slots = list(handles)
        bucket.free = []
        bucket.size = len(handles)
        perm = 0
        summary = 0
        sb = self._slot_bits
        for i, h in enumerate(handles):
            perm |= i << (i * sb)
            if self._entries[h].kind == ELEMENT:
                summary |= 1 << i
            self._entries[h].bucket = bucket.id
        bucket.perm = perm
        bucket.summary = summary

    def _split_bucket(self, bucket: _Bucket) -> None:
        handles = self._ordered_handles(bucket)
        half = len(handles) // 2
        sup = self._sups[bucket.sup]
        b_pos = sup.buckets.index(bucket.id)
        right_id = self._new_bucket(bucket.sup)
        self._rebuild(bucket, handles[:half])
        self._rebuild(self._buckets[right_id], handles[half:])
        sup.buckets.insert(b_pos + 1, right_id)
        sup.summary = self._bit_insert(sup.summary, b_pos + 1, 0)
        self._refresh_sup_bit(bucket)
        self._refresh_sup_bit(self._buckets[right_id])
        if len(sup.buckets) > self.cap:
            self._split_sup(bucket.sup)

    def _split_sup(self, sup_id: int) -> None:
        sup = self._sups[sup_id]
        half = len(sup.buckets) // 2
        right_id = self._new_sup()
        right = self._sups[right_id]
        right.buckets = sup.buckets[half:]
        right.summary = sup.summary >> half
        del sup.buckets[half:]
        sup.summary &= (1 << half) - 1
        for b_id in right.buckets:
            self._buckets[b_id].sup = right_id
        right.prev, right.next = sup_id, sup.next
        if sup.next is not None:
            self._sups[sup.next].prev = right_id
        sup.next = right_id

    # -- deletion -----------------------------------------------------------

    def delete(self, handle: int) -> None:
        e = self._entries.get(handle)
        if e is None:
            raise KeyError(f"invalid handle {handle}")
        bucket, pos = self._position_of(handle)
        slot = self._perm_get(bucket, pos)
        bucket.slots[slot] = None
        bucket.free.append(slot)
        self._perm_remove(bucket, pos)
        bucket.summary = self._bit_remove(bucket.summary, pos)
        bucket.size -= 1
        self._refresh_sup_bit(bucket)
        if e.prev is not None:
            self._entries[e.prev].next = e.next
        if e.next is not None:
            self._entries[e.next].prev = e.prev
        if e.kind == ELEMENT:
            self.n_elements -= 1
        del self._entries[handle]
        self._shrink(bucket)

    def _shrink(self, bucket: _Bucket) -> None:
        sup = self._sups[bucket.sup]
        if bucket.size == 0:
            b_pos = sup.buckets.index(bucket.id)
            sup.buckets.pop(b_pos)
            sup.summary = self._bit_remove(sup.summary, b_pos)
            del self._buckets[bucket.id]
            self._shrink_sup(bucket.sup)
            return
        if bucket.size >= self.base:
            return
        if len(sup.buckets) == 1:
            # pull in siblings by merging superbuckets first, if any exist
            self._shrink_sup(bucket.sup)
            sup = self._sups[bucket.sup]
            if len(sup.buckets) == 1:
                return  # the whole structure is one bucket; bounds waived
        b_pos = sup.buckets.index(bucket.id)
        o_pos = b_pos + 1 if b_pos + 1 < len(sup.buckets) else b_pos - 1
        other = self._buckets[sup.buckets[o_pos]]
        left, right = (bucket, other) if o_pos > b_pos else (other, bucket)
        merged = self._ordered_handles(left) + self._ordered_handles(right)
        r_pos = max(b_pos, o_pos)
        r_id = sup.buckets.pop(r_pos)
        sup.summary = self._bit_remove(sup.summary, r_pos)
        del self._buckets[r_id]
        self._rebuild(left, merged)
        self._refresh_sup_bit(left)
        if left.size > self.cap:
            self._split_bucket(left)
        self._shrink_sup(left.sup)

    def _shrink_sup(self, sup_id: int) -> None:
        sup = self._sups[sup_id]
        if not sup.buckets:
            if sup.prev is not None:
                self._sups[sup.prev].next = sup.next
            if sup.next is not None:
                self._sups[sup.next].prev = sup.prev
            if self._head_sup == sup_id:
                self._head_sup = sup.next
            del self._sups[sup_id]
            return
        if len(sup.buckets) >= self.base:
            return
        other_id = sup.next if sup.next is not None else sup.prev
        if other_id is None:
            return  # lone superbucket; bounds waived
        if other_id == sup.next:
            left_id, right_id = sup_id, other_id
        else:
            left_id, right_id = other_id, sup_id
        left, right = self._sups[left_id], self._sups[right_id]
        shift = len(left.buckets)
        left.summary |= right.summary << shift
        left.buckets.extend(right.buckets)
        for b_id in right.buckets:
            self._buckets[b_id].sup = left_id
        left.next = right.next
        if right.next is not None:
            self._sups[right.next].prev = left_id
        del self._sups[right_id]
        if len(left.buckets) > self.cap:
            self._split_sup(left_id)

    # -- navigation ----------------------------------------------------------

    def nearest_element_left(self, handle: int) -> int | None:
        """Nearest element entry at or before `handle` in list order."""
        e = self._entries[handle]
        if e.kind == ELEMENT:
            return handle
        bucket, pos = self._position_of(handle)
        examined = 1
        mask = bucket.summary & ((1 << (pos + 1)) - 1)
        if mask:
            self._note(examined)
            return self._at(bucket, mask.bit_length() - 1)
        sup = self._sups[bucket.sup]
        b_pos = sup.buckets.index(bucket.id)
        examined += 1
        smask = sup.summary & ((1 << b_pos) - 1)
        if smask:
            hit = self._buckets[sup.buckets[smask.bit_length() - 1]]
            self._note(examined + 1)
            return self._at(hit, hit.summary.bit_length() - 1)
        sup_id = sup.prev
        while sup_id is not None:
            sup = self._sups[sup_id]
            examined += 1
            if sup.summary:
                hit = self._buckets[sup.buckets[sup.summary.bit_length() - 1]]
                self._note(examined + 1)
                return self._at(hit, hit.summary.bit_length() - 1)
            sup_id = sup.prev
        self._note(examined)
        return None

    def nearest_element_right(self, handle: int) -> int | None:
        """Nearest element entry at or after `handle` in list order."""
        e = self._entries[handle]
        if e.kind == ELEMENT:
            return handle
        bucket, pos = self._position_of(handle)
        examined = 1
        mask = bucket.summary >> pos
        if mask:
            self._note(examined)
            return self._at(bucket, pos + self._lowbit(mask))
        sup = self._sups[bucket.sup]
        b_pos = sup.buckets.index(bucket.id)
        examined += 1
        smask = sup.summary >> (b_pos + 1)
        if smask:
            hit = self._buckets[sup.buckets[b_pos + 1 + self._lowbit(smask)]]
            self._note(examined + 1)
            return self._at(hit, self._lowbit(hit.summary))
        sup_id = sup.next
        while sup_id is not None:
            sup = self._sups[sup_id]
            examined += 1
            if sup.summary:
                hit = self._buckets[sup.buckets[self._lowbit(sup.summary)]]
                self._note(examined + 1)
                return self._at(hit, self._lowbit(hit.summary))
            sup_id = sup.next
        self._note(examined)
        return None

    @staticmethod
    def _lowbit(word: int) -> int:
        return (word & -word).bit_length() - 1

    def _note(self, examined: int) -> None:
        if examined > self.max_examined:
            self.max_examined = examined

    # -- iteration / audit -----------------------------------------------------

    def __iter__(self):
        """Handles in list order, via the bucket hierarchy."""
        sup_id = self._head_sup
        while sup_id is not None:
            sup = self._sups[sup_id]
            for b_id in sup.buckets:
                bucket = self._buckets[b_id]
                for pos in range(bucket.size):
                    yield self._at(bucket, pos)
            sup_id = sup.next

    def validate(self) -> None:
        """Cross-check buckets, summaries, links, and size bounds."""
        order = list(self)
        chained: list[int] = []
        h = order[0] if order else None
        if h is not None:
            while self._entries[h].prev is not None:
                h = self._entries[h].prev
        while h is not None:
            chained.append(h)
            h = self._entries[h].next
        assert chained == order, "linked list disagrees with bucket order"
        assert len(order) == len(self._entries)

        n_el = 0
        for b_id, bucket in self._buckets.items():
            assert 1 <= bucket.size <= self.cap
            if len(self._buckets) > 1:
                assert bucket.size >= self.base, "undersized bucket with siblings"
            seen = set()
            for pos in range(bucket.size):
                slot = self._perm_get(bucket, pos)
                assert slot not in seen
                seen.add(slot)
                handle = bucket.slots[slot]
                assert handle is not None
                e = self._entries[handle]
                assert e.bucket == b_id
                bit = (bucket.summary >> pos) & 1
                assert bit == (1 if e.kind == ELEMENT else 0)
                n_el += bit
            assert bucket.summary >> bucket.size == 0
        assert n_el == self.n_elements

        for sup_id, sup in self._sups.items():
            assert sup.buckets, "empty superbucket survived"
            if len(self._sups) > 1:
                assert self.base <= len(sup.buckets) <= self.cap
            for b_pos, b_id in enumerate(sup.buckets):
                bucket = self._buckets[b_id]
                assert bucket.sup == sup_id
                assert ((sup.summary >> b_pos) & 1) == (1 if bucket.summary else 0)
            assert sup.summary >> len(sup.buckets) == 0
