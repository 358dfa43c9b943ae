"""Dynamic one-dimensional range reporting over word-sized integer keys.

The structure maintains a set S of width-bit keys and answers
``findany(a, b)``: some element of S in [a, b], or None exactly when the
interval is empty.  Queries never touch the predecessor structures; they
binary-search over re-chunked tries (order t summarizes branch**t bits per
edge) for the first order at which the query node's chunk contains a
branching node, then resolve the lowest branching ancestor through a
compressed-pointer index and verify every candidate against the branching
table before trusting it.  The index may be backed by an exact dictionary
or by a Bloomier filter; arbitrary answers for unstored keys are harmless
because of the verification step.

Updates maintain, per trie order, index entries for every branching node
and (depending on the variant) for active children of branching nodes or
for active nodes with a branching ancestor inside their natural depth-B
subtree.  Creating or destroying a branching node can invalidate up to two
previously stored entries per order (the entry of the chunk holding the
next branching node below, and the child entry at the chunk boundary on
the surviving path); these are refreshed in place, which keeps every
mandated entry exact at all times.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

from .bloomier import BloomierConfig, BloomierFilter
from .navlist import CLOSE, ELEMENT, OPEN, NavList
from .predecessor import PredecessorSet
from .wordops import NodeName, lca_depth, top_order, trie_depth

VARIANT_CORE = "core"
VARIANT_FAST_UPDATE = "5a"
VARIANT_FAST_QUERY = "5b"
VARIANTS = (VARIANT_CORE, VARIANT_FAST_UPDATE, VARIANT_FAST_QUERY)

BACKEND_EXACT = "exact"
BACKEND_BLOOMIER = "bloomier"
BACKENDS = (BACKEND_EXACT, BACKEND_BLOOMIER)

_DEPTH_BITS = 7
_ORDER_BITS = 3
_TAG_BITS = _DEPTH_BITS + _ORDER_BITS

# descendant tags
_LEAF = 0
_NODE = 1


@dataclass(frozen=True)
class RangeConfig:
    width: int
    branch: int = 2
    variant: str = VARIANT_CORE
    backend: str = BACKEND_EXACT
    capacity: int = 1 << 16
    audit: bool = False
    seed: int = 0
    pred_backend: str = "buckets"

    def __post_init__(self):
        if self.width not in (8, 16, 32, 64):
            raise ValueError(f"unsupported width {self.width}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.variant == VARIANT_CORE:
            if self.branch != 2:
                raise ValueError("core variant requires branch 2")
        else:
            b = self.branch
            if b < 2 or b > self.width or b & (b - 1):
                raise ValueError("branch must be a power of two in [2, width]")
        if self.capacity < 1:
            raise ValueError("capacity must be positive")


class AncestorIndex:
    """Depth-of-lowest-branching-ancestor store keyed by encoded node names.

    The exact backend is a dictionary; the compact backend is a Bloomier
    filter (values are stored shifted by one so 0 can mean "absent").
    Callers must know whether a key is present: adds require absence, sets
    and drops require presence.  The exact backend asserts this discipline;
    an optional mirror does the same for the filter and feeds audits.
    """

    def __init__(self, backend: str, capacity: int, key_bits: int,
                 value_bits: int, seed: int, audit: bool):
        self.backend = backend
        self.reads = 0
        self.writes = 0
        self._store: dict[int, int] | None = None
        self._filter: BloomierFilter | None = None
        self._mirror: dict[int, int] | None = {} if (audit and backend == BACKEND_BLOOMIER) else None
        if backend == BACKEND_EXACT:
            self._store = {}
        else:
            cfg = BloomierConfig.create(capacity, key_bits, value_bits, 0.25)
            self._filter = BloomierFilter(cfg, seed)

    def add(self, key: int, depth: int) -> None:
        self.writes += 1
        if self._store is not None:
            assert key not in self._store, "add of a present key"
            self._store[key] = depth
            return
        if self._mirror is not None:
            assert key not in self._mirror, "add of a present key"
            self._mirror[key] = depth
        self._filter.insert(key, depth + 1)

    def set(self, key: int, depth: int) -> None:
        self.writes += 1
        if self._store is not None:
            assert key in self._store, "set of an absent key"
            self._store[key] = depth
            return
        if self._mirror is not None:
            assert key in self._mirror, "set of an absent key"
            self._mirror[key] = depth
        self._filter.replace(key, depth + 1)

    def drop(self, key: int) -> None:
        self.writes += 1
        if self._store is not None:
            assert key in self._store, "drop of an absent key"
            del self._store[key]
            return
        if self._mirror is not None:
            assert key in self._mirror, "drop of an absent key"
            del self._mirror[key]
        self._filter.delete(key)

    def get(self, key: int) -> int | None:
        self.reads += 1
        if self._store is not None:
            return self._store.get(key)
        raw = self._filter.lookup(key)
        return raw - 1 if raw else None

    def snapshot(self) -> dict[int, int]:
        if self._store is not None:
            return dict(self._store)
        if self._mirror is None:
            raise RuntimeError("snapshot needs the exact backend or audit mode")
        return dict(self._mirror)

    def space_bits(self) -> int:
        if self._filter is not None:
            return self._filter.space_bits()
        total = 64
        for key, _ in (self._store or {}).items():
            total += key.bit_length() + 8
        return total


@dataclass
class BranchingRecord:
    name: NodeName                      # order-0 node
    ancestor: int | None                # encoded key of the lowest branching ancestor
    desc: list                          # per side: None | (_LEAF, x) | (_NODE, key)
    open_h: int = -1
    close_h: int = -1


@dataclass
class OpStats:
    max_index_writes_insert: int = 0
    max_index_writes_delete: int = 0
    max_test_branching: int = 0
    max_nav_queries: int = 0
    max_index_reads_query: int = 0
    pred_queries_during_query: int = 0
    queries: int = 0
    inserts: int = 0
    deletes: int = 0


class RangeReporter:
    def __init__(self, config: RangeConfig):
        self.config = config
        self.w = config.width
        self.B = config.branch
        self.top = top_order(self.w, self.B)
        self._chunks = [self.B**t for t in range(self.top + 1)]
        self._tdepth = [trie_depth(self.w, t, self.B) for t in range(self.top + 1)]
        self.pred = PredecessorSet(self.w, config.pred_backend)
        # augmented-list keys: a (w+2)-bit doubled coordinate over 11 tag bits
        self._sbar_pred = PredecessorSet(self.w + _TAG_BITS + 3, config.pred_backend)
        self._sbar_handle: dict[int, int] = {}
        self.nav = NavList(self.w, config.audit)
        self.table: dict[int, BranchingRecord] = {}
        self.leaves: dict[int, int] = {}
        index_cap = 4 * config.capacity * (self.top + 2)
        if config.variant == VARIANT_FAST_QUERY:
            index_cap *= self.B
        # distinct keys are bounded by the name space; keep the filter sizable
        index_cap = min(index_cap, (1 << (self.w + _TAG_BITS)) // 4)
        self.index = AncestorIndex(
            config.backend, index_cap, self.w + _TAG_BITS,
            (self.w + 1).bit_length(), config.seed, config.audit,
        )
        self.stats = OpStats()
        self._root_key = self._enc(0, 0, 0)
        self._q_tb = 0
        self._q_nav = 0

    # -- encodings ----------------------------------------------------------

    def _enc(self, t: int, d: int, p: int) -> int:
        pb = min(d * self._chunks[t], self.w)
        return ((p << (self.w - pb)) << _TAG_BITS) | (d << _ORDER_BITS) | t

    def _enc0(self, d: int, p: int) -> int:
        return ((p << (self.w - d)) << _TAG_BITS) | (d << _ORDER_BITS)

    # augmented-list keys: coordinate, then a rank making a Close precede an
    # Open at the same doubled coordinate, then nesting depth
    def _key_element(self, x: int) -> int:
        return (2 * x + 1) << (_TAG_BITS + 1)

    def _key_open(self, d: int, p: int) -> int:
        lo = p << (self.w - d)
        return ((2 * lo) << (_TAG_BITS + 1)) | (1 << _TAG_BITS) | d

    def _key_close(self, d: int, p: int) -> int:
        lo = p << (self.w - d)
        hi = lo + (1 << (self.w - d)) - 1
        return ((2 * hi + 2) << (_TAG_BITS + 1)) | (self.w - d)

    # -- augmented-list maintenance ------------------------------------------

    def _sbar_insert(self, key: int, kind: int, value: int | None = None,
                     owner: int | None = None) -> int:
        prev_key, _nxt, fresh = self._sbar_pred.insert(key)
        assert fresh, "duplicate augmented-list key"
        if prev_key is None:
            h = self.nav.insert_first(kind, value, owner, hint=key)
        else:
            h = self.nav.insert_after(self._sbar_handle[prev_key], kind, value,
                                      owner, hint=key)
        self._sbar_handle[key] = h
        return h

    def _sbar_delete(self, key: int) -> None:
        h = self._sbar_handle.pop(key)
        self._sbar_pred.delete(key)
        self.nav.delete(h)

    # -- element access -------------------------------------------------------

    def __len__(self) -> int:
        return len(self.leaves)

    def __contains__(self, x: int) -> bool:
        return x in self.leaves

    def sorted_elements(self) -> list[int]:
        return list(self.pred)

    # -- updates ---------------------------------------------------------------

    def insert(self, x: int) -> bool:
        if x >> self.w:
            raise ValueError(f"key {x} does not fit in {self.w} bits")
        if x in self.leaves:
            return False
        if len(self.leaves) >= self.config.capacity:
            raise ValueError("capacity exceeded")
        writes_before = self.index.writes
        prev, nxt, _ = self.pred.insert(x)
        if prev is None and nxt is None:
            self._insert_first(x)
        else:
            self._insert_nonempty(x, prev, nxt)
        self.stats.inserts += 1
        delta = self.index.writes - writes_before
        if delta > self.stats.max_index_writes_insert:
            self.stats.max_index_writes_insert = delta
        if self.config.audit:
            self.check()
        return True

    def _insert_first(self, x: int) -> None:
        w = self.w
        root = BranchingRecord(NodeName(0, 0, 0), None, [None, None])
        side = x >> (w - 1)
        root.desc[side] = (_LEAF, x)
        root.open_h = self._sbar_insert(self._key_open(0, 0), OPEN, 0, self._root_key)
        el = self._sbar_insert(self._key_element(x), ELEMENT, x)
        root.close_h = self._sbar_insert(
            self._key_close(0, 0), CLOSE, 2 * ((1 << w) - 1) + 2, self._root_key
        )
        self.table[self._root_key] = root
        self.leaves[x] = el
        for t in range(self.top + 1):
            ch = self._chunks[t]
            if self.config.variant == VARIANT_FAST_QUERY:
                for dd in range(1, min(self.B - 1, self._tdepth[t]) + 1):
                    r0d = min(dd * ch, w)
                    self.index.add(self._enc(t, dd, x >> (w - r0d)), 0)
            else:
                r0d = min(ch, w)
                self.index.add(self._enc(t, 1, x >> (w - r0d)), 0)

    def _insert_nonempty(self, x: int, prev: int | None, nxt: int | None) -> None:
        w = self.w
        dp = lca_depth(x, prev, w) if prev is not None else -1
        dn = lca_depth(x, nxt, w) if nxt is not None else -1
        if dp > dn:
            d_v, nbr = dp, prev
        else:
            d_v, nbr = dn, nxt

        if d_v == 0:
            # the new divergence point is the root itself; its record exists
            root = self.table[self._root_key]
            x_side = x >> (w - 1)
            y_tag = root.desc[1 - x_side]
            assert root.desc[x_side] is None and y_tag is not None
            root.desc[x_side] = (_LEAF, x)
            self.leaves[x] = self._sbar_insert(self._key_element(x), ELEMENT, x)
            self._index_insert(x, nbr, 0, y_tag, a_depth=0, a_real=False)
            return

        v_p = x >> (w - d_v)
        v_key = self._enc0(d_v, v_p)
        x_side = (x >> (w - d_v - 1)) & 1
        open_h = self._sbar_insert(self._key_open(d_v, v_p), OPEN,
                                   2 * (v_p << (w - d_v)), v_key)
        close_h = self._sbar_insert(
            self._key_close(d_v, v_p), CLOSE,
            2 * ((v_p << (w - d_v)) + (1 << (w - d_v)) - 1) + 2, v_key,
        )
        # the innermost enclosing parenthesis pair touches the new pair
        a_key = None
        left = self.nav.entry(open_h).prev
        if left is not None and self.nav.entry(left).kind == OPEN:
            a_key = self.nav.entry(left).owner
        else:
            right = self.nav.entry(close_h).next
            assert right is not None and self.nav.entry(right).kind == CLOSE, \
                "no enclosing parenthesis adjacent to the new pair"
            a_key = self.nav.entry(right).owner
        a_rec = self.table[a_key]
        a_real = a_rec.desc[0] is not None and a_rec.desc[1] is not None
        side_a = (v_p >> (d_v - a_rec.name.depth - 1)) & 1
        y_tag = a_rec.desc[side_a]
        assert y_tag is not None

        rec = BranchingRecord(NodeName(0, d_v, v_p), a_key, [None, None], open_h, close_h)
        rec.desc[x_side] = (_LEAF, x)
        rec.desc[1 - x_side] = y_tag
        a_rec.desc[side_a] = (_NODE, v_key)
        if y_tag[0] == _NODE:
            self.table[y_tag[1]].ancestor = v_key
        self.table[v_key] = rec
        self.leaves[x] = self._sbar_insert(self._key_element(x), ELEMENT, x)
        self._index_insert(x, nbr, d_v, y_tag, a_rec.name.depth, a_real)

    def _y_coords(self, y_tag) -> tuple[bool, int, int]:
        """(is_real_branching, depth in T0, prefix) of a descendant tag."""
        if y_tag[0] == _LEAF:
            return False, self.w, y_tag[1]
        nm = self.table[y_tag[1]].name
        return True, nm.depth, nm.prefix

    def _index_insert(self, x: int, nbr: int, d_v: int, y_tag, a_depth: int,
                      a_real: bool) -> None:
        w = self.w
        y_real, y_d0, _ = self._y_coords(y_tag)
        fast_query = self.config.variant == VARIANT_FAST_QUERY
        B = self.B
        idx_add = self.index.add
        idx_set = self.index.set
        enc = self._enc
        for t in range(self.top + 1):
            ch = self._chunks[t]
            td = self._tdepth[t]
            k = d_v // ch
            w_is_root = k == 0
            beta = min((k + 1) * ch, w)
            a_in_chunk = a_real and a_depth >= k * ch
            yk = y_d0 // ch
            y_in_chunk = y_real and yk == k
            w_real_before = a_in_chunk or y_in_chunk

            if not w_is_root and not w_real_before:
                # the node may already carry a (value-identical) child entry
                if fast_query:
                    present = k < B or (a_real and a_depth >= (k // B) * B * ch)
                else:
                    present = k == 1 or (a_real and a_depth >= (k - 1) * ch)
                if not present:
                    idx_add(enc(t, k, x >> (w - k * ch)), a_depth)

            if fast_query:
                ns_root = (k // B) * B
                border = min(ns_root + B - 1, td)
                # a surviving-path node inside this natural subtree was
                # already stored iff some branching node sits between the
                # subtree root and it: the deepest candidate is the lowest
                # branching ancestor (whose chunk level is a_depth // ch)
                had_ns_anc = ns_root == 0 or (a_real and a_depth // ch >= ns_root)
                for dd in range(k + 1, border + 1):
                    r0d = min(dd * ch, w)
                    idx_add(enc(t, dd, x >> (w - r0d)), d_v)
                for dd in range(k + 1, border + 1):
                    r0d = min(dd * ch, w)
                    if r0d > y_d0:
                        break
                    key = enc(t, dd, nbr >> (w - r0d))
                    present = had_ns_anc or (y_real and dd == yk)
                    if present:
                        idx_set(key, d_v)
                    else:
                        idx_add(key, d_v)
                if y_real and yk > border:
                    ynm = self.table[y_tag[1]].name
                    idx_set(enc(t, yk, ynm.prefix >> (y_d0 - yk * ch)), d_v)
            else:
                idx_add(enc(t, k + 1, x >> (w - beta)), d_v)
                if beta <= y_d0:
                    key = enc(t, k + 1, nbr >> (w - beta))
                    present = w_real_before or w_is_root or (y_real and yk == k + 1)
                    if present:
                        idx_set(key, d_v)
                    else:
                        idx_add(key, d_v)
                if y_real and yk >= k + 2:
                    ynm = self.table[y_tag[1]].name
                    idx_set(enc(t, yk, ynm.prefix >> (y_d0 - yk * ch)), d_v)

    def delete(self, x: int) -> bool:
        if x not in self.leaves:
            return False
        writes_before = self.index.writes
        prev = self.pred.prev_key(x)
        nxt = self.pred.next_key(x)
        if prev is None and nxt is None:
            self._delete_last(x)
        else:
            self._delete_nonlast(x, prev, nxt)
        self.stats.deletes += 1
        delta = self.index.writes - writes_before
        if delta > self.stats.max_index_writes_delete:
            self.stats.max_index_writes_delete = delta
        if self.config.audit:
            self.check()
        return True

    def _delete_last(self, x: int) -> None:
        w = self.w
        for t in range(self.top + 1):
            ch = self._chunks[t]
            if self.config.variant == VARIANT_FAST_QUERY:
                for dd in range(1, min(self.B - 1, self._tdepth[t]) + 1):
                    r0d = min(dd * ch, w)
                    self.index.drop(self._enc(t, dd, x >> (w - r0d)))
            else:
                r0d = min(ch, w)
                self.index.drop(self._enc(t, 1, x >> (w - r0d)))
        self._sbar_delete(self._key_element(x))
        self._sbar_delete(self._key_open(0, 0))
        self._sbar_delete(self._key_close(0, 0))
        del self.table[self._root_key]
        del self.leaves[x]
        self.pred.delete(x)

    def _delete_nonlast(self, x: int, prev: int | None, nxt: int | None) -> None:
        w = self.w
        dp = lca_depth(x, prev, w) if prev is not None else -1
        dn = lca_depth(x, nxt, w) if nxt is not None else -1
        if dp > dn:
            d_v, nbr = dp, prev
        else:
            d_v, nbr = dn, nxt

        if d_v == 0:
            root = self.table[self._root_key]
            x_side = x >> (w - 1)
            assert root.desc[x_side] == (_LEAF, x)
            root.desc[x_side] = None
            y_tag = root.desc[1 - x_side]
            self._sbar_delete(self._key_element(x))
            del self.leaves[x]
            self.pred.delete(x)
            self._index_delete(x, nbr, 0, y_tag, a_depth=0, a_real=False)
            return

        v_p = x >> (w - d_v)
        v_key = self._enc0(d_v, v_p)
        rec = self.table.pop(v_key)
        x_side = (x >> (w - d_v - 1)) & 1
        assert rec.desc[x_side] == (_LEAF, x)
        y_tag = rec.desc[1 - x_side]
        a_key = rec.ancestor
        a_rec = self.table[a_key]
        side_a = (v_p >> (d_v - a_rec.name.depth - 1)) & 1
        assert a_rec.desc[side_a] == (_NODE, v_key)
        a_rec.desc[side_a] = y_tag
        if y_tag[0] == _NODE:
            self.table[y_tag[1]].ancestor = a_key
        self._sbar_delete(self._key_open(d_v, v_p))
        self._sbar_delete(self._key_close(d_v, v_p))
        self._sbar_delete(self._key_element(x))
        del self.leaves[x]
        self.pred.delete(x)
        a_real = a_rec.desc[0] is not None and a_rec.desc[1] is not None
        self._index_delete(x, nbr, d_v, y_tag, a_rec.name.depth, a_real)

    def _index_delete(self, x: int, nbr: int, d_v: int, y_tag, a_depth: int,
                      a_real: bool) -> None:
        w = self.w
        y_real, y_d0, _ = self._y_coords(y_tag)
        fast_query = self.config.variant == VARIANT_FAST_QUERY
        B = self.B
        idx_drop = self.index.drop
        idx_set = self.index.set
        enc = self._enc
        for t in range(self.top + 1):
            ch = self._chunks[t]
            td = self._tdepth[t]
            k = d_v // ch
            w_is_root = k == 0
            beta = min((k + 1) * ch, w)
            a_in_chunk = a_real and a_depth >= k * ch
            yk = y_d0 // ch
            y_in_chunk = y_real and yk == k
            w_stays = w_is_root or a_in_chunk or y_in_chunk

            if fast_query:
                ns_root = (k // B) * B
                border = min(ns_root + B - 1, td)
                has_ns_anc = ns_root == 0 or (a_real and a_depth // ch >= ns_root)
                for dd in range(k + 1, border + 1):
                    r0d = min(dd * ch, w)
                    idx_drop(enc(t, dd, x >> (w - r0d)))
                for dd in range(k + 1, border + 1):
                    r0d = min(dd * ch, w)
                    if r0d > y_d0:
                        break
                    key = enc(t, dd, nbr >> (w - r0d))
                    mandated = has_ns_anc or (y_real and dd == yk)
                    if mandated:
                        idx_set(key, a_depth)
                    else:
                        idx_drop(key)
                if y_real and yk > border:
                    ynm = self.table[y_tag[1]].name
                    idx_set(enc(t, yk, ynm.prefix >> (y_d0 - yk * ch)), a_depth)
                if not w_is_root and not w_stays:
                    child_after = k < B or (a_real and a_depth >= (k // B) * B * ch)
                    if not child_after:
                        idx_drop(enc(t, k, x >> (w - k * ch)))
            else:
                idx_drop(enc(t, k + 1, x >> (w - beta)))
                if beta <= y_d0:
                    key = enc(t, k + 1, nbr >> (w - beta))
                    if w_stays or (y_real and yk == k + 1):
                        idx_set(key, a_depth)
                    else:
                        idx_drop(key)
                if y_real and yk >= k + 2:
                    ynm = self.table[y_tag[1]].name
                    idx_set(enc(t, yk, ynm.prefix >> (y_d0 - yk * ch)), a_depth)
                if not w_is_root and not w_stays:
                    child_after = k == 1 or (a_real and a_depth >= (k - 1) * ch)
                    if not child_after:
                        idx_drop(enc(t, k, x >> (w - k * ch)))

    # -- queries ------------------------------------------------------------------

    def test_branching(self, t: int, d: int, p: int) -> bool:
        """Exact branching test for any order-t node; roots count as branching."""
        self._q_tb += 1
        if d == 0:
            return True
        if d >= self._tdepth[t]:
            return False
        depth = self.index.get(self._enc(t, d, p))
        if depth is None:
            return False
        ch = self._chunks[t]
        r0d = d * ch
        if depth >= r0d:
            return False
        rec = self.table.get(self._enc0(depth, p >> (r0d - depth)))
        if rec is None:
            return False
        desc = rec.desc[(p >> (r0d - depth - 1)) & 1]
        if desc is None or desc[0] == _LEAF:
            return False
        nm = self.table[desc[1]].name
        return nm.depth // ch == d and (nm.prefix >> (nm.depth - r0d)) == p

    def verify_lowest_ancestor(self, rec: BranchingRecord, v: NodeName) -> bool:
        """True iff `rec` is a strict ancestor of the order-0 node `v` whose
        branching descendant on v's side lies at or below v."""
        if rec.name.depth >= v.depth:
            return False
        if (v.prefix >> (v.depth - rec.name.depth)) != rec.name.prefix:
            return False
        desc = rec.desc[(v.prefix >> (v.depth - rec.name.depth - 1)) & 1]
        if desc is None:
            return False
        if desc[0] == _LEAF:
            dd, dp = self.w, desc[1]
        else:
            nm = self.table[desc[1]].name
            dd, dp = nm.depth, nm.prefix
        return dd >= v.depth and (dp >> (dd - v.depth)) == v.prefix

    def _verified_ancestor(self, depth: int | None, v_d: int, v_p: int):
        """Branching record at `depth` on v's path, checked to be a genuine
        strict ancestor whose descendant on v's side sits inside v's subtree."""
        if depth is None or depth >= v_d:
            return None
        rec = self.table.get(self._enc0(depth, v_p >> (v_d - depth)))
        if rec is None:
            return None
        desc = rec.desc[(v_p >> (v_d - depth - 1)) & 1]
        if desc is None:
            return None
        if desc[0] == _LEAF:
            dd, dp = self.w, desc[1]
        else:
            nm = self.table[desc[1]].name
            dd, dp = nm.depth, nm.prefix
        if dd < v_d or (dp >> (dd - v_d)) != v_p:
            return None
        return rec

    def _resolve_ancestor(self, v_d: int, v_p: int, t_star: int):
        """Locate and verify the lowest branching ancestor of the non-branching
        query node, given the first order whose trie maps it to a branching node."""
        w = self.w
        t1 = t_star - 1
        ch1 = self._chunks[t1]
        z_d = v_d // ch1
        z_p = v_p >> (v_d - z_d * ch1)
        variant = self.config.variant
        ch_star = self._chunks[t_star]
        k_star = v_d // ch_star

        if variant == VARIANT_CORE:
            if z_d & 1:
                depth = self.index.get(self._enc(t1, z_d, z_p))
            else:
                depth = self.index.get(self._enc(t_star, k_star, v_p >> (v_d - k_star * ch_star)))
            return self._verified_ancestor(depth, v_d, v_p)

        if k_star != 0:
            depth = self.index.get(self._enc(t_star, k_star, v_p >> (v_d - k_star * ch_star)))
            rec = self._verified_ancestor(depth, v_d, v_p)
            if rec is not None:
                return rec
        if variant == VARIANT_FAST_QUERY:
            depth = self.index.get(self._enc(t1, z_d, z_p))
            return self._verified_ancestor(depth, v_d, v_p)
        # walk up the order-(t*-1) trie within the natural subtree
        ns_root = (z_d // self.B) * self.B
        for dd in range(z_d, ns_root, -1):
            depth = self.index.get(self._enc(t1, dd, v_p >> (v_d - dd * ch1)))
            rec = self._verified_ancestor(depth, v_d, v_p)
            if rec is not None:
                return rec
        return None

    def _max_under(self, desc) -> int:
        if desc[0] == _LEAF:
            return desc[1]
        rec = self.table[desc[1]]
        self._q_nav += 1
        h = self.nav.nearest_element_left(rec.close_h)
        return self.nav.entry(h).value

    def _min_under(self, desc) -> int:
        if desc[0] == _LEAF:
            return desc[1]
        rec = self.table[desc[1]]
        self._q_nav += 1
        h = self.nav.nearest_element_right(rec.open_h)
        return self.nav.entry(h).value

    def findany(self, a: int, b: int) -> int | None:
        """Some element of S in [a, b], or None exactly when none exists."""
        if a > b:
            raise ValueError("empty interval")
        self._q_tb = 0
        self._q_nav = 0
        reads_before = self.index.reads
        preds_before = self.pred.query_count + self._sbar_pred.query_count
        try:
            if a == b:
                return a if a in self.leaves else None
            if not self.leaves:
                return None
            w = self.w
            v_d = lca_depth(a, b, w)
            v_p = a >> (w - v_d)
            rec = self.table.get(self._enc0(v_d, v_p))
            if rec is not None:
                left, right = rec.desc
                if left is not None:
                    c = self._max_under(left)
                    if a <= c <= b:
                        return c
                if right is not None:
                    c = self._min_under(right)
                    if a <= c <= b:
                        return c
                return None
            lo, hi = 1, self.top
            while lo < hi:
                mid = (lo + hi) // 2
                ch = self._chunks[mid]
                if self.test_branching(mid, v_d // ch, v_p >> (v_d - (v_d // ch) * ch)):
                    hi = mid
                else:
                    lo = mid + 1
            anc = self._resolve_ancestor(v_d, v_p, lo)
            if anc is None:
                return None
            desc = anc.desc[(v_p >> (v_d - anc.name.depth - 1)) & 1]
            c = self._max_under(desc)
            if a <= c <= b:
                return c
            c = self._min_under(desc)
            if a <= c <= b:
                return c
            return None
        finally:
            st = self.stats
            st.queries += 1
            if self._q_tb > st.max_test_branching:
                st.max_test_branching = self._q_tb
            if self._q_nav > st.max_nav_queries:
                st.max_nav_queries = self._q_nav
            reads = self.index.reads - reads_before
            if reads > st.max_index_reads_query:
                st.max_index_reads_query = reads
            st.pred_queries_during_query += (
                self.pred.query_count + self._sbar_pred.query_count - preds_before
            )

    def report(self, a: int, b: int):
        """All elements of S in [a, b] in increasing order.

        Seeds from findany, then walks the sorted key links in both
        directions.  The structure must not be mutated while iterating.
        """
        seed = self.findany(a, b)
        if seed is None:
            return
        left = []
        cur = seed
        while True:
            p = self.pred.prev_key(cur)
            if p is None or p < a:
                break
            left.append(p)
            cur = p
        for k in reversed(left):
            yield k
        yield seed
        cur = seed
        while True:
            n = self.pred.next_key(cur)
            if n is None or n > b:
                break
            yield n
            cur = n

    # -- audit -----------------------------------------------------------------

    def check(self) -> None:
        """Full structural audit against brute-force recomputation."""
        w = self.w
        elems = sorted(self.leaves)
        assert list(self.pred) == elems, "predecessor set disagrees with leaf table"

        expected = self._expected_records(elems)
        assert set(self.table) == set(expected), (
            f"branching table keys differ: extra={set(self.table) - set(expected)} "
            f"missing={set(expected) - set(self.table)}"
        )
        for key, (anc, d_left, d_right) in expected.items():
            rec = self.table[key]
            assert rec.ancestor == anc, f"ancestor mismatch at {rec.name}"
            assert rec.desc[0] == d_left and rec.desc[1] == d_right, (
                f"descendant mismatch at {rec.name}: {rec.desc} vs {(d_left, d_right)}"
            )
            assert self.nav.entry(rec.open_h).kind == OPEN
            assert self.nav.entry(rec.open_h).owner == key
            assert self.nav.entry(rec.close_h).kind == CLOSE
            assert self.nav.entry(rec.close_h).owner == key

        self.nav.validate()
        self._check_sequence(elems)
        self._check_index(elems)
        skeys = set(self._sbar_handle)
        assert set(iter(self._sbar_pred)) == skeys

    def _expected_records(self, elems: list[int]):
        """Brute-force (ancestor, left desc, right desc) for every branching node."""
        w = self.w
        out: dict[int, tuple] = {}
        if not elems:
            return out
        root_key = self._root_key

        def top_tag(lo: int, hi: int):
            if hi - lo == 1:
                return (_LEAF, elems[lo])
            d = lca_depth(elems[lo], elems[hi - 1], w)
            return (_NODE, self._enc0(d, elems[lo] >> (w - d)))

        def build(lo: int, hi: int, anc: int | None):
            d = lca_depth(elems[lo], elems[hi - 1], w)
            p = elems[lo] >> (w - d)
            key = self._enc0(d, p)
            threshold = ((p << 1) | 1) << (w - d - 1)
            m = bisect_left(elems, threshold, lo, hi)
            out[key] = (anc, top_tag(lo, m), top_tag(m, hi))
            if m - lo >= 2:
                build(lo, m, key)
            if hi - m >= 2:
                build(m, hi, key)

        if len(elems) == 1:
            side = elems[0] >> (w - 1)
            tags = [None, None]
            tags[side] = (_LEAF, elems[0])
            out[root_key] = (None, tags[0], tags[1])
            return out
        d0 = lca_depth(elems[0], elems[-1], w)
        if d0 == 0:
            build(0, len(elems), None)
        else:
            side = elems[0] >> (w - 1)
            tags = [None, None]
            tags[side] = top_tag(0, len(elems))
            out[root_key] = (None, tags[0], tags[1])
            build(0, len(elems), root_key)
        return out

    def _check_sequence(self, elems: list[int]) -> None:
        """Augmented list equals the key-sorted interleaving, parens balance,
        every matched pair encloses an element, and runs stay short."""
        expected = [(self._key_element(x), ELEMENT, x) for x in elems]
        for key, rec in self.table.items():
            d, p = rec.name.depth, rec.name.prefix
            expected.append((self._key_open(d, p), OPEN, key))
            expected.append((self._key_close(d, p), CLOSE, key))
        expected.sort()
        got = []
        for h in self.nav:
            e = self.nav.entry(h)
            got.append((e.kind, e.value if e.kind == ELEMENT else e.owner))
        assert got == [(k, ident) for _, k, ident in expected], "list order mismatch"

        stack: list[tuple[int, int]] = []  # (owner, elements seen so far)
        run = 0
        for kind, ident in got:
            if kind == ELEMENT:
                run = 0
                stack = [(o, c + 1) for o, c in stack]
            else:
                run += 1
                assert run <= 2 * self.w, "element-free run exceeds 2w"
                if kind == OPEN:
                    stack.append((ident, 0))
                else:
                    owner, count = stack.pop()
                    assert owner == ident, "parentheses do not nest"
                    assert count >= 1, "matched pair encloses no element"
        assert not stack, "unbalanced parentheses"

    def _mandated_entries(self, elems: list[int]) -> dict[int, int]:
        """Brute-force mandated index keys and their exact values."""
        w = self.w
        B = self.B
        real: dict[int, tuple[int, int]] = {}
        for i in range(len(elems) - 1):
            d = lca_depth(elems[i], elems[i + 1], w)
            real[self._enc0(d, elems[i] >> (w - d))] = (d, elems[i] >> (w - d))

        def lba_depth(d0: int, path: int) -> int:
            # deepest real branching node strictly above depth d0 on the path
            # of a key with the given leading bits (path has >= d0 bits here)
            for dd in range(d0 - 1, 0, -1):
                if self._enc0(dd, path >> (d0 - dd)) in real:
                    return dd
            return 0

        mandated: dict[int, int] = {}
        fast_query = self.config.variant == VARIANT_FAST_QUERY
        for t in range(self.top + 1):
            ch = self._chunks[t]
            td = self._tdepth[t]
            branching_t: set[int] = set()
            for d, p in real.values():
                k = d // ch
                if k:
                    branching_t.add(self._enc(t, k, p >> (d - k * ch)))
            for key in branching_t:
                d_t = (key >> _ORDER_BITS) & ((1 << _DEPTH_BITS) - 1)
                p_t = (key >> _TAG_BITS) >> (w - min(d_t * ch, w))
                mandated[key] = lba_depth(d_t * ch, p_t)
            for x in elems:
                for dd in range(1, td + 1):
                    r0d = min(dd * ch, w)
                    key = self._enc(t, dd, x >> (w - r0d))
                    if key in mandated:
                        continue
                    if fast_query:
                        ns_root = (dd // B) * B
                        ok = False
                        if dd % B != 0:
                            if ns_root == 0:
                                ok = True  # the trie root heads this subtree
                            else:
                                for au in range(ns_root, dd):
                                    if self._enc(
                                        t, au, x >> (w - min(au * ch, w))
                                    ) in branching_t:
                                        ok = True
                                        break
                    else:
                        ok = dd == 1 or self._enc(
                            t, dd - 1, x >> (w - (dd - 1) * ch)
                        ) in branching_t
                    if ok:
                        mandated[key] = lba_depth(r0d, x >> (w - r0d))
        return mandated

    def _check_index(self, elems: list[int]) -> None:
        mandated = self._mandated_entries(elems)
        snap = self.index.snapshot()
        assert snap == mandated, (
            f"index mismatch: extra={ {k: v for k, v in snap.items() if k not in mandated} } "
            f"missing={ {k: v for k, v in mandated.items() if k not in snap} } "
            f"wrong={ {k: (snap[k], mandated[k]) for k in snap.keys() & mandated.keys() if snap[k] != mandated[k]} }"
        )
        if self.config.backend == BACKEND_BLOOMIER:
            for key, value in mandated.items():
                assert self.index._filter.lookup(key) == value + 1, \
                    "filter disagrees on a mandated key"

    # -- oracle helpers for tests and the CLI -------------------------------------

    def oracle_findany_empty(self, sorted_elems: list[int], a: int, b: int) -> bool:
        i = bisect_left(sorted_elems, a)
        return i >= len(sorted_elems) or sorted_elems[i] > b

    def space_bits(self) -> int:
        return self.index.space_bits()

    def dump(self) -> str:
        """One line per branching node for audit diffs: name, ancestor depth,
        descendants (in key order)."""

        def tag(desc) -> str:
            if desc is None:
                return "-"
            if desc[0] == _LEAF:
                return f"leaf:{desc[1]}"
            nm = self.table[desc[1]].name
            return f"node:{nm.depth}/{nm.prefix:0{max(1, nm.depth)}b}"

        lines = []
        for key in sorted(self.table):
            rec = self.table[key]
            anc = "-" if rec.ancestor is None else str(self.table[rec.ancestor].name.depth)
            lines.append(
                f"{rec.name.depth}/{rec.name.prefix:0{max(1, rec.name.depth)}b}"
                f" anc={anc} left={tag(rec.desc[0])} right={tag(rec.desc[1])}"
            )
        return "\n".join(lines)
