"""Dynamic predecessor over fixed-width integer keys.

The default backend keeps keys in sorted buckets of Theta(width) size with
an x-fast-style top structure over the bucket representatives: hash tables
of key prefixes per level, binary-searched for the longest match.  Queries
cost O(log width) expected; bucket splits and merges keep top updates rare.

A plain sorted-list backend with identical behavior is available for audit
runs, so structure bugs can be separated from range-reporting bugs.

Every instance also threads all keys into a doubly linked list in
increasing order; neighbor links are exposed separately from (and cheaper
than) counted predecessor queries.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right, insort


class _XFastTop:
    """Prefix tables over a dynamic set of representative keys."""

    def __init__(self, width: int):
        self.width = width
        # level L maps the leading L bits of each rep to [min, max] under it
        self._levels: list[dict[int, list[int]]] = [{} for _ in range(width + 1)]
        self._link: dict[int, list[int | None]] = {}
        self.min: int | None = None
        self.max: int | None = None

    def __len__(self) -> int:
        return len(self._link)

    def __contains__(self, rep: int) -> bool:
        return rep in self._link

    def insert(self, rep: int) -> None:
        p = self.pred(rep)
        nxt = self._link[p][1] if p is not None else self.min
        self._link[rep] = [p, nxt]
        if p is not None:
            self._link[p][1] = rep
        if nxt is not None:
            self._link[nxt][0] = rep
        w = self.width
        for level in range(1, w + 1):
            pref = rep >> (w - level)
            entry = self._levels[level].get(pref)
            if entry is None:
                self._levels[level][pref] = [rep, rep]
            else:
                if rep < entry[0]:
                    entry[0] = rep
                if rep > entry[1]:
                    entry[1] = rep
        if self.min is None or rep < self.min:
            self.min = rep
        if self.max is None or rep > self.max:
            self.max = rep

    def delete(self, rep: int) -> None:
        prv, nxt = self._link.pop(rep)
        if prv is not None:
            self._link[prv][1] = nxt
        if nxt is not None:
            self._link[nxt][0] = prv
        w = self.width
        for level in range(1, w + 1):
            pref = rep >> (w - level)
            entry = self._levels[level][pref]
            if entry[0] == entry[1]:
                del self._levels[level][pref]
                continue
            if entry[0] == rep:
                entry[0] = nxt  # next rep shares the prefix when the entry survives
            elif entry[1] == rep:
                entry[1] = prv
        if self.min == rep:
            self.min = nxt
        if self.max == rep:
            self.max = prv

    def next_of(self, rep: int) -> int | None:
        return self._link[rep][1]

    def pred(self, x: int) -> int | None:
        """Largest representative <= x, or None."""
        if self.min is None or x < self.min:
            return None
        if x >= self.max:  # type: ignore[operator]
            return self.max
        w = self.width
        # deepest level whose table contains x's prefix
        lo, hi = 0, w
        levels = self._levels
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if (x >> (w - mid)) in levels[mid]:
                lo = mid
            else:
                hi = mid - 1
        if lo == w:
            return x
        child = x >> (w - lo - 1)
        if child & 1:
            # x descends right of the divergence; left sibling subtree holds pred
            return levels[lo + 1][child ^ 1][1]
        # everything under the match is greater than x
        under_min = levels[lo + 1][child | 1][0]
        return self._link[under_min][0]


class PredecessorSet:
    """Ordered integer set with predecessor/successor queries and key links.

    pred/succ increment an instrumentation counter; neighbor links do not.
    """

    def __init__(self, width: int, backend: str = "buckets"):
        if backend not in ("buckets", "sorted"):
            raise ValueError(f"unknown backend {backend!r}")
        self.width = width
        self.backend = backend
        self.query_count = 0
        self._links: dict[int, list[int | None]] = {}
        self._min: int | None = None
        self._max: int | None = None
        if backend == "buckets":
            self._top = _XFastTop(width)
            self._buckets: dict[int, list[int]] = {}
            self._cap = 2 * width
            self._last_rep: int | None = None
        else:
            self._keys: list[int] = []

    def __len__(self) -> int:
        return len(self._links)

    def __contains__(self, x: int) -> bool:
        return x in self._links

    def __iter__(self):
        x = self._min
        while x is not None:
            yield x
            x = self._links[x][1]

    @property
    def min(self) -> int | None:
        return self._min

    @property
    def max(self) -> int | None:
        return self._max

    def prev_key(self, x: int) -> int | None:
        return self._links[x][0]

    def next_key(self, x: int) -> int | None:
        return self._links[x][1]

    # -- updates ---------------------------------------------------------

    def insert(self, x: int) -> tuple[int | None, int | None, bool]:
        """Add x; returns (predecessor, successor, was_new)."""
        if x >> self.width:
            raise ValueError(f"key {x} does not fit in {self.width} bits")
        if x in self._links:
            prv, nxt = self._links[x]
            return prv, nxt, False
        prv = self._pred_raw(x)
        nxt = self._links[prv][1] if prv is not None else self._min
        if self.backend == "buckets":
            self._bucket_insert(x, prv)
        else:
            insort(self._keys, x)
        self._links[x] = [prv, nxt]
        if prv is not None:
            self._links[prv][1] = x
        if nxt is not None:
            self._links[nxt][0] = x
        if self._min is None or x < self._min:
            self._min = x
        if self._max is None or x > self._max:
            self._max = x
        return prv, nxt, True

    def delete(self, x: int) -> bool:
        if x not in self._links:
            return False
        if self.backend == "buckets":
            self._bucket_delete(x)
        else:
            self._keys.pop(bisect_left(self._keys, x))
        prv, nxt = self._links.pop(x)
        if prv is not None:
            self._links[prv][1] = nxt
        if nxt is not None:
            self._links[nxt][0] = prv
        if self._min == x:
            self._min = nxt
        if self._max == x:
            self._max = prv
        return True

    # -- counted queries --------------------------------------------------

    def pred(self, x: int) -> int | None:
        """Largest key <= x."""
        self.query_count += 1
        return self._pred_raw(x)

    def succ(self, x: int) -> int | None:
        """Smallest key >= x."""
        self.query_count += 1
        if x in self._links:
            return x
        p = self._pred_raw(x)
        if p is None:
            return self._min
        return self._links[p][1]

    # -- internals ---------------------------------------------------------

    def _pred_raw(self, x: int) -> int | None:
        if self.backend == "sorted":
            i = bisect_right(self._keys, x)
            return self._keys[i - 1] if i else None
        rep = self._top.pred(x)
        if rep is None:
            self._last_rep = None
            return None
        self._last_rep = rep
        bucket = self._buckets[rep]
        return bucket[bisect_right(bucket, x) - 1]

    def _bucket_insert(self, x: int, prv: int | None) -> None:
        # _pred_raw(x) just ran; its bucket is where x belongs
        top = self._top
        if prv is None:
            if top.min is None:
                self._buckets[x] = [x]
                top.insert(x)
                return
            # new global minimum joins (and re-labels) the first bucket
            rep = top.min
            bucket = self._buckets.pop(rep)
            bucket.insert(0, x)
            top.delete(rep)
            top.insert(x)
            self._buckets[x] = bucket
        else:
            bucket = self._buckets[self._last_rep]
            insort(bucket, x)
        self._maybe_split(bucket)

    def _maybe_split(self, bucket: list[int]) -> None:
        if len(bucket) <= self._cap:
            return
        half = len(bucket) // 2
        right = bucket[half:]
        del bucket[half:]
        self._buckets[right[0]] = right
        self._top.insert(right[0])

    def _bucket_delete(self, x: int) -> None:
        top = self._top
        rep = top.pred(x)
        bucket = self._buckets[rep]
        bucket.pop(bisect_left(bucket, x))
        if not bucket:
            del self._buckets[rep]
            top.delete(rep)
            return
        if x == rep:
            del self._buckets[rep]
            top.delete(rep)
            rep = bucket[0]
            self._buckets[rep] = bucket
            top.insert(rep)
        if len(bucket) < self.width // 2:
            nxt = top.next_of(rep)
            if nxt is not None:
                merged = bucket + self._buckets.pop(nxt)
                top.delete(nxt)
                self._buckets[rep] = merged
                self._maybe_split(merged)
