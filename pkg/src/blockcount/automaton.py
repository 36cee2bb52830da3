from array import array
from typing import Sequence

import numpy as np

# flat transition tables up to this many slots, per-state dicts beyond
_TABLE_SLOTS = 1 << 25


class SuffixAutomaton:
    """Suffix automaton over dense integer symbols 0..q-1.

    States are kept in parallel `array('q')` columns. Small alphabets use a
    flat transition table indexed by state * q + symbol, larger ones a dict
    per state.
    """

    def __init__(self, symbols: Sequence[int], alphabet_size: int) -> None:
        capacity = max(2 * len(symbols), 2)
        self.alphabet_size = alphabet_size
        self.max_length = array("q", bytes(8 * capacity))
        self.link = array("q", [-1]) * capacity
        self.size = 1
        self.last = 0
        if alphabet_size * capacity <= _TABLE_SLOTS:
            self._table = array("q", [-1]) * (capacity * alphabet_size)
            extend = self._extend_table
        else:
            self._maps: list[dict[int, int]] = [dict() for _ in range(capacity)]
            extend = self._extend_maps
        for symbol in symbols:
            extend(symbol)

    def _extend_table(self, c: int) -> None:
        q = self.alphabet_size
        table, max_length, link = self._table, self.max_length, self.link
        current = self.size
        self.size += 1
        max_length[current] = max_length[self.last] + 1
        p = self.last
        while p != -1 and table[p * q + c] == -1:
            table[p * q + c] = current
            p = link[p]
        if p == -1:
            link[current] = 0
        else:
            target = table[p * q + c]
            if max_length[p] + 1 == max_length[target]:
                link[current] = target
            else:
                clone = self.size
                self.size += 1
                max_length[clone] = max_length[p] + 1
                table[clone * q : (clone + 1) * q] = table[target * q : (target + 1) * q]
                link[clone] = link[target]
                while p != -1 and table[p * q + c] == target:
                    table[p * q + c] = clone
                    p = link[p]
                link[target] = clone
                link[current] = clone
        self.last = current

    def _extend_maps(self, c: int) -> None:
        maps, max_length, link = self._maps, self.max_length, self.link
        current = self.size
        self.size += 1
        max_length[current] = max_length[self.last] + 1
        p = self.last
        while p != -1 and c not in maps[p]:
            maps[p][c] = current
            p = link[p]
        if p == -1:
            link[current] = 0
        else:
            target = maps[p][c]
            if max_length[p] + 1 == max_length[target]:
                link[current] = target
            else:
                clone = self.size
                self.size += 1
                max_length[clone] = max_length[p] + 1
                maps[clone] = dict(maps[target])
                link[clone] = link[target]
                while p != -1 and maps[p].get(c) == target:
                    maps[p][c] = clone
                    p = link[p]
                link[target] = clone
                link[current] = clone
        self.last = current

    def distinct_factor_counts(self, j_max: int) -> np.ndarray:
        """counts[J] = number of distinct factors of length J, for J = 0..j_max.

        A state v holds the factors of lengths len(link(v))+1 .. len(v); the
        ranges are added through a difference array.
        """
        lengths = np.frombuffer(self.max_length, dtype=np.int64)[: self.size]
        links = np.frombuffer(self.link, dtype=np.int64)[1 : self.size]
        low = lengths[links] + 1
        high = np.minimum(lengths[1:], j_max)
        keep = low <= high
        deltas = np.bincount(low[keep], minlength=j_max + 2)[: j_max + 2]
        deltas = deltas - np.bincount(high[keep] + 1, minlength=j_max + 2)[: j_max + 2]
        counts = np.cumsum(deltas)[: j_max + 1]
        counts[0] = 1
        return counts
