"""Deterministic exact-cover search."""
from __future__ import annotations

from .projspace import BudgetExceeded


class ExactCover:
    """Algorithm X over sets given as lists of column ids.

    Columns are chosen by fewest candidates with ties to the least id, and rows are
    tried in input order, so node counts are reproducible.
    """

    def __init__(self, rows, ncols: int, budget: int = 10_000_000):
        self.rows = [tuple(r) for r in rows]
        self.ncols = ncols
        self.budget = budget
        self.nodes = 0
        self.cols = {c: set() for c in range(ncols)}
        for i, r in enumerate(self.rows):
            for c in r:
                self.cols[c].add(i)

    def _select(self, r):
        removed = []
        for j in self.rows[r]:
            for i in self.cols[j]:
                for k in self.rows[i]:
                    if k != j:
                        self.cols[k].discard(i)
            removed.append(self.cols.pop(j))
        return removed

    def _deselect(self, r, removed):
        for j in reversed(self.rows[r]):
            self.cols[j] = removed.pop()
            for i in self.cols[j]:
                for k in self.rows[i]:
                    if k != j:
                        self.cols[k].add(i)

    def solutions(self):
        partial: list[int] = []

        def rec():
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(f"exact cover exceeded {self.budget} nodes")
            if not self.cols:
                yield list(partial)
                return
            c = min(self.cols, key=lambda x: (len(self.cols[x]), x))
            for r in sorted(self.cols[c]):
                partial.append(r)
                removed = self._select(r)
                yield from rec()
                self._deselect(r, removed)
                partial.pop()

        yield from rec()

    def first(self):
        return next(self.solutions(), None)
