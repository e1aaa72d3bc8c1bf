"""Sparse row-echelon spans over Q(i) for truncated ideal membership."""

from __future__ import annotations

from typing import Hashable, Iterable, Optional

from .arith.gaussian import GaussianRational

__all__ = ["EchelonSpan"]


class EchelonSpan:
    """Incrementally maintained echelon basis of a span of sparse vectors.

    Vectors are dicts ``{column: coefficient}`` with integer columns; the
    pivot of a row is its smallest column.  With ``track=True`` every row
    also records which inserted vectors (by tag) combine to it, so membership
    answers can be turned into explicit combinations.
    """

    def __init__(self, track: bool = False):
        self.rows: dict = {}
        self.track = track
        self.combos: dict = {}
        self.basis_tags: list = []
        self.inserted = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: dict, combo: Optional[dict]):
        vec = dict(vec)
        done: dict = {}
        while vec:
            c = min(vec)
            coeff = vec.pop(c)
            row = self.rows.get(c)
            if row is None:
                done[c] = coeff
                # the remaining columns are still reduced against later pivots
                continue
            for col, val in row.items():
                if col == c:
                    continue
                new = vec.get(col)
                new = -coeff * val if new is None else new - coeff * val
                if new:
                    vec[col] = new
                else:
                    vec.pop(col, None)
            if combo is not None:
                for tag, val in self.combos[c].items():
                    new = combo.get(tag)
                    new = -coeff * val if new is None else new - coeff * val
                    if new:
                        combo[tag] = new
                    else:
                        combo.pop(tag, None)
        return done, combo

    def add(self, vec: dict, tag: Hashable = None) -> bool:
        """Insert a vector; True when it enlarged the span."""
        self.inserted += 1
        combo = {tag: GaussianRational(1)} if self.track else None
        rem, combo = self._reduce(vec, combo)
        if not rem:
            return False
        pivot = min(rem)
        inv = rem[pivot].inverse()
        row = {c: v * inv for c, v in rem.items()}
        self.rows[pivot] = row
        if self.track:
            self.combos[pivot] = {t: v * inv for t, v in combo.items()}
        self.basis_tags.append(tag)
        return True

    def extend(self, items: Iterable) -> None:
        for vec, tag in items:
            self.add(vec, tag)

    def residual(self, vec: dict) -> dict:
        """Part of ``vec`` not explained by the span (empty iff vec is in it)."""
        return self._reduce(vec, None)[0]

    def express(self, vec: dict):
        """``(residual, combination)`` with vec = sum(comb[tag] * vector(tag)) + residual."""
        if not self.track:
            raise ValueError("span was built without combination tracking")
        rem, combo = self._reduce(vec, {})
        return rem, {t: -v for t, v in combo.items()}
