"""Exact sparse linear algebra over ordered keys.

SparseEchelon keeps a reduced row-echelon basis of rational row vectors
indexed by arbitrary hashable keys with a caller-supplied total order.  Rows
are stored as primitive integer dicts (content gcd 1, positive pivot entry)
and elimination is fraction-free, so the hot loops stay in machine-int
arithmetic until the final rescale.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable, Hashable, Iterable, Mapping

Key = Hashable
IntRow = dict


def _clear_denominators(vec: Mapping) -> tuple[IntRow, int]:
    """Integer multiple of vec plus the positive scale that was applied."""
    scale = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            d = v.denominator
            scale = scale // gcd(scale, d) * d
    out = {}
    for k, v in vec.items():
        iv = int(v * scale)
        if iv:
            out[k] = iv
    return out, scale


def _make_primitive(row: IntRow, pivot: Key) -> IntRow:
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if row[pivot] < 0:
        g = -g
    if g in (1, 0):
        return row
    return {k: v // g for k, v in row.items()}


class SparseEchelon:
    """Reduced echelon accumulator with exact rational semantics."""

    def __init__(self, key_sort: Callable[[Key], object] | None = None):
        self._key = key_sort if key_sort is not None else _identity
        self._rows: dict[Key, IntRow] = {}

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def pivots(self) -> list[Key]:
        return sorted(self._rows, key=self._key)

    def _eliminate(self, vec: Mapping) -> tuple[IntRow, int]:
        """Reduce vec against the basis; returns (work, scale) with
        work/scale equal to the exact residual."""
        work, scale = _clear_denominators(vec)
        if not work:
            return work, scale
        # Reduced rows hold no foreign pivots, so one pass in any fixed
        # order eliminates every pivot the input touches.
        hits = sorted((k for k in work if k in self._rows), key=self._key)
        for p in hits:
            c = work.get(p)
            if not c:
                continue
            row = self._rows[p]
            piv = row[p]
            g = gcd(c, piv)
            mul_w = piv // g
            mul_r = c // g
            if mul_w < 0:
                mul_w, mul_r = -mul_w, -mul_r
            for k, rv in row.items():
                nv = mul_w * work.get(k, 0) - mul_r * rv
                if nv:
                    work[k] = nv
                else:
                    work.pop(k, None)
            if mul_w != 1:
                for k in work:
                    if k not in row:
                        work[k] *= mul_w
                scale *= mul_w
        return work, scale

    def residual(self, vec: Mapping) -> dict:
        """Exact residual of vec modulo the span, as Fractions."""
        work, scale = self._eliminate(vec)
        return {k: Fraction(v, scale) for k, v in work.items()}

    def contains(self, vec: Mapping) -> bool:
        work, _ = self._eliminate(vec)
        return not work

    def insert(self, vec: Mapping) -> IntRow | None:
        """Add vec to the span.  Returns the stored primitive row if the
        rank grew, else None."""
        work, _ = self._eliminate(vec)
        if not work:
            return None
        pivot = min(work, key=self._key)
        new = _make_primitive(work, pivot)
        npiv = new[pivot]
        for q, row in self._rows.items():
            c = row.get(pivot)
            if not c:
                continue
            g = gcd(c, npiv)
            mul_o = npiv // g
            mul_n = c // g
            merged = {}
            for k, v in row.items():
                merged[k] = mul_o * v
            for k, v in new.items():
                nv = merged.get(k, 0) - mul_n * v
                if nv:
                    merged[k] = nv
                else:
                    merged.pop(k, None)
            self._rows[q] = _make_primitive(merged, q)
        self._rows[pivot] = new
        return new

    def extend(self, vecs: Iterable[Mapping]) -> int:
        added = 0
        for v in vecs:
            if self.insert(v) is not None:
                added += 1
        return added

    def row(self, pivot: Key) -> dict:
        """Stored row rescaled to pivot coefficient 1, as Fractions."""
        row = self._rows[pivot]
        piv = row[pivot]
        return {k: _ratio(v, piv) for k, v in row.items()}

    def rows(self) -> list[tuple[Key, dict]]:
        return [(p, self.row(p)) for p in self.pivots()]

    def nullspace(self, unknowns: Iterable[Key]) -> list[dict]:
        """Basis of {x : row . x = 0 for every stored row}, one solution per
        non-pivot unknown, with that unknown's coordinate set to 1."""
        unknowns = list(unknowns)
        sols = []
        for f in unknowns:
            if f in self._rows:
                continue
            sol = {f: Fraction(1)}
            for p, row in self._rows.items():
                c = row.get(f)
                if c:
                    sol[p] = -_ratio(c, row[p])
            sols.append(sol)
        return sols


def _identity(k):
    return k


def _ratio(num: int, den: int) -> Fraction:
    q, r = divmod(num, den)
    return Fraction(num, den) if r else Fraction(q)


def rank_of(vecs: Iterable[Mapping], key_sort=None) -> int:
    ech = SparseEchelon(key_sort)
    ech.extend(vecs)
    return ech.rank
