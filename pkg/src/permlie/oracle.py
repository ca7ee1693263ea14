"""Brute-force Pauli-word engine used as ground truth at small n.

Operators are stored as exact coordinate dictionaries over individual Pauli
words, one word per base-4 integer (two bits per qubit, letters I,X,Y,Z =
0..3, qubit 0 in the least significant position).  Nothing here knows about
orbits or structure constants; brackets multiply words letter by letter and
track the phase, so agreement with the symmetrized engine is an end-to-end
check.  Word counts grow as 4^n, hence the hard n <= 6 cap.

The skew-Hermitian convention matches the rest of the package: coeffs[w] is
the coordinate of i*w.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Mapping

from .linalg import SparseEchelon
from .symops import (
    SITE_PRODUCT,
    ConstraintError,
    DimensionMismatch,
    PauliTriple,
    ResourceLimitError,
    SymOpVector,
    as_triple,
    orbit_size,
)

WORD_QUBIT_CAP = 6


def _check_word_n(n: int) -> None:
    if n < 1:
        raise ConstraintError("qubit count must be positive")
    if n > WORD_QUBIT_CAP:
        raise ResourceLimitError(
            f"word-level engine is capped at n <= {WORD_QUBIT_CAP}, got n = {n}"
        )


def word_letters(w: int, n: int) -> tuple[int, ...]:
    return tuple((w >> (2 * j)) & 3 for j in range(n))


def letters_to_word(letters: Iterable[int]) -> int:
    w = 0
    for j, letter in enumerate(letters):
        w |= letter << (2 * j)
    return w


def word_text(w: int, n: int) -> str:
    return "".join("IXYZ"[letter] for letter in word_letters(w, n))


@dataclass(frozen=True)
class DenseOp:
    """Exact operator i * sum_w coeffs[w] * w over individual Pauli words."""

    n: int
    coeffs: Mapping[int, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        _check_word_n(self.n)
        clean = {}
        top = 1 << (2 * self.n)
        for w, v in self.coeffs.items():
            if not 0 <= w < top:
                raise ConstraintError(f"word {w} out of range for n = {self.n}")
            if not isinstance(v, (int, Fraction)):
                raise ConstraintError("word coefficients must be exact rationals")
            if v:
                clean[w] = v
        object.__setattr__(self, "coeffs", clean)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "DenseOp") -> "DenseOp":
        if self.n != other.n:
            raise DimensionMismatch("qubit counts differ")
        out = dict(self.coeffs)
        for w, v in other.coeffs.items():
            out[w] = out.get(w, 0) + v
        return DenseOp(self.n, out)

    def __sub__(self, other: "DenseOp") -> "DenseOp":
        return self + other.scaled(-1)

    def scaled(self, c) -> "DenseOp":
        return DenseOp(self.n, {w: v * c for w, v in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseOp):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs


def _word_product(w1: int, w2: int, n: int) -> tuple[int, int]:
    """(phase_power, word) with w1*w2 = i**phase_power * word."""
    phase = 0
    out = 0
    for j in range(n):
        shift = 2 * j
        a = (w1 >> shift) & 3
        b = (w2 >> shift) & 3
        if a and b:
            p, c = SITE_PRODUCT[a][b]
            phase += p
            out |= c << shift
        else:
            out |= (a | b) << shift
    return phase & 3, out


def densify(v: SymOpVector) -> DenseOp:
    """Expand symmetrized coordinates into per-word coordinates."""
    _check_word_n(v.n)
    out: dict[int, object] = {}
    for t, c in v.items():
        for w in orbit_words(t, v.n):
            out[w] = out.get(w, 0) + c
    return DenseOp(v.n, out)


def orbit_words(t, n: int) -> list[int]:
    """Every word with the letter counts of t, as base-4 integers."""
    t = as_triple(t).check(n)
    sites = range(n)
    words = []
    for xpos in combinations(sites, t.kx):
        xset = set(xpos)
        rem1 = [p for p in sites if p not in xset]
        for ypos in combinations(rem1, t.ky):
            yset = set(ypos)
            rem2 = [p for p in rem1 if p not in yset]
            for zpos in combinations(rem2, t.kz):
                w = 0
                for p in xpos:
                    w |= 1 << (2 * p)
                for p in ypos:
                    w |= 2 << (2 * p)
                for p in zpos:
                    w |= 3 << (2 * p)
                words.append(w)
    return words


def symmetrize(p: DenseOp) -> SymOpVector:
    """Collapse per-word coordinates back onto letter-count classes.

    Raises if the operator is not constant on some class, i.e. not actually
    permutation invariant.
    """
    groups: dict[PauliTriple, dict[int, object]] = {}
    for w, v in p.coeffs.items():
        letters = word_letters(w, p.n)
        t = PauliTriple(letters.count(1), letters.count(2), letters.count(3))
        groups.setdefault(t, {})[w] = v
    coeffs = {}
    for t, seen in groups.items():
        size = orbit_size(t, p.n)
        vals = set(seen.values())
        if len(vals) != 1 or len(seen) != size:
            raise ConstraintError(
                f"operator is not uniform on the {t.text()} class; cannot symmetrize"
            )
        coeffs[t] = next(iter(vals))
    return SymOpVector(p.n, coeffs)


def dense_bracket(p: DenseOp, q: DenseOp) -> DenseOp:
    """Exact commutator of skew-Hermitian word sums.

    Words either commute or anticommute; an anticommuting pair contributes
    -2 or +2 times the product word depending on the accumulated phase.
    """
    if p.n != q.n:
        raise DimensionMismatch("qubit counts differ")
    n = p.n
    out: dict[int, object] = {}
    for w1, c1 in p.coeffs.items():
        for w2, c2 in q.coeffs.items():
            phase, w3 = _word_product(w1, w2, n)
            if not phase & 1:
                continue
            c = c1 * c2
            out[w3] = out.get(w3, 0) + (-2 * c if phase == 1 else 2 * c)
    return DenseOp(n, out)


@dataclass(frozen=True)
class DenseClosureRun:
    n: int
    dim: int
    pivot_words: tuple[int, ...]
    iterations: int


def dense_closure(
    seeds: Iterable[DenseOp], *, pairing: str = "all", max_steps: int | None = None
) -> DenseClosureRun:
    """Lie closure over raw words; same worklist shape as the sparse engine.

    max_steps bounds the number of bracket evaluations for smoke runs; the
    returned dimension is then a lower bound that must still be monotone.
    """
    seeds = [s for s in seeds if not s.is_zero]
    if not seeds:
        raise ConstraintError("dense closure needs at least one nonzero seed")
    n = seeds[0].n
    if any(s.n != n for s in seeds):
        raise DimensionMismatch("seed qubit counts differ")
    if pairing not in ("generators", "all"):
        raise ConstraintError(f"unknown pairing {pairing!r}")
    ech = SparseEchelon()
    kept: list[DenseOp] = []
    stored: list[DenseOp] = []
    work: deque[tuple[DenseOp, DenseOp]] = deque()

    def admit(op: DenseOp) -> None:
        row = ech.insert(op.coeffs)
        if row is None:
            return
        stored_row = DenseOp(n, row)
        if pairing == "generators":
            work.extend((stored_row, s) for s in kept)
        else:
            work.extend((stored_row, s) for s in stored)
            stored.append(stored_row)

    for s in seeds:
        row = ech.insert(s.coeffs)
        if row is not None:
            kept.append(DenseOp(n, row))
            stored.append(kept[-1])
    if pairing == "generators":
        for row in kept:
            work.extend((row, s) for s in kept)
    else:
        for i, row in enumerate(stored):
            work.extend((row, s) for s in stored[:i])

    iterations = 0
    while work:
        if max_steps is not None and iterations >= max_steps:
            break
        u, v = work.popleft()
        iterations += 1
        w = dense_bracket(u, v)
        if not w.is_zero:
            admit(w)
    return DenseClosureRun(n, ech.rank, tuple(ech.pivots()), iterations)


def transposition_pairings(n: int, mu: int) -> list[tuple[tuple[int, int], ...]]:
    """All sets of mu disjoint index pairs from range(n)."""
    if mu < 0 or 2 * mu > n:
        raise ConstraintError(f"need 0 <= 2*mu <= n, got mu={mu}, n={n}")
    out: list[tuple[tuple[int, int], ...]] = []

    def grow(avail: tuple[int, ...], picked: tuple[tuple[int, int], ...]) -> None:
        if len(picked) == mu:
            out.append(picked)
            return
        first = avail[0]
        rest = avail[1:]
        for i, second in enumerate(rest):
            grow(rest[:i] + rest[i + 1 :], picked + ((first, second),))
        # leaving `first` unpaired: only legal while enough indices remain
        if len(rest) >= 2 * (mu - len(picked)):
            grow(rest, picked)

    grow(tuple(range(n)), ())
    return out


def class_sum(mu: int, n: int) -> DenseOp:
    """Sum of all permutation operators that move exactly mu disjoint pairs.

    Each transposition factors as (II + XX + YY + ZZ)/2 on its pair, and
    disjoint supports multiply without phases, so the word expansion is a sum
    over letter assignments to the pairs with weight 2^-mu.
    """
    _check_word_n(n)
    out: dict[int, object] = {}
    weight = Fraction(1, 2**mu)
    for pairing in transposition_pairings(n, mu):
        for letters in product(range(4), repeat=mu):
            w = 0
            for (a, b), letter in zip(pairing, letters):
                w |= letter << (2 * a)
                w |= letter << (2 * b)
            out[w] = out.get(w, 0) + weight
    return DenseOp(n, out)
