"""Lie closures of equivariant generator sets, with exact dimension proofs.

lie_closure runs a worklist of brackets through a reduced echelon basis until
nothing new appears.  Everything is exact: the resulting dimension is a
theorem about the generated algebra, not a numerical estimate.  The module
also carries the closed-form dimension predictions for the preset generator
families, the central-membership residuals, and the universality verdicts
read off from the closure basis.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .center import make_C
from .linalg import SparseEchelon
from .structure import StructureTable, normalize_method
from .symops import (
    AmbientDims,
    ConstraintError,
    DimensionMismatch,
    GeneratorSet,
    PauliTriple,
    SymOpVector,
    ambient_dims,
    frac_text,
    trace_inner,
    triple_sort_key,
)

PAIRING_GENERATORS = "generators"
PAIRING_ALL = "all"


class LieBasis:
    """Reduced echelon basis of SymOpVectors at fixed n."""

    def __init__(self, n: int):
        self.n = n
        self._ech = SparseEchelon(key_sort=triple_sort_key)

    @property
    def dim(self) -> int:
        return self._ech.rank

    def insert(self, v: SymOpVector) -> SymOpVector | None:
        """Grow the span; returns the stored primitive row, or None."""
        if v.n != self.n:
            raise DimensionMismatch("vector qubit count differs from basis")
        row = self._ech.insert(v.coeffs)
        if row is None:
            return None
        return SymOpVector(self.n, row)

    def contains(self, v: SymOpVector) -> bool:
        if v.n != self.n:
            raise DimensionMismatch("vector qubit count differs from basis")
        return self._ech.contains(v.coeffs)

    def reduce(self, v: SymOpVector) -> SymOpVector:
        """Unique residual of v modulo the span."""
        if v.n != self.n:
            raise DimensionMismatch("vector qubit count differs from basis")
        return SymOpVector(self.n, self._ech.residual(v.coeffs))

    def pivots(self) -> tuple[PauliTriple, ...]:
        return tuple(self._ech.pivots())

    def rows(self) -> tuple[SymOpVector, ...]:
        """Pivot-normalized rows in pivot order."""
        return tuple(SymOpVector(self.n, r) for _, r in self._ech.rows())


@dataclass(frozen=True)
class ClosureRun:
    basis: LieBasis
    iterations: int
    wall_time: float

    @property
    def dim(self) -> int:
        return self.basis.dim


def lie_closure(
    gens: GeneratorSet,
    table: StructureTable | None = None,
    *,
    pairing: str = PAIRING_ALL,
    method: str | None = None,
) -> ClosureRun:
    """Smallest Lie algebra containing the generators, as an exact basis.

    The worklist pairs each newly independent row with every stored row
    (pairing='all', the default) or only with the generators
    (pairing='generators', much cheaper; iterated left-normed brackets span
    the same closure).  FIFO order and the canonical triple order make runs
    deterministic.
    """
    if pairing not in (PAIRING_GENERATORS, PAIRING_ALL):
        raise ConstraintError(f"unknown pairing {pairing!r}")
    if table is None:
        table = StructureTable(gens.n, normalize_method(method) if method else "overlap")
    elif table.n != gens.n:
        raise DimensionMismatch("table and generators disagree on qubit count")
    t0 = time.perf_counter()
    basis = LieBasis(gens.n)
    seeds: list[SymOpVector] = []
    stored: list[SymOpVector] = []
    work: deque[tuple[SymOpVector, SymOpVector]] = deque()

    def admit(v: SymOpVector) -> None:
        row = basis.insert(v)
        if row is None:
            return
        if pairing == PAIRING_GENERATORS:
            work.extend((row, s) for s in seeds)
        else:
            work.extend((row, s) for s in stored)
            stored.append(row)

    for g in gens.members:
        row = basis.insert(g)
        if row is not None:
            seeds.append(row)
            stored.append(row)
    if pairing == PAIRING_GENERATORS:
        for row in seeds:
            work.extend((row, s) for s in seeds)
    else:
        for i, row in enumerate(stored):
            work.extend((row, s) for s in stored[:i])

    iterations = 0
    while work:
        u, v = work.popleft()
        iterations += 1
        w = table.bracket_vectors(u, v)
        if not w.is_zero:
            admit(w)
    return ClosureRun(basis, iterations, time.perf_counter() - t0)


def predicted_dim(label: str, n: int, k: int | None = None) -> int:
    """Closed-form closure dimension for the k-body ladder families.

    G2 and Gk:<k> reach the full dimension count minus the untouched central
    directions; G1 and G1prime close on the global spin components.
    """
    if label == "G1":
        return 1
    if label == "G1prime":
        return 3
    if label == "G2":
        k = 2
    elif label.startswith("Gk"):
        if k is None:
            raise ConstraintError("k-body prediction needs k")
    else:
        raise ConstraintError(f"no dimension prediction for {label!r}")
    if not 2 <= k <= n:
        raise ConstraintError(f"prediction needs 2 <= k <= n, got k={k}, n={n}")
    return comb(n + 3, 3) - (n // 2 + 1) + k // 2


def is_universal_pair(n: int, k: int) -> bool:
    """Whether the k-body family exhausts the traceless equivariant algebra."""
    if not 2 <= k <= n:
        raise ConstraintError(f"universality threshold needs 2 <= k <= n, got k={k}, n={n}")
    if n % 2 == 0:
        return k == n
    return k >= n - 1


def membership_residual(v: SymOpVector, mu: int) -> Fraction:
    """Linear functional whose kernel cuts out the mu-th central complement.

    Sums the even-triple coordinates at level 2*mu with inverse factorial
    weights; an operator lies in the centerless part only if this vanishes
    for every mu.
    """
    if mu < 0 or 2 * mu > v.n:
        raise ConstraintError(f"need 0 <= mu <= n/2, got mu={mu}, n={v.n}")
    total = Fraction(0)
    for a in range(mu + 1):
        for b in range(mu - a + 1):
            c = mu - a - b
            coeff = v[(2 * a, 2 * b, 2 * c)]
            if coeff:
                total += Fraction(coeff, factorial(a) * factorial(b) * factorial(c))
    return total


def membership_constraints(
    rows: Sequence[SymOpVector], n: int, exempt: Iterable[int] = ()
) -> list[tuple[int, int, Fraction]]:
    """All non-exempt central-membership residuals of a family of rows.

    Returns (row_index, mu, residual) triples for every row and every
    0 <= mu <= n/2 outside `exempt`; all residuals zero certifies membership
    in the corresponding centerless subalgebra.
    """
    exempt = frozenset(exempt)
    mus = [mu for mu in range(n // 2 + 1) if mu not in exempt]
    out = []
    for i, row in enumerate(rows):
        for mu in mus:
            out.append((i, mu, membership_residual(row, mu)))
    return out


@dataclass(frozen=True)
class Verdicts:
    universal: bool
    semi_universal: bool
    subspace_controllable: bool


def verdicts(basis: LieBasis) -> Verdicts:
    """Universality flags read off a closure basis, exactly.

    The central elements orthogonal to every row span the trace-pairing
    complement of the algebra.  Semi-universality means that complement is
    entirely central; universality additionally means it is at most the
    identity direction.
    """
    n = basis.n
    dims = ambient_dims(n)
    cvecs = [make_C(mu, n).vec for mu in range(dims.dim_center)]
    ech = SparseEchelon()
    for row in basis.rows():
        coords = {}
        for mu, cv in enumerate(cvecs):
            val = trace_inner(row, cv)
            if val:
                coords[mu] = val
        if coords:
            ech.insert(coords)
    null = ech.nullspace(range(dims.dim_center))
    complement = dims.dim_u - basis.dim
    semi = len(null) == complement
    if basis.dim == dims.dim_u:
        universal = True
    elif basis.dim == dims.dim_su:
        universal = len(null) == 1 and set(null[0]) == {0}
    else:
        universal = False
    return Verdicts(universal, semi, semi)


@dataclass(frozen=True)
class ClosureReport:
    """Serializable record of one closure computation."""

    n: int
    label: str
    k: int | None
    generators: tuple[str, ...]
    method: str
    pairing: str
    dim: int
    predicted: int | None
    matched: bool | None
    ambient: AmbientDims
    verdicts: Verdicts
    exempt: tuple[int, ...]
    residual_mus: tuple[int, ...]
    residual_rows: int
    constraint_residuals: tuple[str, ...]
    pivots: tuple[str, ...]
    iterations: int
    wall_time: float

    @property
    def ok(self) -> bool:
        return self.matched is not False

    def to_jsonable(self) -> dict:
        return {
            "n": self.n,
            "label": self.label,
            "k": self.k,
            "generators": list(self.generators),
            "method": self.method,
            "pairing": self.pairing,
            "dim": self.dim,
            "predicted": self.predicted,
            "matched": self.matched,
            "ambient": {
                "dim_u": self.ambient.dim_u,
                "dim_su": self.ambient.dim_su,
                "dim_center": self.ambient.dim_center,
                "dim_su_cless": self.ambient.dim_su_cless,
            },
            "verdicts": {
                "universal": self.verdicts.universal,
                "semi_universal": self.verdicts.semi_universal,
                "subspace_controllable": self.verdicts.subspace_controllable,
            },
            "exempt": list(self.exempt),
            "residual_mus": list(self.residual_mus),
            "residual_rows": self.residual_rows,
            "constraint_residuals": list(self.constraint_residuals),
            "pivots": list(self.pivots),
            "iterations": self.iterations,
            "wall_time": self.wall_time,
        }


def family_exempt_mus(gens: GeneratorSet) -> frozenset[int]:
    """Central levels a generator family is allowed to touch.

    For the k-body ladder these are mu = 1..floor(k/2); for anything else the
    exact trace pairing of the generators decides.
    """
    if gens.k is not None:
        return frozenset(range(1, gens.k // 2 + 1))
    out = set()
    for mu in range(gens.n // 2 + 1):
        cv = make_C(mu, gens.n).vec
        if any(trace_inner(g, cv) != 0 for g in gens.members):
            out.add(mu)
    return frozenset(out)


def build_report(
    gens: GeneratorSet,
    run: ClosureRun,
    *,
    method: str,
    pairing: str,
    exempt: Iterable[int] | None = None,
) -> ClosureReport:
    n = gens.n
    label = gens.label
    try:
        predicted = predicted_dim(label, n, gens.k)
    except ConstraintError:
        predicted = None
    matched = None if predicted is None else run.dim == predicted
    ex = frozenset(exempt) if exempt is not None else family_exempt_mus(gens)
    rows = run.basis.rows()
    residuals = membership_constraints(rows, n, ex)
    mus = tuple(mu for mu in range(n // 2 + 1) if mu not in ex)
    return ClosureReport(
        n=n,
        label=label,
        k=gens.k,
        generators=tuple(g.text() for g in gens.members),
        method=normalize_method(method),
        pairing=pairing,
        dim=run.dim,
        predicted=predicted,
        matched=matched,
        ambient=ambient_dims(n),
        verdicts=verdicts(run.basis),
        exempt=tuple(sorted(ex)),
        residual_mus=mus,
        residual_rows=len(rows),
        constraint_residuals=tuple(frac_text(r) for (_, _, r) in residuals),
        pivots=tuple(t.text() for t in run.basis.pivots()),
        iterations=run.iterations,
        wall_time=run.wall_time,
    )
