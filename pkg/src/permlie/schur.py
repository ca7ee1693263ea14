"""Numerical spin-coupling transform and isotypic block analysis.

Equivariant operators are simultaneously block-diagonalized by the basis of
total-spin eigenstates built from sequential angular-momentum coupling.  Each
sector mu carries d paths of multiplicity m = n - 2*mu + 1; an equivariant
operator acts as identity across paths and an arbitrary m x m matrix on the
magnetic index.  This module builds the orthogonal change of basis (floats),
projects operators onto their per-sector blocks, and certifies that a closure
basis fills the traceless part of every sector.

Everything upstream of this module is exact; the float tolerances here are
diagnostics on top of already-proven integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from math import comb, sqrt
from typing import Iterable, Sequence

import numpy as np

from .closure import LieBasis
from .oracle import orbit_words, word_letters
from .symops import (
    ConstraintError,
    DimensionMismatch,
    PauliTriple,
    SymOpVector,
    VerificationError,
    check_qubits,
)

SCHUR_BUILD_CAP = 8
BLOCK_ANALYSIS_CAP = 6
UNITARITY_TOL = 1e-12
BLOCK_TOL = 1e-9
RANK_TOL = 1e-8


@dataclass(frozen=True)
class IsotypicBlock:
    """One total-spin sector: multiplicity m acted on, d identical copies."""

    mu: int
    d: int
    m: int


def isotypic_table(n: int) -> tuple[IsotypicBlock, ...]:
    """Sector list for n qubits, with the two exact dimension sum rules."""
    if n < 1:
        raise ConstraintError("qubit count must be positive")
    blocks = []
    for mu in range(n // 2 + 1):
        d = comb(n, mu) - (comb(n, mu - 1) if mu else 0)
        m = n - 2 * mu + 1
        blocks.append(IsotypicBlock(mu, d, m))
    if sum(b.d * b.m for b in blocks) != 2**n:
        raise VerificationError("sector dimensions fail to tile the Hilbert space")
    if sum(b.m * b.m for b in blocks) != comb(n + 3, 3):
        raise VerificationError("sector multiplicities fail the equivariant count")
    return tuple(blocks)


@dataclass(frozen=True)
class SchurTransform:
    """Orthogonal matrix whose columns are coupled total-spin states.

    Columns are grouped by sector (mu ascending), then by coupling path in
    lexicographic order of the doubled-spin tuples, then by magnetic index
    descending.  Within a sector the layout is path-major, so an equivariant
    operator conjugates to identity_d (x) A_mu."""

    n: int
    matrix: np.ndarray
    blocks: tuple[IsotypicBlock, ...]
    offsets: tuple[int, ...]
    paths: tuple[tuple[tuple[int, ...], ...], ...]

    def sector_slice(self, mu: int) -> slice:
        b = self.blocks[mu]
        o = self.offsets[mu]
        return slice(o, o + b.d * b.m)


def build_schur_transform(n: int) -> SchurTransform:
    """Sequential pairwise coupling of n spin-1/2 factors.

    Uses the standard real recoupling coefficients, |0> as the up state, and
    appends each new qubit as the least significant index factor.  The result
    is validated against the sector table and checked orthonormal to
    UNITARITY_TOL before being returned.
    """
    check_qubits(n, SCHUR_BUILD_CAP, "coupled-basis construction")
    if n < 1:
        raise ConstraintError("qubit count must be positive")
    # path -> list of state vectors, magnetic index descending
    states: dict[tuple[int, ...], list[np.ndarray]] = {
        (1,): [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    }
    for m in range(1, n):
        nxt: dict[tuple[int, ...], list[np.ndarray]] = {}
        dim = 1 << (m + 1)
        for path, vecs in states.items():
            j2 = path[-1]
            den = 2 * (j2 + 1)
            for j2n in (j2 + 1, j2 - 1):
                if j2n < 0:
                    continue
                newvecs = []
                for idx in range(j2n + 1):
                    m2n = j2n - 2 * idx
                    vec = np.zeros(dim)
                    if abs(m2n - 1) <= j2:
                        num = j2 + m2n + 1 if j2n > j2 else j2 - m2n + 1
                        c = sqrt(num / den) if j2n > j2 else -sqrt(num / den)
                        vec[0::2] = c * vecs[(j2 - (m2n - 1)) // 2]
                    if abs(m2n + 1) <= j2:
                        num = j2 - m2n + 1 if j2n > j2 else j2 + m2n + 1
                        vec[1::2] = sqrt(num / den) * vecs[(j2 - (m2n + 1)) // 2]
                    newvecs.append(vec)
                nxt[path + (j2n,)] = newvecs
        states = nxt

    blocks = isotypic_table(n)
    size = 1 << n
    matrix = np.zeros((size, size))
    offsets = []
    sector_paths = []
    col = 0
    for b in blocks:
        offsets.append(col)
        j2_final = n - 2 * b.mu
        paths = sorted(p for p in states if p[-1] == j2_final)
        if len(paths) != b.d:
            raise VerificationError(
                f"sector mu={b.mu} produced {len(paths)} paths, expected {b.d}"
            )
        sector_paths.append(tuple(paths))
        for p in paths:
            for vec in states[p]:
                matrix[:, col] = vec
                col += 1
    gram_err = np.abs(matrix.T @ matrix - np.eye(size)).max()
    if gram_err > UNITARITY_TOL:
        raise VerificationError(f"coupled basis not orthonormal: deviation {gram_err:.2e}")
    return SchurTransform(n, matrix, blocks, tuple(offsets), tuple(sector_paths))


_PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@lru_cache(maxsize=None)
def _class_matrix(t: PauliTriple, n: int) -> np.ndarray:
    """Dense matrix of the symmetrized string P_t (float precision)."""
    size = 1 << n
    out = np.zeros((size, size), dtype=complex)
    for w in orbit_words(t, n):
        letters = word_letters(w, n)
        out += reduce(np.kron, [_PAULI[letter] for letter in letters])
    return out


def dense_matrix(v: SymOpVector) -> np.ndarray:
    """Matrix of the Hermitian part sum_t c_t P_t (the i factor dropped)."""
    size = 1 << v.n
    out = np.zeros((size, size), dtype=complex)
    for t, c in v.items():
        out += float(c) * _class_matrix(t, v.n)
    return out


def permutation_matrix(perm: Sequence[int], n: int) -> np.ndarray:
    """Qubit-relabeling operator sending slot j to slot perm[j].

    Slot 0 is the most significant index bit, matching the coupling order.
    """
    if sorted(perm) != list(range(n)):
        raise ConstraintError("perm must be a permutation of range(n)")
    size = 1 << n
    out = np.zeros((size, size))
    for i in range(size):
        bits = [(i >> (n - 1 - j)) & 1 for j in range(n)]
        k = 0
        for j, bit in enumerate(bits):
            k |= bit << (n - 1 - perm[j])
        out[k, i] = 1.0
    return out


def block_project(
    v: SymOpVector, st: SchurTransform, tol: float = BLOCK_TOL
) -> list[np.ndarray]:
    """Per-sector m x m blocks of an equivariant operator.

    Conjugates by the coupled basis and checks the exact block pattern: zero
    between sectors, identical copies across paths within a sector.  Any
    off-pattern magnitude above tol raises, since equivariant inputs cannot
    produce one without an upstream bug.
    """
    if v.n != st.n:
        raise DimensionMismatch("vector and transform disagree on qubit count")
    S = st.matrix.T @ dense_matrix(v) @ st.matrix
    blocks = []
    for b in st.blocks:
        sl = st.sector_slice(b.mu)
        inside = S[sl, sl].reshape(b.d, b.m, b.d, b.m)
        mean = np.trace(inside, axis1=0, axis2=2) / b.d
        worst = 0.0
        for p in range(b.d):
            for q in range(b.d):
                ref = mean if p == q else 0.0
                dev = np.abs(inside[p, :, q, :] - ref).max()
                worst = max(worst, dev)
        # cross-sector leakage
        before = np.abs(S[sl, : sl.start]).max() if sl.start else 0.0
        after = np.abs(S[sl, sl.stop :]).max() if sl.stop < S.shape[1] else 0.0
        worst = max(worst, before, after)
        if worst > tol:
            raise VerificationError(
                f"block pattern violated in sector mu={b.mu}: deviation {worst:.2e}"
            )
        blocks.append(mean)
    return blocks


def _traceless_coords(a: np.ndarray) -> np.ndarray:
    m = a.shape[0]
    t = a - (np.trace(a) / m) * np.eye(m)
    return np.concatenate([t.real.ravel(), t.imag.ravel()])


@dataclass(frozen=True)
class SectorSpan:
    mu: int
    m: int
    span_dim: int
    su_dim: int

    @property
    def spans_su(self) -> bool:
        return self.span_dim == self.su_dim


@dataclass(frozen=True)
class SubspaceControlReport:
    """Per-sector image of a closure basis under the block projection."""

    n: int
    closure_dim: int
    sectors: tuple[SectorSpan, ...]
    trace_rank: int

    @property
    def controllable(self) -> bool:
        return all(s.spans_su for s in self.sectors)

    @property
    def consistent(self) -> bool:
        """Exact bookkeeping: block images must account for every dimension."""
        return sum(s.span_dim for s in self.sectors) + self.trace_rank == self.closure_dim

    def to_jsonable(self) -> dict:
        return {
            "n": self.n,
            "closure_dim": self.closure_dim,
            "sectors": [
                {
                    "mu": s.mu,
                    "m": s.m,
                    "span_dim": s.span_dim,
                    "su_dim": s.su_dim,
                    "spans_su": s.spans_su,
                }
                for s in self.sectors
            ],
            "trace_rank": self.trace_rank,
            "controllable": self.controllable,
            "consistent": self.consistent,
        }


def certify_subspace_control(
    basis: LieBasis, st: SchurTransform | None = None, tol: float = RANK_TOL
) -> SubspaceControlReport:
    """Measure how much of each sector's traceless algebra a basis reaches.

    Projects every basis row into its sector blocks and computes real ranks.
    The span dimensions plus the rank of the per-sector trace tuples must add
    up to the exact closure dimension; that cross-check ties the float ranks
    back to proven integer arithmetic.
    """
    check_qubits(basis.n, BLOCK_ANALYSIS_CAP, "sector-span certification")
    if st is None:
        st = build_schur_transform(basis.n)
    if st.n != basis.n:
        raise DimensionMismatch("basis and transform disagree on qubit count")
    rows = basis.rows()
    per_sector: list[list[np.ndarray]] = [[] for _ in st.blocks]
    traces = []
    for row in rows:
        blocks = block_project(row, st)
        traces.append([np.trace(a).real for a in blocks])
        for i, a in enumerate(blocks):
            per_sector[i].append(_traceless_coords(a))
    sectors = []
    for b, vecs in zip(st.blocks, per_sector):
        mat = np.array(vecs)
        span = int(np.linalg.matrix_rank(mat, tol)) if mat.size else 0
        sectors.append(SectorSpan(b.mu, b.m, span, b.m * b.m - 1))
    tr = np.array(traces)
    trace_rank = int(np.linalg.matrix_rank(tr, tol)) if tr.size else 0
    return SubspaceControlReport(
        n=basis.n,
        closure_dim=len(rows),
        sectors=tuple(sectors),
        trace_rank=trace_rank,
    )
