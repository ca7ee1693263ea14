"""Integer structure constants of the symmetrized-Pauli bracket.

The bracket of two basis elements is computed two independent ways.  The
default route counts letter-overlap patterns between a fixed representative
word of the first orbit and the full orbit of the second, which costs a
polynomial number of integer terms.  The validation route expands the second
orbit outright, word by word, at exponential cost.  Both share only the
single-site Pauli product table and the final orbit-averaging step, so
agreement is a strong check on the combinatorics.

With coordinates standing for i * sum c_t P_t, every structure constant is an
even integer: [i P_a, i P_b] = sum_u g_u (i P_u).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Mapping

from .symops import (
    SITE_PRODUCT,
    ConstraintError,
    DimensionMismatch,
    PauliTriple,
    SymOpVector,
    VerificationError,
    all_triples,
    as_triple,
    orbit_size,
    triple_sort_key,
)

METHOD_OVERLAP = "overlap-combinatorics"
METHOD_ORBIT = "orbit-expansion"
_ALIASES = {
    "overlap": METHOD_OVERLAP,
    "orbit": METHOD_ORBIT,
    METHOD_OVERLAP: METHOD_OVERLAP,
    METHOD_ORBIT: METHOD_ORBIT,
}

CACHE_FORMAT = "symmetrized-pauli-structure-table"
CACHE_VERSION = 1


def normalize_method(method: str) -> str:
    try:
        return _ALIASES[method]
    except KeyError:
        raise ConstraintError(f"unknown bracket method {method!r}") from None


@lru_cache(maxsize=None)
def _row_options(total: int, caps: tuple[int, int, int, int]):
    """Ways to place `total` identical letters onto four position classes.

    Returns tuples (counts, weight, remaining_caps) where weight counts the
    position choices within each class.
    """
    out = []
    c0m, c1m, c2m, c3m = caps
    for c0 in range(min(total, c0m) + 1):
        w0 = comb(c0m, c0)
        r0 = total - c0
        for c1 in range(min(r0, c1m) + 1):
            w1 = w0 * comb(c1m, c1)
            r1 = r0 - c1
            for c2 in range(min(r1, c2m) + 1):
                c3 = r1 - c2
                if c3 > c3m:
                    continue
                w = w1 * comb(c2m, c2) * comb(c3m, c3)
                out.append(
                    (
                        (c0, c1, c2, c3),
                        w,
                        (c0m - c0, c1m - c1, c2m - c2, c3m - c3),
                    )
                )
    return tuple(out)


def _bracket_overlap(a: PauliTriple, b: PauliTriple, n: int) -> dict[PauliTriple, int]:
    """Overlap-pattern count of [i P_a, i P_b].

    Fixes the representative word of orbit a (X block, Y block, Z block,
    identities) and classifies each word of orbit b by how many of its X, Y
    and Z letters land on each block.  A pattern contributes only when the
    number d of anticommuting overlaps is odd; its weight is the number of
    words realizing it and its sign tracks the product phase.
    """
    ax, ay, az = a
    bx, by, bz = b
    caps0 = (ax, ay, az, n - ax - ay - az)
    masses: dict[tuple[int, int, int], int] = {}
    for xs, wx, caps1 in _row_options(bx, caps0):
        for ys, wy, caps2 in _row_options(by, caps1):
            wxy = wx * wy
            for zs, wz, caps3 in _row_options(bz, caps2):
                d = xs[1] + xs[2] + ys[0] + ys[2] + zs[0] + zs[1]
                if not d & 1:
                    continue
                # negative single-site products: X.Z, Y.X, Z.Y
                neg = (zs[0] + xs[1] + ys[2] + ((d - 1) >> 1)) & 1
                w = wxy * wz
                contrib = 2 * w if neg else -2 * w
                ux = ax - xs[0] - ys[0] - zs[0] + zs[1] + ys[2] + xs[3]
                uy = ay - xs[1] - ys[1] - zs[1] + zs[0] + xs[2] + ys[3]
                uz = az - xs[2] - ys[2] - zs[2] + ys[0] + xs[1] + zs[3]
                key = (ux, uy, uz)
                masses[key] = masses.get(key, 0) + contrib
    return _orbit_average(a, masses, n)


def representative_word(t: PauliTriple, n: int) -> tuple[int, ...]:
    """Canonical orbit representative: X block, Y block, Z block, identities."""
    t = as_triple(t).check(n)
    return tuple([1] * t.kx + [2] * t.ky + [3] * t.kz + [0] * (n - t.level))


def _bracket_orbit(a: PauliTriple, b: PauliTriple, n: int) -> dict[PauliTriple, int]:
    """Word-by-word expansion of [i P_a, i P_b] over the full orbit of b."""
    ax, ay, az = a
    bx, by, bz = b
    rep = representative_word(a, n)
    sites = range(n)
    masses: dict[tuple[int, int, int], int] = {}
    for xpos in combinations(sites, bx):
        xset = set(xpos)
        rem1 = [p for p in sites if p not in xset]
        for ypos in combinations(rem1, by):
            yset = set(ypos)
            rem2 = [p for p in rem1 if p not in yset]
            for zpos in combinations(rem2, bz):
                counts = [0, ax, ay, az]
                d = 0
                phase = 0
                for plist, v in ((xpos, 1), (ypos, 2), (zpos, 3)):
                    for p in plist:
                        s = rep[p]
                        if s == 0:
                            counts[v] += 1
                        elif s == v:
                            counts[s] -= 1
                        else:
                            ph, out = SITE_PRODUCT[s][v]
                            phase += ph
                            d += 1
                            counts[s] -= 1
                            counts[out] += 1
                if not d & 1:
                    continue
                key = (counts[1], counts[2], counts[3])
                contrib = -2 if phase % 4 == 1 else 2
                masses[key] = masses.get(key, 0) + contrib
    return _orbit_average(a, masses, n)


def _orbit_average(a: PauliTriple, masses: Mapping, n: int) -> dict[PauliTriple, int]:
    """Turn per-representative masses into orbit-sum coefficients.

    The bracket of full orbit sums assigns each output orbit the mass seen by
    one representative times orbit_size(a)/orbit_size(u); exactness of that
    division is asserted.
    """
    out: dict[PauliTriple, int] = {}
    oa = orbit_size(a, n)
    for u, m in masses.items():
        if not m:
            continue
        t = PauliTriple(*u)
        q, r = divmod(oa * m, orbit_size(t, n))
        if r:
            raise VerificationError(
                f"orbit averaging of [{a.text()}, {u}] gave a non-integer constant"
            )
        out[t] = q
    return out


def bracket(a, b, n: int, method: str = METHOD_OVERLAP) -> SymOpVector:
    """Structure constants of [i P_a, i P_b] on n qubits, as a vector."""
    a = as_triple(a).check(n)
    b = as_triple(b).check(n)
    method = normalize_method(method)
    if a == b:
        return SymOpVector.zero(n)
    fn = _bracket_overlap if method == METHOD_OVERLAP else _bracket_orbit
    return SymOpVector(n, fn(a, b, n))


@dataclass
class StructureTable:
    """Lazy cache of pairwise structure constants at fixed n.

    Entries are computed on first request and stored under the sorted pair;
    the antisymmetric partner is produced by sign flip on lookup.  A finished
    table is read-only in practice: lookups after fill() mutate nothing.
    """

    n: int
    method: str = METHOD_OVERLAP
    provenance: dict = field(default_factory=dict)
    _entries: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConstraintError("qubit count must be positive")
        self.method = normalize_method(self.method)

    def _pair_entry(self, a: PauliTriple, b: PauliTriple):
        ka = triple_sort_key(a)
        kb = triple_sort_key(b)
        if ka == kb:
            return None, 1
        sign = 1
        if ka > kb:
            a, b = b, a
            sign = -1
        entry = self._entries.get((a, b))
        if entry is None:
            fn = _bracket_overlap if self.method == METHOD_OVERLAP else _bracket_orbit
            entry = fn(a.check(self.n), b.check(self.n), self.n)
            self._entries[(a, b)] = entry
        return entry, sign

    def bracket(self, a, b) -> SymOpVector:
        entry, sign = self._pair_entry(as_triple(a), as_triple(b))
        if not entry:
            return SymOpVector.zero(self.n)
        if sign < 0:
            return SymOpVector(self.n, {u: -g for u, g in entry.items()})
        return SymOpVector(self.n, dict(entry))

    def bracket_vectors(self, u: SymOpVector, v: SymOpVector) -> SymOpVector:
        """Bilinear extension of the basis bracket to coordinate vectors."""
        if u.n != self.n or v.n != self.n:
            raise DimensionMismatch("vector qubit count differs from table")
        out: dict[PauliTriple, object] = {}
        for a, ca in u.items():
            for b, cb in v.items():
                entry, sign = self._pair_entry(a, b)
                if not entry:
                    continue
                c = ca * cb if sign > 0 else -ca * cb
                for t, g in entry.items():
                    out[t] = out.get(t, 0) + c * g
        return SymOpVector(self.n, out)

    def fill(self, triples: Iterable[PauliTriple] | None = None) -> None:
        """Compute every pair among `triples` (default: all).  Idempotent."""
        ts = sorted(
            (as_triple(t).check(self.n) for t in (triples or all_triples(self.n))),
            key=triple_sort_key,
        )
        for i, a in enumerate(ts):
            for b in ts[i + 1 :]:
                self._pair_entry(a, b)

    @property
    def entry_count(self) -> int:
        return len(self._entries)

    def entries(self):
        return self._entries.items()

    def payload(self) -> dict:
        ent = {}
        for (a, b), coeffs in sorted(
            self._entries.items(),
            key=lambda kv: (triple_sort_key(kv[0][0]), triple_sort_key(kv[0][1])),
        ):
            ent[f"{a.text()}|{b.text()}"] = [
                [u.text(), g] for u, g in sorted(coeffs.items(), key=lambda kv: triple_sort_key(kv[0]))
            ]
        body = {
            "format": CACHE_FORMAT,
            "version": CACHE_VERSION,
            "n": self.n,
            "method": self.method,
            "entries": ent,
        }
        body["digest"] = _payload_digest(body)
        return body

    def save(self, path: str) -> None:
        """Atomic JSON dump of all computed entries."""
        data = json.dumps(self.payload(), indent=1, sort_keys=True)
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def from_payload(cls, body: Mapping) -> "StructureTable":
        table = cls(int(body["n"]), body["method"])
        for pair, coeffs in body["entries"].items():
            a_text, b_text = pair.split("|")
            key = (PauliTriple.from_text(a_text), PauliTriple.from_text(b_text))
            table._entries[key] = {
                PauliTriple.from_text(u): int(g) for u, g in coeffs
            }
        return table


def _payload_digest(body: Mapping) -> str:
    content = {k: body[k] for k in ("format", "version", "n", "method", "entries")}
    blob = json.dumps(content, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def cache_path(cache_dir: str, n: int, method: str) -> str:
    short = "overlap" if normalize_method(method) == METHOD_OVERLAP else "orbit"
    return os.path.join(cache_dir, f"structure_{n}_{short}_v{CACHE_VERSION}.json")


def load_table(path: str) -> StructureTable | None:
    """Load a cached table; returns None (with a warning) on any corruption."""
    try:
        with open(path) as fh:
            body = json.load(fh)
        if body.get("format") != CACHE_FORMAT or body.get("version") != CACHE_VERSION:
            raise ValueError("unrecognized cache format")
        if body.get("digest") != _payload_digest(body):
            raise ValueError("digest mismatch")
        return StructureTable.from_payload(body)
    except FileNotFoundError:
        return None
    except (ValueError, KeyError, TypeError, OSError) as exc:
        warnings.warn(f"discarding corrupt structure cache {path}: {exc}", stacklevel=2)
        return None


def build_table(
    n: int,
    method: str = METHOD_OVERLAP,
    cache_dir: str | None = None,
    fill: bool = False,
) -> StructureTable:
    """Obtain a structure table, via the disk cache when one is given.

    A corrupt cache file is discarded and rebuilt.  With fill=True the table
    is completed and (when caching) written back.
    """
    method = normalize_method(method)
    table = None
    status = "fresh"
    path = None
    if cache_dir:
        path = cache_path(cache_dir, n, method)
        table = load_table(path)
        if table is not None:
            if table.n == n and table.method == method:
                status = "cache-hit"
            else:
                warnings.warn(f"cache {path} labeled for other parameters; rebuilding")
                table = None
        if table is None and os.path.exists(path):
            status = "rebuilt-after-corruption"
    if table is None:
        table = StructureTable(n, method)
    before = table.entry_count
    if fill:
        table.fill()
    if path and table.entry_count != before:
        table.save(path)
        status += "+saved" if status != "fresh" else ""
        if status == "fresh":
            status = "saved"
    table.provenance = {"cache": status, "path": path}
    return table


def compare_tables(t1: StructureTable, t2: StructureTable, triples=None) -> list[dict]:
    """Entrywise comparison of two tables over the same n.

    Returns one record per disagreeing pair; empty means identical.
    """
    if t1.n != t2.n:
        raise DimensionMismatch("tables built for different qubit counts")
    ts = sorted(
        (as_triple(t) for t in (triples or all_triples(t1.n))), key=triple_sort_key
    )
    bad = []
    for i, a in enumerate(ts):
        for b in ts[i + 1 :]:
            v1 = t1.bracket(a, b)
            v2 = t2.bracket(a, b)
            if v1 != v2:
                bad.append(
                    {
                        "pair": [a.text(), b.text()],
                        t1.method: v1.to_jsonable(),
                        t2.method: v2.to_jsonable(),
                    }
                )
    return bad
