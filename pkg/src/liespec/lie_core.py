"""Exact rational arithmetic for finite-dimensional Lie algebras.

Everything in this module is exact: coordinates and structure constants are
`fractions.Fraction`, subspaces are canonical reduced row-echelon matrices,
so membership, equality and filtration jumps are decidable facts rather than
tolerance calls.  Floating point never enters here.

Conventions
-----------
* Basis indices are 0-based throughout the library.
* Structure constants are stored sparsely for i < j only; antisymmetry is
  applied on access, so ``[e_i, e_i] = 0`` and ``[e_j, e_i] = -[e_i, e_j]``
  hold by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

Vector = tuple[Fraction, ...]


class ExactnessError(TypeError):
    """Raised when a non-rational scalar (e.g. a float) is supplied."""


def as_fraction(x) -> Fraction:
    """Convert an int / Fraction / 'p/q' string to Fraction, rejecting floats.

    Irrational or floating-point structure constants are unsupported by
    design: exactness is what makes subspace equality decidable.
    """
    if isinstance(x, bool):
        raise ExactnessError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x)
    raise ExactnessError(
        f"expected an exact rational, got {type(x).__name__}: {x!r}"
    )


def as_vector(coords: Iterable, dim: int | None = None) -> Vector:
    v = tuple(as_fraction(c) for c in coords)
    if dim is not None and len(v) != dim:
        raise ValueError(f"expected vector of length {dim}, got {len(v)}")
    return v


def zero_vector(dim: int) -> Vector:
    return (Fraction(0),) * dim


def basis_vector(i: int, dim: int) -> Vector:
    return tuple(Fraction(1 if k == i else 0) for k in range(dim))


def vec_add(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y, strict=True))


def vec_scale(c, x: Vector) -> Vector:
    c = as_fraction(c)
    return tuple(c * a for a in x)


def is_zero(x: Vector) -> bool:
    return all(a == 0 for a in x)


# ---------------------------------------------------------------------------
# Subspaces as canonical reduced row-echelon matrices
# ---------------------------------------------------------------------------

def _rref(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """In-place fraction RREF; returns the nonzero rows (monic pivots)."""
    if not rows:
        return []
    n_cols = len(rows[0])
    piv_r = 0
    for col in range(n_cols):
        pivot = None
        for r in range(piv_r, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[piv_r], rows[pivot] = rows[pivot], rows[piv_r]
        inv = 1 / rows[piv_r][col]
        rows[piv_r] = [inv * a for a in rows[piv_r]]
        for r in range(len(rows)):
            if r != piv_r and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[piv_r])]
        piv_r += 1
        if piv_r == len(rows):
            break
    return [row for row in rows[:piv_r]]


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^d in canonical reduced row-echelon form.

    Two subspaces are equal iff their row matrices are identical, which makes
    filtrations and contractions comparable bit-exactly.
    """

    rows: tuple[Vector, ...]
    ambient_dim: int

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace((), ambient_dim)

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return span([basis_vector(i, ambient_dim) for i in range(ambient_dim)],
                    ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v: Vector) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError(
                f"vector of length {len(v)} vs ambient dim {self.ambient_dim}")
        # Reduce v against the echelon rows; containment iff residual is 0.
        residual = list(v)
        for row in self.rows:
            col = next(i for i, a in enumerate(row) if a == 1)
            if residual[col] != 0:
                f = residual[col]
                residual = [a - f * b for a, b in zip(residual, row)]
        return all(a == 0 for a in residual)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return span(list(self.rows) + list(other.rows), self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Exact intersection (Zassenhaus block reduction)."""
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        d = self.ambient_dim
        block: list[list[Fraction]] = []
        for r in self.rows:
            block.append(list(r) + list(r))
        z = [Fraction(0)] * d
        for r in other.rows:
            block.append(list(r) + z)
        reduced = _rref(block)
        inter: list[Vector] = []
        for row in reduced:
            if all(a == 0 for a in row[:d]):
                inter.append(tuple(row[d:]))
        return span(inter, d)


def span(vectors: Sequence[Vector], ambient_dim: int | None = None) -> Subspace:
    """Canonical span of exact vectors; idempotent and order-independent."""
    vectors = list(vectors)
    if ambient_dim is None:
        if not vectors:
            raise ValueError("ambient_dim required for an empty span")
        ambient_dim = len(vectors[0])
    for v in vectors:
        if len(v) != ambient_dim:
            raise ValueError("mixed vector dimensions in span")
    rows = _rref([list(v) for v in vectors])
    return Subspace(tuple(tuple(r) for r in rows), ambient_dim)


def solve_coordinates(rows: Sequence[Vector], v: Vector) -> Vector:
    """Solve sum_k x_k * rows[k] = v exactly; raises if v is outside."""
    dim = len(v)
    # Solve rows^T x = v by eliminating the augmented d x (k+1) system.
    mat = [[rows[k][i] for k in range(len(rows))] + [v[i]] for i in range(dim)]
    reduced = _rref(mat)
    x = [Fraction(0)] * len(rows)
    for row in reduced:
        col = next(i for i, a in enumerate(row) if a != 0)
        if col == len(rows):
            raise ValueError("vector not in the span of the given rows")
        x[col] = row[len(rows)]
    recon = zero_vector(dim)
    for xk, r in zip(x, rows):
        if xk != 0:
            recon = vec_add(recon, vec_scale(xk, r))
    if recon != tuple(v):
        raise ValueError("vector not in the span of the given rows")
    return tuple(x)


# ---------------------------------------------------------------------------
# Lie algebras
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    triple: tuple[int, int, int] | None = None
    residual: Vector | None = None


@dataclass(frozen=True)
class NilpotencyReport:
    nilpotent: bool
    step: int | None
    series: tuple[Subspace, ...]


class LieAlgebra:
    """Finite-dimensional Lie algebra over Q given by structure constants.

    ``structure`` maps (i, j) with i < j to the coordinate vector of
    [e_i, e_j].  Entries may be any exact rationals (ints, Fractions or
    'p/q' strings).
    """

    def __init__(self, dim: int,
                 structure: Mapping[tuple[int, int], Sequence],
                 basis_labels: Sequence[str] | None = None,
                 name: str = ""):
        if dim < 1:
            raise ValueError("dim must be a positive integer")
        self.dim = int(dim)
        self.name = name
        if basis_labels is None:
            basis_labels = tuple(f"e{i + 1}" for i in range(dim))
        if len(basis_labels) != dim:
            raise ValueError("need one basis label per dimension")
        self.basis_labels = tuple(str(s) for s in basis_labels)
        table: dict[tuple[int, int], Vector] = {}
        for (i, j), coeffs in structure.items():
            if not (0 <= i < j < dim):
                raise ValueError(
                    f"structure constants must have 0 <= i < j < dim, got ({i}, {j})")
            v = as_vector(coeffs, dim)
            if not is_zero(v):
                table[(int(i), int(j))] = v
        self._table = table

    # -- basic access -------------------------------------------------------

    def bracket_basis(self, i: int, j: int) -> Vector:
        if not (0 <= i < self.dim and 0 <= j < self.dim):
            raise ValueError(f"basis index out of range: ({i}, {j})")
        if i == j:
            return zero_vector(self.dim)
        if i < j:
            return self._table.get((i, j), zero_vector(self.dim))
        return vec_scale(-1, self._table.get((j, i), zero_vector(self.dim)))

    def structure_table(self) -> tuple[tuple[int, int, Vector], ...]:
        """Canonical sorted view of the nonzero constants (for bit-exact compares)."""
        return tuple((i, j, self._table[(i, j)])
                     for (i, j) in sorted(self._table))

    def basis(self) -> list[Vector]:
        return [basis_vector(i, self.dim) for i in range(self.dim)]

    def __eq__(self, other) -> bool:
        return (isinstance(other, LieAlgebra)
                and self.dim == other.dim
                and self._table == other._table)

    def __repr__(self) -> str:
        label = self.name or "LieAlgebra"
        return f"<{label} dim={self.dim} brackets={len(self._table)}>"

    # -- operations ---------------------------------------------------------

    def bracket(self, x: Vector, y: Vector) -> Vector:
        """Bilinear extension of the structure constants to arbitrary vectors."""
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("vector length does not match algebra dimension")
        out = [Fraction(0)] * self.dim
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0 or i == j:
                    continue
                b = self.bracket_basis(i, j)
                c = xi * yj
                for k, bk in enumerate(b):
                    if bk != 0:
                        out[k] += c * bk
        return tuple(out)

    def multi_commutator(self, elements: Sequence[Vector],
                         alpha: Sequence[int]) -> Vector:
        """Left-nested commutator [...[X_a1, X_a2], ..., X_an] of the
        selected elements; a length-1 index returns the element itself."""
        if len(alpha) == 0:
            raise ValueError("multi-index must be non-empty")
        for a in alpha:
            if not (0 <= a < len(elements)):
                raise ValueError(f"multi-index entry {a} out of range")
        acc = elements[alpha[0]]
        for a in alpha[1:]:
            acc = self.bracket(acc, elements[a])
        return acc

    def check_jacobi(self) -> JacobiReport:
        """Exact Jacobi test over all basis triples i < j < k."""
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    ei, ej, ek = (basis_vector(t, self.dim) for t in (i, j, k))
                    s = vec_add(
                        vec_add(self.bracket(ei, self.bracket(ej, ek)),
                                self.bracket(ej, self.bracket(ek, ei))),
                        self.bracket(ek, self.bracket(ei, ej)))
                    if not is_zero(s):
                        return JacobiReport(False, (i, j, k), s)
        return JacobiReport(True)

    def bracket_span(self, a: Subspace, b: Subspace) -> Subspace:
        """span{[x, y] : x in a, y in b} computed from row generators."""
        vecs = [self.bracket(x, y) for x in a.rows for y in b.rows]
        return span(vecs, self.dim)

    def lower_central_series(self) -> tuple[Subspace, ...]:
        g = Subspace.full(self.dim)
        series = [g]
        while True:
            nxt = self.bracket_span(g, series[-1])
            if nxt == series[-1]:
                break
            series.append(nxt)
            if nxt.dim == 0:
                break
        return tuple(series)

    def is_nilpotent(self) -> NilpotencyReport:
        series = self.lower_central_series()
        if series[-1].dim == 0:
            # step = largest c with g_c != 0 (Heisenberg: step 2)
            return NilpotencyReport(True, len(series) - 1, series)
        return NilpotencyReport(False, None, series)

    def derived_dimension(self) -> int:
        full = Subspace.full(self.dim)
        return self.bracket_span(full, full).dim
