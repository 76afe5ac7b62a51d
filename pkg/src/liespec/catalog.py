"""Built-in Lie algebra catalog with documented bases and brackets.

Every entry records, besides the algebra itself:

* ``generators`` / ``generator_weights``: the canonical weighted algebraic
  basis used for filtrations and contractions.  For the three-dimensional
  non-nilpotent entries this is the standard two-generator, weight-1 basis;
  basis order is chosen so that the generators are always the *first*
  ``len(generator_weights)`` basis vectors.
* ``graded_weights``: a full-basis grading when the algebra is itself
  graded (abelian, heisenberg, engel4); ``None`` otherwise.

Brackets:

* ``abelian(n)``      -- all brackets vanish.
* ``heisenberg(n)``   -- basis X_1..X_n, Y_1..Y_n, Z with [X_i, Y_i] = Z.
* ``engel4``          -- basis X1..X4 with [X1, X2] = X3, [X1, X3] = X4.
* ``su2``             -- [e1, e2] = e3, [e2, e3] = e1, [e3, e1] = e2.
* ``so3``             -- cross-product basis L1, L2, L3 (same constants as su2).
* ``sl2r``            -- basis (E, F, H): [E, F] = H, [H, E] = 2E, [H, F] = -2F.
* ``se2``             -- basis (J, P1, P2): [J, P1] = P2, [J, P2] = -P1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .lie_core import LieAlgebra


@dataclass(frozen=True)
class CatalogEntry:
    algebra: LieAlgebra
    generators: tuple[int, ...]
    generator_weights: tuple[Fraction, ...]
    graded_weights: tuple[Fraction, ...] | None = None


def _ones(n: int) -> tuple[Fraction, ...]:
    return (Fraction(1),) * n


def abelian(n: int) -> CatalogEntry:
    if n < 1:
        raise ValueError("abelian(n) needs n >= 1")
    alg = LieAlgebra(n, {}, [f"A{i + 1}" for i in range(n)], name=f"abelian{n}")
    return CatalogEntry(alg, tuple(range(n)), _ones(n), graded_weights=_ones(n))


def heisenberg(n: int) -> CatalogEntry:
    if n < 1:
        raise ValueError("heisenberg(n) needs n >= 1")
    d = 2 * n + 1
    labels = ([f"X{i + 1}" for i in range(n)]
              + [f"Y{i + 1}" for i in range(n)]
              + ["Z"])
    z = [0] * d
    structure = {}
    for i in range(n):
        coeffs = list(z)
        coeffs[d - 1] = 1
        structure[(i, n + i)] = coeffs
    alg = LieAlgebra(d, structure, labels, name=f"heisenberg{n}")
    return CatalogEntry(
        alg,
        generators=tuple(range(2 * n)),
        generator_weights=_ones(2 * n),
        graded_weights=_ones(2 * n) + (Fraction(2),),
    )


def engel4() -> CatalogEntry:
    structure = {
        (0, 1): [0, 0, 1, 0],
        (0, 2): [0, 0, 0, 1],
    }
    alg = LieAlgebra(4, structure, ["X1", "X2", "X3", "X4"], name="engel4")
    return CatalogEntry(
        alg,
        generators=(0, 1),
        generator_weights=_ones(2),
        graded_weights=(Fraction(1), Fraction(1), Fraction(2), Fraction(3)),
    )


def su2() -> CatalogEntry:
    structure = {
        (0, 1): [0, 0, 1],    # [e1, e2] = e3
        (1, 2): [1, 0, 0],    # [e2, e3] = e1
        (0, 2): [0, -1, 0],   # [e1, e3] = -e2
    }
    alg = LieAlgebra(3, structure, ["e1", "e2", "e3"], name="su2")
    return CatalogEntry(alg, (0, 1), _ones(2))


def so3() -> CatalogEntry:
    structure = {
        (0, 1): [0, 0, 1],
        (1, 2): [1, 0, 0],
        (0, 2): [0, -1, 0],
    }
    alg = LieAlgebra(3, structure, ["L1", "L2", "L3"], name="so3")
    return CatalogEntry(alg, (0, 1), _ones(2))


def sl2r() -> CatalogEntry:
    structure = {
        (0, 1): [0, 0, 1],     # [E, F] = H
        (0, 2): [-2, 0, 0],    # [E, H] = -2E
        (1, 2): [0, 2, 0],     # [F, H] = 2F
    }
    alg = LieAlgebra(3, structure, ["E", "F", "H"], name="sl2r")
    return CatalogEntry(alg, (0, 1), _ones(2))


def se2() -> CatalogEntry:
    structure = {
        (0, 1): [0, 0, 1],     # [J, P1] = P2
        (0, 2): [0, -1, 0],    # [J, P2] = -P1
    }
    alg = LieAlgebra(3, structure, ["J", "P1", "P2"], name="se2")
    return CatalogEntry(alg, (0, 1), _ones(2))


_PARAM = re.compile(r"^(abelian|heisenberg)(\d+)$")

_FIXED = {
    "engel4": engel4,
    "su2": su2,
    "so3": so3,
    "sl2r": sl2r,
    "se2": se2,
    "heisenberg": lambda: heisenberg(1),
}


def catalog_names() -> list[str]:
    return ["abelian<n>", "heisenberg<n>", "heisenberg", "engel4",
            "su2", "so3", "sl2r", "se2"]


def resolve(name: str) -> CatalogEntry:
    """Look up a catalog entry by name, e.g. 'su2', 'heisenberg2', 'abelian3'."""
    key = name.strip().lower()
    if key in _FIXED:
        return _FIXED[key]()
    m = _PARAM.match(key)
    if m:
        n = int(m.group(2))
        return abelian(n) if m.group(1) == "abelian" else heisenberg(n)
    raise KeyError(f"unknown catalog algebra: {name!r} "
                   f"(known: {', '.join(catalog_names())})")
