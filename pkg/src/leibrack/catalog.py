"""Named small Lie algebras, their ideals and faithful matrix representations,
and a collection of finite groups.  These anchor the random generators, the
command line builtins, and the test corpus.

Group elements are dense indices with the unit at index 0; permutation groups
list the identity first and the remaining elements in lexicographic order, so
every table here is reproducible.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .algebra import LieAlgebraData, SubspaceBasis, lie_algebra
from .errors import StructuralError
from .racks import FiniteGroup


# ---------------------------------------------------------------------------
# Lie algebras
# ---------------------------------------------------------------------------

def _tensor(n: int, entries) -> np.ndarray:
    """Structure tensor from bracket entries ((i, j, k, value), ...).

    Each entry sets C[i,j,k] = value and C[j,i,k] = -value.
    """
    C = np.zeros((n, n, n))
    for i, j, k, value in entries:
        C[i, j, k] = value
        C[j, i, k] = -value
    return C


def abelian(n: int = 3) -> LieAlgebraData:
    """The abelian Lie algebra of dimension n."""
    return lie_algebra(np.zeros((n, n, n)))


def nonabelian2() -> LieAlgebraData:
    """The unique nonabelian two-dimensional algebra: [a, b] = b."""
    return LieAlgebraData(2, ("a", "b"), _tensor(2, [(0, 1, 1, 1.0)]))


def heisenberg() -> LieAlgebraData:
    """The three-dimensional Heisenberg algebra: [x, y] = z."""
    return LieAlgebraData(3, ("x", "y", "z"), _tensor(3, [(0, 1, 2, 1.0)]))


def sl2() -> LieAlgebraData:
    """sl(2) in the (h, e, f) basis: [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    entries = [(0, 1, 1, 2.0), (0, 2, 2, -2.0), (1, 2, 0, 1.0)]
    return LieAlgebraData(3, ("h", "e", "f"), _tensor(3, entries))


def _ut3_basis() -> np.ndarray:
    """Basis of 3x3 upper triangular matrices: diagonal units then E12, E13, E23."""
    mats = []
    for i, j in [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]:
        E = np.zeros((3, 3))
        E[i, j] = 1.0
        mats.append(E)
    return np.stack(mats)


def upper_triangular3() -> LieAlgebraData:
    """The six-dimensional algebra of 3x3 upper triangular matrices.

    Structure constants are read off from commutators of elementary matrices;
    expansion in this basis is exact because the basis consists of the
    matrix units of the occupied positions.
    """
    B = _ut3_basis()
    n = len(B)
    positions = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]
    C = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            comm = B[i] @ B[j] - B[j] @ B[i]
            for k, (r, c) in enumerate(positions):
                C[i, j, k] = comm[r, c]
    labels = ("d1", "d2", "d3", "u12", "u13", "u23")
    return LieAlgebraData(n, labels, C)


ALGEBRA_BUILDERS = {
    "abelian3": lambda: abelian(3),
    "nonabelian2": nonabelian2,
    "heisenberg": heisenberg,
    "sl2": sl2,
    "ut3": upper_triangular3,
}

# Ideals are given by rows of coordinates; each was hand checked to satisfy
# [g, ideal] in ideal and is re-verified by the test suite.
IDEAL_VECTORS = {
    "abelian3": {
        "line": [[1.0, 0.0, 0.0]],
        "full": list(np.eye(3)),
    },
    "nonabelian2": {
        "span_b": [[0.0, 1.0]],
    },
    "heisenberg": {
        "center": [[0.0, 0.0, 1.0]],
        "plane": [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    },
    "sl2": {
        "full": list(np.eye(3)),
    },
    "ut3": {
        "center": [[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]],   # scalar matrices
        "strict_upper": [[0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
                         [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
                         [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]],
    },
}

IDEAL_CHOICES = tuple(
    (name, ideal) for name in sorted(IDEAL_VECTORS) for ideal in sorted(IDEAL_VECTORS[name])
)


def algebra_by_name(name: str) -> LieAlgebraData:
    if name not in ALGEBRA_BUILDERS:
        raise StructuralError(f"unknown algebra {name!r}; "
                              f"known: {sorted(ALGEBRA_BUILDERS)}")
    return ALGEBRA_BUILDERS[name]()


def ideal_subspace(name: str, ideal: str) -> SubspaceBasis:
    try:
        rows = IDEAL_VECTORS[name][ideal]
    except KeyError:
        raise StructuralError(f"unknown ideal {ideal!r} of {name!r}") from None
    alg = algebra_by_name(name)
    return SubspaceBasis(alg.dim, np.array(rows, dtype=float))


def faithful_rep_matrices(name: str) -> np.ndarray:
    """A faithful matrix representation for each catalog algebra.

    For sl2 and nonabelian2 the adjoint representation already works; the
    natural low-dimensional ones returned here keep the group matrices small.
    """
    if name == "abelian3":
        return np.stack([np.diag(row) for row in np.eye(3)])
    if name == "nonabelian2":
        a = np.array([[1.0, 0.0], [0.0, 0.0]])
        b = np.array([[0.0, 1.0], [0.0, 0.0]])
        return np.stack([a, b])
    if name == "heisenberg":
        x = np.zeros((3, 3)); x[0, 1] = 1.0
        y = np.zeros((3, 3)); y[1, 2] = 1.0
        z = np.zeros((3, 3)); z[0, 2] = 1.0
        return np.stack([x, y, z])
    if name == "sl2":
        h = np.array([[1.0, 0.0], [0.0, -1.0]])
        e = np.array([[0.0, 1.0], [0.0, 0.0]])
        f = np.array([[0.0, 0.0], [1.0, 0.0]])
        return np.stack([h, e, f])
    if name == "ut3":
        return _ut3_basis()
    raise StructuralError(f"no faithful representation on file for {name!r}")


# ---------------------------------------------------------------------------
# Finite groups
# ---------------------------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    """Z/n with addition, unit 0."""
    idx = np.arange(n)
    return FiniteGroup.from_mul_table((idx[:, None] + idx[None, :]) % n)


def _compose(p: tuple, q: tuple) -> tuple:
    """Composition of permutations acting on the left: (p q)(i) = p[q[i]]."""
    return tuple(p[i] for i in q)


def group_from_permutations(perms) -> FiniteGroup:
    """Finite group from a closed set of permutations, identity at index 0."""
    elems = sorted(set(tuple(p) for p in perms))
    ident = tuple(range(len(elems[0])))
    if ident not in elems:
        raise StructuralError("permutation set lacks the identity")
    elems.remove(ident)
    elems.insert(0, ident)
    index = {p: i for i, p in enumerate(elems)}
    size = len(elems)
    mul = np.empty((size, size), dtype=np.int64)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            r = _compose(p, q)
            if r not in index:
                raise StructuralError("permutation set is not closed")
            mul[i, j] = index[r]
    return FiniteGroup.from_mul_table(mul)


def group_from_generators(gens) -> FiniteGroup:
    """Close a generating set of permutations under composition."""
    gens = [tuple(g) for g in gens]
    n = len(gens[0])
    seen = {tuple(range(n))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _compose(g, p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return group_from_permutations(seen)


def symmetric3() -> FiniteGroup:
    return group_from_permutations(permutations(range(3)))


def alternating4() -> FiniteGroup:
    evens = []
    for p in permutations(range(4)):
        inversions = sum(1 for i in range(4) for j in range(i + 1, 4)
                         if p[i] > p[j])
        if inversions % 2 == 0:
            evens.append(p)
    return group_from_permutations(evens)


def dihedral4() -> FiniteGroup:
    """Symmetries of the square as permutations of its corners."""
    rotate = (1, 2, 3, 0)
    flip = (1, 0, 3, 2)
    return group_from_generators([rotate, flip])


def quaternion8() -> FiniteGroup:
    """The quaternion group {1, -1, i, -i, j, -j, k, -k} in that order."""
    units = ["1", "i", "j", "k"]
    prod = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"),
        ("1", "k"): (1, "k"), ("i", "1"): (1, "i"), ("j", "1"): (1, "j"),
        ("k", "1"): (1, "k"), ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"),
        ("k", "k"): (-1, "1"), ("i", "j"): (1, "k"), ("j", "i"): (-1, "k"),
        ("j", "k"): (1, "i"), ("k", "j"): (-1, "i"), ("k", "i"): (1, "j"),
        ("i", "k"): (-1, "j"),
    }
    elems = [(s, u) for u in units for s in (1, -1)]
    index = {el: i for i, el in enumerate(elems)}
    size = len(elems)
    mul = np.empty((size, size), dtype=np.int64)
    for (s1, u1), i in index.items():
        for (s2, u2), j in index.items():
            s3, u3 = prod[(u1, u2)]
            mul[i, j] = index[(s1 * s2 * s3, u3)]
    return FiniteGroup.from_mul_table(mul)


def group_catalog() -> dict:
    """All catalog groups keyed by name."""
    groups = {f"z{n}": cyclic_group(n) for n in range(1, 13)}
    groups["s3"] = symmetric3()
    groups["d4"] = dihedral4()
    groups["q8"] = quaternion8()
    groups["a4"] = alternating4()
    return groups
