"""Dense structure-constant Lie algebras, modules over them, Leibniz brackets.

Conventions
-----------
A Lie algebra of dimension n is stored as a float64 tensor C of shape
(n, n, n) with

    [e_i, e_j] = sum_k C[i, j, k] e_k.

A module action of the algebra on a d-dimensional space is a stack A of n
matrices of shape (d, d); the action of a general element x is
sum_i x_i A[i].  A Leibniz algebra is a bare bracket tensor of the same
layout as C with no antisymmetry requirement.

Constructors validate shapes only and freeze their arrays; the defining
identities are checked by the ``check_*`` functions, which return a
:class:`~leibrack.report.ValidityReport` instead of raising.  All residuals
are absolute and compared against a configurable tolerance (default 1e-9,
adequate for the integer-derived catalog data and well above float64 noise).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import StructuralError
from .report import MAX_LISTED_VIOLATIONS, ValidityReport, Violation

DEFAULT_TOL = 1e-9


def frozen_array(values, shape=None, what="array") -> np.ndarray:
    """Copy ``values`` into a read-only float64 array, checking the shape."""
    arr = np.array(values, dtype=float)
    if shape is not None and arr.shape != tuple(shape):
        raise StructuralError(f"{what}: expected shape {tuple(shape)}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise StructuralError(f"{what}: entries must be finite")
    arr.flags.writeable = False
    return arr


def _scan(law: str, residuals: np.ndarray, tol: float, sink: list) -> float:
    """Record index tuples whose |residual| exceeds tol; return the maximum."""
    res = np.asarray(residuals, dtype=float)
    if res.size == 0:
        return 0.0
    mx = float(np.max(np.abs(res)))
    if mx > tol:
        room = MAX_LISTED_VIOLATIONS - len(sink)
        if room > 0:
            for where in np.argwhere(np.abs(res) > tol)[:room]:
                idx = tuple(int(i) for i in where)
                sink.append(Violation(law, idx, float(abs(res[idx]))))
    return mx


@dataclass(frozen=True, eq=False)
class LieAlgebraData:
    """A finite-dimensional Lie algebra in a fixed basis."""

    dim: int
    basis_labels: tuple
    structure_constants: np.ndarray

    def __post_init__(self):
        n = self.dim
        if not isinstance(n, int) or n <= 0:
            raise StructuralError("dim must be a positive integer")
        labels = tuple(str(s) for s in self.basis_labels)
        if len(labels) != n:
            raise StructuralError(f"need {n} basis labels, got {len(labels)}")
        C = frozen_array(self.structure_constants, (n, n, n), "structure constants")
        object.__setattr__(self, "basis_labels", labels)
        object.__setattr__(self, "structure_constants", C)

    def bracket(self, x, y) -> np.ndarray:
        """[x, y] for coordinate vectors x, y."""
        return np.einsum("i,j,ijk->k", np.asarray(x, float), np.asarray(y, float),
                         self.structure_constants)

    def ad(self, x) -> np.ndarray:
        """Matrix of y -> [x, y] in the chosen basis."""
        return np.einsum("i,ijk->kj", np.asarray(x, float), self.structure_constants)

    def adjoint_action(self) -> "ModuleAction":
        """The algebra acting on itself by ad."""
        mats = np.stack([self.ad(e) for e in np.eye(self.dim)])
        return ModuleAction(self, self.dim, mats)


def lie_algebra(structure_constants, labels=None) -> LieAlgebraData:
    """Build a LieAlgebraData from a raw tensor, defaulting labels to e0.. ."""
    C = np.asarray(structure_constants, dtype=float)
    if C.ndim != 3 or len(set(C.shape)) != 1:
        raise StructuralError(f"structure constants must be cubic, got shape {C.shape}")
    n = C.shape[0]
    if labels is None:
        labels = tuple(f"e{i}" for i in range(n))
    return LieAlgebraData(n, tuple(labels), C)


@dataclass(frozen=True, eq=False)
class ModuleAction:
    """A linear action of a Lie algebra on a d-dimensional space."""

    algebra: LieAlgebraData
    dim_v: int
    action_matrices: np.ndarray

    def __post_init__(self):
        d = self.dim_v
        if not isinstance(d, int) or d <= 0:
            raise StructuralError("dim_v must be a positive integer")
        A = frozen_array(self.action_matrices, (self.algebra.dim, d, d),
                         "action matrices")
        object.__setattr__(self, "action_matrices", A)

    def act(self, x) -> np.ndarray:
        """Matrix of the action of the algebra element with coordinates x."""
        return np.einsum("i,iab->ab", np.asarray(x, float), self.action_matrices)

    def apply(self, x, v) -> np.ndarray:
        """x . v"""
        return self.act(x) @ np.asarray(v, float)


@dataclass(frozen=True, eq=False)
class LeibnizAlgebraData:
    """A (left) Leibniz algebra given by a bare bracket tensor."""

    dim: int
    bracket_tensor: np.ndarray

    def __post_init__(self):
        d = self.dim
        if not isinstance(d, int) or d <= 0:
            raise StructuralError("dim must be a positive integer")
        B = frozen_array(self.bracket_tensor, (d, d, d), "bracket tensor")
        object.__setattr__(self, "bracket_tensor", B)

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(x, float), np.asarray(y, float),
                         self.bracket_tensor)


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """A subspace of R^ambient_dim spanned by linearly independent rows.

    The zero subspace is allowed (an empty row list).  Linear independence is
    enforced at construction via the singular values of the row stack.
    """

    ambient_dim: int
    vectors: np.ndarray

    def __post_init__(self):
        if not isinstance(self.ambient_dim, int) or self.ambient_dim <= 0:
            raise StructuralError("ambient_dim must be a positive integer")
        V = np.array(self.vectors, dtype=float)
        if V.size == 0:
            V = V.reshape(0, self.ambient_dim)
        if V.ndim != 2 or V.shape[1] != self.ambient_dim:
            raise StructuralError(
                f"subspace vectors must be rows of length {self.ambient_dim}")
        if V.shape[0] > 0:
            s = np.linalg.svd(V, compute_uv=False)
            if s[0] == 0.0 or s[-1] <= max(V.shape) * np.finfo(float).eps * s[0]:
                raise StructuralError("subspace vectors are linearly dependent")
        if not np.all(np.isfinite(V)):
            raise StructuralError("subspace vectors must be finite")
        V.flags.writeable = False
        object.__setattr__(self, "vectors", V)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def distance(self, vec) -> float:
        """Euclidean distance from vec to the subspace (least squares)."""
        v = np.asarray(vec, dtype=float)
        if v.shape != (self.ambient_dim,):
            raise StructuralError(f"expected vector of length {self.ambient_dim}")
        if self.dim == 0:
            return float(np.linalg.norm(v))
        coeff, *_ = np.linalg.lstsq(self.vectors.T, v, rcond=None)
        return float(np.linalg.norm(self.vectors.T @ coeff - v))

    def contains(self, vec, tol: float = DEFAULT_TOL) -> bool:
        return self.distance(vec) <= tol

    def contains_all(self, vectors, tol: float = DEFAULT_TOL) -> bool:
        return all(self.contains(v, tol) for v in np.atleast_2d(np.asarray(vectors, float)))

    def spans_same(self, other: "SubspaceBasis", tol: float = DEFAULT_TOL) -> bool:
        """True when both spans contain each other's basis vectors."""
        if self.ambient_dim != other.ambient_dim:
            raise StructuralError("ambient dimensions differ")
        return (self.contains_all(other.vectors, tol) if other.dim else True) and \
               (other.contains_all(self.vectors, tol) if self.dim else True)


def check_lie_algebra(alg: LieAlgebraData, tol: float = DEFAULT_TOL) -> ValidityReport:
    """Antisymmetry and the Jacobi identity, checked on all basis tuples."""
    C = alg.structure_constants
    sink: list = []
    m1 = _scan("antisymmetry", C + np.swapaxes(C, 0, 1), tol, sink)
    jac = (np.einsum("ijm,mkl->ijkl", C, C)
           + np.einsum("jkm,mil->ijkl", C, C)
           + np.einsum("kim,mjl->ijkl", C, C))
    m2 = _scan("jacobi", jac, tol, sink)
    mx = max(m1, m2)
    return ValidityReport(mx <= tol, mx, tuple(sink), {"tolerance": tol})


def check_module(action: ModuleAction, tol: float = DEFAULT_TOL) -> ValidityReport:
    """A is a homomorphism: sum_k C[i,j,k] A_k = A_i A_j - A_j A_i."""
    C = action.algebra.structure_constants
    A = action.action_matrices
    want = np.einsum("ijk,kab->ijab", C, A)
    have = np.einsum("iab,jbc->ijac", A, A) - np.einsum("jab,ibc->ijac", A, A)
    sink: list = []
    mx = _scan("module-homomorphism", want - have, tol, sink)
    return ValidityReport(mx <= tol, mx, tuple(sink), {"tolerance": tol})


def check_leibniz(leib: LeibnizAlgebraData, tol: float = DEFAULT_TOL) -> ValidityReport:
    """Left Leibniz identity [u,[v,w]] = [[u,v],w] + [v,[u,w]] on basis triples.

    Antisymmetry is *not* required; the report notes in ``info`` whether the
    bracket happens to be antisymmetric (i.e. is a Lie bracket).
    """
    B = leib.bracket_tensor
    lhs = np.einsum("jkm,iml->ijkl", B, B)
    rhs = np.einsum("ijm,mkl->ijkl", B, B) + np.einsum("ikm,jml->ijkl", B, B)
    sink: list = []
    mx = _scan("leibniz-identity", lhs - rhs, tol, sink)
    anti = float(np.max(np.abs(B + B.swapaxes(0, 1)))) if B.size else 0.0
    info = {"tolerance": tol, "antisymmetric": bool(anti <= tol),
            "antisymmetry_residual": anti}
    return ValidityReport(mx <= tol, mx, tuple(sink), info)


def bracket_closure_check(alg: LieAlgebraData, sub: SubspaceBasis,
                          tol: float = DEFAULT_TOL) -> bool:
    """True when [sub, sub] stays inside sub (least-squares membership)."""
    if sub.ambient_dim != alg.dim:
        raise StructuralError("subspace lives in a different ambient space")
    for x in sub.vectors:
        for y in sub.vectors:
            if sub.distance(alg.bracket(x, y)) > tol:
                return False
    return True


def ideal_check(alg: LieAlgebraData, sub: SubspaceBasis,
                tol: float = DEFAULT_TOL) -> bool:
    """True when [g, sub] stays inside sub."""
    if sub.ambient_dim != alg.dim:
        raise StructuralError("subspace lives in a different ambient space")
    for x in np.eye(alg.dim):
        for y in sub.vectors:
            if sub.distance(alg.bracket(x, y)) > tol:
                return False
    return True
