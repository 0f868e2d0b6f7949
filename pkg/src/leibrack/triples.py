"""Triples (Lie algebra, module, embedding tensor) and their derived data.

An embedding tensor theta maps the module V back into the Lie algebra g.
The triple's derived bracket on V is

    [u, v] := theta(u) . v,

which is a (left) Leibniz bracket whenever theta intertwines it with the
bracket of g (the compatibility checked here).  The failure of an algebra
element a to act equivariantly on theta is measured by the defect map

    defect(a) : v  ->  [a, theta(v)] - theta(a . v),

a linear map V -> g for each a.  Strict triples have zero defect; the largest
subalgebra on which the defect vanishes always contains the image of theta.

This module also covers morphisms of triples, relaxed augmentations (a chosen
subalgebra with vanishing defect), Lie algebra crossed modules, and the
seeded random generators used by the corpus.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import catalog
from .algebra import (DEFAULT_TOL, LeibnizAlgebraData, LieAlgebraData,
                      ModuleAction, SubspaceBasis, _scan, bracket_closure_check,
                      check_leibniz, check_lie_algebra, check_module,
                      frozen_array, lie_algebra)
from .errors import AxiomError, StructuralError
from .report import MAX_LISTED_VIOLATIONS, ValidityReport, Violation, merge_reports


@dataclass(frozen=True, eq=False)
class EmbeddingTensor:
    """A linear map V -> g stored as an (dim g, dim V) matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.ndim != 2:
            raise StructuralError("embedding tensor must be a matrix")
        M.flags.writeable = False
        object.__setattr__(self, "matrix", M)

    def __call__(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, float)


def derived_bracket_tensor(action: ModuleAction, theta: EmbeddingTensor) -> np.ndarray:
    """Tensor of [u, v] = theta(u) . v on the module."""
    return np.einsum("iu,ikv->uvk", theta.matrix, action.action_matrices)


@dataclass(frozen=True, eq=False)
class LieLeibnizTriple:
    """A validated triple together with its cached derived Leibniz bracket.

    Use :func:`build_triple` to construct one; the constructor itself only
    enforces shape consistency and computes the derived bracket.
    """

    algebra: LieAlgebraData
    action: ModuleAction
    theta: EmbeddingTensor
    derived_bracket: LeibnizAlgebraData = None

    def __post_init__(self):
        n, d = self.algebra.dim, self.action.dim_v
        if self.action.algebra is not self.algebra:
            if self.action.algebra.dim != n or not np.array_equal(
                    self.action.algebra.structure_constants,
                    self.algebra.structure_constants):
                raise StructuralError("action is over a different algebra")
        if self.theta.matrix.shape != (n, d):
            raise StructuralError(
                f"embedding tensor must be {(n, d)}, got {self.theta.matrix.shape}")
        B = derived_bracket_tensor(self.action, self.theta)
        object.__setattr__(self, "derived_bracket", LeibnizAlgebraData(d, B))

    @property
    def dim_g(self) -> int:
        return self.algebra.dim

    @property
    def dim_v(self) -> int:
        return self.action.dim_v


def check_triple(algebra: LieAlgebraData, action: ModuleAction,
                 theta: EmbeddingTensor, tol: float = DEFAULT_TOL) -> ValidityReport:
    """All axioms of a triple from raw components.

    Component laws (Lie axioms, module homomorphism) are included, then the
    compatibility of the embedding with both brackets and the Leibniz
    identity of the derived bracket.  The bracket on V is *defined* as
    theta(u).v, so that equation is not re-checked; the content lives in

        theta([u, v]_V) = [theta(u), theta(v)]_g .
    """
    n, d = algebra.dim, action.dim_v
    if theta.matrix.shape != (n, d):
        raise StructuralError(
            f"embedding tensor must be {(n, d)}, got {theta.matrix.shape}")
    parts = [check_lie_algebra(algebra, tol), check_module(action, tol)]

    B = derived_bracket_tensor(action, theta)
    Th = theta.matrix
    lhs = np.einsum("uvk,nk->uvn", B, Th)
    rhs = np.einsum("iu,jv,ijn->uvn", Th, Th, algebra.structure_constants)
    sink: list = []
    mx = _scan("embedding-intertwines-brackets", lhs - rhs, tol, sink)
    parts.append(ValidityReport(mx <= tol, mx, tuple(sink), {}))

    leib = check_leibniz(LeibnizAlgebraData(d, B), tol)
    parts.append(ValidityReport(leib.passed, leib.max_residual, leib.violations, {}))

    defect = np.max(np.abs(_defect_stack(algebra, action, theta))) if n else 0.0
    merged = merge_reports(*parts)
    info = dict(merged.info)
    info.update({"tolerance": tol, "strict": bool(defect <= tol),
                 "max_defect": float(defect)})
    return ValidityReport(merged.passed, merged.max_residual,
                          merged.violations, info)


def build_triple(algebra: LieAlgebraData, action: ModuleAction,
                 theta: EmbeddingTensor, tol: float = DEFAULT_TOL) -> LieLeibnizTriple:
    """Validate components and assemble the triple; AxiomError on failure."""
    report = check_triple(algebra, action, theta, tol)
    if not report.passed:
        law = report.violations[0].law if report.violations else "triple-axioms"
        raise AxiomError(law, report.max_residual, report)
    return LieLeibnizTriple(algebra, action, theta)


def _defect_stack(algebra: LieAlgebraData, action: ModuleAction,
                  theta: EmbeddingTensor) -> np.ndarray:
    """Defect matrices of all basis elements, shape (n, n, d)."""
    Th = theta.matrix
    out = np.empty((algebra.dim,) + Th.shape)
    for i, e in enumerate(np.eye(algebra.dim)):
        out[i] = algebra.ad(e) @ Th - Th @ action.action_matrices[i]
    return out


def equivariance_defect(triple: LieLeibnizTriple, a) -> np.ndarray:
    """Matrix of v -> [a, theta(v)] - theta(a . v), shape (dim g, dim V)."""
    a = np.asarray(a, float)
    return triple.algebra.ad(a) @ triple.theta.matrix - \
        triple.theta.matrix @ triple.action.act(a)


def is_strict(triple: LieLeibnizTriple, tol: float = DEFAULT_TOL) -> bool:
    """True when every algebra element acts equivariantly on the embedding."""
    stack = _defect_stack(triple.algebra, triple.action, triple.theta)
    return bool(np.max(np.abs(stack)) <= tol) if stack.size else True


def max_strictness_subalgebra(triple: LieLeibnizTriple,
                              tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """The largest subspace of g on which the defect map vanishes.

    Computed as the kernel of a -> defect(a) via SVD with threshold
    tol * (largest singular value).  The result is always a subalgebra
    containing the image of the embedding tensor; both facts are re-verified
    before returning.
    """
    n, d = triple.dim_g, triple.dim_v
    stack = _defect_stack(triple.algebra, triple.action, triple.theta)
    L = stack.reshape(n, n * d).T          # columns indexed by basis elements
    _, s, Vt = np.linalg.svd(L)
    cutoff = tol * (s[0] if s.size else 0.0)
    mask = s <= cutoff
    basis = SubspaceBasis(n, Vt[mask])
    aug_report = check_relaxed_augmentation(
        RelaxedAugmentation(triple, basis), max(tol, 1e-7))
    if not aug_report.passed:
        raise AxiomError("max-strictness-subalgebra", aug_report.max_residual,
                         aug_report)
    return basis


@dataclass(frozen=True, eq=False)
class RelaxedAugmentation:
    """A triple together with a chosen subalgebra of equivariant elements."""

    triple: LieLeibnizTriple
    h_basis: SubspaceBasis

    def __post_init__(self):
        if self.h_basis.ambient_dim != self.triple.dim_g:
            raise StructuralError("subalgebra lives in a different ambient space")


def check_relaxed_augmentation(aug: RelaxedAugmentation,
                               tol: float = DEFAULT_TOL) -> ValidityReport:
    """The chosen subspace contains Im(theta), closes under the bracket, and
    every element of it has vanishing defect."""
    triple, h = aug.triple, aug.h_basis
    sink: list = []
    mx = 0.0
    for j in range(triple.dim_v):
        r = h.distance(triple.theta.matrix[:, j])
        mx = max(mx, r)
        if r > tol and len(sink) < MAX_LISTED_VIOLATIONS:
            sink.append(Violation("contains-embedding-image", (j,), float(r)))
    for p, x in enumerate(h.vectors):
        for q, y in enumerate(h.vectors):
            r = h.distance(triple.algebra.bracket(x, y))
            mx = max(mx, r)
            if r > tol and len(sink) < MAX_LISTED_VIOLATIONS:
                sink.append(Violation("subalgebra-closure", (p, q), float(r)))
    for p, x in enumerate(h.vectors):
        r = float(np.max(np.abs(equivariance_defect(triple, x))))
        mx = max(mx, r)
        if r > tol and len(sink) < MAX_LISTED_VIOLATIONS:
            sink.append(Violation("defect-vanishes", (p,), float(r)))
    return ValidityReport(mx <= tol, mx, tuple(sink),
                          {"tolerance": tol, "h_dim": h.dim})


@dataclass(frozen=True, eq=False)
class TripleMorphism:
    """A pair of linear maps (phi on algebras, psi on modules)."""

    source: LieLeibnizTriple
    target: LieLeibnizTriple
    phi: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        phi = frozen_array(self.phi, (self.target.dim_g, self.source.dim_g), "phi")
        psi = frozen_array(self.psi, (self.target.dim_v, self.source.dim_v), "psi")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "psi", psi)


def check_morphism(mor: TripleMorphism, tol: float = DEFAULT_TOL) -> ValidityReport:
    """phi is a Lie algebra map intertwining embeddings and actions.

    The induced map psi then automatically respects the derived Leibniz
    brackets; that consequence is re-verified and reported under
    ``derived-leibniz-morphism``.
    """
    src, tgt = mor.source, mor.target
    phi, psi = mor.phi, mor.psi
    sink: list = []

    Cs, Ct = src.algebra.structure_constants, tgt.algebra.structure_constants
    hom = np.einsum("ijm,am->ija", Cs, phi) - \
        np.einsum("ai,bj,abk->ijk", phi, phi, Ct)
    m1 = _scan("algebra-homomorphism", hom, tol, sink)

    emb = phi @ src.theta.matrix - tgt.theta.matrix @ psi
    m2 = _scan("embedding-intertwined", emb, tol, sink)

    act = np.empty((src.dim_g, tgt.dim_v, src.dim_v))
    for i, e in enumerate(np.eye(src.dim_g)):
        act[i] = psi @ src.action.act(e) - tgt.action.act(phi @ e) @ psi
    m3 = _scan("action-intertwined", act, tol, sink)

    Bs, Bt = src.derived_bracket.bracket_tensor, tgt.derived_bracket.bracket_tensor
    der = np.einsum("uvm,am->uva", Bs, psi) - \
        np.einsum("au,bv,abk->uvk", psi, psi, Bt)
    m4 = _scan("derived-leibniz-morphism", der, tol, sink)

    mx = max(m1, m2, m3, m4)
    return ValidityReport(mx <= tol, mx, tuple(sink), {"tolerance": tol})


# ---------------------------------------------------------------------------
# Lie algebra crossed modules
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LieAlgebraCrossedModule:
    """Algebras m, n with a boundary map mu: m -> n and an n-action on m.

    ``n_prime`` optionally restricts the equivariance condition to a
    subalgebra of n; it must contain the image of mu.
    """

    m: LieAlgebraData
    n: LieAlgebraData
    mu: np.ndarray
    eta: ModuleAction
    n_prime: SubspaceBasis | None = None

    def __post_init__(self):
        mu = frozen_array(self.mu, (self.n.dim, self.m.dim), "boundary map")
        object.__setattr__(self, "mu", mu)
        if self.eta.algebra.dim != self.n.dim or self.eta.dim_v != self.m.dim:
            raise StructuralError("action shape does not match the two algebras")
        if self.n_prime is not None and self.n_prime.ambient_dim != self.n.dim:
            raise StructuralError("restriction subalgebra in wrong ambient space")


def check_lie_crossed_module(cm: LieAlgebraCrossedModule,
                             tol: float = DEFAULT_TOL) -> ValidityReport:
    """Boundary homomorphism, action-by-derivations, and the two crossed
    module conditions; equivariance is restricted to ``n_prime`` when given.

    ``info['equivariance_failures_unrestricted']`` lists basis pairs where
    the unrestricted equivariance condition fails, so relaxed examples can
    exhibit genuine violations without failing the check.
    """
    M, N, mu, eta = cm.m, cm.n, cm.mu, cm.eta
    sink: list = []
    parts = [check_lie_algebra(M, tol), check_lie_algebra(N, tol),
             check_module(eta, tol)]

    hom = np.einsum("abm,nm->abn", M.structure_constants, mu) - \
        np.einsum("ia,jb,ijn->abn", mu, mu, N.structure_constants)
    m1 = _scan("boundary-homomorphism", hom, tol, sink)

    if cm.n_prime is not None:
        scope = cm.n_prime.vectors
        sub_report_ok = bracket_closure_check(N, cm.n_prime, tol)
        if not sub_report_ok and len(sink) < MAX_LISTED_VIOLATIONS:
            sink.append(Violation("restriction-subalgebra", (), 1.0))
        img_mx = 0.0
        for j in range(M.dim):
            img_mx = max(img_mx, cm.n_prime.distance(mu[:, j]))
        if img_mx > tol and len(sink) < MAX_LISTED_VIOLATIONS:
            sink.append(Violation("restriction-contains-image", (), float(img_mx)))
        m1 = max(m1, img_mx, 0.0 if sub_report_ok else 1.0)
    else:
        scope = np.eye(N.dim)

    # action by derivations of the bracket of m, for n in scope
    der_mx = 0.0
    Bm = M.structure_constants
    for p, x in enumerate(scope):
        E = eta.act(x)
        res = (np.einsum("abm,km->abk", Bm, E)
               - np.einsum("ia,ibk->abk", E, Bm)
               - np.einsum("jb,ajk->abk", E, Bm))
        r = float(np.max(np.abs(res))) if res.size else 0.0
        der_mx = max(der_mx, r)
        if r > tol and len(sink) < MAX_LISTED_VIOLATIONS:
            sink.append(Violation("action-by-derivations", (p,), r))

    # condition one: mu(eta(n)(m)) = [n, mu(m)], n in scope
    eq_mx = 0.0
    for p, x in enumerate(scope):
        res = mu @ eta.act(x) - N.ad(x) @ mu
        r = float(np.max(np.abs(res)))
        eq_mx = max(eq_mx, r)
        if r > tol and len(sink) < MAX_LISTED_VIOLATIONS:
            sink.append(Violation("equivariance", (p,), r))

    unrestricted = []
    for i, x in enumerate(np.eye(N.dim)):
        res = mu @ eta.act(x) - N.ad(x) @ mu
        for j in range(M.dim):
            r = float(np.max(np.abs(res[:, j])))
            if r > tol and len(unrestricted) < MAX_LISTED_VIOLATIONS:
                unrestricted.append((int(i), int(j), r))

    # condition two: eta(mu(m))(m') = [m, m']
    pf_res = np.stack([eta.act(mu @ e) - M.ad(e) for e in np.eye(M.dim)])
    m2 = _scan("peiffer", pf_res, tol, sink)

    mx = max([m1, der_mx, eq_mx, m2] + [p.max_residual for p in parts])
    merged = merge_reports(*parts)
    all_sink = list(merged.violations) + sink
    info = {"tolerance": tol, "restricted": cm.n_prime is not None,
            "equivariance_failures_unrestricted": unrestricted}
    return ValidityReport(mx <= tol and merged.passed, mx,
                          tuple(all_sink[:MAX_LISTED_VIOLATIONS]), info)


def triple_from_crossed_module(cm: LieAlgebraCrossedModule,
                               tol: float = DEFAULT_TOL) -> RelaxedAugmentation:
    """The triple (n, m, mu) of a crossed module, with its augmentation.

    The module structure is the crossed module action and the embedding is
    the boundary map; the second crossed module condition makes the derived
    bracket coincide with the bracket of m, which is re-verified here.  The
    returned augmentation carries ``n_prime`` when present, otherwise all
    of n (the strict case).
    """
    cm_report = check_lie_crossed_module(cm, tol)
    if not cm_report.passed:
        raise AxiomError("lie-crossed-module", cm_report.max_residual, cm_report)
    triple = build_triple(cm.n, cm.eta, EmbeddingTensor(cm.mu), tol)
    mismatch = float(np.max(np.abs(
        triple.derived_bracket.bracket_tensor - cm.m.structure_constants)))
    if mismatch > tol:
        raise AxiomError("derived-bracket-matches-m", mismatch)
    h = cm.n_prime if cm.n_prime is not None else SubspaceBasis(
        cm.n.dim, np.eye(cm.n.dim))
    aug = RelaxedAugmentation(triple, h)
    aug_report = check_relaxed_augmentation(aug, tol)
    if not aug_report.passed:
        raise AxiomError("relaxed-augmentation", aug_report.max_residual,
                         aug_report)
    return aug


def identity_crossed_module(alg: LieAlgebraData) -> LieAlgebraCrossedModule:
    """(g, g, id) with the adjoint action; strict."""
    return LieAlgebraCrossedModule(alg, alg, np.eye(alg.dim),
                                   alg.adjoint_action())


def ideal_crossed_module(alg: LieAlgebraData,
                         sub: SubspaceBasis) -> LieAlgebraCrossedModule:
    """(ideal, g, inclusion) with the restricted adjoint action; strict."""
    action, m_constants = _ideal_action(alg, sub)
    m_alg = lie_algebra(m_constants)
    return LieAlgebraCrossedModule(m_alg, alg, sub.vectors.T, action)


def scaling_crossed_module(lam: float) -> LieAlgebraCrossedModule:
    """One-parameter family over the nonabelian two-dimensional algebra.

    The generator a acts on the one-dimensional ideal by lam instead of its
    adjoint weight 1; for lam != 1 equivariance fails off span(b) and the
    crossed module only exists relative to that restriction.
    """
    m = catalog.abelian(1)
    n = catalog.nonabelian2()
    eta = ModuleAction(n, 1, np.array([[[float(lam)]], [[0.0]]]))
    n_prime = None if lam == 1.0 else SubspaceBasis(2, [[0.0, 1.0]])
    return LieAlgebraCrossedModule(m, n, np.array([[0.0], [1.0]]), eta, n_prime)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def _ideal_action(alg: LieAlgebraData, sub: SubspaceBasis):
    """Adjoint action restricted to an ideal, in the ideal's own basis.

    Returns the ModuleAction of alg on the ideal and the induced structure
    constants of the ideal.  StructuralError when brackets leave the span.
    """
    W = sub.vectors
    k = sub.dim
    A = np.zeros((alg.dim, k, k))
    for i, e in enumerate(np.eye(alg.dim)):
        for q in range(k):
            z = alg.bracket(e, W[q])
            coeff, *_ = np.linalg.lstsq(W.T, z, rcond=None)
            if np.linalg.norm(W.T @ coeff - z) > 1e-9:
                raise StructuralError("subspace is not an ideal")
            A[i, :, q] = coeff
    m_C = np.zeros((k, k, k))
    for p in range(k):
        for q in range(k):
            z = alg.bracket(W[p], W[q])
            coeff, *_ = np.linalg.lstsq(W.T, z, rcond=None)
            if np.linalg.norm(W.T @ coeff - z) > 1e-9:
                raise StructuralError("subspace is not closed under the bracket")
            m_C[p, q] = coeff
    return ModuleAction(alg, k, A), m_C


def scaling_triple(lam: float) -> LieLeibnizTriple:
    """The one-parameter triple over the nonabelian two-dimensional algebra.

    V is one dimensional, theta sends the generator to b, and a acts by the
    scalar lam.  Valid for every lam; strict exactly at lam = 1, where the
    action agrees with the adjoint weight of b.
    """
    alg = catalog.nonabelian2()
    action = ModuleAction(alg, 1, np.array([[[float(lam)]], [[0.0]]]))
    theta = EmbeddingTensor(np.array([[0.0], [1.0]]))
    return build_triple(alg, action, theta)


def ideal_triple(alg: LieAlgebraData, sub: SubspaceBasis,
                 scale: float = 1.0) -> LieLeibnizTriple:
    """Strict triple from an ideal: V = ideal, theta = scaled inclusion."""
    action, _ = _ideal_action(alg, sub)
    theta = EmbeddingTensor(float(scale) * sub.vectors.T)
    return build_triple(alg, action, theta)


RANDOM_FAMILIES = ("strict_from_ideal", "scaling_family", "perturbed_invalid")

_SCALING_GRID = (-1.0, 0.0, 0.5, 1.0, 2.0)
_PERTURBED_GRID = (0.75, 1.0, 1.5, 2.0)


def random_triple(seed: int, family: str, **params):
    """Deterministic seeded instances for the corpus.

    ``strict_from_ideal`` and ``scaling_family`` return validated triples.
    ``perturbed_invalid`` returns raw components (algebra, action, embedding)
    whose embedding has been tilted by ``eps`` out of the ideal, so building
    them is expected to fail; callers decide whether to feed them to
    check_triple or build_triple.
    """
    rng = np.random.default_rng(seed)
    if family == "strict_from_ideal":
        name = params.get("algebra")
        ideal = params.get("ideal")
        if name is None or ideal is None:
            name, ideal = catalog.IDEAL_CHOICES[
                int(rng.integers(len(catalog.IDEAL_CHOICES)))]
        scale = params.get("scale")
        if scale is None:
            scale = float(rng.choice([0.5, 1.0, 2.0]))
        alg = catalog.algebra_by_name(name)
        return ideal_triple(alg, catalog.ideal_subspace(name, ideal), scale)
    if family == "scaling_family":
        lam = params.get("lam")
        if lam is None:
            lam = float(rng.choice(_SCALING_GRID))
        return scaling_triple(lam)
    if family == "perturbed_invalid":
        eps = params.get("eps")
        if eps is None:
            eps = 0.1
        lam = params.get("lam")
        if lam is None:
            lam = float(rng.choice(_PERTURBED_GRID))
        alg = catalog.nonabelian2()
        action = ModuleAction(alg, 1, np.array([[[float(lam)]], [[0.0]]]))
        theta = EmbeddingTensor(np.array([[float(eps)], [1.0]]))
        return alg, action, theta
    raise StructuralError(
        f"unknown family {family!r}; known: {RANDOM_FAMILIES}")
