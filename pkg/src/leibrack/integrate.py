"""Local rack structure integrating a triple, and recovery of its tangent data.

Given a validated triple with a faithful representation of its algebra, the
model works in the block representation (representation matrices above, the
module action below).  Points of the model are pairs (v, theta(v)) with
||theta(v)|| inside a fixed radius; a chart group element g acts by

    q(g, p) = (rho_g v, theta(rho_g v))

where rho_g is the module block of the represented element, and that action
is only declared when the moved point stays inside the radius (DomainError
otherwise).  Embedding a point exponentiates its algebra component, and the
rack product is x > y = q(embed(x), y).

Recovery runs the construction backwards with finite differences: the
derivative of embedded curves returns the embedding tensor, mixed second
derivatives of the action and of the rack product return the action matrices
and the derived bracket, and the mixed derivative of the group-valued defect

    (g Phi(p) g^-1) Phi(q(g, p))^-1

returns the infinitesimal defect map of the triple.  All group coordinates
used in derivatives are re-extracted from matrices through the logarithm, so
the round trip genuinely exercises exp and log rather than echoing inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_TOL, SubspaceBasis
from .errors import AxiomError, ChartError, DomainError, MembershipError, \
    StructuralError
from .localgroup import DiffConfig, GroupElement, MatrixRep, adjoint_rep, \
    check_rep, derivative_at_identity, group_inverse, group_mul, log_matrix, \
    mixed_second_derivative, working_rep
from .report import ValidityReport, Violation, MAX_LISTED_VIOLATIONS
from .triples import LieLeibnizTriple, RelaxedAugmentation, \
    check_relaxed_augmentation, equivariance_defect, max_strictness_subalgebra

DEFAULT_RADIUS_CAP = 0.3
DEFAULT_RADIUS_FRACTION = 0.6


@dataclass(frozen=True, eq=False)
class RackPoint:
    """A model point: module vector v with its algebra shadow u = theta(v)."""

    v: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        v = np.array(self.v, dtype=float)
        u = np.array(self.u, dtype=float)
        if v.ndim != 1 or u.ndim != 1:
            raise StructuralError("point components must be vectors")
        v.flags.writeable = False
        u.flags.writeable = False
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "u", u)


@dataclass(frozen=True, eq=False)
class LocalRackModel:
    """A triple, its working block representation, and chart bookkeeping."""

    triple: LieLeibnizTriple
    rep: MatrixRep                  # block representation, module block last
    base_dim: int                   # matrix size of the faithful block
    h_basis: SubspaceBasis
    radius: float
    cfg: DiffConfig

    def __post_init__(self):
        if not (0 < self.radius <= self.rep.chart_radius):
            raise StructuralError("radius must lie in (0, chart radius]")
        if self.rep.matrix_dim != self.base_dim + self.triple.dim_v:
            raise StructuralError("block representation has the wrong size")

    def point(self, v, u=None) -> RackPoint:
        """The model point over v; MembershipError outside the radius."""
        v = np.asarray(v, dtype=float)
        shadow = self.triple.theta.matrix @ v
        if u is not None:
            gap = float(np.max(np.abs(np.asarray(u, float) - shadow)))
            if gap > 1e-9 * max(1.0, float(np.linalg.norm(shadow))):
                raise MembershipError(
                    f"stored shadow disagrees with theta(v) by {gap:.3e}")
        if np.linalg.norm(shadow) >= self.radius:
            raise MembershipError(
                f"theta(v) has norm {np.linalg.norm(shadow):.3f}, outside "
                f"the model radius {self.radius}")
        return RackPoint(v, shadow)

    def basepoint(self) -> RackPoint:
        return self.point(np.zeros(self.triple.dim_v))

    def fiber_matrix(self, g: GroupElement) -> np.ndarray:
        """Module transport rho_g: the lower block of the represented element."""
        return g.matrix[self.base_dim:, self.base_dim:]


def build_model(triple: LieLeibnizTriple, rep: MatrixRep | None = None,
                h_basis: SubspaceBasis | None = None,
                radius: float | None = None,
                cfg: DiffConfig | None = None,
                tol: float = DEFAULT_TOL) -> LocalRackModel:
    """Assemble a local model, validating every ingredient.

    Without an explicit representation the adjoint one is used when faithful
    (CapabilityError otherwise).  Without an explicit subalgebra the maximal
    equivariant one is computed.  The default radius is
    min(0.3, 0.6 * chart radius).
    """
    if rep is None:
        rep = adjoint_rep(triple.algebra)
    else:
        if rep.algebra.dim != triple.dim_g or not np.array_equal(
                rep.algebra.structure_constants,
                triple.algebra.structure_constants):
            raise StructuralError("representation is over a different algebra")
        rep_report = check_rep(rep, max(tol, 1e-9))
        if not rep_report.passed:
            raise AxiomError("matrix-representation", rep_report.max_residual,
                             rep_report)
    if h_basis is None:
        h_basis = max_strictness_subalgebra(triple, tol)
    else:
        aug = check_relaxed_augmentation(RelaxedAugmentation(triple, h_basis),
                                         max(tol, 1e-9))
        if not aug.passed:
            raise AxiomError("relaxed-augmentation", aug.max_residual, aug)
    if radius is None:
        radius = min(DEFAULT_RADIUS_CAP,
                     DEFAULT_RADIUS_FRACTION * rep.chart_radius)
    if cfg is None:
        cfg = DiffConfig()
    return LocalRackModel(triple, working_rep(rep, triple.action),
                          rep.matrix_dim, h_basis, float(radius), cfg)


def in_action_domain(model: LocalRackModel, g: GroupElement,
                     p: RackPoint) -> bool:
    """Whether (g, p) is composable: the moved shadow stays inside the radius."""
    moved = model.fiber_matrix(g) @ p.v
    return bool(np.linalg.norm(model.triple.theta.matrix @ moved) < model.radius)


def local_action(model: LocalRackModel, g: GroupElement,
                 p: RackPoint) -> RackPoint:
    """q(g, p) = (rho_g v, theta(rho_g v)); DomainError outside the domain."""
    moved = model.fiber_matrix(g) @ p.v
    shadow = model.triple.theta.matrix @ moved
    if np.linalg.norm(shadow) >= model.radius:
        raise DomainError("the moved point left the model neighbourhood")
    return RackPoint(moved, shadow)


def embed_point(model: LocalRackModel, p: RackPoint) -> GroupElement:
    """Phi(p): exponentiate the algebra shadow of the point."""
    return model.rep.element(p.u)


def rack_product(model: LocalRackModel, x: RackPoint, y: RackPoint) -> RackPoint:
    """x > y = q(Phi(x), y)."""
    return local_action(model, embed_point(model, x), y)


# ---------------------------------------------------------------------------
# sampling helpers
# ---------------------------------------------------------------------------

def _sample_direction(rng, basis: np.ndarray, scale: float) -> np.ndarray:
    """Random combination of the given row vectors, scaled to norm <= scale."""
    w = rng.standard_normal(basis.shape[0]) @ basis
    nrm = np.linalg.norm(w)
    if nrm == 0.0:
        return w
    return w * (scale * float(rng.uniform(0.2, 1.0)) / nrm)


def _sample_point(model: LocalRackModel, rng, frac: float) -> RackPoint:
    """A model point whose shadow norm is at most frac * radius."""
    v = rng.standard_normal(model.triple.dim_v)
    shadow = model.triple.theta.matrix @ v
    nrm = float(np.linalg.norm(shadow))
    if nrm > 0.0:
        v = v * (frac * model.radius / nrm) * float(rng.uniform(0.2, 1.0))
    else:
        v = v / max(1.0, float(np.linalg.norm(v)))
    return model.point(v)


def _coords_from_matrix(model: LocalRackModel, matrix: np.ndarray) -> np.ndarray:
    """Chart coordinates re-extracted from a group matrix via the logarithm."""
    L = log_matrix(matrix)
    coords, residual = model.rep.coords_of(L)
    if residual > 1e-8 * max(1.0, float(np.linalg.norm(L))):
        raise ChartError(
            f"matrix log left the representation span (residual {residual:.3e})")
    return coords


# ---------------------------------------------------------------------------
# law suites
# ---------------------------------------------------------------------------

def check_local_group_set_laws(model: LocalRackModel, samples: int = 200,
                               seed: int = 0,
                               tol: float = 1e-9) -> ValidityReport:
    """Composability of the action: q(g1 g2, p) = q(g1, q(g2, p)) on samples,
    and exactness of the unit law q(e, p) = p."""
    rng = np.random.default_rng(seed)
    full = np.eye(model.triple.dim_g)
    sink: list = []
    mx = 0.0
    used = skipped = 0
    ident = model.rep.identity()
    for k in range(samples):
        g1 = model.rep.element(_sample_direction(rng, full, 0.05))
        g2 = model.rep.element(_sample_direction(rng, full, 0.05))
        p = _sample_point(model, rng, 0.25)
        try:
            g12 = group_mul(g1, g2, model.rep)
            onestep = local_action(model, g12, p)
            twostep = local_action(model, g1, local_action(model, g2, p))
        except (DomainError, ChartError):
            skipped += 1
            continue
        used += 1
        r = max(float(np.max(np.abs(onestep.v - twostep.v))),
                float(np.max(np.abs(onestep.u - twostep.u))))
        mx = max(mx, r)
        if r > tol and len(sink) < MAX_LISTED_VIOLATIONS:
            sink.append(Violation("group-set-composition", (k,), r))
        fixed = local_action(model, ident, p)
        if not (np.array_equal(fixed.v, p.v) and np.array_equal(fixed.u, p.u)):
            unit_gap = max(float(np.max(np.abs(fixed.v - p.v))),
                           float(np.max(np.abs(fixed.u - p.u))))
            mx = max(mx, unit_gap)
            if len(sink) < MAX_LISTED_VIOLATIONS:
                sink.append(Violation("unit-acts-trivially", (k,), unit_gap))
    info = {"tolerance": tol, "samples_used": used, "samples_skipped": skipped}
    return ValidityReport(mx <= tol, mx, tuple(sink), info)


def check_local_rack_laws(model: LocalRackModel, samples: int = 200,
                          seed: int = 0, tol: float = 1e-8,
                          undo_tol: float = 1e-9) -> ValidityReport:
    """Self-distributivity, invertible left translation, and pointed laws.

    Self-distributivity x > (y > z) = (x > y) > (x > z) is compared on
    samples whose intermediate products all stay in the domain; the left
    translation is checked by undoing x > y with the inverse group element;
    the basepoint laws hold exactly in floating point and are asserted so.
    """
    rng = np.random.default_rng(seed)
    sink: list = []
    mx = 0.0
    used = skipped = 0
    base = model.basepoint()
    for k in range(samples):
        x = _sample_point(model, rng, 0.2)
        y = _sample_point(model, rng, 0.2)
        z = _sample_point(model, rng, 0.2)
        try:
            xy = rack_product(model, x, y)
            yz = rack_product(model, y, z)
            xz = rack_product(model, x, z)
            lhs = rack_product(model, x, yz)
            rhs = rack_product(model, xy, xz)
        except (DomainError, ChartError, MembershipError):
            skipped += 1
            continue
        used += 1
        r = max(float(np.max(np.abs(lhs.v - rhs.v))),
                float(np.max(np.abs(lhs.u - rhs.u))))
        mx = max(mx, r)
        if r > tol and len(sink) < MAX_LISTED_VIOLATIONS:
            sink.append(Violation("self-distributivity", (k,), r))

        g = embed_point(model, x)
        undone = local_action(model, group_inverse(g, model.rep), xy)
        ru = float(np.max(np.abs(undone.v - y.v)))
        mx = max(mx, ru)
        if ru > undo_tol and len(sink) < MAX_LISTED_VIOLATIONS:
            sink.append(Violation("left-translation-undo", (k,), ru))

        trivial = rack_product(model, base, y)
        if not np.array_equal(trivial.v, y.v):
            gap = float(np.max(np.abs(trivial.v - y.v)))
            mx = max(mx, gap)
            if len(sink) < MAX_LISTED_VIOLATIONS:
                sink.append(Violation("basepoint-acts-trivially", (k,), gap))
        fixed = rack_product(model, x, base)
        if not (np.all(fixed.v == 0.0) and np.all(fixed.u == 0.0)):
            gap = float(np.max(np.abs(fixed.v)))
            mx = max(mx, gap)
            if len(sink) < MAX_LISTED_VIOLATIONS:
                sink.append(Violation("basepoint-fixed", (k,), gap))
    info = {"tolerance": tol, "samples_used": used, "samples_skipped": skipped,
            "undo_tolerance": undo_tol}
    return ValidityReport(mx <= tol, mx, tuple(sink), info)


def check_equivariance(model: LocalRackModel, samples: int = 200,
                       seed: int = 0, tol: float = 1e-8) -> ValidityReport:
    """Phi intertwines the local action with conjugation.

    Directions are sampled from the equivariant subalgebra; when that is all
    of the algebra (a strict triple) this amounts to chart-wide sampling of
    the law Phi(q(h, p)) = h Phi(p) h^-1.  The conjugated side is computed
    through matrix products and logarithms, independent of the embedded
    side's stored coordinates.
    """
    rng = np.random.default_rng(seed)
    strict = model.h_basis.dim == model.triple.dim_g
    basis = model.h_basis.vectors if model.h_basis.dim else \
        np.zeros((0, model.triple.dim_g))
    sink: list = []
    mx = 0.0
    used = skipped = 0
    for k in range(samples):
        if basis.shape[0] == 0:
            break
        xi = _sample_direction(rng, basis, 0.05)
        h = model.rep.element(xi)
        p = _sample_point(model, rng, 0.25)
        try:
            moved = embed_point(model, local_action(model, h, p))
            conj = group_mul(group_mul(h, embed_point(model, p), model.rep),
                             group_inverse(h, model.rep), model.rep)
        except (DomainError, ChartError, MembershipError):
            skipped += 1
            continue
        used += 1
        r = float(np.max(np.abs(moved.coords - conj.coords)))
        mx = max(mx, r)
        if r > tol and len(sink) < MAX_LISTED_VIOLATIONS:
            sink.append(Violation("embedding-equivariance", (k,), r))
    info = {"tolerance": tol, "samples_used": used, "samples_skipped": skipped,
            "strict": strict, "h_dim": int(model.h_basis.dim)}
    return ValidityReport(mx <= tol, mx, tuple(sink), info)


# ---------------------------------------------------------------------------
# recovery
# ---------------------------------------------------------------------------

def _shrink_once(run, cfg: DiffConfig):
    """Run a stencil; if it exits the domain, shrink the step by 10 and retry."""
    try:
        return run(cfg)
    except (DomainError, ChartError, MembershipError):
        smaller = DiffConfig(cfg.step / 10.0, cfg.scheme, cfg.tolerance)
        return run(smaller)


def recover_tangent_triple(model: LocalRackModel,
                           cfg: DiffConfig | None = None):
    """Differentiate the model back to (theta, action, bracket) tensors.

    Returns the triple of arrays in the same layout the triple stores them:
    the embedding matrix (n, d), the action stack (n, d, d) and the derived
    bracket tensor (d, d, d).
    """
    cfg = cfg or model.cfg
    n, d = model.triple.dim_g, model.triple.dim_v
    eye_g, eye_v = np.eye(n), np.eye(d)

    theta_rec = np.empty((n, d))
    for j in range(d):
        def curve(t, ej=eye_v[j]):
            g = embed_point(model, model.point(t * ej))
            return _coords_from_matrix(model, g.matrix)
        theta_rec[:, j] = _shrink_once(
            lambda c: derivative_at_identity(curve, c), cfg)

    action_rec = np.empty((n, d, d))
    for i in range(n):
        for j in range(d):
            def surface(t1, t2, ai=eye_g[i], ej=eye_v[j]):
                g = model.rep.element(t2 * ai)
                return local_action(model, g, model.point(t1 * ej)).v
            action_rec[i, :, j] = _shrink_once(
                lambda c: mixed_second_derivative(surface, c), cfg)

    bracket_rec = np.empty((d, d, d))
    for a in range(d):
        for b in range(d):
            def surface(t1, t2, ea=eye_v[a], eb=eye_v[b]):
                return rack_product(model, model.point(t1 * ea),
                                    model.point(t2 * eb)).v
            bracket_rec[a, b, :] = _shrink_once(
                lambda c: mixed_second_derivative(surface, c), cfg)
    return theta_rec, action_rec, bracket_rec


def recover_equivariance_defect(model: LocalRackModel, a, v,
                                cfg: DiffConfig | None = None) -> np.ndarray:
    """The defect map recovered from the group-valued defect of the model.

    Differentiates (g Phi(p) g^-1) Phi(q(g, p))^-1 in the group direction a
    and the point direction v; the mixed derivative equals
    [a, theta(v)] - theta(a . v).
    """
    cfg = cfg or model.cfg
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)

    def surface(t1, t2):
        g = model.rep.element(t1 * a)
        p = model.point(t2 * v)
        conj = group_mul(group_mul(g, embed_point(model, p), model.rep),
                         group_inverse(g, model.rep), model.rep)
        moved = embed_point(model, local_action(model, g, p))
        w = group_mul(conj, group_inverse(moved, model.rep), model.rep)
        return w.coords

    return _shrink_once(lambda c: mixed_second_derivative(surface, c), cfg)


# ---------------------------------------------------------------------------
# full report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegrationReport:
    """Aggregated law-suite and recovery results for one model."""

    passed: bool
    strict: bool
    h_dim: int
    scheme: str
    step: float
    laws: dict
    roundtrip: dict
    defect: dict

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "strict": self.strict,
            "h_dim": self.h_dim,
            "scheme": self.scheme,
            "step": self.step,
            "laws": {k: v.to_dict() for k, v in self.laws.items()},
            "roundtrip": dict(self.roundtrip),
            "defect": dict(self.defect),
        }


def run_integration_suites(model: LocalRackModel, samples: int = 200,
                           seed: int = 0, roundtrip_tol: float = 1e-4,
                           defect_tol: float = 1e-4, group_tol: float = 1e-9,
                           rack_tol: float = 1e-8,
                           equiv_tol: float = 1e-8) -> IntegrationReport:
    """Run every law suite, the tensor round trip, and the defect comparison."""
    laws = {
        "group_set": check_local_group_set_laws(model, samples, seed, group_tol),
        "rack": check_local_rack_laws(model, samples, seed + 1, rack_tol),
        "equivariance": check_equivariance(model, samples, seed + 2, equiv_tol),
    }

    theta_rec, action_rec, bracket_rec = recover_tangent_triple(model)
    tr = model.triple
    r_theta = float(np.max(np.abs(theta_rec - tr.theta.matrix)))
    r_action = float(np.max(np.abs(action_rec - tr.action.action_matrices)))
    r_bracket = float(np.max(np.abs(
        bracket_rec - tr.derived_bracket.bracket_tensor)))
    r_max = max(r_theta, r_action, r_bracket)
    roundtrip = {
        "theta_residual": r_theta,
        "action_residual": r_action,
        "bracket_residual": r_bracket,
        "max_residual": r_max,
        "tolerance": roundtrip_tol,
        "passed": bool(r_max <= roundtrip_tol),
    }

    gap = 0.0
    for i in range(tr.dim_g):
        for j in range(tr.dim_v):
            a, v = np.eye(tr.dim_g)[i], np.eye(tr.dim_v)[j]
            numeric = recover_equivariance_defect(model, a, v)
            algebraic = equivariance_defect(tr, a) @ v
            gap = max(gap, float(np.max(np.abs(numeric - algebraic))))
    defect = {
        "max_gap": gap,
        "tolerance": defect_tol,
        "passed": bool(gap <= defect_tol),
        "pairs": tr.dim_g * tr.dim_v,
    }

    passed = all(r.passed for r in laws.values()) and \
        roundtrip["passed"] and defect["passed"]
    return IntegrationReport(
        passed=passed,
        strict=bool(model.h_basis.dim == tr.dim_g),
        h_dim=int(model.h_basis.dim),
        scheme=model.cfg.scheme,
        step=model.cfg.step,
        laws=laws,
        roundtrip=roundtrip,
        defect=defect,
    )
