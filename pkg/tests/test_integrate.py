"""Local rack models: laws, round-trip recovery, defect recovery."""

from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg

from leibrack import (AxiomError, DiffConfig, DomainError, EmbeddingTensor,
                      MatrixRep, MembershipError, StructuralError,
                      SubspaceBasis, build_model, build_triple,
                      check_equivariance, check_local_group_set_laws,
                      check_local_rack_laws, embed_point, equivariance_defect,
                      ideal_triple, in_action_domain, local_action,
                      rack_product, recover_equivariance_defect,
                      recover_tangent_triple, run_integration_suites,
                      scaling_triple)
from leibrack import catalog
from leibrack.integrate import _shrink_once


def sl2_adjoint_model(**kw):
    alg = catalog.sl2()
    triple = build_triple(alg, alg.adjoint_action(),
                          EmbeddingTensor(np.eye(3)))
    return build_model(triple, **kw)


def heisenberg_ideal_model(**kw):
    alg = catalog.heisenberg()
    sub = catalog.ideal_subspace("heisenberg", "plane")
    triple = ideal_triple(alg, sub)
    rep = MatrixRep(alg, catalog.faithful_rep_matrices("heisenberg"))
    return build_model(triple, rep=rep, **kw)


def scaling_model(lam, **kw):
    triple = scaling_triple(lam)
    rep = MatrixRep(triple.algebra,
                    catalog.faithful_rep_matrices("nonabelian2"))
    return build_model(triple, rep=rep, **kw)


def test_build_model_defaults():
    model = sl2_adjoint_model()
    assert model.radius == pytest.approx(0.3)
    assert model.h_basis.dim == 3            # strict: full algebra
    assert model.base_dim == 3
    assert model.rep.matrix_dim == 6         # faithful block plus module block


def test_build_model_rejects_bad_ingredients():
    triple = scaling_triple(2.0)
    rep = MatrixRep(triple.algebra,
                    catalog.faithful_rep_matrices("nonabelian2"))
    with pytest.raises(AxiomError):          # full algebra is not equivariant
        build_model(triple, rep=rep, h_basis=SubspaceBasis(2, np.eye(2)))
    wrong = MatrixRep(catalog.sl2(), catalog.faithful_rep_matrices("sl2"))
    with pytest.raises(StructuralError):
        build_model(triple, rep=wrong)
    broken = MatrixRep(triple.algebra, np.stack([np.eye(2), np.eye(2)]))
    with pytest.raises(AxiomError):          # not a representation
        build_model(triple, rep=broken)


def test_default_h_basis_for_relaxed_triple():
    model = scaling_model(2.0)
    assert model.h_basis.dim == 1
    assert model.h_basis.spans_same(SubspaceBasis(2, [[0.0, 1.0]]))


def test_point_membership_rules():
    model = scaling_model(2.0)
    p = model.point([0.1])
    assert np.array_equal(p.u, model.triple.theta.matrix @ p.v)
    with pytest.raises(MembershipError):
        model.point([model.radius * 1.5])    # shadow leaves the neighbourhood
    with pytest.raises(MembershipError):     # stored shadow must match theta(v)
        model.point([0.1], u=[0.0, 0.2])


def test_basepoint_is_exact_fixed_point():
    for model in (sl2_adjoint_model(), heisenberg_ideal_model(),
                  scaling_model(0.0)):
        base = model.basepoint()
        assert np.all(base.v == 0.0) and np.all(base.u == 0.0)
        rng = np.random.default_rng(2)
        for _ in range(5):
            x = model.point(0.05 * rng.standard_normal(model.triple.dim_v))
            fixed = rack_product(model, x, base)
            assert np.all(fixed.v == 0.0) and np.all(fixed.u == 0.0)
            trivial = rack_product(model, base, x)
            assert np.array_equal(trivial.v, x.v)


def test_local_action_matches_directly_exponentiated_transport():
    model = sl2_adjoint_model()
    xi = np.array([0.1, -0.05, 0.2])
    g = model.rep.element(xi)
    A = np.einsum("i,iab->ab", xi, model.triple.action.action_matrices)
    assert np.max(np.abs(model.fiber_matrix(g) - scipy.linalg.expm(A))) <= 1e-12
    p = model.point([0.05, 0.0, -0.02])
    q = local_action(model, g, p)
    assert np.max(np.abs(q.v - scipy.linalg.expm(A) @ p.v)) <= 1e-12


def test_action_domain_boundary():
    model = scaling_model(2.0)
    g = model.rep.element([0.4, 0.0])        # transport scales by e^{0.8}
    p = model.point([0.9 * model.radius])
    assert not in_action_domain(model, g, p)
    with pytest.raises(DomainError):
        local_action(model, g, p)
    shrunk = model.point([0.3 * model.radius])
    assert in_action_domain(model, g, shrunk)
    local_action(model, g, shrunk)


def test_law_suites_pass_on_models():
    for model in (sl2_adjoint_model(), heisenberg_ideal_model(),
                  scaling_model(2.0)):
        g = check_local_group_set_laws(model, samples=40, seed=1)
        r = check_local_rack_laws(model, samples=40, seed=2)
        e = check_equivariance(model, samples=40, seed=3)
        assert g.passed and r.passed and e.passed
        assert g.info["samples_used"] > 0
        assert r.info["samples_used"] > 0
        assert e.info["samples_used"] > 0


def test_equivariance_suite_uses_restricted_directions():
    model = scaling_model(0.5)
    report = check_equivariance(model, samples=30, seed=4)
    assert report.passed
    assert report.info["strict"] is False
    assert report.info["h_dim"] == 1


def test_roundtrip_recovers_tensors_central():
    model = sl2_adjoint_model()
    theta_rec, action_rec, bracket_rec = recover_tangent_triple(model)
    tr = model.triple
    assert np.max(np.abs(theta_rec - tr.theta.matrix)) <= 1e-4
    assert np.max(np.abs(action_rec - tr.action.action_matrices)) <= 1e-4
    assert np.max(np.abs(
        bracket_rec - tr.derived_bracket.bracket_tensor)) <= 1e-4


def test_roundtrip_richardson_is_sharper():
    cfg = DiffConfig(step=2e-3, scheme="richardson")
    model = heisenberg_ideal_model(cfg=cfg)
    theta_rec, action_rec, bracket_rec = recover_tangent_triple(model)
    tr = model.triple
    worst = max(np.max(np.abs(theta_rec - tr.theta.matrix)),
                np.max(np.abs(action_rec - tr.action.action_matrices)),
                np.max(np.abs(bracket_rec - tr.derived_bracket.bracket_tensor)))
    assert worst <= 1e-7


def test_recovered_defect_matches_algebraic_defect():
    model = scaling_model(2.0)
    numeric = recover_equivariance_defect(model, [1.0, 0.0], [1.0])
    algebraic = equivariance_defect(model.triple, [1.0, 0.0]) @ np.array([1.0])
    assert np.max(np.abs(numeric - algebraic)) <= 1e-4
    assert algebraic[1] == -1.0              # the defect really is -b here
    quiet = recover_equivariance_defect(model, [0.0, 1.0], [1.0])
    assert np.max(np.abs(quiet)) <= 1e-4


def test_defect_recovery_zero_for_strict_triple():
    model = sl2_adjoint_model()
    numeric = recover_equivariance_defect(model, [0.0, 1.0, 0.0],
                                          [0.0, 0.0, 1.0])
    assert np.max(np.abs(numeric)) <= 1e-4


def test_shrink_once_retries_then_propagates():
    calls = []

    def flaky(cfg):
        calls.append(cfg.step)
        if len(calls) == 1:
            raise DomainError("first pass leaves the neighbourhood")
        return cfg.step

    got = _shrink_once(flaky, DiffConfig(step=1e-3))
    assert got == pytest.approx(1e-4)
    assert calls == [1e-3, pytest.approx(1e-4)]

    def hopeless(cfg):
        raise DomainError("still outside")

    with pytest.raises(DomainError):
        _shrink_once(hopeless, DiffConfig(step=1e-3))


def test_run_integration_suites_full_report():
    model = scaling_model(1.0)
    report = run_integration_suites(model, samples=60, seed=0)
    assert report.passed
    assert report.strict is True
    assert report.h_dim == 2
    assert report.roundtrip["max_residual"] <= report.roundtrip["tolerance"]
    assert report.defect["max_gap"] <= report.defect["tolerance"]
    assert report.defect["pairs"] == 2
    d = report.to_dict()
    import json
    json.dumps(d)
    assert d["laws"]["rack"]["passed"] is True


def test_integration_report_flags_relaxed_models():
    report = run_integration_suites(scaling_model(2.0), samples=40, seed=5)
    assert report.passed
    assert report.strict is False
    assert report.h_dim == 1
