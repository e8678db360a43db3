from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from dualarc.arcs import (
    AxiomViolation,
    ClassificationError,
    DualArcFamily,
    ExtensionError,
    classify_pair_spans,
    contact_points,
    coverage,
    dualize,
    element_pencils,
    extend_deficient,
    verify,
    verify_t_d1_hypotheses,
)
from dualarc import _kernels as K
from dualarc.linalg import Subspace, meet, points, span
from dualarc.veronese import VeroneseContext, build_dual_arc, contact_point, projective_points


def random_plane(F, N, rng, inside=None):
    while True:
        if inside is None:
            rows = rng.integers(0, F.q, size=(3, N + 1))
        else:
            rows = K.matmul(rng.integers(0, F.q, size=(3, inside.rank)), inside.basis, F)
        S = Subspace.from_rows(F, rows, N)
        if S.dim == 2:
            return S


def test_verify_example1(ex1):
    rep = verify(ex1)
    assert rep.axioms_hold and rep.regular and rep.span_dim == 5
    assert rep.checked == {1: 13, 2: 78, 3: 286}
    assert rep.failures == [] and rep.failure_count == 0
    kv = rep.to_keyvalue()
    assert "regular=true" in kv and "axioms_hold=true" in kv
    assert "hold" in rep.to_text()


def test_verify_detects_mutation(ex1):
    rng = np.random.default_rng(1)
    elems = list(ex1.elements)
    elems[4] = random_plane(ex1.field, 5, rng)
    bad = DualArcFamily(ex1.field, 5, elems, ex1.params)
    rep = verify(bad)
    assert not rep.axioms_hold
    assert rep.failures and any(4 in f.indices for f in rep.failures)
    f = rep.failures[0]
    assert f.expected != f.actual


def test_single_element_vacuous(ex1):
    rep = verify(ex1.subset([0]))
    assert rep.axioms_hold
    assert rep.checked[2] == 0 and rep.checked[3] == 0


@pytest.mark.parametrize("q,d", [(4, 1), (5, 1), (4, 2), (5, 2)])
def test_verify_sampled_records_seed(q, d):
    fam = build_dual_arc(VeroneseContext.of(q, 2, d))
    rep = verify(fam, mode="sampled", k=500)
    assert rep.axioms_hold and rep.regular
    assert rep.seed is not None and rep.mode == "sampled"
    rep2 = verify(fam, mode="sampled", k=500, seed=rep.seed)
    assert rep2.checked == rep.checked


@pytest.mark.parametrize("n,d", [(2, 1), (2, 2), (3, 1)])
@pytest.mark.parametrize("q", [2, 3])
def test_intersection_dimension_formula(q, n, d):
    fam = build_dual_arc(VeroneseContext.of(q, n, d))
    for j in range(1, d + 2):
        expected = math.comb(n + d + 1 - j, d + 1 - j) - 1
        for c in itertools.combinations(range(len(fam)), j):
            M = fam[c[0]]
            for i in c[1:]:
                M = meet(M, fam[i])
            assert M.dim == expected


def test_dualize_involution_and_regularity(ex1, ex2):
    for fam in (ex1, ex2):
        D = dualize(fam)
        assert D.kind == "arc"
        assert D.params == (fam.ambient_dim,) + tuple(fam.ambient_dim - 1 - x for x in fam.params[1:])
        back = dualize(D)
        assert back.elements == fam.elements and back.params == fam.params and back.kind == "dual"
        assert verify(fam).regular == verify(D).regular is True


def test_dualized_s1_pairs_span_six(ex2_arc):
    assert ex2_arc.params == (9, 3, 6, 8)
    for a, b in itertools.combinations(ex2_arc, 2):
        assert span(a, b).dim == 6


def test_dimension_identity_on_acceptance_arcs(ex1, ex2):
    for fam in (ex1, ex2):
        for a, b in itertools.combinations(fam, 2):
            assert a.dim + b.dim == span(a, b).dim + meet(a, b).dim


def test_hypotheses_q9_minus_one(q9_family):
    rep = verify_t_d1_hypotheses(q9_family.without([30]), 1)
    assert rep.all_hold and rep.delta_ok and rep.delta_bound == 1
    assert rep.pair_span_rich is None
    assert set(rep.span_dims_seen) <= {2, 4, 5}


def test_hypotheses_q8_rich_pair_span():
    fam = build_dual_arc(VeroneseContext.of(8, 2, 1))
    rep = verify_t_d1_hypotheses(fam, 0)
    assert rep.pair_span_rich is True and rep.all_hold and rep.delta_ok


def test_hypotheses_fail_spanning():
    F = VeroneseContext.of(2, 2, 1).spec
    rng = np.random.default_rng(0)
    H = span(np.eye(6, dtype=np.int64)[:5], field=F)
    elems = [random_plane(F, 5, rng, inside=H) for _ in range(7)]
    fam = DualArcFamily(F, 5, elems, (5, 2, 0))
    rep = verify_t_d1_hypotheses(fam, 0)
    assert not rep.spanning and not rep.all_hold


def test_hypotheses_preconditions(ex1, ex2):
    with pytest.raises(ValueError):
        verify_t_d1_hypotheses(ex2, 0)
    with pytest.raises(ValueError):
        verify_t_d1_hypotheses(ex1, 1)


def test_contact_points_full_and_removed(ex1):
    ctx = VeroneseContext.of(3, 2, 1)
    cps = contact_points(ex1)
    expected = {tuple(Subspace.point(ctx.spec, contact_point(ctx, P)).basis[0].tolist())
                for P in projective_points(ctx.spec, 2)}
    assert {p for p, _ in cps} == expected and all(c == 1 for _, c in cps)
    # each element holds exactly one contact point, namely theta(x, x)
    cov = coverage(ex1)
    for E, lab in zip(ex1, ex1.labels):
        own = [tuple(p) for p, k in zip(points(E).tolist(), cov.element_keys[ex1.elements.index(E)])
               if cov.counts[int(k)] == 1]
        assert own == [tuple(Subspace.point(ctx.spec, contact_point(ctx, lab)).basis[0].tolist())]
    i0 = 0
    removed = ex1.without([i0])
    cps2 = {p for p, _ in contact_points(removed)}
    zeta0 = tuple(Subspace.point(ctx.spec, contact_point(ctx, ex1.labels[i0])).basis[0].tolist())
    others = {tuple(p) for p in points(ex1[i0]).tolist()} - {zeta0}
    assert len(others) == 12
    assert cps2 == ({p for p, _ in cps} - {zeta0}) | others


def test_contact_points_edge_cases(ex1):
    assert contact_points(ex1.subset([])) == []
    F = ex1.field
    P = [1, 0, 0, 0, 0, 0]
    planes = [span(P, [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0], field=F),
              span(P, [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], field=F),
              span(P, [0, 0, 0, 0, 0, 1], [0, 1, 1, 1, 1, 0], field=F)]
    with pytest.raises(AxiomViolation):
        contact_points(DualArcFamily(F, 5, planes, (5, 2, 0)))
    with_zero = contact_points(ex1, include_uncovered=True)
    assert sum(1 for _, c in with_zero if c == 0) > 0


def test_classify_full_q3(ex1):
    classes = classify_pair_spans(ex1, 0)
    assert len(classes) == 13
    assert all(c.kind == "big" and c.member_count == 4 for c in classes)
    assert all(c.span.dim == 4 for c in classes)
    assert all(c.members_meet_plane_in_lines and c.outside_avoid_plane for c in classes)
    per = [sum(i in c.members for c in classes) for i in range(13)]
    assert per == [(3**2 - 1) // 2] * 13
    pens = element_pencils(ex1, classes)
    assert all(p.concurrent and p.at_contact_point and p.distinct for p in pens)


def test_classify_two_elements(ex1):
    classes = classify_pair_spans(ex1.subset([0, 5]), 0)
    assert len(classes) == 1 and classes[0].kind == "pair" and classes[0].member_count == 2


def test_classify_rejects_middle_counts(q9_family):
    classes = classify_pair_spans(q9_family, 0)
    line = next(c for c in classes)
    assert line.member_count == 10
    thinned = q9_family.without(line.members[:6])
    with pytest.raises(ClassificationError):
        classify_pair_spans(thinned, 0)


def test_deficiency_sum_q9(q9_family):
    fam = q9_family.without([12])
    classes = classify_pair_spans(fam, 1)
    assert {p.deficiency_sum for p in element_pencils(fam, classes)} == {1}


def test_extend_identity_and_round_trip(q9_family):
    assert extend_deficient(q9_family, 0) is q9_family
    fam = q9_family.without([57])
    full = extend_deficient(fam, 1)
    assert len(full) == 91 and full[-1] == q9_family[57]
    assert set(full.elements) == set(q9_family.elements)


def test_extend_errors(ex1, q9_family):
    with pytest.raises(ValueError):
        extend_deficient(ex1, 1)
    with pytest.raises(ExtensionError) as info:
        extend_deficient(q9_family.without([3]), 1, check_hypotheses=False, max_nodes=1)
    assert "nodes" in info.value.state
    rng = np.random.default_rng(3)
    elems = list(q9_family.without([3]).elements)
    elems[0] = random_plane(q9_family.field, 5, rng)
    bad = DualArcFamily(q9_family.field, 5, elems, (5, 2, 0))
    with pytest.raises(ExtensionError):
        extend_deficient(bad, 1)
