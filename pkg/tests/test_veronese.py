from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from dualarc.arcs import DegenerateParametersWarning, dualize, verify
from dualarc.gf import field_of_order
from dualarc.linalg import Subspace, meet, perp, points, span
from dualarc.veronese import (
    VeroneseContext,
    arc_element,
    arc_element_from_zeta,
    arc_params,
    build_arc,
    build_dual_arc,
    construction2_condition,
    contact_point,
    dual_arc_params,
    dual_element,
    family_nucleus,
    format_family,
    nucleus,
    parse_family,
    projective_points,
    theta,
    zeta,
)

EX1_ORDER = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]
EX2_ORDER = [(0, 0, 0), (1, 1, 1), (2, 2, 2), (0, 0, 1), (0, 0, 2), (0, 1, 1),
             (1, 1, 2), (0, 2, 2), (1, 2, 2), (0, 1, 2)]


def to_lex(ctx, paper_vec, order):
    """Reorder a vector written in a displayed monomial order into lexicographic order."""
    out = np.zeros(ctx.dim_w, dtype=np.int64)
    for val, mon in zip(paper_vec, order):
        out[ctx.index[mon]] = val
    return out


def coordinate_space(ctx, monomials):
    rows = np.zeros((len(monomials), ctx.dim_w), dtype=np.int64)
    for r, m in enumerate(monomials):
        rows[r, ctx.index[m]] = 1
    return Subspace.from_rows(ctx.spec, rows, ctx.ambient_dim)


def test_index_table_is_lexicographic():
    ctx = VeroneseContext.of(3, 2, 1)
    assert ctx.monomials == ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
    assert ctx.dim_w == math.comb(4, 2)
    ctx2 = VeroneseContext.of(2, 3, 2)
    assert ctx2.dim_w == math.comb(6, 3) and ctx2.ambient_dim == 19


def test_theta_worked_example():
    ctx = VeroneseContext.of(7, 1, 1)
    F = ctx.spec
    for x0, x1, y0, y1 in itertools.product(range(7), repeat=4):
        got = theta(ctx, [[x0, x1], [y0, y1]])
        assert got.tolist() == [x0 * y0 % 7, (x0 * y1 + x1 * y0) % 7, x1 * y1 % 7]


def test_theta_basis_image():
    ctx = VeroneseContext.of(3, 2, 2)
    e0 = [1, 0, 0]
    v = theta(ctx, [e0, e0, e0])
    assert v.tolist() == [1] + [0] * 9


def test_theta_symmetric_gf3():
    ctx = VeroneseContext.of(3, 2, 1)
    pts = projective_points(ctx.spec, 2)
    assert len(pts) == 13
    for u, v in itertools.product(pts, repeat=2):
        assert np.array_equal(theta(ctx, [u, v]), theta(ctx, [v, u]))


def test_theta_multilinear_gf4():
    ctx = VeroneseContext.of(4, 2, 2)
    F = ctx.spec
    rng = np.random.default_rng(0)
    for _ in range(30):
        x, y, z, w = (rng.integers(0, 4, 3) for _ in range(4))
        lam = int(rng.integers(1, 4))
        lhs = theta(ctx, [F.add_arr(x, F.mul_arr(y, lam)), z, w])
        rhs = F.add_arr(theta(ctx, [x, z, w]), F.mul_arr(theta(ctx, [y, z, w]), lam))
        assert np.array_equal(lhs, rhs)
        assert np.array_equal(theta(ctx, [x, z, w]), theta(ctx, [w, x, z]))


def test_theta_errors():
    ctx = VeroneseContext.of(3, 2, 1)
    with pytest.raises(ValueError):
        theta(ctx, [[1, 0, 0]])
    with pytest.raises(ValueError):
        theta(ctx, [[1, 0], [1, 0]])


def test_zeta_quadratic_veronesean():
    ctx = VeroneseContext.of(5, 2, 1)
    for x in projective_points(ctx.spec, 2):
        x0, x1, x2 = map(int, x)
        paper = [x0 * x0, x1 * x1, x2 * x2, x0 * x1, x0 * x2, x1 * x2]
        assert np.array_equal(zeta(ctx, x), to_lex(ctx, [c % 5 for c in paper], EX1_ORDER))


def test_zeta_cubic_matches_display():
    ctx = VeroneseContext.of(3, 2, 2)
    for x in projective_points(ctx.spec, 2):
        x0, x1, x2 = map(int, x)
        paper = [x0**3, x1**3, x2**3, x0 * x0 * x1, x0 * x0 * x2, x1 * x1 * x0, x1 * x1 * x2,
                 x2 * x2 * x0, x2 * x2 * x1, x0 * x1 * x2]
        assert np.array_equal(zeta(ctx, x), to_lex(ctx, [c % 3 for c in paper], EX2_ORDER))
    assert zeta(ctx, [1, 0, 0]).tolist() == [1] + [0] * 9


def test_zeta_scaling_gf4():
    ctx = VeroneseContext.of(4, 2, 1)
    F = ctx.spec
    for x in itertools.product(range(4), repeat=3):
        if not any(x):
            continue
        for lam in range(1, 4):
            lhs = zeta(ctx, F.mul_arr(np.array(x), lam))
            rhs = F.mul_arr(zeta(ctx, x), F.s_pow(lam, 2))
            assert np.array_equal(lhs, rhs)
    with pytest.raises(ValueError):
        zeta(ctx, [0, 0, 0])


@pytest.mark.parametrize("q", [3, 4])
def test_dual_element_example1_parametrisation(q):
    ctx = VeroneseContext.of(q, 2, 1)
    F = ctx.spec
    for P in projective_points(F, 2):
        a, b, c = map(int, P)
        rows = []
        for x in np.eye(3, dtype=np.int64):  # x = e_0, e_1, e_2 spans the parametrised plane
            x0, x1, x2 = map(int, x)
            m = F.s_mul
            paper = [m(a, x0), m(b, x1), m(c, x2), F.s_add(m(a, x1), m(b, x0)),
                     F.s_add(m(a, x2), m(c, x0)), F.s_add(m(b, x2), m(c, x1))]
            rows.append(to_lex(ctx, paper, EX1_ORDER))
        assert dual_element(ctx, P) == Subspace.from_rows(F, rows, 5)


def test_dual_element_example2_displays():
    ctx = VeroneseContext.of(2, 2, 2)
    # nonzero positions of each display, written in the displayed order
    pattern = {
        (1, 0, 0): [0, 3, 4, 5, 7, 9],
        (0, 1, 0): [1, 3, 5, 6, 8, 9],
        (0, 0, 1): [2, 4, 6, 7, 8, 9],
    }
    for P, pos in pattern.items():
        expected = coordinate_space(ctx, [EX2_ORDER[i] for i in pos])
        assert dual_element(ctx, P) == expected
        assert dual_element(ctx, P).dim == 5


def test_dual_element_dims_pg23():
    ctx = VeroneseContext.of(3, 2, 1)
    for P in projective_points(ctx.spec, 2):
        assert dual_element(ctx, P).dim == math.comb(3, 1) - 1


def test_build_dual_arc_examples(ex1, ex2):
    assert len(ex1) == 13 and ex1.params == (5, 2, 0) and ex1.ambient_dim == 5
    assert len(ex2) == 7 and ex2.params == (9, 5, 2, 0)
    fam = build_dual_arc(VeroneseContext.of(2, 1, 1))
    assert len(fam) == 3 and fam.ambient_dim == 2 and all(E.dim == 1 for E in fam)
    meets = {meet(a, b) for a, b in itertools.combinations(fam, 2)}
    assert len(meets) == 3 and all(M.dim == 0 for M in meets)


def test_degenerate_n0_warns():
    with pytest.warns(DegenerateParametersWarning):
        fam = build_dual_arc(VeroneseContext.of(2, 0, 1))
    assert len(fam) == 1


def test_parameter_formulas():
    assert dual_arc_params(2, 1) == (5, 2, 0)
    assert dual_arc_params(2, 2) == (9, 5, 2, 0)
    assert dual_arc_params(3, 1) == (9, 3, 0)
    assert arc_params(2, 2) == (9, 3, 6, 8)
    for n, d in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)]:
        N = dual_arc_params(n, d)[0]
        assert arc_params(n, d)[1:] == tuple(N - 1 - x for x in dual_arc_params(n, d)[1:])


def test_arc_elements_are_perps():
    ctx = VeroneseContext.of(3, 2, 1)
    for P in projective_points(ctx.spec, 2):
        assert perp(dual_element(ctx, P)) == arc_element(ctx, P)
    ctx2 = VeroneseContext.of(2, 2, 2)
    assert arc_element(ctx2, [1, 0, 0]).dim == math.comb(5, 3) - math.comb(4, 2) - 1 == 3


def test_build_arc_example_s1():
    arc = build_arc(VeroneseContext.of(2, 2, 2))
    assert arc.kind == "arc" and arc.params == (9, 3, 6, 8) and len(arc) == 7
    for j, expected in [(2, 6), (3, 8), (4, 9)]:
        for c in itertools.combinations(range(7), j):
            assert span([arc[i] for i in c]).dim == expected


def test_construction2_zeta_description():
    assert not construction2_condition(2, 2, 2)
    assert construction2_condition(5, 2, 1)
    assert construction2_condition(7, 2, 2)
    ctx = VeroneseContext.of(5, 2, 1)
    for P in projective_points(ctx.spec, 2):
        assert arc_element_from_zeta(ctx, P) == arc_element(ctx, P)
    # outside the regime the zeta span can be a different space
    ctx = VeroneseContext.of(2, 2, 2)
    diffs = [arc_element_from_zeta(ctx, P) != arc_element(ctx, P) for P in projective_points(ctx.spec, 2)]
    assert any(diffs)


def test_contact_points_q2_formula():
    ctx = VeroneseContext.of(2, 2, 1)
    for P in projective_points(ctx.spec, 2):
        x = [int(c) for c in P]
        expected = [x[0], 0, 0, x[1], 0, x[2]]  # (x0^2, 2x0x1, 2x0x2, x1^2, 2x1x2, x2^2) in char 2
        assert contact_point(ctx, P).tolist() == expected
    assert nucleus(ctx) == coordinate_space(ctx, [(0, 0), (1, 1), (2, 2)])


@pytest.mark.parametrize("q", [2, 4])
def test_nucleus_even(q):
    ctx = VeroneseContext.of(q, 2, 1)
    fam = build_dual_arc(ctx)
    N = nucleus(ctx)
    assert N is not None and N.dim == 2
    assert family_nucleus(fam) == N
    ext = fam.extended([N])
    assert len(ext) == q * q + q + 2
    rep = verify(ext)
    assert rep.axioms_hold and rep.span_dim == 5


def test_nucleus_odd_and_errors():
    ctx = VeroneseContext.of(3, 2, 1)
    assert nucleus(ctx) is None
    pts = projective_points(ctx.spec, 2)
    assert span([contact_point(ctx, P) for P in pts], field=ctx.spec, ambient_dim=5).dim == 5
    with pytest.raises(ValueError):
        nucleus(VeroneseContext.of(2, 2, 2))


def test_family_file_round_trip(ex2, ex2_arc):
    for fam in (ex2, ex2_arc):
        text = format_family(fam)
        assert text.splitlines()[0].startswith(f"q=2 n=2 d=2 count=7 kind={fam.kind}")
        back = parse_family(text)
        assert back.elements == fam.elements and back.params == fam.params and back.kind == fam.kind


def test_example2_induced_configuration_in_pi0(ex2):
    ctx = VeroneseContext.of(2, 2, 2)
    pi0 = ex2[ctx_index(ex2, (1, 0, 0))]
    E0 = coordinate_space(ctx, [(0, 0, 0), (0, 0, 1), (0, 0, 2)])
    assert E0 <= pi0
    induced = [meet(pi0, E) for E in ex2 if E != pi0]
    assert all(P.dim == 2 for P in induced)
    assert all(meet(E0, P).dim <= 0 for P in induced)
    # the induced planes together with E0 form the order-1 dual arc inside pi0
    assert all(meet(a, b).dim == 0 for a, b in itertools.combinations(induced + [E0], 2))
    # the displayed Veronesean V0 lies in pi0
    for x in projective_points(ctx.spec, 2):
        x0, x1, x2 = map(int, x)
        v0 = to_lex(ctx, [x0 * x0 % 2, 0, 0, x0 * x1 % 2, x0 * x2 % 2, x1 * x1 % 2, 0,
                          x2 * x2 % 2, 0, x1 * x2 % 2], EX2_ORDER)
        assert pi0.contains(v0)


def ctx_index(fam, label):
    return fam.labels.index(label)
