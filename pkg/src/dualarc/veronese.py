"""Veronesean constructions of generalised dual arcs and arcs.

Coordinates of ``W`` are indexed by sorted index tuples ``(i_0 <= ... <= i_d)``
in lexicographic order (``itertools.combinations_with_replacement``).  For
``n = 2, d = 1`` that is ``00, 01, 02, 11, 12, 22``.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .arcs import DualArcFamily, coverage, _element_contacts
from .gf import FieldSpec, field_of_order
from .linalg import Subspace, parse_subspace_lines, points, span, perp, format_subspace

__all__ = [
    "VeroneseContext",
    "theta",
    "zeta",
    "contact_point",
    "dual_element",
    "arc_element",
    "arc_element_from_zeta",
    "construction2_condition",
    "Construction2ConditionWarning",
    "build_dual_arc",
    "build_arc",
    "dual_arc_params",
    "arc_params",
    "projective_points",
    "nucleus",
    "family_nucleus",
    "write_family",
    "read_family",
    "format_family",
    "parse_family",
]


class Construction2ConditionWarning(UserWarning):
    """Parameters outside the range where the zeta-span description of A(P) is claimed."""


@dataclass(frozen=True)
class VeroneseContext:
    """Source space PG(n, q), order d, and the monomial index of W."""

    n: int
    d: int
    spec: FieldSpec
    monomials: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0 or self.d < 0:
            raise ValueError("n and d must be non-negative")
        mons = tuple(itertools.combinations_with_replacement(range(self.n + 1), self.d + 1))
        object.__setattr__(self, "monomials", mons)
        object.__setattr__(self, "index", {m: i for i, m in enumerate(mons)})

    @classmethod
    def of(cls, q: int, n: int, d: int) -> VeroneseContext:
        return cls(n, d, field_of_order(q))

    @property
    def field(self) -> FieldSpec:
        return self.spec

    @property
    def dim_w(self) -> int:
        """Vector dimension of W, ``C(n+d+1, d+1)``."""
        return len(self.monomials)

    @property
    def ambient_dim(self) -> int:
        return self.dim_w - 1

    def monomial_label(self, i: int) -> str:
        return "".join(map(str, self.monomials[i]))


def _vec(ctx: VeroneseContext, v) -> np.ndarray:
    a = np.asarray(v, dtype=np.int64).reshape(-1)
    if a.shape[0] != ctx.n + 1:
        raise ValueError(f"expected {ctx.n + 1} coordinates, got {a.shape[0]}")
    if np.any((a < 0) | (a >= ctx.spec.q)):
        raise ValueError("coordinate codes out of range")
    return a


def theta(ctx: VeroneseContext, vectors: Sequence) -> np.ndarray:
    """The symmetric multilinear map V^(d+1) -> W.

    The coefficient of ``e_J`` sums the products over every ordering of the
    multiset J, so ``theta(x, y) = (x0 y0, x0 y1 + x1 y0, x1 y1)`` for
    ``n = d = 1``.
    """
    if len(vectors) != ctx.d + 1:
        raise ValueError(f"theta takes {ctx.d + 1} vectors, got {len(vectors)}")
    vs = [_vec(ctx, v) for v in vectors]
    F = ctx.spec
    out = np.zeros(ctx.dim_w, dtype=np.int64)
    supports = [np.flatnonzero(v) for v in vs]
    for combo in itertools.product(*supports):
        c = 1
        for v, i in zip(vs, combo):
            c = F.s_mul(c, int(v[i]))
        j = ctx.index[tuple(sorted(combo))]
        out[j] = F.s_add(int(out[j]), c)
    return out


def zeta(ctx: VeroneseContext, point) -> np.ndarray:
    """Veronesean embedding: coordinate J is the plain product of the x_j, j in J."""
    x = _vec(ctx, point)
    if not x.any():
        raise ValueError("the zero vector is not a point")
    F = ctx.spec
    out = np.zeros(ctx.dim_w, dtype=np.int64)
    for j, mon in enumerate(ctx.monomials):
        c = 1
        for i in mon:
            c = F.s_mul(c, int(x[i]))
            if c == 0:
                break
        out[j] = c
    return out


def contact_point(ctx: VeroneseContext, point) -> np.ndarray:
    """``theta(x, ..., x)``: the point of D(P) covered by no other element when d = 1."""
    x = _vec(ctx, point)
    if not x.any():
        raise ValueError("the zero vector is not a point")
    return theta(ctx, [x] * (ctx.d + 1))


def _dual_generators(ctx: VeroneseContext, x: np.ndarray) -> np.ndarray:
    """Rows ``theta(x, e_{j1}, ..., e_{jd}) = sum_i x_i e_{sort(i, J)}``."""
    rows = []
    for J in itertools.combinations_with_replacement(range(ctx.n + 1), ctx.d):
        r = np.zeros(ctx.dim_w, dtype=np.int64)
        for i in np.flatnonzero(x):
            k = ctx.index[tuple(sorted((int(i),) + J))]
            r[k] = ctx.spec.s_add(int(r[k]), int(x[i]))
        rows.append(r)
    return np.array(rows, dtype=np.int64)


def dual_element(ctx: VeroneseContext, point) -> Subspace:
    """D(P): span of ``theta(x, v_1, ..., v_d)`` over all v_i (basis vectors suffice)."""
    x = _vec(ctx, point)
    if not x.any():
        raise ValueError("the zero vector is not a point")
    return Subspace.from_rows(ctx.spec, _dual_generators(ctx, x), ctx.ambient_dim)


def arc_element(ctx: VeroneseContext, point) -> Subspace:
    """A(P) = D(P)^perp under the standard dot product on W."""
    return perp(dual_element(ctx, point))


def projective_points(spec: FieldSpec, n: int) -> np.ndarray:
    """Canonical representatives of PG(n, q) (first nonzero entry 1), lexicographic."""
    return points(Subspace.whole(spec, n))


def arc_element_from_zeta(ctx: VeroneseContext, point) -> Subspace:
    """``<zeta(y) : y in x^perp>``; agrees with :func:`arc_element` only in the regime
    of :func:`construction2_condition`."""
    from .linalg import nullspace

    x = _vec(ctx, point)
    hyper = Subspace(ctx.spec, nullspace(x[None, :], ctx.spec, ctx.n + 1))
    pts = points(hyper)
    return span([zeta(ctx, y) for y in pts], field=ctx.spec, ambient_dim=ctx.ambient_dim)


def construction2_condition(q: int, n: int, d: int) -> bool:
    """q odd and ``(q^n - 1)/(q - 1) >= C(n+d, d+1)``."""
    return q % 2 == 1 and (q**n - 1) // (q - 1) >= math.comb(n + d, d + 1)


def dual_arc_params(n: int, d: int) -> tuple[int, ...]:
    return tuple(math.comb(n + d + 1 - i, d + 1 - i) - 1 for i in range(d + 2))


def arc_params(n: int, d: int) -> tuple[int, ...]:
    top = math.comb(n + d + 1, d + 1)
    return (top - 1,) + tuple(top - math.comb(n + d + 1 - i, d + 1 - i) - 1 for i in range(1, d + 2))


def build_dual_arc(ctx: VeroneseContext) -> DualArcFamily:
    """All D(P), P in PG(n, q), in lexicographic point order."""
    pts = projective_points(ctx.spec, ctx.n)
    elems = [dual_element(ctx, P) for P in pts]
    labels = [tuple(int(c) for c in P) for P in pts]
    return DualArcFamily(ctx.spec, ctx.ambient_dim, elems, dual_arc_params(ctx.n, ctx.d), "dual", labels)


def build_arc(ctx: VeroneseContext) -> DualArcFamily:
    """All A(P), computed as perps of D(P); parameters ``C(n+d+1,d+1) - C(n+d+1-i,d+1-i) - 1``."""
    if not construction2_condition(ctx.spec.q, ctx.n, ctx.d):
        warnings.warn(
            f"q={ctx.spec.q}, n={ctx.n}, d={ctx.d} is outside the zeta-span regime; "
            "A(P) is still computed as the perp of D(P)",
            Construction2ConditionWarning,
            stacklevel=2,
        )
    pts = projective_points(ctx.spec, ctx.n)
    elems = [arc_element(ctx, P) for P in pts]
    labels = [tuple(int(c) for c in P) for P in pts]
    return DualArcFamily(ctx.spec, ctx.ambient_dim, elems, arc_params(ctx.n, ctx.d), "arc", labels)


def family_nucleus(family: DualArcFamily) -> Subspace | None:
    """Span of the contact points of an order-1 dual arc, if it has the element dimension.

    Returns None when the span is larger (q odd), meaning the family is not
    extendable this way.
    """
    if family.order != 1 or family.kind != "dual":
        raise ValueError("the nucleus is defined for dual arcs of order 1")
    cov = coverage(family)
    pts = [_element_contacts(cov, i) for i in range(len(family))]
    pts = [P for P in pts if P.shape[0]]
    if not pts:
        return None
    S = span(np.vstack(pts), field=family.field, ambient_dim=family.ambient_dim)
    if S.dim != family.params[1]:
        return None
    return S


def nucleus(ctx: VeroneseContext) -> Subspace | None:
    """Nucleus of the order-1 Veronesean dual arc, or None when q is odd.

    For q even the points ``theta(x, x) = (x_i^2, 0, ...)`` span an n-space.
    """
    if ctx.d != 1:
        raise ValueError("the nucleus is defined for d = 1")
    pts = projective_points(ctx.spec, ctx.n)
    S = span([contact_point(ctx, P) for P in pts], field=ctx.spec, ambient_dim=ctx.ambient_dim)
    return S if S.dim == ctx.n else None


# -- family files -------------------------------------------------------------------


def _source_n(N: int, d: int) -> int | None:
    n = 0
    while math.comb(n + d + 1, d + 1) - 1 < N:
        n += 1
    return n if math.comb(n + d + 1, d + 1) - 1 == N else None


def format_family(family: DualArcFamily) -> str:
    n = _source_n(family.ambient_dim, family.order) if family.order >= 0 else None
    head = (
        f"q={family.q} n={'-' if n is None else n} d={family.order} count={len(family)} "
        f"kind={family.kind} params={','.join(map(str, family.params))}"
    )
    return head + "\n" + "".join(format_subspace(E) for E in family)


def parse_family(text: str) -> DualArcFamily:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty family file")
    hdr = {}
    for tok in lines[0].split():
        if "=" not in tok:
            raise ValueError(f"malformed family header {lines[0]!r}")
        k, v = tok.split("=", 1)
        hdr[k] = v
    try:
        q = int(hdr["q"])
        count = int(hdr["count"])
        params = tuple(int(x) for x in hdr["params"].split(","))
        kind = hdr.get("kind", "dual")
        d = int(hdr["d"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad family header {lines[0]!r}") from exc
    if d != len(params) - 2:
        raise ValueError("header order d disagrees with params")
    elems = []
    pos = 1
    for _ in range(count):
        if pos >= len(lines):
            raise ValueError("family file truncated")
        S, pos = parse_subspace_lines(lines, pos)
        elems.append(S)
    spec = field_of_order(q)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return DualArcFamily(spec, params[0], elems, params, kind)


def write_family(family: DualArcFamily, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_family(family))


def read_family(path) -> DualArcFamily:
    with open(path, encoding="ascii") as fh:
        return parse_family(fh.read())


def construction_order(family: DualArcFamily) -> DualArcFamily | None:
    """The Veronesean construction with the same element set, if there is one."""
    if family.kind != "dual":
        return None
    n = _source_n(family.ambient_dim, family.order)
    if n is None:
        return None
    ref = build_dual_arc(VeroneseContext(n, family.order, family.field))
    if len(ref) != len(family) or set(ref.elements) != set(family.elements):
        return None
    return ref


def iter_labels(ctx: VeroneseContext) -> Iterable[tuple[int, ...]]:
    for P in projective_points(ctx.spec, ctx.n):
        yield tuple(int(c) for c in P)
