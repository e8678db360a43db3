"""Families of subspaces claimed to be generalised (dual) arcs.

Verification, dualisation, the structural diagnostics used for order-1 dual
arcs (contact points, spans of two elements, special planes) and the search
that completes a deficient order-1 dual arc.
"""

from __future__ import annotations

import itertools
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .gf import FieldSpec
from .linalg import (
    Subspace,
    as_rng,
    meet,
    nullspace,
    perp,
    point_keys,
    points,
    span,
)

log = logging.getLogger(__name__)

__all__ = [
    "DualArcFamily",
    "Failure",
    "VerificationReport",
    "verify",
    "dualize",
    "T1HypothesisReport",
    "verify_t_d1_hypotheses",
    "Coverage",
    "coverage",
    "contact_points",
    "TwoNSpaceClass",
    "classify_pair_spans",
    "ElementPencil",
    "element_pencils",
    "extend_deficient",
    "AxiomViolation",
    "ClassificationError",
    "ExtensionError",
    "DegenerateParametersWarning",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 20080101
MAX_STORED_FAILURES = 100


class AxiomViolation(ValueError):
    """A family breaks an axiom that an algorithm relies on mid-computation."""


class ClassificationError(ValueError):
    """A span of two elements holds a member count the theory rules out."""


class ExtensionError(RuntimeError):
    """No completing element was found; ``state`` holds the residual search data."""

    def __init__(self, message: str, state: dict):
        super().__init__(message)
        self.state = state


class DegenerateParametersWarning(UserWarning):
    pass


@dataclass(frozen=True)
class DualArcFamily:
    """An ordered family of equal-dimensional subspaces of PG(N, q).

    ``kind == "dual"``: a generalised dual arc, ``params = (N, n1, ..., n_{d+1})``
    strictly decreasing (meet dimensions).  ``kind == "arc"``: a generalised
    arc, ``params = (N, n1, ..., n_{d+1})`` with ``n1 < ... < n_{d+1}`` (span
    dimensions).  ``labels`` optionally records the defining point of each
    element.
    """

    field: FieldSpec
    ambient_dim: int
    elements: tuple[Subspace, ...]
    params: tuple[int, ...]
    kind: str = "dual"
    labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "params", tuple(int(x) for x in self.params))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != len(self.elements):
                raise ValueError("labels and elements differ in length")
        if self.kind not in ("dual", "arc"):
            raise ValueError(f"kind must be 'dual' or 'arc', got {self.kind!r}")
        if len(self.params) < 2:
            raise ValueError("params need at least (N, n1)")
        if self.params[0] != self.ambient_dim:
            raise ValueError(f"params[0] = {self.params[0]} but ambient is PG({self.ambient_dim})")
        for E in self.elements:
            if E.field != self.field or E.ambient_dim != self.ambient_dim:
                raise ValueError("element lives in a different space")
            if E.dim != self.params[1]:
                raise ValueError(f"element of dimension {E.dim}, expected {self.params[1]}")
        ps = self.params
        if self.kind == "dual":
            ok = all(a > b for a, b in zip(ps, ps[1:])) and ps[-1] > -1
        else:
            ok = all(a < b for a, b in zip(ps[1:], ps[2:])) and ps[-1] < ps[0]
        if not ok:
            warnings.warn(f"degenerate {self.kind} parameters {ps}", DegenerateParametersWarning, stacklevel=3)

    @property
    def order(self) -> int:
        return len(self.params) - 2

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def subset(self, indices: Iterable[int]) -> DualArcFamily:
        idx = list(indices)
        labels = None if self.labels is None else [self.labels[i] for i in idx]
        return DualArcFamily(self.field, self.ambient_dim, [self.elements[i] for i in idx],
                             self.params, self.kind, labels)

    def without(self, indices: Iterable[int]) -> DualArcFamily:
        drop = set(indices)
        return self.subset(i for i in range(len(self)) if i not in drop)

    def extended(self, extra: Sequence[Subspace], extra_labels: Sequence | None = None) -> DualArcFamily:
        labels = None
        if self.labels is not None:
            labels = list(self.labels) + list(extra_labels or [None] * len(extra))
        return DualArcFamily(self.field, self.ambient_dim, list(self.elements) + list(extra),
                             self.params, self.kind, labels)


# -- verification -------------------------------------------------------------------


@dataclass
class Failure:
    indices: tuple[int, ...]
    expected: int
    actual: int
    check: str


@dataclass
class VerificationReport:
    kind: str
    params: tuple[int, ...]
    size: int
    mode: str
    seed: int | None
    axioms_hold: bool
    regular: bool
    span_dim: int
    failures: list[Failure] = field(default_factory=list)
    regularity_failures: list[Failure] = field(default_factory=list)
    failure_count: int = 0
    checked: dict[int, int] = field(default_factory=dict)

    def to_keyvalue(self) -> str:
        rows = [
            ("kind", self.kind),
            ("params", ",".join(map(str, self.params))),
            ("size", self.size),
            ("mode", self.mode),
            ("seed", "none" if self.seed is None else self.seed),
            ("axioms_hold", str(self.axioms_hold).lower()),
            ("regular", str(self.regular).lower()),
            ("span_dim", self.span_dim),
            ("failures", self.failure_count),
            ("regularity_failures", len(self.regularity_failures)),
        ]
        rows += [(f"checked_j{j}", n) for j, n in sorted(self.checked.items())]
        return "\n".join(f"{k}={v}" for k, v in rows) + "\n"

    def to_text(self) -> str:
        what = "generalised dual arc" if self.kind == "dual" else "generalised arc"
        lines = [
            f"{what} with {self.size} elements, parameters {self.params}",
            f"  mode: {self.mode}" + (f" (seed {self.seed})" if self.seed is not None else ""),
            f"  axioms: {'hold' if self.axioms_hold else 'FAIL'}",
            f"  regular: {'yes' if self.regular else 'no'}",
            f"  span dimension: {self.span_dim}",
        ]
        for j, n in sorted(self.checked.items()):
            lines.append(f"  {j}-subsets checked: {n}")
        for f in self.failures[:10]:
            lines.append(f"  failure {f.check} {f.indices}: expected {f.expected}, got {f.actual}")
        for f in self.regularity_failures[:10]:
            lines.append(f"  irregular at {f.indices}: expected {f.expected}, got {f.actual}")
        return "\n".join(lines) + "\n"


def _subsets(m: int, j: int, mode: str, k: int, rng) -> Iterable[tuple[int, ...]]:
    total = math.comb(m, j)
    if mode == "exhaustive" or total <= k:
        return itertools.combinations(range(m), j)
    return (tuple(sorted(rng.choice(m, size=j, replace=False).tolist())) for _ in range(k))


def _stack_rank(mats: Sequence[np.ndarray], F: FieldSpec, width: int) -> int:
    mats = [M for M in mats if M.shape[0]]
    if not mats:
        return 0
    return K.rank(np.vstack(mats), F)


def verify(family: DualArcFamily, mode: str = "exhaustive", k: int = 500,
           seed: int | None = None) -> VerificationReport:
    """Check the (dual) arc axioms and the regularity condition.

    Args:
        family: the family to test.
        mode: ``"exhaustive"`` checks every j-subset; ``"sampled"`` draws ``k``
            uniform j-subsets per j (all of them when there are fewer).
        k: samples per subset size in sampled mode.
        seed: sampling seed; defaults to :data:`DEFAULT_SEED`.
    """
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "sampled" and seed is None:
        seed = DEFAULT_SEED
    rng = as_rng(seed if seed is not None else DEFAULT_SEED)
    F = family.field
    N = family.ambient_dim
    width = N + 1
    d = family.order
    m = len(family)
    dual = family.kind == "dual"
    bases = [E.basis for E in family]
    perps = [nullspace(E.basis, F, width) for E in family]
    gens = perps if dual else bases

    report = VerificationReport(
        kind=family.kind, params=family.params, size=m, mode=mode,
        seed=seed if mode == "sampled" else None, axioms_hold=True, regular=True, span_dim=-1,
    )

    def measured(idx) -> int:
        r = _stack_rank([gens[i] for i in idx], F, width)
        return width - r - 1 if dual else r - 1

    for j in range(1, d + 3):
        if j <= d + 1:
            expected = family.params[j]
        else:
            expected = -1 if dual else N
        n_checked = 0
        for idx in _subsets(m, j, mode, k, rng):
            n_checked += 1
            got = measured(idx)
            if got != expected:
                report.failure_count += 1
                if len(report.failures) < MAX_STORED_FAILURES:
                    report.failures.append(Failure(idx, expected, got, "meet" if dual else "span"))
        report.checked[j] = n_checked
    report.axioms_hold = report.failure_count == 0

    report.span_dim = _stack_rank(bases, F, width) - 1

    # regularity, j = 0 .. d (j = 0 is the spanning / empty-common-meet condition)
    for j in range(0, d + 1):
        for idx in _subsets(m, j, mode, k, rng):
            rest = [i for i in range(m) if i not in idx]
            if not rest:
                continue
            if dual:
                pi = meet([family[i] for i in idx]) if idx else Subspace.whole(F, N)
                pieces = [meet(pi, family[i]) for i in rest]
                got = span(pieces, field=F, ambient_dim=N) if pieces else Subspace.empty(F, N)
            else:
                pi = span([family[i] for i in idx], field=F, ambient_dim=N) if idx else Subspace.empty(F, N)
                got = meet([span(pi, family[i]) for i in rest])
            if got != pi:
                report.regularity_failures.append(Failure(idx, pi.dim, got.dim, "regularity"))
                if len(report.regularity_failures) >= MAX_STORED_FAILURES:
                    break
    report.regular = report.axioms_hold and not report.regularity_failures
    if dual and report.span_dim != N:
        report.regular = False
    return report


def dualize(family: DualArcFamily) -> DualArcFamily:
    """Elementwise orthogonal complement; parameters become ``N - 1 - n_i``."""
    N = family.ambient_dim
    params = (N,) + tuple(N - 1 - x for x in family.params[1:])
    kind = "arc" if family.kind == "dual" else "dual"
    return DualArcFamily(family.field, N, [perp(E) for E in family], params, kind, family.labels)


# -- order-1 machinery -----------------------------------------------------------------


def full_size(q: int, n: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def delta_bound(q: int) -> float:
    return (q - 7) / 2 if q % 2 else (q - 8) / 2


def _require_order_one(family: DualArcFamily) -> None:
    if family.order != 1 or family.kind != "dual":
        raise ValueError("this operation needs a dual arc of order d = 1")


@dataclass
class Coverage:
    """Point coverage of a family: how many elements contain each point."""

    element_points: list[np.ndarray]
    element_keys: list
    counts: dict

    def count(self, vector) -> int:
        key = point_keys(np.atleast_2d(vector), self._q)[0]
        return self.counts.get(_k(key), 0)

    _q: int = 0


def _k(key):
    return int(key) if isinstance(key, (np.integer, int)) else key


def coverage(family: DualArcFamily) -> Coverage:
    q = family.q
    pts = [points(E) for E in family]
    keys = [point_keys(P, q) for P in pts]
    counts: dict = {}
    if keys and isinstance(keys[0], np.ndarray):
        allk = np.concatenate(keys) if keys else np.zeros(0, dtype=np.int64)
        uniq, cnt = np.unique(allk, return_counts=True)
        counts = dict(zip(uniq.tolist(), cnt.tolist()))
    else:
        for ks in keys:
            for kk in ks:
                counts[kk] = counts.get(kk, 0) + 1
    cov = Coverage(pts, keys, counts)
    cov._q = q
    return cov


def _element_contacts(cov: Coverage, i: int) -> np.ndarray:
    ks = cov.element_keys[i]
    mask = np.array([cov.counts[_k(x)] == 1 for x in ks], dtype=bool)
    return cov.element_points[i][mask]


def contact_points(family: DualArcFamily, include_uncovered: bool = False) -> list[tuple[tuple[int, ...], int]]:
    """Points lying in at most one element, with their coverage count.

    Without ``include_uncovered`` only points of the union of the elements are
    listed (count 1).  Raises AxiomViolation if some point lies in three or
    more elements.
    """
    _require_order_one(family)
    if len(family) == 0:
        return []
    cov = coverage(family)
    worst = max(cov.counts.values())
    if worst >= 3:
        raise AxiomViolation(f"a point lies in {worst} elements")
    out = []
    for P in cov.element_points:
        pass
    seen = set()
    for i in range(len(family)):
        for row in _element_contacts(cov, i):
            t = tuple(int(x) for x in row)
            if t not in seen:
                seen.add(t)
                out.append((t, 1))
    if include_uncovered:
        whole = points(Subspace.whole(family.field, family.ambient_dim))
        for row, key in zip(whole, point_keys(whole, family.q)):
            if _k(key) not in cov.counts:
                out.append((tuple(int(x) for x in row), 0))
    out.sort()
    return out


@dataclass
class T1HypothesisReport:
    q: int
    n: int
    size: int
    expected_size: int
    delta: int
    pairwise_points: bool
    triples_skew: bool
    spanning: bool
    span_dims_ok: bool
    pair_span_rich: bool | None
    delta_bound: float
    delta_ok: bool
    span_dims_seen: list[int] = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        five = True if self.pair_span_rich is None else self.pair_span_rich
        return self.pairwise_points and self.triples_skew and self.spanning and self.span_dims_ok and five

    def to_keyvalue(self) -> str:
        def b(x):
            return "na" if x is None else str(x).lower()
        rows = [
            ("q", self.q), ("n", self.n), ("size", self.size), ("delta", self.delta),
            ("h1_pairwise_points", b(self.pairwise_points)),
            ("h2_triples_skew", b(self.triples_skew)),
            ("h3_spanning", b(self.spanning)),
            ("h4_span_dimensions", b(self.span_dims_ok)),
            ("h5_rich_pair_span", b(self.pair_span_rich)),
            ("delta_bound", self.delta_bound),
            ("delta_within_bound", b(self.delta_ok)),
            ("span_dims_seen", ",".join(map(str, self.span_dims_seen))),
        ]
        return "\n".join(f"{k}={v}" for k, v in rows) + "\n"


def _allowed_span_dims(n: int) -> set[int]:
    return {i * (2 * n - i + 3) // 2 - 1 for i in range(n + 1)}


def _contains_many(S: Subspace, stacked: np.ndarray, r: int, F: FieldSpec) -> np.ndarray:
    """Boolean mask: which elements (rows stacked in groups of r) lie in S."""
    Sp = nullspace(S.basis, F, S.ambient_dim + 1)
    if Sp.shape[0] == 0:
        return np.ones(stacked.shape[0] // r, dtype=bool)
    prod = K.matmul(Sp, stacked.T, F)
    return ~prod.reshape(Sp.shape[0], -1, r).any(axis=(0, 2))


def _span_closure_dims(family: DualArcFamily, allowed: set[int]) -> tuple[list[int], list]:
    """Dimensions of subspaces spanned by subcollections, grown one element at a time."""
    F = family.field
    N = family.ambient_dim
    r = family.params[1] + 1
    stacked = np.vstack([E.basis for E in family]) if len(family) else np.zeros((0, N + 1), dtype=np.int64)
    seen: dict[bytes, int] = {}
    bad = []
    frontier = []
    for E in family:
        if E.key not in seen:
            seen[E.key] = E.dim
            frontier.append(E)
    while frontier:
        nxt = []
        for S in frontier:
            inside = _contains_many(S, stacked, r, F)
            for i in np.flatnonzero(~inside):
                T = span(S, family[int(i)])
                if T.key in seen:
                    continue
                seen[T.key] = T.dim
                if T.dim < N:
                    if T.dim not in allowed and len(bad) < MAX_STORED_FAILURES:
                        bad.append(T)
                    nxt.append(T)
        frontier = nxt
    return sorted(set(seen.values())), bad


def verify_t_d1_hypotheses(family: DualArcFamily, delta: int) -> T1HypothesisReport:
    """Check the five hypotheses of the order-1 extension theorem and the bound on delta.

    Hypothesis (2) is checked through point coverage: three elements share a
    point exactly when that point lies in three elements.  Hypothesis (4) is
    checked on every span reachable by adding one element at a time.
    """
    _require_order_one(family)
    q = family.q
    n = family.params[1]
    N = family.ambient_dim
    if N != n * (n + 3) // 2:
        raise ValueError(f"elements of dimension {n} should live in PG({n * (n + 3) // 2}, q), not PG({N}, q)")
    expected = full_size(q, n) - delta
    if len(family) != expected:
        raise ValueError(f"family has {len(family)} elements but size - delta = {expected}")
    F = family.field
    width = N + 1
    witnesses: dict = {}

    perps = [nullspace(E.basis, F, width) for E in family]
    p1 = True
    for a, b in itertools.combinations(range(len(family)), 2):
        dim = width - K.rank(np.vstack([perps[a], perps[b]]), F) - 1
        if dim != 0:
            p1 = False
            witnesses["pair"] = (a, b, dim)
            break

    cov = coverage(family)
    worst = max(cov.counts.values()) if cov.counts else 0
    p2 = worst <= 2
    if not p2:
        witnesses["max_coverage"] = worst

    span_dim = _stack_rank([E.basis for E in family], F, width) - 1
    p3 = span_dim == N
    if not p3:
        witnesses["span_dim"] = span_dim

    allowed = _allowed_span_dims(n)
    dims_seen, bad = _span_closure_dims(family, allowed)
    p4 = not bad
    if bad:
        witnesses["bad_span_dims"] = sorted({S.dim for S in bad})

    p5 = None
    if q % 2 == 0:
        p5 = False
        for cls in _pair_span_members(family):
            if len(cls[1]) > 2:
                p5 = True
                break

    bound = delta_bound(q)
    return T1HypothesisReport(
        q=q, n=n, size=len(family), expected_size=full_size(q, n), delta=delta,
        pairwise_points=p1, triples_skew=p2, spanning=p3, span_dims_ok=p4,
        pair_span_rich=p5, delta_bound=bound, delta_ok=delta <= bound,
        span_dims_seen=dims_seen, witnesses=witnesses,
    )


def _pair_span_members(family: DualArcFamily) -> list[tuple[Subspace, tuple[int, ...]]]:
    """Distinct spans of two elements with the indices of the elements they contain."""
    F = family.field
    m = len(family)
    if m < 2:
        return []
    r = family.params[1] + 1
    stacked = np.vstack([E.basis for E in family])
    done = np.zeros((m, m), dtype=bool)
    out = []
    for a in range(m):
        for b in range(a + 1, m):
            if done[a, b]:
                continue
            S = span(family[a], family[b])
            members = tuple(int(i) for i in np.flatnonzero(_contains_many(S, stacked, r, F)))
            for x, y in itertools.combinations(members, 2):
                done[x, y] = True
            out.append((S, members))
    return out


@dataclass
class TwoNSpaceClass:
    """A subspace spanned by two elements of an order-1 dual arc."""

    span: Subspace
    members: tuple[int, ...]
    kind: str
    special_plane: Subspace | None = None
    members_meet_plane_in_lines: bool | None = None
    outside_avoid_plane: bool | None = None
    outside_meet_in_lines: bool | None = None
    q: int = 0

    @property
    def member_count(self) -> int:
        return len(self.members)

    @property
    def deficiency(self) -> int:
        """``q + 1 - member_count`` (the per-span deficiency)."""
        return self.q + 1 - len(self.members)


def classify_pair_spans(family: DualArcFamily, delta: int) -> list[TwoNSpaceClass]:
    """Group the spans of pairs of elements and analyse the big ones.

    A span is *big* when it holds at least ``q - delta`` elements (and more
    than two).  For every big span the special plane is spanned by the three
    pairwise intersection points of its first three members; the report
    records whether every member meets that plane in a line and whether every
    element outside the span misses the plane.
    """
    _require_order_one(family)
    q = family.q
    out = []
    for S, members in _pair_span_members(family):
        cnt = len(members)
        if cnt == 2:
            kind = "pair"
        elif cnt >= max(q - delta, 3):
            kind = "big"
        elif cnt == 1:
            kind = "small"
        else:
            raise ClassificationError(
                f"span of dimension {S.dim} holds {cnt} elements; expected 2 or at least {q - delta}"
            )
        cls = TwoNSpaceClass(span=S, members=members, kind=kind, q=q)
        if kind == "big":
            a, b, c = (family[i] for i in members[:3])
            plane = span(meet(a, b), meet(a, c), meet(b, c))
            cls.special_plane = plane
            cls.members_meet_plane_in_lines = all(meet(family[i], plane).dim == 1 for i in members)
            outside = [i for i in range(len(family)) if i not in set(members)]
            cls.outside_avoid_plane = all(meet(family[i], plane).dim == -1 for i in outside)
            cls.outside_meet_in_lines = all(meet(family[i], S).dim == 1 for i in outside)
        out.append(cls)
    return out


@dataclass
class ElementPencil:
    """The lines cut on one element by the special planes of its big spans."""

    index: int
    lines: list[Subspace]
    common: Subspace
    distinct: bool
    concurrent: bool
    at_contact_point: bool
    deficiency_sum: int

    @property
    def big_span_count(self) -> int:
        return len(self.lines)


def element_pencils(family: DualArcFamily, classes: list[TwoNSpaceClass]) -> list[ElementPencil]:
    cov = coverage(family)
    out = []
    for i, E in enumerate(family):
        mine = [c for c in classes if c.kind == "big" and i in c.members]
        lines = [meet(E, c.special_plane) for c in mine]
        common = meet(lines) if lines else E
        contact = False
        if common.dim == 0:
            contact = cov.count(common.basis[0]) == 1
        out.append(ElementPencil(
            index=i, lines=lines, common=common,
            distinct=len(set(lines)) == len(lines),
            concurrent=common.dim == 0,
            at_contact_point=contact,
            deficiency_sum=sum(c.deficiency for c in mine),
        ))
    return out


# -- completion of deficient order-1 dual arcs ---------------------------------------


class _Completer:
    """Backtracking search for one element completing an order-1 dual arc.

    A completing element X must meet every element E in exactly one point, and
    that point must be covered by E alone.  The search adds one such contact
    point at a time (always for an element X does not meet yet), prunes any
    partial span that meets some element in a line or in a doubly covered
    point, and accepts once the span reaches the element dimension.
    """

    def __init__(self, family: DualArcFamily, max_nodes: int):
        self.family = family
        self.F = family.field
        self.N = family.ambient_dim
        self.target = family.params[1]
        self.cov = coverage(family)
        self.perps = [nullspace(E.basis, self.F, self.N + 1) for E in family]
        self.contacts = [_element_contacts(self.cov, i) for i in range(len(family))]
        self.nodes = 0
        self.max_nodes = max_nodes

    def _meets(self, S: Subspace):
        """Return (ok, met) where met[i] says whether S meets element i."""
        F = self.F
        width = self.N + 1
        Sp = nullspace(S.basis, F, width)
        met = np.zeros(len(self.family), dtype=bool)
        for i, Ep in enumerate(self.perps):
            stacked = np.vstack([Sp, Ep]) if Sp.shape[0] else Ep
            dim = width - K.rank(stacked, F) - 1
            if dim > 0:
                return False, met
            if dim == 0:
                pt = nullspace(stacked, F, width)[0]
                if self.cov.count(pt) != 1:
                    return False, met
                met[i] = True
        return True, met

    def search(self) -> Subspace | None:
        empty = Subspace.empty(self.F, self.N)
        return self._dfs(empty, np.zeros(len(self.family), dtype=bool))

    def _dfs(self, S: Subspace, met: np.ndarray) -> Subspace | None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise ExtensionError("search budget exhausted", {"nodes": self.nodes, "partial": S})
        if S.dim == self.target:
            return S if met.all() else None
        unmet = np.flatnonzero(~met)
        if unmet.size == 0:
            return None
        i = int(min(unmet, key=lambda t: (len(self.contacts[t]), t)))
        for c in self.contacts[i]:
            T = span(S, c)
            ok, met_t = self._meets(T)
            if not ok:
                continue
            found = self._dfs(T, met_t)
            if found is not None:
                return found
        return None


def extend_deficient(family: DualArcFamily, delta: int, check_hypotheses: bool = True,
                     max_nodes: int = 100_000) -> DualArcFamily:
    """Complete an order-1 dual arc of size ``(q^(n+1)-1)/(q-1) - delta``.

    Recovered elements are appended in the order found.  Each accepted element
    meets every existing element in exactly one point that no other element
    covers; together with the verified hypotheses on the input this makes the
    enlarged family satisfy the dual-arc axioms, which is re-checked on the
    final family by a sampled :func:`verify`.

    Raises:
        ExtensionError: the search finds no completing element.
    """
    _require_order_one(family)
    n = family.params[1]
    expected = full_size(family.q, n) - delta
    if len(family) != expected:
        raise ValueError(f"family has {len(family)} elements, expected {expected} for delta={delta}")
    if delta == 0:
        return family
    if check_hypotheses:
        rep = verify_t_d1_hypotheses(family, delta)
        if not rep.all_hold:
            raise ExtensionError("hypotheses of the extension theorem fail", {"report": rep})
        if not rep.delta_ok:
            log.warning("delta=%d exceeds the bound %.1f; trying anyway", delta, rep.delta_bound)
    cur = family
    for step in range(delta):
        comp = _Completer(cur, max_nodes)
        X = comp.search()
        if X is None:
            raise ExtensionError(
                f"no completing element found at step {step + 1} of {delta}",
                {"step": step, "nodes": comp.nodes, "size": len(cur),
                 "contact_counts": [len(c) for c in comp.contacts]},
            )
        log.info("recovered element %d after %d search nodes", step + 1, comp.nodes)
        cur = cur.extended([X])
    rep = verify(cur, mode="sampled", k=500)
    if not rep.axioms_hold:
        raise AxiomViolation("completed family fails the dual-arc axioms")
    return cur
