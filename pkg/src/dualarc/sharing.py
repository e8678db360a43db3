"""Threshold secret sharing built on generalised arcs.

Variant 1 (hyperplane secret): the shares are the elements of an arc placed
inside a secret hyperplane of PG(n+1, q); any k of them span it.

Variant 2 (subspace secret): one arc element is the secret, the others are
the shares, and a public space one dimension larger than the secret meets
the arc's hyperplane exactly in the secret.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import _kernels as K
from .arcs import DualArcFamily, verify
from .gf import FieldSpec, field_of_order
from .linalg import (
    Subspace,
    SuperspaceSampler,
    as_rng,
    count_superspaces,
    format_subspace,
    meet,
    parse_subspace_lines,
    normalize,
    nullspace,
    points,
    span,
)
from .veronese import VeroneseContext, arc_element

__all__ = [
    "SchemeParams",
    "ShareBundle",
    "AttackEstimate",
    "CubicDemo",
    "deal",
    "reconstruct",
    "attack_probability",
    "simulate_attack",
    "twisted_cubic_secret",
    "deal_twisted_cubic",
    "InsufficientSharesError",
    "ReconstructionError",
    "format_share",
    "format_public",
    "format_recovered",
    "format_secret",
    "parse_share",
    "parse_public",
]

CHUNK = 5000


class InsufficientSharesError(ValueError):
    def __init__(self, message: str, span_dim: int, needed: int):
        super().__init__(message)
        self.span_dim = span_dim
        self.needed = needed


class ReconstructionError(ValueError):
    """The shares do not produce a subspace of the expected dimension."""


@dataclass(frozen=True)
class SchemeParams:
    """Public parameters of a k-out-of-m scheme over an arc with parameters ``(n, d_1, ..., d_{k-1})``."""

    variant: int
    q: int
    n: int
    k: int
    arc_params: tuple[int, ...]
    participant_count: int

    def __post_init__(self):
        if self.variant not in (1, 2):
            raise ValueError("variant must be 1 (hyperplane secret) or 2 (subspace secret)")
        if len(self.arc_params) != self.k or self.arc_params[0] != self.n:
            raise ValueError(f"arc parameters {self.arc_params} do not fit n={self.n}, k={self.k}")

    @classmethod
    def from_arc(cls, arc: DualArcFamily, variant: int) -> SchemeParams:
        if arc.kind != "arc":
            raise ValueError("secret sharing needs a generalised arc (dualize a dual arc first)")
        m = len(arc) - (1 if variant == 2 else 0)
        return cls(variant, arc.q, arc.ambient_dim, len(arc.params), arc.params, m)

    def d(self, i: int) -> int:
        """Span dimension of i arc elements, with ``d_0 = -1`` and ``d_k = n``."""
        if i == 0:
            return -1
        if i >= self.k:
            return self.n
        return self.arc_params[i]

    @property
    def name(self) -> str:
        return "hyperplane-secret" if self.variant == 1 else "subspace-secret"


@dataclass
class ShareBundle:
    """Everything the dealer produced.  ``shares`` maps participant id to share."""

    params: SchemeParams
    field: FieldSpec
    ambient_dim: int
    host: Subspace
    shares: dict[int, Subspace]
    secret: Subspace
    public: Subspace | None = None
    dealer_seed: int | None = None
    secret_index: int | None = None
    leak_profile: tuple[Fraction, ...] | None = None

    def share_list(self, ids: Sequence[int] | None = None) -> list[Subspace]:
        ids = sorted(self.shares) if ids is None else ids
        return [self.shares[i] for i in ids]


@dataclass
class AttackEstimate:
    i: int
    p_exact: Fraction
    p_empirical: float
    trials: int
    matches: int
    tolerance: float
    within_tolerance: bool
    candidates: int

    def row(self) -> str:
        return (
            f"{self.i:>3} {str(self.p_exact):>12} {float(self.p_exact):>12.6f} "
            f"{self.p_empirical:>12.6f} {self.tolerance:>10.6f} {self.trials:>8} "
            f"{'yes' if self.within_tolerance else 'NO':>4}"
        )

    @staticmethod
    def header() -> str:
        return f"{'i':>3} {'p_exact':>12} {'(float)':>12} {'p_empirical':>12} {'4sigma':>10} {'trials':>8} {'ok':>4}"


# -- dealing ---------------------------------------------------------------------------


def _random_invertible(F: FieldSpec, size: int, rng) -> np.ndarray:
    while True:
        G = rng.integers(0, F.q, size=(size, size), dtype=np.int64)
        if K.rank(G, F) == size:
            return G


def _embed(S: Subspace, G: np.ndarray, F: FieldSpec) -> Subspace:
    """Image of a subspace of PG(N) under ``v -> (v, 0) G`` into PG(N+1)."""
    N1 = G.shape[0]
    if S.rank == 0:
        return Subspace.empty(F, N1 - 1)
    rows = K.matmul(S.basis, G[: S.ambient_dim + 1], F)
    return Subspace.from_rows(F, rows, N1 - 1)


def _check_arc(arc: DualArcFamily) -> None:
    if arc.kind != "arc":
        raise ValueError("secret sharing needs a generalised arc (dualize a dual arc first)")
    rep = verify(arc, mode="sampled", k=200)
    if not (rep.axioms_hold and rep.regular):
        raise ValueError(f"arc fails verification ({rep.failure_count} failures)")


def deal(arc: DualArcFamily, variant: int = 1, seed: int | None = None, check: bool = True) -> ShareBundle:
    """Place ``arc`` in a random hyperplane of PG(n+1, q) and hand out shares.

    Variant 1 keeps the hyperplane secret and gives every element out.
    Variant 2 picks a random element as the secret, publishes a random
    space one dimension larger through it that is not inside the hyperplane
    (rejection sampling), and gives out the other elements.
    """
    if seed is None:
        raise ValueError("deal needs an explicit seed")
    if check:
        _check_arc(arc)
    params = SchemeParams.from_arc(arc, variant)
    F = arc.field
    rng = as_rng(seed)
    N = arc.ambient_dim
    G = _random_invertible(F, N + 2, rng)
    host = Subspace.from_rows(F, G[: N + 1], N + 1)
    images = [_embed(E, G, F) for E in arc]
    if variant == 1:
        shares = {i + 1: S for i, S in enumerate(images)}
        return ShareBundle(params, F, N + 1, host, shares, host, None, seed)
    j = int(rng.integers(len(images)))
    secret = images[j]
    public = _public_through(secret, host, rng)
    rest = [S for t, S in enumerate(images) if t != j]
    shares = {i + 1: S for i, S in enumerate(rest)}
    return ShareBundle(params, F, N + 1, host, shares, secret, public, seed, secret_index=j)


def _public_through(secret: Subspace, host: Subspace, rng) -> Subspace:
    sampler = SuperspaceSampler(secret, secret.dim + 1)
    while True:
        X = sampler.sample(rng)
        if not host.contains(X):
            return X


# -- reconstruction -----------------------------------------------------------------


def reconstruct(params: SchemeParams, shares: Sequence[Subspace], public: Subspace | None = None) -> Subspace:
    """Recover the secret from at least k distinct shares.

    Raises:
        InsufficientSharesError: fewer than k distinct shares; the message
            names the dimension of their span.
        ReconstructionError: the shares are not from one bundle.
    """
    uniq = list(dict.fromkeys(shares))
    if not uniq:
        raise InsufficientSharesError(f"no shares given; {params.k} needed", -1, params.k)
    S = span(uniq)
    if len(uniq) < params.k:
        raise InsufficientSharesError(
            f"{len(uniq)} shares span only a {S.dim}-space, below the required {params.n}; "
            f"{params.k} shares are needed",
            S.dim,
            params.k,
        )
    if S.dim != params.n:
        raise ReconstructionError(f"shares span a {S.dim}-space, expected {params.n}")
    if params.variant == 1:
        return S
    if public is None:
        raise ValueError("variant 2 needs the public subspace")
    X = meet(S, public)
    if X.dim != public.dim - 1:
        raise ReconstructionError(f"public space meets the shares' span in dimension {X.dim}")
    return X


# -- attack probabilities ---------------------------------------------------------------


def attack_probability(params: SchemeParams, i: int) -> Fraction:
    """Chance that a holder of i shares guesses the secret.

    Variant 1: ``(q-1)/(q^(n+1-d_i)-1)`` for ``0 <= i < k``.
    Variant 2: ``(q-1)/(q^(d_{i+1}-d_i+1)-1)`` for ``0 <= i < k``, and 1 at ``i = k``.
    """
    q, k = params.q, params.k
    if params.variant == 1:
        if not 0 <= i < k:
            raise ValueError(f"i must lie in [0, {k}) for variant 1")
        return Fraction(q - 1, q ** (params.n + 1 - params.d(i)) - 1)
    if not 0 <= i <= k:
        raise ValueError(f"i must lie in [0, {k}] for variant 2")
    if i == k:
        return Fraction(1)
    return Fraction(q - 1, q ** (params.d(i + 1) - params.d(i) + 1) - 1)


def _exact_for(bundle: ShareBundle, i: int) -> Fraction:
    if bundle.leak_profile is not None:
        return bundle.leak_profile[i]
    return attack_probability(bundle.params, i)


def _attack_target(bundle: ShareBundle, S: Subspace):
    """(known subspace, dimension of guess, enclosing space) for a given span of shares."""
    if bundle.params.variant == 1:
        return S, bundle.secret.dim, None
    return meet(S, bundle.public), bundle.secret.dim, bundle.public


def simulate_attack(bundle: ShareBundle, i: int, trials: int, seed: int,
                    p_exact: Fraction | None = None) -> AttackEstimate:
    """Monte-Carlo estimate of the guessing attack with i random shares.

    Each trial picks i distinct participants, forms what they know (the span
    of their shares, met with the public space in variant 2) and guesses a
    uniformly random subspace of the secret's dimension through it.  Trials
    run in chunks of fixed size, each with its own substream of ``seed``, so
    the result does not depend on how chunks are scheduled.
    """
    k = bundle.params.k
    if not 0 <= i < k:
        raise ValueError(f"i must lie in [0, {k})")
    if trials < 1:
        raise ValueError("trials must be positive")
    if p_exact is None:
        p_exact = _exact_for(bundle, i)
    F = bundle.field
    ids = sorted(bundle.shares)
    cache: dict = {}
    candidates = None

    def prepared(subset):
        nonlocal candidates
        if subset not in cache:
            S = span([bundle.shares[t] for t in subset], field=F, ambient_dim=bundle.ambient_dim)
            known, tdim, within = _attack_target(bundle, S)
            sampler = SuperspaceSampler(known, tdim, within)
            target = sampler.coordinates_of(bundle.secret)
            if candidates is None:
                candidates = count_superspaces(known, tdim, within)
            cache[subset] = (sampler, target)
        return cache[subset]

    n_chunks = -(-trials // CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    matches = 0
    done = 0
    for child in children:
        rng = np.random.default_rng(child)
        size = min(CHUNK, trials - done)
        for _ in range(size):
            subset = tuple(sorted(ids[t] for t in rng.choice(len(ids), size=i, replace=False))) if i else ()
            sampler, target = prepared(subset)
            guess = sampler.sample_coordinates(rng)
            if np.array_equal(guess, target):
                matches += 1
        done += size
    p_emp = matches / trials
    pe = float(p_exact)
    tol = 4 * math.sqrt(pe * (1 - pe) / trials)
    return AttackEstimate(i, Fraction(p_exact), p_emp, trials, matches, tol,
                          abs(p_emp - pe) <= tol, int(candidates))


# -- twisted cubic example -------------------------------------------------------------


@dataclass
class CubicDemo:
    """Data of the twisted-cubic walkthrough for ``n = 2, d = 2``.

    Coordinates inside the element ``pi = A([1,0,0])`` are taken on its basis
    ``e_111, e_112, e_122, e_222``.  In those coordinates every intersection
    point is ``(1, -a, a^2, -a^3)`` or ``(0, 0, 0, 1)``; flipping the signs of
    the second and fourth coordinate gives the standard twisted cubic.
    """

    q: int
    element: Subspace
    intersection_points: list[Subspace]
    local_points: np.ndarray
    parameters: list
    is_twisted_cubic: bool
    no_four_coplanar: bool
    secret_plane: Subspace
    plane_equation: tuple[int, ...]
    leak_profile: tuple[Fraction, ...]


def _leak_profile(q: int) -> tuple[Fraction, ...]:
    return (
        Fraction(1, q**3 + q**2 + q + 1),
        Fraction(1, q**3 + q**2 + q + 1),
        Fraction(1, q**2 + q + 1),
        Fraction(1, q + 1),
    )


def twisted_cubic_secret(ctx: VeroneseContext, seed: int | None = 0) -> CubicDemo:
    """Intersection points on ``A([1,0,0])`` and a plane of it avoiding them.

    The plane is drawn uniformly (from ``seed``) among the planes of the
    element that contain none of the q+1 points.
    """
    if ctx.n != 2 or ctx.d != 2:
        raise ValueError("the twisted-cubic example needs n = 2, d = 2")
    F = ctx.spec
    q = F.q
    P0 = np.array([1, 0, 0])
    pi = arc_element(ctx, P0)
    local_idx = [ctx.index[m] for m in ((1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2))]
    if not np.array_equal(np.sort(np.flatnonzero(pi.basis.any(axis=0))), np.sort(local_idx)):
        raise AssertionError("A([1,0,0]) is not the coordinate space of e_111..e_222")

    # one line through P0 per parameter a, plus the line <P0, P1>
    line_reps = [("a", a, np.array([0, a, 1])) for a in range(q)] + [("inf", None, np.array([0, 1, 0]))]
    pts, params = [], []
    for tag, a, R in line_reps:
        meets = set()
        for b in range(q):
            Q = R.copy()
            Q[0] = b
            M = meet(pi, arc_element(ctx, Q))
            if M.dim != 0:
                raise AssertionError("two arc elements do not meet in a point")
            meets.add(M)
        if len(meets) != 1:
            raise AssertionError("elements of one line do not share their point on pi")
        pts.append(meets.pop())
        params.append(a if tag == "a" else "inf")
    local = np.array([P.basis[0][local_idx] for P in pts], dtype=np.int64)

    # (c0, c1, c2, c3) -> (c0, -c1, c2, -c3) should give [1, b, b^2, b^3] / [0,0,0,1]
    flip = local.copy()
    flip[:, 1] = F.neg_arr(flip[:, 1])
    flip[:, 3] = F.neg_arr(flip[:, 3])
    flip = normalize(flip, F)
    cubic = {(1, b, F.s_mul(b, b), F.s_pow(b, 3)) for b in range(q)} | {(0, 0, 0, 1)}
    is_cubic = {tuple(int(x) for x in row) for row in flip} == cubic and len(pts) == q + 1
    no4 = all(K.rank(local[list(c)], F) == 4 for c in itertools.combinations(range(len(pts)), 4))

    # planes u.z = 0 of pi avoiding every point
    rng = as_rng(seed)
    cands = []
    for u in points(Subspace.whole(F, 3)):
        vals = K.matmul(local, u[:, None], F)[:, 0]
        if vals.all():
            cands.append(u)
    if not cands:
        raise AssertionError("no plane of pi avoids the intersection points")
    u = cands[int(rng.integers(len(cands)))]
    plane_local = nullspace(u[None, :], F, 4)
    rows = np.zeros((3, ctx.dim_w), dtype=np.int64)
    rows[:, local_idx] = plane_local
    plane = Subspace.from_rows(F, rows, ctx.ambient_dim)
    return CubicDemo(q, pi, pts, local, params, is_cubic, no4, plane,
                     tuple(int(x) for x in u), _leak_profile(q))


def deal_twisted_cubic(ctx: VeroneseContext, seed: int, check: bool = True) -> tuple[ShareBundle, CubicDemo]:
    """Variant-2 style scheme whose secret is a plane of ``A([1,0,0])`` avoiding the cubic.

    All other arc elements are shares and a random 3-space through the secret
    plane, not inside the host hyperplane, is public.
    """
    from .veronese import build_arc

    rng = as_rng(seed)
    demo = twisted_cubic_secret(ctx, rng)
    arc = build_arc(ctx)
    if check:
        _check_arc(arc)
    F = ctx.spec
    N = ctx.ambient_dim
    G = _random_invertible(F, N + 2, rng)
    host = Subspace.from_rows(F, G[: N + 1], N + 1)
    j = arc.elements.index(demo.element)
    secret = _embed(demo.secret_plane, G, F)
    public = _public_through(secret, host, rng)
    rest = [_embed(E, G, F) for t, E in enumerate(arc) if t != j]
    params = SchemeParams.from_arc(arc, 2)
    bundle = ShareBundle(params, F, N + 1, host, {i + 1: S for i, S in enumerate(rest)},
                         secret, public, seed, secret_index=j, leak_profile=demo.leak_profile)
    return bundle, demo


# -- files ---------------------------------------------------------------------------------


def _header(params: SchemeParams, **extra) -> str:
    toks = [f"scheme={params.variant}", f"q={params.q}", f"n={params.n}", f"k={params.k}",
            f"params={','.join(map(str, params.arc_params))}"]
    toks += [f"{k}={v}" for k, v in extra.items()]
    return " ".join(toks)


def format_share(bundle: ShareBundle, pid: int) -> str:
    return _header(bundle.params, participant=pid) + "\n" + format_subspace(bundle.shares[pid])


def format_public(bundle: ShareBundle) -> str:
    has = bundle.public is not None
    text = _header(bundle.params, participants=bundle.params.participant_count, public=int(has)) + "\n"
    if has:
        text += format_subspace(bundle.public)
    return text


def format_secret(bundle: ShareBundle) -> str:
    return format_recovered(bundle.params, bundle.secret)


def format_recovered(params: SchemeParams, secret: Subspace) -> str:
    """Secret file text for ``secret`` under ``params``."""
    return _header(params, secret=1) + "\n" + format_subspace(secret)


def _parse_header(line: str) -> dict:
    out = {}
    for tok in line.split():
        if "=" not in tok:
            raise ValueError(f"malformed header token {tok!r}")
        k, v = tok.split("=", 1)
        out[k] = v
    return out


def _params_from(hdr: Mapping[str, str], participants: int) -> SchemeParams:
    try:
        return SchemeParams(int(hdr["scheme"]), int(hdr["q"]), int(hdr["n"]), int(hdr["k"]),
                            tuple(int(x) for x in hdr["params"].split(",")), participants)
    except KeyError as exc:
        raise ValueError(f"missing header field {exc}") from exc


def _lines(text: str) -> list[str]:
    return [ln for ln in text.splitlines() if ln.strip()]


def parse_share(text: str) -> tuple[SchemeParams, int, Subspace]:
    lines = _lines(text)
    hdr = _parse_header(lines[0])
    if "participant" not in hdr:
        raise ValueError("not a share file")
    S, _ = parse_subspace_lines(lines, 1)
    field_of_order(int(hdr["q"]))
    return _params_from(hdr, 0), int(hdr["participant"]), S


def parse_public(text: str) -> tuple[SchemeParams, Subspace | None]:
    lines = _lines(text)
    hdr = _parse_header(lines[0])
    params = _params_from(hdr, int(hdr.get("participants", 0)))
    pub = None
    if int(hdr.get("public", 0)):
        pub, _ = parse_subspace_lines(lines, 1)
    return params, pub


def parse_secret(text: str) -> Subspace:
    lines = _lines(text)
    S, _ = parse_subspace_lines(lines, 1)
    return S
