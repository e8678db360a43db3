"""Projective subspaces of PG(N, q) in canonical RREF form.

A :class:`Subspace` stores a read-only integer matrix of field codes in reduced
row-echelon form, so equality of subspaces is equality of the matrices.
Perpendicular complements are taken with respect to the standard dot product
``sum(x_i * y_i)``, which is symmetric and non-degenerate in every
characteristic.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .gf import FieldSpec, make_field

__all__ = [
    "Subspace",
    "span",
    "meet",
    "perp",
    "nullspace",
    "points",
    "normalize",
    "point_keys",
    "gaussian_binomial",
    "count_superspaces",
    "SuperspaceSampler",
    "random_superspace",
    "as_rng",
    "format_subspace",
    "parse_subspace",
]


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


class Subspace:
    """A projective subspace of PG(N, q).

    Args:
        field: the coordinate field.
        basis: ``r x (N+1)`` matrix already in reduced row-echelon form with
            no zero rows.  Use :meth:`from_rows` for arbitrary generators.
    """

    __slots__ = ("field", "basis", "_hash")

    def __init__(self, field: FieldSpec, basis: np.ndarray):
        basis = np.asarray(basis, dtype=np.int64)
        if basis.ndim != 2:
            raise ValueError("basis must be a 2-d matrix")
        basis.setflags(write=False)
        self.field = field
        self.basis = basis
        self._hash = None

    @classmethod
    def from_rows(cls, field: FieldSpec, rows, ambient_dim: int | None = None) -> Subspace:
        M = np.asarray(rows, dtype=np.int64)
        if M.ndim == 1:
            M = M[None, :]
        if M.size == 0:
            if ambient_dim is None:
                if M.ndim == 2 and M.shape[1] > 0:
                    ambient_dim = M.shape[1] - 1
                else:
                    raise ValueError("ambient_dim needed for an empty generator list")
            return cls.empty(field, ambient_dim)
        if ambient_dim is not None and M.shape[1] != ambient_dim + 1:
            raise ValueError(f"vectors of length {M.shape[1]} do not live in PG({ambient_dim}, q)")
        if np.any((M < 0) | (M >= field.q)):
            raise ValueError("coordinate codes out of range")
        R, _ = K.rref(M, field)
        return cls(field, R)

    @classmethod
    def empty(cls, field: FieldSpec, ambient_dim: int) -> Subspace:
        return cls(field, np.zeros((0, ambient_dim + 1), dtype=np.int64))

    @classmethod
    def whole(cls, field: FieldSpec, ambient_dim: int) -> Subspace:
        return cls(field, np.eye(ambient_dim + 1, dtype=np.int64))

    @classmethod
    def point(cls, field: FieldSpec, coords) -> Subspace:
        v = np.asarray(coords, dtype=np.int64)
        if not v.any():
            raise ValueError("the zero vector is not a projective point")
        return cls.from_rows(field, v[None, :])

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[1] - 1

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[0] - 1

    @property
    def pivots(self) -> np.ndarray:
        if self.rank == 0:
            return np.zeros(0, dtype=np.int64)
        return np.argmax(self.basis != 0, axis=1)

    @property
    def key(self) -> bytes:
        return self.basis.tobytes()

    def _compatible(self, other: Subspace) -> None:
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")
        if other.ambient_dim != self.ambient_dim:
            raise ValueError(f"ambient mismatch: PG({self.ambient_dim}) vs PG({other.ambient_dim})")

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.basis.shape, self.key))
        return self._hash

    def __le__(self, other: Subspace) -> bool:
        """``A <= B`` iff A is contained in B."""
        return other.contains(self)

    def contains(self, other) -> bool:
        """Containment of a Subspace or of a single coordinate vector."""
        if isinstance(other, Subspace):
            self._compatible(other)
            if other.rank > self.rank:
                return False
            rows = other.basis
        else:
            rows = np.asarray(other, dtype=np.int64).reshape(1, -1)
            if rows.shape[1] != self.ambient_dim + 1:
                raise ValueError("vector length does not match the ambient space")
        if rows.shape[0] == 0:
            return True
        if self.rank == 0:
            return not rows.any()
        return K.rank(np.vstack([self.basis, rows]), self.field) == self.rank

    def __repr__(self):
        return f"Subspace(dim={self.dim}, PG({self.ambient_dim},{self.field.q}))"

    def __reduce__(self):
        return (Subspace, (self.field, np.array(self.basis)))


def _generators(items: Iterable, field: FieldSpec | None, ambient_dim: int | None):
    mats = []
    for it in items:
        if isinstance(it, Subspace):
            if field is None:
                field = it.field
            elif it.field != field:
                raise ValueError(f"field mismatch: {field} vs {it.field}")
            if ambient_dim is None:
                ambient_dim = it.ambient_dim
            elif it.ambient_dim != ambient_dim:
                raise ValueError("ambient dimension mismatch")
            mats.append(it.basis)
        else:
            v = np.asarray(it, dtype=np.int64)
            if v.ndim == 1:
                v = v[None, :]
            if ambient_dim is None:
                ambient_dim = v.shape[1] - 1
            elif v.shape[1] != ambient_dim + 1:
                raise ValueError("vector length does not match the ambient space")
            mats.append(v)
    if field is None:
        raise ValueError("cannot infer the field from raw vectors; pass field=")
    if ambient_dim is None:
        raise ValueError("nothing to span")
    return field, ambient_dim, mats


def span(*items, field: FieldSpec | None = None, ambient_dim: int | None = None) -> Subspace:
    """Smallest subspace containing every given Subspace or coordinate vector.

    A single list/tuple argument is unpacked, so ``span(list_of_spaces)`` works.
    """
    if len(items) == 1 and isinstance(items[0], (list, tuple)) and (
        not items[0] or isinstance(items[0][0], (Subspace, list, tuple, np.ndarray))
    ):
        items = tuple(items[0])
    field, ambient_dim, mats = _generators(items, field, ambient_dim)
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        return Subspace.empty(field, ambient_dim)
    return Subspace.from_rows(field, np.vstack(mats), ambient_dim)


def nullspace(M: np.ndarray, field: FieldSpec, ncols: int | None = None) -> np.ndarray:
    """Basis (rows) of ``{y : M y = 0}``, in RREF."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1] if ncols is None else ncols
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = K.rref(M, field)
    free = [c for c in range(n) if c not in set(piv.tolist())]
    if not free:
        return np.zeros((0, n), dtype=np.int64)
    N = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        N[k, f] = 1
        N[k, piv] = field.neg_arr(R[:, f])
    out, _ = K.rref(N, field)
    return out


def perp(A: Subspace) -> Subspace:
    """Orthogonal complement under the standard dot product."""
    return Subspace(A.field, nullspace(A.basis, A.field, A.ambient_dim + 1))


def meet(*spaces: Subspace) -> Subspace:
    """Intersection, computed as ``perp(span(perp(A), perp(B), ...))``."""
    if len(spaces) == 1 and isinstance(spaces[0], (list, tuple)):
        spaces = tuple(spaces[0])
    if not spaces:
        raise ValueError("meet of nothing")
    first = spaces[0]
    for s in spaces[1:]:
        first._compatible(s)
    if len(spaces) == 1:
        return first
    stacked = np.vstack([nullspace(s.basis, s.field, s.ambient_dim + 1) for s in spaces])
    return Subspace(first.field, nullspace(stacked, first.field, first.ambient_dim + 1))


def normalize(vectors: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Scale each nonzero row so that its first nonzero entry is 1."""
    V = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    lead_idx = np.argmax(V != 0, axis=1)
    lead = V[np.arange(V.shape[0]), lead_idx]
    if np.any(lead == 0):
        raise ValueError("zero vector has no projective representative")
    scale = field.inv_table[lead]
    return field.mul_arr(V, scale[:, None])


def _normalized_coefficients(field: FieldSpec, r: int) -> np.ndarray:
    q = field.q
    blocks = []
    for lead in range(r):
        tail = r - 1 - lead
        n = q**tail
        C = np.zeros((n, r), dtype=np.int64)
        C[:, lead] = 1
        if tail:
            grid = np.indices((q,) * tail).reshape(tail, -1).T
            C[:, lead + 1 :] = grid
        blocks.append(C)
    return np.vstack(blocks) if blocks else np.zeros((0, r), dtype=np.int64)


def points(A: Subspace) -> np.ndarray:
    """Canonical representatives of all points of A, sorted lexicographically.

    Returns an array of shape ``((q^r - 1)/(q - 1), N + 1)``.
    """
    if A.rank == 0:
        return np.zeros((0, A.ambient_dim + 1), dtype=np.int64)
    C = _normalized_coefficients(A.field, A.rank)
    P = K.matmul(C, A.basis, A.field)
    order = np.lexsort(P.T[::-1])
    return P[order]


def point_keys(vectors: np.ndarray, q: int) -> np.ndarray | list:
    """Injective integer keys for canonical point representatives.

    Uses int64 when ``q^(N+1)`` fits, Python tuples otherwise.
    """
    V = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    width = V.shape[1]
    if width * np.log2(max(q, 2)) < 62:
        powers = q ** np.arange(width - 1, -1, -1, dtype=np.int64)
        return V @ powers
    return [tuple(row) for row in V.tolist()]


def gaussian_binomial(m: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of an m-dimensional vector space over GF(q)."""
    if k < 0 or k > m:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _check_super(A: Subspace, target_dim: int, within: Subspace | None) -> Subspace:
    W = Subspace.whole(A.field, A.ambient_dim) if within is None else within
    A._compatible(W)
    if not W.contains(A):
        raise ValueError("A is not contained in the enclosing space")
    if not A.dim <= target_dim <= W.dim:
        raise ValueError(f"target dimension {target_dim} outside [{A.dim}, {W.dim}]")
    return W


def count_superspaces(A: Subspace, target_dim: int, within: Subspace | None = None) -> int:
    """Number of ``target_dim``-subspaces of ``within`` (default: PG(N,q)) containing A."""
    W = _check_super(A, target_dim, within)
    return gaussian_binomial(W.dim - A.dim, target_dim - A.dim, A.field.q)


class SuperspaceSampler:
    """Uniform sampler of subspaces ``A <= X <= W`` with ``dim X = target_dim``.

    Superspaces of A inside W correspond bijectively to subspaces of a fixed
    complement C of A in W; a uniformly random full-rank ``k x m`` matrix has a
    uniformly distributed row space, which is lifted through C.
    """

    def __init__(self, A: Subspace, target_dim: int, within: Subspace | None = None):
        W = _check_super(A, target_dim, within)
        self.A = A
        self.W = W
        self.target_dim = target_dim
        self.k = target_dim - A.dim
        F = A.field
        comp = []
        cur = A.basis
        for row in W.basis:
            trial = np.vstack([cur, row[None, :]])
            if K.rank(trial, F) > cur.shape[0]:
                comp.append(row)
                cur = trial
        self.complement = np.array(comp, dtype=np.int64).reshape(len(comp), A.ambient_dim + 1)
        self.m = self.complement.shape[0]

    def sample_coordinates(self, rng: np.random.Generator) -> np.ndarray:
        """RREF coordinates (w.r.t. the complement) of a uniform superspace."""
        F = self.A.field
        if self.k == 0:
            return np.zeros((0, self.m), dtype=np.int64)
        while True:
            M = rng.integers(0, F.q, size=(self.k, self.m), dtype=np.int64)
            R, _ = K.rref(M, F, copy=False)
            if R.shape[0] == self.k:
                return R

    def lift(self, coords: np.ndarray) -> Subspace:
        F = self.A.field
        if coords.shape[0] == 0:
            return self.A
        rows = K.matmul(coords, self.complement, F)
        return span(self.A, rows)

    def coordinates_of(self, X: Subspace) -> np.ndarray:
        """Inverse of :meth:`lift` for a superspace X of A inside W."""
        F = self.A.field
        if not (X.contains(self.A) and self.W.contains(X)) or X.dim != self.target_dim:
            raise ValueError("X is not a superspace of the sampler's kind")
        # solve X's rows modulo A in the basis [A; C]
        full = np.vstack([self.A.basis, self.complement])  # basis of W
        coords = []
        for row in X.basis:
            aug = np.vstack([full, row[None, :]]).T
            ns = nullspace(aug, F)
            v = ns[0]
            scale = F.neg_arr(F.inv_table[v[-1]])
            coeff = F.mul_arr(v[:-1], scale)
            coords.append(coeff[self.A.rank :])
        R, _ = K.rref(np.array(coords, dtype=np.int64), F)
        return R

    def sample(self, rng) -> Subspace:
        return self.lift(self.sample_coordinates(as_rng(rng)))


def random_superspace(A: Subspace, target_dim: int, seed=None, within: Subspace | None = None) -> Subspace:
    """Uniformly random ``target_dim``-subspace of ``within`` containing A."""
    return SuperspaceSampler(A, target_dim, within).sample(as_rng(seed))


# -- text format -------------------------------------------------------------------


def format_subspace(A: Subspace) -> str:
    F = A.field
    lines = [f"q={F.p}^{F.e} N={A.ambient_dim} r={A.rank}"]
    for row in A.basis:
        lines.append(" ".join(F.format_code(int(c)) for c in row))
    return "\n".join(lines) + "\n"


def _parse_header(line: str) -> dict:
    out = {}
    for tok in line.split():
        if "=" not in tok:
            raise ValueError(f"malformed header token {tok!r}")
        k, v = tok.split("=", 1)
        out[k] = v
    return out


def parse_subspace_lines(lines: Sequence[str], start: int = 0) -> tuple[Subspace, int]:
    """Parse one subspace block beginning at ``lines[start]``; return it and the next index."""
    hdr = _parse_header(lines[start])
    try:
        p_str, e_str = hdr["q"].split("^")
        N = int(hdr["N"])
        r = int(hdr["r"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad subspace header {lines[start]!r}") from exc
    F = make_field(int(p_str), int(e_str))
    rows = []
    for i in range(r):
        toks = lines[start + 1 + i].split()
        if len(toks) != N + 1:
            raise ValueError(f"row {i} has {len(toks)} entries, expected {N + 1}")
        rows.append([F.parse_code(t) for t in toks])
    if r == 0:
        return Subspace.empty(F, N), start + 1
    S = Subspace.from_rows(F, rows, N)
    if S.rank != r:
        raise ValueError("subspace rows are linearly dependent")
    return S, start + 1 + r


def parse_subspace(text: str) -> Subspace:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    S, _ = parse_subspace_lines(lines)
    return S


def iter_subsets(n: int, j: int):
    return itertools.combinations(range(n), j)
