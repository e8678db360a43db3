"""Exact arithmetic in GF(p^e).

Elements are encoded as integers ``c = sum(coeff[i] * p**i)`` where ``coeff``
is the ascending coefficient list of the residue polynomial.  The integer code
is what every array in the package stores; :class:`FieldElement` is a thin
wrapper for scalar work and tests.

Three arithmetic modes are used behind the same interface:

* prime fields (``e == 1``): plain modular arithmetic,
* small extension fields (``q <= TABLE_LIMIT``): full addition and
  multiplication tables,
* large extension fields: exp/log tables for multiplication and digit-wise
  addition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

__all__ = [
    "FieldSpec",
    "FieldElement",
    "make_field",
    "add",
    "sub",
    "mul",
    "inv",
    "neg",
    "enumerate_elements",
    "is_prime",
    "prime_power",
    "MAX_ORDER",
    "TABLE_LIMIT",
]

MAX_ORDER = 1 << 20
TABLE_LIMIT = 1024

MODE_PRIME = 0
MODE_TABLE = 1
MODE_LOGEXP = 2

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split a prime power ``q`` into ``(p, e)``; raise ValueError otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    factors = _prime_factors(q)
    if len(factors) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = factors[0]
    e = 0
    while q > 1:
        q //= p
        e += 1
    return p, e


# -- polynomials over GF(p), ascending coefficient lists ---------------------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _poly_trim(a)
    return a


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg <= 1:
        return deg == 1
    if poly[0] == 0:
        return False
    for dd in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=dd):
            divisor = list(low) + [1]
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def _least_irreducible(p: int, e: int) -> tuple[int, ...]:
    # lexicographic on (c0, c1, ..., c_{e-1}) with c0 most significant
    for low in itertools.product(range(p), repeat=e):
        cand = list(low) + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible polynomial of degree {e} over GF({p})")


# -- the field ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(p^e) with a fixed monic irreducible modulus.

    Equality and hashing only look at ``(p, e, modulus)``; the arithmetic
    tables are derived lazily and cached on the instance.
    """

    p: int
    e: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def mode(self) -> int:
        if self.e == 1:
            return MODE_PRIME
        if self.q <= TABLE_LIMIT:
            return MODE_TABLE
        return MODE_LOGEXP

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (make_field, (self.p, self.e))

    # -- code <-> coefficients ------------------------------------------------

    def digits(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def from_digits(self, coeffs) -> int:
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + int(c) % self.p
        return code

    # -- tables ---------------------------------------------------------------

    def _poly_mul_code(self, a: int, b: int) -> int:
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.from_digits(_poly_mod(prod, list(self.modulus), self.p))

    @cached_property
    def generator(self) -> int:
        """Smallest code of a primitive element (order q - 1)."""
        q = self.q
        if q == 2:
            return 1
        factors = _prime_factors(q - 1)
        for g in range(2, q) if self.e == 1 else range(1, q):
            if all(self._pow_slow(g, (q - 1) // f) != 1 for f in factors):
                return g
        raise AssertionError("multiplicative group is not cyclic")

    def _pow_slow(self, a: int, k: int) -> int:
        if self.e == 1:
            return pow(a, k, self.p)
        result, base = 1, a
        while k:
            if k & 1:
                result = self._poly_mul_code(result, base)
            base = self._poly_mul_code(base, base)
            k >>= 1
        return result

    @cached_property
    def exp_table(self) -> np.ndarray:
        """``exp[k] = g**k`` for ``0 <= k < 2(q-1)`` (doubled to skip a modulo)."""
        q = self.q
        out = np.zeros(2 * (q - 1), dtype=np.int64)
        g = self.generator
        if self.e == 1:
            x = 1
            for k in range(q - 1):
                out[k] = x
                x = x * g % self.p
        else:
            # doubling: exp[L:2L] = exp[0:L] * g^L
            out[0] = 1
            L = 1
            while L < q - 1:
                gl = self._poly_mul_code(int(out[L - 1]), g)
                m = min(L, q - 1 - L)
                out[L : L + m] = self._mul_const_vec(out[:m], gl)
                L += m
        out[q - 1 :] = out[: q - 1]
        return out

    def _scale_code(self, code: int, s: int) -> int:
        return self.from_digits(tuple(c * s % self.p for c in self.digits(code)))

    def _mul_const_vec(self, arr: np.ndarray, c: int) -> np.ndarray:
        """Table-free ``arr * c``: multiplication by c is GF(p)-linear on digits."""
        p = self.p
        out = np.zeros_like(arr)
        place = 1
        for i in range(self.e):
            b = self._poly_mul_code(place, c)  # x^i * c
            scaled = np.array([self._scale_code(b, t) for t in range(p)], dtype=np.int64)
            out = self._add_digits(out, scaled[arr // place % p])
            place *= p
        return out

    @cached_property
    def log_table(self) -> np.ndarray:
        out = np.zeros(self.q, dtype=np.int64)
        out[self.exp_table[: self.q - 1]] = np.arange(self.q - 1)
        return out

    @cached_property
    def neg_table(self) -> np.ndarray:
        codes = np.arange(self.q, dtype=np.int64)
        return self._neg_vec(codes)

    @cached_property
    def inv_table(self) -> np.ndarray:
        q = self.q
        out = np.zeros(q, dtype=np.int64)
        if q > 2:
            lg = self.log_table[1:]
            out[1:] = self.exp_table[(q - 1 - lg) % (q - 1)]
        else:
            out[1] = 1
        return out

    @cached_property
    def add_table(self) -> np.ndarray:
        if self.mode == MODE_LOGEXP:
            raise ValueError("no addition table for large extension fields")
        codes = np.arange(self.q, dtype=np.int64)
        return self._add_digits(codes[:, None], codes[None, :])

    @cached_property
    def mul_table(self) -> np.ndarray:
        if self.mode == MODE_LOGEXP:
            raise ValueError("no multiplication table for large extension fields")
        codes = np.arange(self.q, dtype=np.int64)
        return self._mul_logexp(codes[:, None], codes[None, :])

    @cached_property
    def kernel_args(self) -> tuple:
        """Flat argument tuple consumed by the compiled kernels."""
        dummy = np.zeros((1, 1), dtype=np.int64)
        mode = self.mode
        if mode == MODE_PRIME:
            return (mode, self.p, self.e, dummy, dummy, dummy[0], dummy[0], self.inv_table)
        if mode == MODE_TABLE:
            return (mode, self.p, self.e, self.add_table, self.mul_table,
                    dummy[0], dummy[0], self.inv_table)
        return (mode, self.p, self.e, dummy, dummy, self.exp_table, self.log_table,
                self.inv_table)

    # -- vectorised arithmetic on code arrays ---------------------------------

    def _add_digits(self, a, b):
        p = self.p
        if p == 2:
            return np.bitwise_xor(a, b)
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        place = 1
        for _ in range(self.e):
            out += ((a // place % p + b // place % p) % p) * place
            place *= p
        return out

    def _neg_vec(self, a):
        p = self.p
        a = np.asarray(a, dtype=np.int64)
        if p == 2:
            return a.copy()
        if self.e == 1:
            return (-a) % p
        out = np.zeros_like(a)
        place = 1
        for _ in range(self.e):
            out += ((-(a // place % p)) % p) * place
            place *= p
        return out

    def _mul_logexp(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        lg = self.log_table
        out = self.exp_table[lg[a] + lg[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def add_arr(self, a, b):
        mode = self.mode
        if mode == MODE_PRIME:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        if mode == MODE_TABLE:
            return self.add_table[a, b]
        return self._add_digits(a, b)

    def neg_arr(self, a):
        if self.mode == MODE_PRIME:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        return self.neg_table[a]

    def sub_arr(self, a, b):
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a, b):
        mode = self.mode
        if mode == MODE_PRIME:
            return (np.asarray(a, dtype=np.int64) * b) % self.p
        if mode == MODE_TABLE:
            return self.mul_table[a, b]
        return self._mul_logexp(a, b)

    def inv_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.inv_table[a]

    # -- scalar helpers -------------------------------------------------------

    def s_add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return int(self.add_arr(a, b))

    def s_mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        return int(self.mul_arr(a, b))

    def s_neg(self, a: int) -> int:
        return int(self.neg_arr(a))

    def s_inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.inv_table[a])

    def s_pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        return int(self.exp_table[(int(self.log_table[a]) * k) % (self.q - 1)])

    # -- elements -------------------------------------------------------------

    def __call__(self, value) -> FieldElement:
        """Coerce an int code, digit sequence or element into this field."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise ValueError(f"element of {value.spec} used in {self}")
            return value
        if isinstance(value, (tuple, list)):
            return FieldElement(self, self.from_digits(value))
        value = int(value)
        if self.e == 1:
            return FieldElement(self, value % self.p)
        if not 0 <= value < self.q:
            raise ValueError(f"code {value} out of range for {self}")
        return FieldElement(self, value)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    # -- serialisation --------------------------------------------------------

    def format_code(self, code: int) -> str:
        """Little-endian base-p digits; ``"21"`` is ``2 + x`` in GF(9).

        For ``p > 36`` the digits are decimal numbers joined by ``.``.
        """
        ds = self.digits(int(code))
        if self.p <= len(_DIGITS):
            return "".join(_DIGITS[d] for d in ds)
        return ".".join(str(d) for d in ds)

    def parse_code(self, text: str) -> int:
        text = text.strip()
        if self.p <= len(_DIGITS):
            if len(text) != self.e:
                raise ValueError(f"expected {self.e} digits, got {text!r}")
            ds = [_DIGITS.index(ch) for ch in text.lower()]
        else:
            ds = [int(t) for t in text.split(".")]
            if len(ds) != self.e:
                raise ValueError(f"expected {self.e} digits, got {text!r}")
        if any(d >= self.p for d in ds):
            raise ValueError(f"digit out of range in {text!r}")
        return self.from_digits(ds)


class FieldElement:
    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value: int):
        self.spec = spec
        self.value = int(value)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.digits(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError(f"cannot mix {self.spec} and {other.spec}")
            return other.value
        if isinstance(other, int):
            return self.spec(other).value
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.s_add(self.value, b))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.spec, self.spec.s_neg(self.value))

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.s_add(self.value, self.spec.s_neg(b)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.s_mul(self.value, b))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        return FieldElement(self.spec, self.spec.s_inv(self.value))

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self * FieldElement(self.spec, self.spec.s_inv(b))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement(self.spec, self.spec.s_pow(self.value, k))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, int):
            return self.value == self.spec(other).value
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.value))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.spec!r}({self.spec.format_code(self.value)})"

    def __str__(self):
        return self.spec.format_code(self.value)


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> FieldSpec:
    """Return GF(p^e) with the lexicographically least monic irreducible modulus.

    Candidates ``x^e + c_{e-1} x^{e-1} + ... + c_0`` are scanned with the
    ascending coefficient tuple ``(c_0, ..., c_{e-1})`` in lexicographic order,
    so the choice is reproducible across runs.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"characteristic must be prime, got {p!r}")
    if not isinstance(e, int) or e < 1:
        raise ValueError(f"extension degree must be >= 1, got {e!r}")
    if p**e > MAX_ORDER:
        raise ValueError(f"q = {p}^{e} exceeds the supported bound {MAX_ORDER}")
    return FieldSpec(p, e, _least_irreducible(p, e))


def field_of_order(q: int) -> FieldSpec:
    return make_field(*prime_power(q))


def _check(a: FieldElement, b: FieldElement) -> None:
    if a.spec != b.spec:
        raise ValueError(f"cannot mix {a.spec} and {b.spec}")


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check(a, b)
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    _check(a, b)
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check(a, b)
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def enumerate_elements(spec: FieldSpec) -> list[FieldElement]:
    """All q elements, ordered by their base-p digit code (0 first)."""
    return [FieldElement(spec, c) for c in range(spec.q)]
