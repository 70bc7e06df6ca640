"""Deterministic finite-field construction and arithmetic.

A field of order p^m is a :class:`FieldSpec`.  Elements are plain integers
in ``range(p**m)``: the element ``sum(c_i * w**i)`` (``w`` the class of X
modulo the defining polynomial) is encoded as ``sum(c_i * p**i)``.

Construction is reproducible: for a given order the modulus defaults to the
lexicographically least monic irreducible polynomial over F_p of the right
degree (coefficient vectors compared low-degree-first), and the generator is
the least element of full multiplicative order under the same ordering.
Multiplication, inversion and powers go through log/antilog tables; addition
is digit-wise base p.  Orders above 2**20 are rejected.

Two orderings are used deliberately:

* construction ordering (moduli, generator search): lexicographic on
  coefficient vectors, low degree first;
* canonical element ordering (roots, orbits, reporting): zero first, then
  ascending discrete-log index.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

TABLE_LIMIT = 1 << 20       # largest supported field order
PAIR_TABLE_LIMIT = 2048     # largest order for dense Q x Q numpy tables


class NotPrime(ValueError):
    pass


class UnsupportedCharacteristic(ValueError):
    pass


class ReducibleModulus(ValueError):
    pass


class FieldTooLarge(ValueError):
    pass


class FieldMismatch(TypeError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class OrderNotDivisible(ValueError):
    pass


class NonSquare(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Polynomial helpers over F_p (coefficient lists, ascending degree).  Only
# used while bootstrapping a field: irreducibility tests and generator search
# run before any log table exists.

def _ptrim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df:
        c = a[-1]
        if c:
            off = len(a) - 1 - df
            for i in range(df):
                a[off + i] = (a[off + i] - c * f[i]) % p
        a.pop()
    return _ptrim(a)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        inv_lead = pow(b[-1], p - 2, p)
        bm = [(c * inv_lead) % p for c in b]
        a, b = bm, _pmod(a, bm, p)
    return a


def _ppowmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    cur = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, cur, p), f, p)
        cur = _pmod(_pmul(cur, cur, p), f, p)
        e >>= 1
    return result


def _is_irreducible(f: list[int], p: int) -> bool:
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if f[0] == 0:  # divisible by X
        return False
    # frob[j] = X^(p^j) mod f via repeated Frobenius
    frob = [_pmod([0, 1], f, p)]
    for _ in range(d - 1):
        frob.append(_ppowmod(frob[-1], p, f, p))

    def x_power(j: int) -> list[int]:
        return frob[j] if j <= d - 1 else _ppowmod(frob[-1], p ** (j - (d - 1)), f, p)

    if x_power(d) != _pmod([0, 1], f, p):
        return False
    for ell in _prime_factors(d):
        g = list(x_power(d // ell))
        while len(g) < 2:
            g.append(0)
        g[1] = (g[1] - 1) % p
        if len(_pgcd(f, _ptrim(g), p)) != 1:
            return False
    return True


def _digits(v: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(v % p)
        v //= p
    return out


def _undigits(ds, p: int) -> int:
    out = 0
    for d in reversed(list(ds)):
        out = out * p + d
    return out


class FieldSpec:
    """A finite field of order p^m with log/antilog tables.

    Instances are obtained through :func:`make_field`.  All element-level
    methods take and return raw integer encodings; :class:`FieldElement`
    wraps them with operator sugar and mixed-field checks.
    """

    __slots__ = ("p", "m", "order", "modulus", "gen", "_exp", "_log", "_np")

    def __init__(self, p: int, m: int, modulus: tuple[int, ...], gen: int,
                 exp: np.ndarray, log: np.ndarray):
        self.p = p
        self.m = m
        self.order = p ** m
        self.modulus = modulus
        self.gen = gen
        self._exp = exp      # length 2*(order-1); exp[i] = gen^i
        self._log = log      # length order; log[0] = -1 sentinel
        self._np = {}

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    @property
    def label(self) -> str:
        return f"{self.p}^{self.m}/" + ",".join(str(c) for c in self.modulus)

    def __repr__(self):
        return f"FieldSpec({self.label})"

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elem(self, v: int) -> "FieldElement":
        if not 0 <= v < self.order:
            raise ValueError(f"element {v} out of range for {self.label}")
        return FieldElement(self, v)

    # -- raw arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.m == 1:
            return (a + b) % p
        out, mult = 0, 1
        while a or b:
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if self.m == 1:
            return (-a) % p
        out, mult = 0, 1
        while a:
            out += ((p - a % p) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[int(self._log[a]) + int(self._log[b])])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of zero in {self.label}")
        return int(self._exp[self.order - 1 - int(self._log[a])])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise DivisionByZero(f"division by zero in {self.label}")
        if a == 0:
            return 0
        return int(self._exp[int(self._log[a]) - int(self._log[b]) + self.order - 1])

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero(f"zero to a negative power in {self.label}")
            return 0
        n = self.order - 1
        return int(self._exp[(int(self._log[a]) * e) % n])

    # -- discrete logs and ordering ----------------------------------------

    def log(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"discrete log of zero in {self.label}")
        return int(self._log[a])

    def from_log(self, k: int) -> int:
        return int(self._exp[k % (self.order - 1)])

    def order_key(self, a: int) -> int:
        """Canonical element ordering: zero first, then discrete-log index."""
        return -1 if a == 0 else int(self._log[a])

    def canonical_sorted(self, values) -> list[int]:
        return sorted(values, key=self.order_key)

    def elements(self):
        """All elements in canonical order (zero, then powers of gen)."""
        yield 0
        for k in range(self.order - 1):
            yield int(self._exp[k])

    # -- squares -------------------------------------------------------------

    def is_square(self, a: int) -> bool:
        return a == 0 or int(self._log[a]) % 2 == 0

    def sqrt(self, a: int) -> int:
        """Canonical square root (the one with the smaller discrete log)."""
        if a == 0:
            return 0
        l = int(self._log[a])
        if l % 2:
            raise NonSquare(f"{a} is not a square in {self.label}")
        return int(self._exp[l // 2])

    def nth_root_of_unity(self, n: int) -> int:
        """A primitive n-th root of unity, gen^((order-1)/n)."""
        if n <= 0 or (self.order - 1) % n:
            raise OrderNotDivisible(
                f"no primitive {n}-th root of unity in {self.label}")
        return int(self._exp[(self.order - 1) // n])

    # -- numpy tables for vectorized kernels --------------------------------

    def np_tables(self) -> dict:
        """Dense lookup tables (add, mul, neg, inv) as numpy arrays.

        Only available for orders up to PAIR_TABLE_LIMIT; the exhaustive
        search kernels index into these.
        """
        if self._np:
            return self._np
        q = self.order
        if q > PAIR_TABLE_LIMIT:
            raise FieldTooLarge(
                f"dense pair tables unavailable for order {q} > {PAIR_TABLE_LIMIT}")
        p, m = self.p, self.m
        av = np.arange(q, dtype=np.int64)
        addt = np.zeros((q, q), dtype=np.int64)
        negv = np.zeros(q, dtype=np.int64)
        ta = av.copy()
        mult = 1
        for _ in range(m):
            da = ta % p
            addt += ((da[:, None] + da[None, :]) % p) * mult
            negv += ((p - da) % p) * mult
            ta //= p
            mult *= p
        logv = self._log.astype(np.int64)
        expd = self._exp.astype(np.int64)
        mult_t = np.zeros((q, q), dtype=np.int64)
        ln = logv[1:]
        mult_t[1:, 1:] = expd[ln[:, None] + ln[None, :]]
        invv = np.zeros(q, dtype=np.int64)
        invv[1:] = expd[q - 1 - ln]
        self._np = {
            "ADD": addt.astype(np.int32),
            "MUL": mult_t.astype(np.int32),
            "NEG": negv.astype(np.int32),
            "INV": invv.astype(np.int32),
            "LOG": logv.astype(np.int32),
            "EXP": expd.astype(np.int32),
        }
        return self._np


@dataclass(frozen=True, slots=True)
class FieldElement:
    """Operator wrapper around a raw element encoding."""

    field: FieldSpec
    val: int

    def _peer(self, other) -> int:
        if not isinstance(other, FieldElement):
            raise FieldMismatch(f"cannot combine {self!r} with {other!r}")
        if other.field != self.field:
            raise FieldMismatch(
                f"elements of {self.field.label} and {other.field.label} do not mix")
        return other.val

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.val, self._peer(other)))

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.val, self._peer(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.val, self._peer(other)))

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.val, self._peer(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.val))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.val, e))

    def __bool__(self):
        return self.val != 0

    def __repr__(self):
        return f"GF({self.field.p}^{self.field.m})[{self.val}]"


_FIELD_CACHE: dict[tuple, FieldSpec] = {}


def _lex_monic_polys(p: int, m: int):
    """Monic degree-m coefficient vectors in lexicographic order (c0 first)."""
    for tail in itertools.product(range(p), repeat=m):
        yield list(tail) + [1]


def make_field(p: int, m: int, modulus=None) -> FieldSpec:
    """Build (or fetch from cache) the field of order p^m.

    ``modulus``: optional monic irreducible coefficient vector, ascending
    degree, length m+1.  Defaults to the lexicographically least one.
    """
    if not isinstance(p, int) or not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p == 2:
        raise UnsupportedCharacteristic("characteristic 2 is not supported")
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** m > TABLE_LIMIT:
        raise FieldTooLarge(f"order {p**m} exceeds {TABLE_LIMIT}")

    if modulus is not None:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ReducibleModulus(
                f"modulus must be monic of degree {m}: {modulus}")
        if not _is_irreducible(list(modulus), p):
            raise ReducibleModulus(f"modulus {modulus} is reducible over F_{p}")

    key = (p, m, modulus)
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]

    default_key = None
    if modulus is None:
        default_key = key
        for cand in _lex_monic_polys(p, m):
            if _is_irreducible(cand, p):
                modulus = tuple(cand)
                break
        key = (p, m, modulus)
        if key in _FIELD_CACHE:
            _FIELD_CACHE[default_key] = _FIELD_CACHE[key]
            return _FIELD_CACHE[key]

    q = p ** m
    fmod = list(modulus)

    def mul_digits(a: list[int], b: list[int]) -> list[int]:
        prod = _pmod(_pmul(a, b, p), fmod, p)
        return prod + [0] * (m - len(prod))

    # generator: least element (construction ordering) of order q-1
    factors = _prime_factors(q - 1)
    cofactors = [(q - 1) // ell for ell in factors]
    gen_digits = None
    for tail in itertools.product(range(p), repeat=m):
        cand = list(tail)
        if not any(cand):
            continue
        if all(_ppowmod_elem(cand, e, fmod, p, m) != _one(m) for e in cofactors):
            gen_digits = cand
            break
    if gen_digits is None:  # cannot happen: the group is cyclic
        raise RuntimeError("no generator found")

    exp = np.empty(2 * (q - 1), dtype=np.int32)
    log = np.full(q, -1, dtype=np.int32)
    cur = [1] + [0] * (m - 1)
    for i in range(q - 1):
        v = _undigits(cur, p)
        exp[i] = v
        exp[i + q - 1] = v
        log[v] = i
        cur = mul_digits(cur, gen_digits)
    if cur != [1] + [0] * (m - 1):
        raise RuntimeError("generator order check failed")

    spec = FieldSpec(p, m, modulus, _undigits(gen_digits, p), exp, log)
    _FIELD_CACHE[key] = spec
    if default_key is not None:
        _FIELD_CACHE[default_key] = spec
    return spec


def _one(m: int) -> list[int]:
    return [1] + [0] * (m - 1)


def _ppowmod_elem(a: list[int], e: int, fmod: list[int], p: int, m: int) -> list[int]:
    r = _ppowmod(_ptrim(list(a)), e, fmod, p)
    return r + [0] * (m - len(r))


_LABEL_RE = re.compile(r"^(\d+)\^(\d+)(?:/([\d,]+))?$")


def parse_field_label(s: str) -> FieldSpec:
    """Parse 'p^m' or 'p^m/c0,c1,...,1' into a field."""
    match = _LABEL_RE.match(s.strip())
    if not match:
        raise ValueError(f"bad field label {s!r}; expected p^m or p^m/c0,c1,...,1")
    p, m = int(match.group(1)), int(match.group(2))
    modulus = None
    if match.group(3):
        modulus = tuple(int(c) for c in match.group(3).split(","))
    return make_field(p, m, modulus)
