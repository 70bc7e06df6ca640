"""Univariate polynomials over a FieldSpec.

Coefficients are raw element encodings, ascending degree, no trailing
zeros; the zero polynomial has an empty coefficient tuple and degree -1.
Everything here is scalar-path code: the exhaustive search kernels never
route through this module.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .gf import DivisionByZero, FieldMismatch, FieldSpec, FieldTooLarge, TABLE_LIMIT


@dataclass(frozen=True)
class UniPoly:
    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("coefficients must not have trailing zeros; use poly()")

    # -- basics --------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _check(self, other: "UniPoly") -> None:
        if not isinstance(other, UniPoly) or other.field != self.field:
            raise FieldMismatch(f"polynomials over different fields: {self} vs {other}")

    # -- ring operations -------------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return poly(f, [f.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self) -> "UniPoly":
        f = self.field
        return UniPoly(f, tuple(f.neg(c) for c in self.coeffs))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        f = self.field
        if self.is_zero or other.is_zero:
            return UniPoly(f, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = f.add(out[i + j], f.mul(a, b))
        return poly(f, out)

    def scale(self, c: int) -> "UniPoly":
        f = self.field
        if c == 0:
            return UniPoly(f, ())
        return UniPoly(f, tuple(f.mul(c, a) for a in self.coeffs))

    def shift(self, k: int) -> "UniPoly":
        """Multiply by X^k."""
        if self.is_zero:
            return self
        return UniPoly(self.field, (0,) * k + self.coeffs)

    def __divmod__(self, other: "UniPoly"):
        self._check(other)
        f = self.field
        if other.is_zero:
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(f, ()), self
        quot = [0] * (dq + 1)
        inv_lead = f.inv(other.lead)
        for k in range(dq, -1, -1):
            c = f.mul(rem[k + other.degree], inv_lead)
            quot[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] = f.sub(rem[k + i], f.mul(c, b))
        return poly(f, quot), poly(f, rem)

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[0]

    # -- analysis ---------------------------------------------------------------

    def eval_at(self, x: int) -> int:
        f = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def derivative(self) -> "UniPoly":
        f = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            c = 0
            for _ in range(i % f.p):
                c = f.add(c, self.coeffs[i])
            out.append(c)
        return poly(f, out)

    def monic(self) -> "UniPoly":
        if self.is_zero:
            raise ValueError("cannot normalize the zero polynomial")
        return self.scale(self.field.inv(self.lead))

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = [f"{c}*X^{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms)


def poly(field: FieldSpec, coeffs) -> UniPoly:
    """Normalize a coefficient list into a UniPoly."""
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    for c in cs:
        if not 0 <= c < field.order:
            raise ValueError(f"coefficient {c} out of range for {field.label}")
    return UniPoly(field, tuple(cs))


def x_poly(field: FieldSpec) -> UniPoly:
    return UniPoly(field, (0, 1))


def constant(field: FieldSpec, c: int) -> UniPoly:
    return poly(field, [c])


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic greatest common divisor."""
    f._check(g)
    a, b = f, g
    while not b.is_zero:
        a, b = b, a % b
    if a.is_zero:
        return a
    return a.monic()


def pow_mod(base: UniPoly, e: int, mod: UniPoly) -> UniPoly:
    if e < 0:
        raise ValueError("negative exponent")
    field = base.field
    result = constant(field, 1) % mod
    cur = base % mod
    while e:
        if e & 1:
            result = (result * cur) % mod
        cur = (cur * cur) % mod
        e >>= 1
    return result


def frobenius_power_mod(f: UniPoly) -> UniPoly:
    """X^(field order) reduced mod f."""
    if f.degree < 1:
        raise ValueError("modulus must have degree >= 1")
    return pow_mod(x_poly(f.field), f.field.order, f)


def splits_completely_distinct(f: UniPoly) -> bool:
    """True iff f is a product of deg(f) distinct linear factors over the field.

    Test: X^q = X (mod f) and gcd(f, f') constant.
    """
    if f.degree < 1:
        return False
    if frobenius_power_mod(f) != x_poly(f.field) % f:
        return False
    d = poly_gcd(f, f.derivative())
    return d.degree == 0


def all_roots(f: UniPoly) -> tuple[int, ...]:
    """Roots in the field, by exhaustive scan, in canonical element order."""
    if f.is_zero:
        raise ValueError("zero polynomial vanishes everywhere")
    field = f.field
    if field.order > TABLE_LIMIT:
        raise FieldTooLarge(f"exhaustive root scan refused for order {field.order}")
    return tuple(v for v in field.elements() if f.eval_at(v) == 0)


def roots_with_multiplicity(f: UniPoly) -> list[tuple[int, int]]:
    """(root, multiplicity) pairs in canonical element order."""
    field = f.field
    out = []
    for rt in all_roots(f):
        lin = poly(field, [field.neg(rt), 1])
        mult = 0
        cur = f
        while True:
            q, r = divmod(cur, lin)
            if not r.is_zero:
                break
            mult += 1
            cur = q
        out.append((rt, mult))
    return out


def _equal_degree_split(g: UniPoly, d: int, rng: random.Random) -> list[UniPoly]:
    # g squarefree monic, every irreducible factor of degree exactly d
    if g.degree == d:
        return [g]
    field = g.field
    exp = (field.order**d - 1) // 2
    while True:
        a = poly(field, [rng.randrange(field.order) for _ in range(g.degree)])
        if a.degree < 1:
            continue
        w = poly_gcd(pow_mod(a, exp, g) - constant(field, 1), g)
        if 0 < w.degree < g.degree:
            return (_equal_degree_split(w, d, rng)
                    + _equal_degree_split(g // w, d, rng))


def _distinct_degree_split(g: UniPoly, rng: random.Random) -> list[UniPoly]:
    out = []
    d = 1
    x = x_poly(g.field)
    while g.degree >= 2 * d:
        h = pow_mod(x, g.field.order**d, g) - (x % g)
        w = poly_gcd(h, g)
        if w.degree > 0:
            out.extend(_equal_degree_split(w, d, rng))
            g = g // w
        d += 1
    if g.degree > 0:
        out.append(g)
    return out


def factor_monic(f: UniPoly) -> tuple[tuple[UniPoly, int], ...]:
    """Irreducible monic factors with multiplicities, canonically ordered.

    Cantor-Zassenhaus with a fixed-seed splitter, so the run is
    reproducible.  Odd characteristic only (all fields here are odd).
    The unit leading coefficient of f is discarded.
    """
    field = f.field
    if field.p == 2:
        raise ValueError("factorization supports odd characteristic only")
    if f.degree < 1:
        raise ValueError("nothing to factor")
    rng = random.Random(0x5EED)
    found: dict[tuple[int, ...], list] = {}
    stack = [(f.monic(), 1)]
    while stack:
        g, mult = stack.pop()
        if g.degree < 1:
            continue
        der = g.derivative()
        if der.is_zero:
            # g = h(X^p): extract the p-th root coefficientwise
            root = poly(field, [field.pow(c, field.order // field.p)
                                for c in g.coeffs[::field.p]])
            stack.append((root, mult * field.p))
            continue
        squarefree_part = g // poly_gcd(g, der)
        for piece in _distinct_degree_split(squarefree_part, rng):
            e = 0
            while True:
                quo, rem = divmod(g, piece)
                if not rem.is_zero:
                    break
                g, e = quo, e + 1
            item = found.setdefault(piece.coeffs, [piece, 0])
            item[1] += mult * e
        stack.append((g, mult))  # factors with p | multiplicity remain here
    out = tuple(sorted(((p_, m) for p_, m in found.values()),
                       key=lambda it: (it[0].degree, it[0].coeffs)))
    assert sum(p_.degree * m for p_, m in out) == f.degree
    return out


def lagrange_interpolate(field: FieldSpec, xs, ys) -> UniPoly:
    """The unique polynomial of degree < len(xs) through (xs[i], ys[i])."""
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise ValueError("point count mismatch")
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    acc = poly(field, [])
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        num = constant(field, yi)
        denom = 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = num * poly(field, [field.neg(xj), 1])
            denom = field.mul(denom, field.sub(xi, xj))
        acc = acc + num.scale(field.inv(denom))
    return acc
