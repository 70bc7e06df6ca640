"""Support sets at the pole of t, their lower convex hulls, and the
segment polynomials that determine how (t=infinity) splits upstairs.

The defining polynomial of the x/t function field, normalized by t^-(r+1),
has a support set whose lower hull always consists of three segments; the
segment polynomials decide the places over (t=infinity), their
ramification/residue degrees, and through them the valuation table that
yields the generic distance lower bound n - (2r^2 - 2r - 3).
"""

from dataclasses import dataclass
from fractions import Fraction

from .construction import SurfaceParams
from .gf import FieldSpec
from .lrc_code import BadLocality, basis
from .poly import UniPoly, factor_monic, poly


class AllZero(Exception):
    """Every supplied coefficient is the zero polynomial."""


class NotOnSegment(Exception):
    """A support point recorded on a segment fails the segment equation."""


@dataclass(frozen=True)
class SupportSet:
    points: tuple            # (exponent, valuation), exponent ascending
    residues: dict           # exponent -> residue of the unit part
    field: FieldSpec


@dataclass(frozen=True)
class ArcSegment:
    start: tuple
    end: tuple
    slope: Fraction
    points: tuple            # support points on the segment, endpoints included

    # slope written as -a/b with b > 0, gcd(a, b) = 1
    @property
    def a(self) -> int:
        return -self.slope.numerator

    @property
    def b(self) -> int:
        return self.slope.denominator


@dataclass(frozen=True)
class PlaceSplit:
    e: int
    f: int


@dataclass(frozen=True)
class SegmentFactorData:
    gamma: UniPoly
    delta: UniPoly
    factors: tuple           # (irreducible monic UniPoly, multiplicity)
    squarefree: bool
    places: tuple            # PlaceSplit per factor; only valid when squarefree


@dataclass(frozen=True)
class PlaceRecord:
    name: str
    e: int
    f: int
    v_t: int
    v_x: int


@dataclass(frozen=True)
class ValuationTable:
    r: int
    case: int                # 1: -1 is a square, 2: it is not
    places: tuple            # PlaceRecord, rational-to-the-arc order P1, P2, ...


def defining_coefficients(field: FieldSpec, r: int) -> list:
    """Coefficients (in t, ascending T-degree) of the degree-(r+1) defining
    polynomial of the x/t extension, before t^-(r+1) normalization."""
    if r < 3 or r % 2 == 0:
        raise BadLocality(f"locality must be an odd integer >= 3, got {r}")
    rp1 = r + 1
    coeffs = [poly(field, []) for _ in range(rp1 + 1)]
    one = poly(field, [1])
    t_rp1 = poly(field, [0] * rp1 + [1])
    coeffs[0] = one
    coeffs[1] = -t_rp1
    coeffs[2] = t_rp1 + one
    coeffs[3] = coeffs[3] - one
    coeffs[rp1 // 2] = coeffs[rp1 // 2] + poly(field, [2 % field.p])
    coeffs[rp1] = one
    return coeffs


def support_set_at_infinity(coeff_polys, normalization: int) -> SupportSet:
    """Support set at the pole of t: v(a) = normalization - deg a."""
    points, residues, field = [], {}, None
    for i, a in enumerate(coeff_polys):
        field = a.field
        if a.is_zero:
            continue
        points.append((i, normalization - a.degree))
        residues[i] = a.lead
    if not points:
        raise AllZero("all coefficients vanish")
    return SupportSet(tuple(points), residues, field)


def support_set_at_place(coeff_polys, c: int) -> SupportSet:
    """Support set at the finite place t = c: v(a) = multiplicity of (t-c)."""
    points, residues, field = [], {}, None
    for i, a in enumerate(coeff_polys):
        field = a.field
        if a.is_zero:
            continue
        lin = poly(field, [field.neg(c), 1])
        mult, cur = 0, a
        while True:
            quo, rem = divmod(cur, lin)
            if not rem.is_zero:
                break
            mult, cur = mult + 1, quo
        points.append((i, mult))
        residues[i] = cur.eval_at(c)
    if not points:
        raise AllZero("all coefficients vanish")
    return SupportSet(tuple(points), residues, field)


def lower_hull(ss: SupportSet) -> list:
    """Lower convex hull of the support set, as segments with strictly
    increasing slopes; collinear support points are kept on their segment."""
    pts = sorted(ss.points)
    if len(pts) < 2:
        return []
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    segments = []
    for (i0, v0), (i1, v1) in zip(hull, hull[1:]):
        on_seg = tuple(
            (l, v) for l, v in pts
            if i0 <= l <= i1 and (l - i0) * (v1 - v0) == (v - v0) * (i1 - i0))
        segments.append(ArcSegment((i0, v0), (i1, v1),
                                   Fraction(v1 - v0, i1 - i0), on_seg))
    return segments


def segment_polynomials(seg: ArcSegment, ss: SupportSet) -> SegmentFactorData:
    """Build the segment polynomial (monic, normalized by the residue at the
    segment's right endpoint), compress by the slope denominator b, and
    factor; when squarefree, each factor yields a place with e = b and
    f = its degree."""
    fld = ss.field
    (i0, v0), (i1, v1) = seg.start, seg.end
    norm = fld.inv(ss.residues[i1])
    width = i1 - i0
    gcoeffs = [0] * (width + 1)
    for l, v in seg.points:
        if (l - i0) * (v1 - v0) != (v - v0) * (i1 - i0):
            raise NotOnSegment(f"support point {(l, v)} is off the segment")
        if (l - i0) % seg.b:
            raise NotOnSegment(
                f"exponent offset {l - i0} not divisible by b = {seg.b}")
        gcoeffs[l - i0] = fld.mul(norm, ss.residues[l])
    gamma = poly(fld, gcoeffs)
    delta = poly(fld, [gcoeffs[k * seg.b] for k in range(width // seg.b + 1)])
    factors = factor_monic(delta)
    squarefree = all(m == 1 for _, m in factors)
    places = tuple(PlaceSplit(seg.b, g.degree) for g, _ in factors) \
        if squarefree else ()
    return SegmentFactorData(gamma, delta, factors, squarefree, places)


def splitting_at_infinity(params: SurfaceParams) -> ValuationTable:
    """Places over (t=infinity), with per-place v(t) and v(x).

    Case 1 (-1 a square): four places, e-values 1, 1, (r-1)/2, (r-1)/2, all
    residue degree 1.  Case 2: three places, the last with f = 2.
    """
    fld, r = params.field, params.r
    coeffs = defining_coefficients(fld, r)
    ss = support_set_at_infinity(coeffs, r + 1)
    segments = lower_hull(ss)
    assert len(segments) == 3, "the arc must have exactly three segments"
    case = 1 if fld.is_square(fld.neg(1)) else 2
    places = []
    for seg in segments:
        data = segment_polynomials(seg, ss)
        if not data.squarefree:
            raise ArithmeticError(
                "segment polynomial is not squarefree; "
                "splitting data cannot be read off this arc")
        for split in data.places:
            places.append(PlaceRecord(f"P{len(places) + 1}", split.e, split.f,
                                      -split.e, seg.a))
    assert sum(pl.e * pl.f for pl in places) == r + 1
    expected = 4 if case == 1 else 3
    assert len(places) == expected, (case, places)
    assert places[0].v_x == r + 1 and places[1].v_x == 0
    assert all(2 * pl.v_x == -(r + 1) for pl in places[2:])
    return ValuationTable(r, case, tuple(places))


def monomial_valuations(vt: ValuationTable, i: int, j: int) -> dict:
    """Per-place valuation of x^i t^j for a basis monomial (i, j)."""
    if (i, j) not in basis(vt.r).monomials:
        raise ValueError(f"monomial ({i}, {j}) is outside the basis range")
    return {pl.name: i * pl.v_x + j * pl.v_t for pl in vt.places}


def pole_degree(i: int, j: int, r: int) -> int:
    """Degree of the pole divisor of the basis monomial x^i t^j."""
    if (i, j) not in basis(r).monomials:
        raise ValueError(f"monomial ({i}, {j}) is outside the basis range")
    return i * (r + 1) + j * r
