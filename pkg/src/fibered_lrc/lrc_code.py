"""Evaluation code on the fibered surface: basis, encoder, bounds, exact distance.

The minimum-distance search enumerates one representative per projective
message class (first nonzero coordinate = 1) and counts codeword zeros
fiber-structurally: a message is a bivariate polynomial f(x,t), and its zeros
on the vertical fiber at t̄ are exactly the fiber roots x̄ with f(x̄, t̄) = 0 —
all r+1 of them when every coefficient polynomial vanishes at t̄.  For r = 3
the innermost two message coordinates (the x²-block u + v·t) are collapsed
into one histogram pass per enumeration prefix: each point contributes the
curve v = -(x̄·a(t̄) + x̄²u) / (x̄²t̄) of (u,v) pairs that kill its symbol, and a
bincount over all point-curves yields the zero count of every (u,v) candidate
at once.  That collapse is what makes full enumeration at order 169-625
practical on one core.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .construction import (
    EvaluationSet,
    build_evaluation_set,
    surface_params,
)
from .gf import PAIR_TABLE_LIMIT, FieldSpec, make_field


class BadLocality(ValueError):
    """r is not an odd integer >= 3."""


class RankDeficient(AssertionError):
    """Generator matrix rank below k; signals a construction bug."""


class LengthMismatch(ValueError):
    """Message or codeword of the wrong length."""


class NotSingleOrbit(ValueError):
    """Operation defined only for b = 1 evaluation sets."""


@dataclass(frozen=True, slots=True)
class MonomialBasis:
    """Ordered exponent pairs (i, j) spanning the message space."""

    r: int
    monomials: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.monomials)


def basis(r: int) -> MonomialBasis:
    """x^i t^j for 1 <= i <= r-2, 0 <= j <= r-1, plus x^{r-1} t^h, h <= r-2."""
    if r % 2 == 0 or r < 3:
        raise BadLocality(f"locality r must be odd and >= 3, got {r}")
    monos = [(i, j) for i in range(1, r - 1) for j in range(r)]
    monos += [(r - 1, h) for h in range(r - 1)]
    monos.sort()
    assert len(monos) == r * (r - 1) - 1
    return MonomialBasis(r, tuple(monos))


@dataclass(frozen=True, slots=True)
class GeneratorMatrix:
    """k x n matrix of basis monomials evaluated at the points."""

    es: EvaluationSet
    mb: MonomialBasis
    rows: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return self.es.n


def _rank(fld: FieldSpec, rows) -> int:
    mat = [list(row) for row in rows]
    rank = 0
    for col in range(len(mat[0])):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = fld.inv(mat[rank][col])
        mat[rank] = [fld.mul(inv, v) for v in mat[rank]]
        for r2 in range(len(mat)):
            if r2 != rank and mat[r2][col]:
                c = mat[r2][col]
                mat[r2] = [
                    fld.sub(v, fld.mul(c, w)) for v, w in zip(mat[r2], mat[rank])
                ]
        rank += 1
        if rank == len(mat):
            break
    return rank


def generator_matrix(es: EvaluationSet) -> GeneratorMatrix:
    fld = es.field
    mb = basis(es.r)
    rows = []
    for i, j in mb.monomials:
        rows.append(tuple(
            fld.mul(fld.pow(pt.x, i), fld.pow(pt.t, j)) for pt in es.points
        ))
    if _rank(fld, rows) != len(mb):
        raise RankDeficient(
            f"generator matrix rank below k={len(mb)} for {fld.label}")
    return GeneratorMatrix(es, mb, tuple(rows))


def encode(gm: GeneratorMatrix, message) -> tuple[int, ...]:
    fld = gm.es.field
    msg = tuple(message)
    if len(msg) != gm.k:
        raise LengthMismatch(f"message length {len(msg)} != k={gm.k}")
    out = []
    for col in range(gm.n):
        acc = 0
        for mc, row in zip(msg, gm.rows):
            if mc:
                acc = fld.add(acc, fld.mul(mc, row[col]))
        out.append(acc)
    return tuple(out)


def codeword_weight(symbols) -> int:
    return sum(1 for s in symbols if s)


def _coeff_blocks(r: int):
    """(start, length) of each x-degree block in basis order, degrees 1..r-1."""
    blocks = [((s - 1) * r, r) for s in range(1, r - 1)]
    blocks.append(((r - 2) * r, r - 1))
    return blocks


def fiber_zero_counts(es: EvaluationSet, message) -> list[int]:
    """Zeros of the message polynomial on each vertical fiber, (l, j) order."""
    fld = es.field
    r = es.r
    msg = tuple(message)
    if len(msg) != r * (r - 1) - 1:
        raise LengthMismatch(f"message length {len(msg)}")
    blocks = _coeff_blocks(r)
    counts = []
    for _l, _j, t, roots in es.vertical_fibers():
        tp = [1]
        for _ in range(r - 1):
            tp.append(fld.mul(tp[-1], t))
        coeffs = []
        for start, length in blocks:
            acc = 0
            for w in range(length):
                if msg[start + w]:
                    acc = fld.add(acc, fld.mul(msg[start + w], tp[w]))
            coeffs.append(acc)
        if not any(coeffs):
            counts.append(r + 1)
            continue
        zeros = 0
        for x in roots:
            acc = 0
            xp = 1
            for c in coeffs:
                xp = fld.mul(xp, x)
                if c:
                    acc = fld.add(acc, fld.mul(c, xp))
            if acc == 0:
                zeros += 1
        counts.append(zeros)
    return counts


def structural_weight(es: EvaluationSet, message) -> int:
    return es.n - sum(fiber_zero_counts(es, message))


# -- bounds -------------------------------------------------------------------

def singleton_availability_upper(n: int, k: int, r: int) -> int:
    """n - (k-1 + floor((k-1)/r) + floor((k-1)/r^2))."""
    km1 = k - 1
    return n - (km1 + km1 // r + km1 // (r * r))


def distance_lower_bound(n: int, r: int, b: int = 2) -> int:
    """n - (2r^2 - 2r - 3); informative for b >= 2 (returned regardless)."""
    del b
    return n - (2 * r * r - 2 * r - 3)


def distance_b1(r: int) -> int:
    """Exact single-orbit distance: (r+1)^2 - (r^2 + 2r - 7) = 8 for all r."""
    if r % 2 == 0 or r < 3:
        raise BadLocality(f"locality r must be odd and >= 3, got {r}")
    return (r + 1) ** 2 - (r * r + 2 * r - 7)


def f_min_message(es: EvaluationSet) -> tuple[int, ...]:
    """Coefficient vector of x * prod_{j=1}^{r-1}(t - z^j t̄) * prod(x - x̄_i).

    The product kills r-1 whole fibers plus r-3 roots on each surviving
    fiber, so its codeword has weight exactly 8; defined for b = 1 only.
    """
    if es.b != 1:
        raise NotSingleOrbit(f"b = {es.b}")
    fld = es.field
    r = es.r
    zeta = es.params.zeta
    tbar = es.orbits[0].representative

    def bmul(f1: dict, f2: dict) -> dict:
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in f1.items():
            for (i2, j2), c2 in f2.items():
                key = (i1 + i2, j1 + j2)
                out[key] = fld.add(out.get(key, 0), fld.mul(c1, c2))
        return {key: c for key, c in out.items() if c}

    f = {(1, 0): 1}
    for j in range(1, r):
        root = fld.mul(fld.pow(zeta, j), tbar)
        f = bmul(f, {(0, 1): 1, (0, 0): fld.neg(root)})
    for xbar in es.roots[0][: r - 3]:
        f = bmul(f, {(1, 0): 1, (0, 0): fld.neg(xbar)})
    mb = basis(r)
    pos = {mono: w for w, mono in enumerate(mb.monomials)}
    vec = [0] * len(mb)
    for mono, c in f.items():
        assert mono in pos, f"f_min monomial {mono} outside basis"
        vec[pos[mono]] = c
    return tuple(vec)


# -- exact minimum distance ----------------------------------------------------

@dataclass(frozen=True, slots=True)
class DistanceResult:
    d: int
    witness: tuple[int, ...]
    exact: bool
    enumerated: int


def _better(zeros_a: int, msg_a, zeros_b: int, msg_b):
    """More zeros wins; ties broken by lexicographically smaller message."""
    if msg_a is None:
        return zeros_b, msg_b
    if msg_b is None or zeros_a > zeros_b or (zeros_a == zeros_b and msg_a < msg_b):
        return zeros_a, msg_a
    return zeros_b, msg_b


def _r3_curve_tables(es: EvaluationSet):
    """Per-point constants of the zero condition x̄·a(t̄) + x̄²·u + x̄²t̄·v = 0.

    One curve per evaluation point: AU[c, u] = x̄²u and NMB[c, w] = -w/(x̄²t̄),
    so the v killing the symbol given prefix value w = x̄·a(t̄) + x̄²u is
    NMB[c, w].
    """
    fld = es.field
    tabs = fld.np_tables()
    MUL, NEG, INV = tabs["MUL"], tabs["NEG"], tabs["INV"]
    t1, t2, fib_of_curve, xa = [], [], [], []
    for f, (_l, _j, t, roots) in enumerate(es.vertical_fibers()):
        t1.append(t)
        t2.append(fld.mul(t, t))
        for x in roots:
            fib_of_curve.append(f)
            xa.append(x)
    xa_v = np.asarray(xa, dtype=np.int64)
    fib_v = np.asarray(fib_of_curve, dtype=np.int64)
    alpha = MUL[xa_v, xa_v].astype(np.int64)                   # x̄²
    beta = MUL[alpha, np.asarray(t1, dtype=np.int64)[fib_v]]   # x̄²·t̄, nonzero
    AU = MUL[alpha]
    NMB = MUL[INV[beta.astype(np.int64)]][:, NEG]
    return (np.asarray(t1, dtype=np.int64), np.asarray(t2, dtype=np.int64),
            fib_v, xa_v, alpha, AU, np.ascontiguousarray(NMB))


def _r3_scan_prefixes(es, tables, a0val, lo, hi, chunk, budget_left):
    """Scan x-block prefixes a0 = a0val, (a1, a2) = divmod(range(lo, hi), q).

    Each prefix covers the full q x q grid of (u, v) tails, so one prefix is
    q² projective candidates.  Returns (best, candidates, completed).
    """
    fld = es.field
    q = fld.order
    tabs = fld.np_tables()
    ADD, MUL = tabs["ADD"], tabs["MUL"]
    t1, t2, fib_v, xa_v, _alpha, AU, NMB = tables
    nf = len(t1)
    c_idx = np.arange(len(xa_v), dtype=np.int64)
    u_flat = np.arange(q, dtype=np.int64)[None, None, :] * q
    best = (-1, None)
    done = 0
    for s in range(lo, hi, chunk):
        if budget_left is not None and done * q * q >= budget_left:
            return best, done * q * q, False
        pre = np.arange(s, min(s + chunk, hi), dtype=np.int64)
        a1, a2 = np.divmod(pre, q)
        a0 = np.full(len(pre), a0val, dtype=np.int64)
        g = len(pre)
        av = np.empty((g, nf), dtype=np.int64)
        for f in range(nf):
            av[:, f] = ADD[ADD[a0, MUL[a1, t1[f]]], MUL[a2, t2[f]]]
        f0 = MUL[xa_v[None, :], av[:, fib_v]]                  # g x C
        val = ADD[f0[:, :, None], AU[None, :, :]]              # g x C x q
        vi = NMB[c_idx[None, :, None], val].astype(np.int64)
        flat = u_flat + vi
        flat += (np.arange(g, dtype=np.int64) * (q * q))[:, None, None]
        counts = np.bincount(flat.ravel(), minlength=g * q * q)
        counts = counts.reshape(g, q * q)
        zmax = counts.max(axis=1)
        gbest = int(zmax.argmax())
        cell = int(counts[gbest].argmax())
        u, v = divmod(cell, q)
        msg = (int(a0[gbest]), int(a1[gbest]), int(a2[gbest]), u, v)
        best = _better(int(zmax[gbest]), msg, *best)
        done += g
    return best, done * q * q, True


def _r3_tail_candidates(es, tables):
    """Candidates whose first nonzero coordinate is in the x²-block."""
    q = es.field.order
    _t1, _t2, _fib, _xa, alpha, _AU, NMB = tables
    c_idx = np.arange(len(alpha), dtype=np.int64)
    # (0,0,0,1,v): each point vanishes at the single v = NMB[c, x̄²]
    v_at = NMB[c_idx, alpha]
    counts = np.bincount(v_at, minlength=q)
    v = int(counts.argmax())
    best = (int(counts[v]), (0, 0, 0, 1, v))
    # (0,0,0,0,1): symbol x̄²t̄ never vanishes
    return _better(0, (0, 0, 0, 0, 1), *best), q + 1


def _default_chunk(q: int, n_curves: int) -> int:
    return max(1, min(512, 2_000_000 // (q * q), 4_000_000 // (n_curves * q)))


def _r3_worker(args):
    p, m, modulus, r, orbit_indices, lo, hi = args
    fld = make_field(p, m, modulus)
    es = build_evaluation_set(surface_params(fld, r), list(orbit_indices))
    tables = _r3_curve_tables(es)
    chunk = _default_chunk(fld.order, len(tables[3]))
    best, cand, _ = _r3_scan_prefixes(es, tables, 1, lo, hi, chunk, None)
    return best[0], best[1], cand


def _min_distance_r3(es: EvaluationSet, budget, threads) -> DistanceResult:
    q = es.field.order
    tables = _r3_curve_tables(es)
    chunk = _default_chunk(q, len(tables[3]))
    best = (-1, None)
    enumerated = 0
    exact = True
    if threads > 1 and budget is None:
        bounds = np.linspace(0, q * q, threads + 1, dtype=int)
        args = [
            (es.field.p, es.field.m, es.field.modulus, es.r,
             es.orbit_indices, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:]) if lo < hi
        ]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for zeros, msg, cand in pool.map(_r3_worker, args):
                best = _better(zeros, msg, *best)
                enumerated += cand
        blocks = [(0, q, 2 * q), (0, 1, 2)]
    else:
        blocks = [(1, 0, q * q), (0, q, 2 * q), (0, 1, 2)]
    for a0val, lo, hi in blocks:
        left = None if budget is None else budget - enumerated
        if left is not None and left <= 0:
            exact = False
            break
        sub, cand, completed = _r3_scan_prefixes(
            es, tables, a0val, lo, hi, chunk, left)
        best = _better(*sub, *best)
        enumerated += cand
        if not completed:
            exact = False
            break
    if exact:
        sub, cand = _r3_tail_candidates(es, tables)
        best = _better(*sub, *best)
        enumerated += cand
    zeros, msg = best
    return DistanceResult(es.n - zeros, msg, exact, enumerated)


def _min_distance_generic(es: EvaluationSet, budget, threads) -> DistanceResult:
    """Scalar fallback for r > 3 or orders beyond the dense-table limit.

    Correct but slow; give it a budget anywhere past toy sizes.  threads are
    ignored on this path.
    """
    del threads
    from itertools import product

    q = es.field.order
    k = es.r * (es.r - 1) - 1
    best = (-1, None)
    enumerated = 0
    exact = True
    for lead in range(k):
        if exact:
            for tail in product(range(q), repeat=k - 1 - lead):
                if budget is not None and enumerated >= budget:
                    exact = False
                    break
                msg = (0,) * lead + (1,) + tail
                zeros = sum(fiber_zero_counts(es, msg))
                best = _better(zeros, msg, *best)
                enumerated += 1
    zeros, msg = best
    return DistanceResult(es.n - zeros, msg, exact, enumerated)


def min_distance(es: EvaluationSet, gm: GeneratorMatrix | None = None,
                 budget: int | None = None, threads: int = 1) -> DistanceResult:
    """Exact minimum Hamming weight over nonzero codewords, with witness.

    budget caps the number of enumerated projective classes (block
    granularity); a truncated search returns the best weight found so far
    flagged exact=False — an upper bound.  Witness ties are broken by
    lexicographic order on the raw message encoding, independently of worker
    count.  When a budget is set the search runs single-threaded.
    """
    if gm is not None and gm.es is not es:
        raise LengthMismatch("generator matrix built from a different point set")
    if budget is not None and budget < 1:
        raise ValueError(f"budget must be positive, got {budget}")
    if es.r == 3 and es.field.order <= PAIR_TABLE_LIMIT:
        return _min_distance_r3(es, budget, max(1, threads))
    return _min_distance_generic(es, budget, threads)


def zero_grid_agreement(es: EvaluationSet, gm: GeneratorMatrix,
                        prefix_limit: int | None = None) -> int:
    """Cross-check the histogram kernel against direct symbol evaluation.

    For every x-block prefix (lex order, optionally capped), compares the
    kernel's zero count of each (u, v) tail against a count obtained by
    evaluating all n symbols from the generator matrix columns.  Raises
    AssertionError on the first disagreement; returns prefixes checked.
    """
    fld = es.field
    q = fld.order
    tabs = fld.np_tables()
    ADD, MUL = tabs["ADD"], tabs["MUL"]
    tables = _r3_curve_tables(es)
    _t1, _t2, _fib, xa_v, _alpha, AU, NMB = tables
    c_idx = np.arange(len(xa_v), dtype=np.int64)
    u_flat = np.arange(q, dtype=np.int64)[None, :] * q
    rows = [np.asarray(row, dtype=np.int64) for row in gm.rows]
    uv = np.arange(q, dtype=np.int64)
    checked = 0
    prefixes = []
    for pre in range(q * q):
        prefixes.append((1, *divmod(pre, q)))
    prefixes += [(0, 1, a2) for a2 in range(q)]
    prefixes.append((0, 0, 1))
    if prefix_limit is not None:
        prefixes = prefixes[:prefix_limit]
    for a0, a1, a2 in prefixes:
        # kernel grid: histogram of per-point curves
        av = np.empty(len(_t1), dtype=np.int64)
        for f in range(len(_t1)):
            av[f] = ADD[ADD[a0, MUL[a1, _t1[f]]], MUL[a2, _t2[f]]]
        f0 = MUL[xa_v, av[_fib]]
        val = ADD[f0[:, None], AU]
        vi = NMB[c_idx[:, None], val].astype(np.int64)
        kernel_grid = np.bincount((u_flat + vi).ravel(), minlength=q * q)
        # naive grid: per-point symbol evaluation over the whole (u, v) plane
        naive_grid = np.zeros(q * q, dtype=np.int64)
        base = ADD[ADD[MUL[a0, rows[0]], MUL[a1, rows[1]]], MUL[a2, rows[2]]]
        for pnt in range(es.n):
            ucontrib = MUL[rows[3][pnt], uv]
            vcontrib = MUL[rows[4][pnt], uv]
            grid = ADD[ADD[base[pnt], ucontrib][:, None], vcontrib[None, :]]
            naive_grid += (grid.ravel() == 0)
        assert np.array_equal(kernel_grid, naive_grid), (a0, a1, a2)
        checked += 1
    return checked


# -- profile -------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class CodeProfile:
    """Everything reportable about one constructed code."""

    field_label: str
    q: int
    m: int
    r: int
    availability: int
    b: int
    orbit_indices: tuple[int, ...]
    n: int
    k: int
    d_lower: int
    d_upper: int
    d_exact: int | None = None
    d_witness: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.d_exact is not None:
            assert self.d_lower <= self.d_exact <= self.d_upper


def code_profile(es: EvaluationSet, dist: DistanceResult | None = None) -> CodeProfile:
    r = es.r
    k = r * (r - 1) - 1
    n = es.n
    d_upper = singleton_availability_upper(n, k, r)
    d_exact = witness = None
    if dist is not None:
        d_upper = min(d_upper, dist.d)  # a found codeword weight bounds d
        if dist.exact:
            d_exact = dist.d
        witness = dist.witness
    return CodeProfile(
        field_label=es.field.label,
        q=es.params.q,
        m=es.params.m,
        r=r,
        availability=2,
        b=es.b,
        orbit_indices=tuple(es.orbit_indices),
        n=n,
        k=k,
        d_lower=distance_lower_bound(n, r, es.b),
        d_upper=d_upper,
        d_exact=d_exact,
        d_witness=witness,
    )
