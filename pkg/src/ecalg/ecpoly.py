"""Construction of the EC-polynomials.

EC_n(Z; q, t, r) = n! * sum over set partitions P of {1..n} of
e(P) * prod_j ( -|S_j| q + t sigma(S_j) - r sum_{i<j} d(j,i) ), where

* sigma(S)  = sum of the z-variables indexed by S,
* d(j,i)    = |S_j| sigma(S_i) - |S_i| sigma(S_j),
* e(S)      = 1 for singletons, else (1/m!) * sum over orderings
              (p_2..p_m) of the non-minimal elements of
              prod_{i=1}^{m-1} ( r(z_{v_1} + z_{v_{p_2}} + ... + z_{v_{p_i}}
              - i*z_{v_{p_{i+1}}}) - i ),
* e(P)      = product of e over the blocks.

The ordering sum collapses to a subset dynamic program (each factor
depends on the prefix only through its underlying set), which the tests
verify against the literal permutation sum.  Rational arithmetic is kept
until final assembly; integrality is asserted once on the finished
polynomial, since individual summands are genuinely non-integral.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import kernels
from .combinatorics import SetPartition, enumerate_permutations, enumerate_set_partitions
from .errors import EmptyBlock, IndexOutOfRange, IntegralityViolation, VarCountMismatch
from .ring import ZPoly, _norm

_BLOCK_CACHE: dict = {}
_EC_CACHE: dict = {}


def sigma_form(nvars: int, block) -> ZPoly:
    """sigma(S): the sum of the z-variables indexed by the block."""
    return ZPoly.linear_form(nvars, {v: 1 for v in block})


def d_form(P: SetPartition, j: int, i: int) -> ZPoly:
    """|S_j| sigma(S_i) - |S_i| sigma(S_j) for block indices i < j (1-based)."""
    if not (1 <= i < j <= len(P)):
        raise IndexOutOfRange(f"need 1 <= i < j <= {len(P)}, got ({j}, {i})")
    n = P.n
    si = P.blocks[i - 1]
    sj = P.blocks[j - 1]
    coeffs: dict[int, int] = {}
    for v in si:
        coeffs[v] = coeffs.get(v, 0) + len(sj)
    for v in sj:
        coeffs[v] = coeffs.get(v, 0) - len(si)
    return ZPoly.linear_form(n, coeffs)


def _step_factor(nvars: int, anchor: int, prefix, b: int, i: int) -> ZPoly:
    """r*(z_anchor + sum_{a in prefix} z_a - i*z_b) - i."""
    entries = []
    zeros = [0] * nvars
    for v in (anchor, *prefix):
        ze = zeros.copy()
        ze[v - 1] = 1
        entries.append(((tuple(ze), (0, 0, 1)), 1))
    zb = zeros.copy()
    zb[b - 1] = 1
    entries.append(((tuple(zb), (0, 0, 1)), -i))
    entries.append(((tuple(zeros), (0, 0, 0)), -i))
    return ZPoly.from_terms(nvars, entries)


def e_of_block(block, nvars: int) -> ZPoly:
    """e(S) for a block of variable indices, as a polynomial in nvars
    variables.  Cached: blocks recur across the Bell-number-many
    partitions of a fixed n."""
    block = tuple(sorted(block))
    if not block:
        raise EmptyBlock("e of the empty set is undefined")
    key = (nvars, block)
    cached = _BLOCK_CACHE.get(key)
    if cached is not None:
        return cached
    m = len(block)
    if m == 1:
        result = ZPoly.const(nvars, 1)
    else:
        anchor = block[0]
        rest = block[1:]
        full = (1 << (m - 1)) - 1
        dp = {0: ZPoly.const(nvars, 1)}
        for mask in range(1, full + 1):
            i = mask.bit_count()
            acc: dict = {}
            for bpos in range(m - 1):
                if not mask & (1 << bpos):
                    continue
                prev = mask ^ (1 << bpos)
                prefix = tuple(rest[p] for p in range(m - 1) if prev & (1 << p))
                fac = _step_factor(nvars, anchor, prefix, rest[bpos], i)
                kernels.convolve_into(acc, dp[prev].terms, fac.terms)
            kernels.strip_zeros(acc)
            dp[mask] = ZPoly._raw(nvars, {k: _norm(v) for k, v in acc.items()}, i + 1)
        result = dp[full].scale(Fraction(1, factorial(m)))
    _BLOCK_CACHE[key] = result
    return result


def e_of_block_bruteforce(block, nvars: int) -> ZPoly:
    """Literal permutation-sum evaluation of e(S); test oracle for the
    subset dynamic program."""
    block = tuple(sorted(block))
    if not block:
        raise EmptyBlock("e of the empty set is undefined")
    m = len(block)
    if m == 1:
        return ZPoly.const(nvars, 1)
    anchor = block[0]
    rest = block[1:]
    total = ZPoly.zero(nvars)
    for perm in enumerate_permutations(rest):
        prod = ZPoly.const(nvars, 1)
        for i in range(1, m):
            prod = prod * _step_factor(nvars, anchor, perm[: i - 1], perm[i - 1], i)
        total = total + prod
    return total.scale(Fraction(1, factorial(m)))


def e_of_partition(P: SetPartition, nvars: int | None = None) -> ZPoly:
    """e(P): product of e over the blocks."""
    n = P.n if nvars is None else nvars
    result = ZPoly.const(n, 1)
    for block in P.blocks:
        result = result * e_of_block(block, n)
    return result


def partition_block_factor(P: SetPartition, j: int) -> ZPoly:
    """-|S_j| q + t sigma(S_j) - r sum_{i<j} d(j,i), for 1-based j.

    The empty sum for j = 1 is zero, so the first factor never carries
    an r-term.
    """
    if not 1 <= j <= len(P):
        raise IndexOutOfRange(f"block index {j} of {len(P)}")
    n = P.n
    sj = P.blocks[j - 1]
    m = len(sj)
    earlier = [v for blk in P.blocks[: j - 1] for v in blk]
    entries = []
    zeros = [0] * n
    entries.append(((tuple(zeros), (1, 0, 0)), -m))
    for v in sj:
        ze = zeros.copy()
        ze[v - 1] = 1
        entries.append(((tuple(ze), (0, 1, 0)), 1))
    # r-part: -( |S_j| sigma(earlier) - (#earlier) sigma(S_j) )
    rcoeff: dict[int, int] = {}
    for v in earlier:
        rcoeff[v] = rcoeff.get(v, 0) - m
    for v in sj:
        rcoeff[v] = rcoeff.get(v, 0) + len(earlier)
    for v, cv in rcoeff.items():
        if cv:
            ze = zeros.copy()
            ze[v - 1] = 1
            entries.append(((tuple(ze), (0, 0, 1)), cv))
    return ZPoly.from_terms(n, entries)


def partition_summand(P: SetPartition) -> ZPoly:
    """e(P) * prod_j factor_j for one partition (without the n! scale).

    The product of the |P| linear factors is built first (cheap), the
    expensive high-degree e-blocks are multiplied in last.
    """
    n = P.n
    prod = ZPoly.const(n, 1)
    for j in range(1, len(P) + 1):
        prod = prod * partition_block_factor(P, j)
    for block in P.blocks:
        if len(block) > 1:
            prod = prod * e_of_block(block, n)
    return prod


@dataclass(frozen=True)
class ECPolynomial:
    """EC_n together with its variable count."""

    n: int
    poly: ZPoly

    def degree_ok(self) -> bool:
        return self.poly.z_degree() <= self.n


def _summand_chunk(args):
    partitions, = args
    acc: dict = {}
    for P in partitions:
        kernels.add_into(acc, partition_summand(P).terms)
    kernels.strip_zeros(acc)
    return acc


def ec_poly(n: int, jobs: int = 1, progress=None) -> ECPolynomial:
    """Assemble EC_n exactly.

    The outer sum over set partitions is embarrassingly parallel; with
    jobs > 1 the partitions are chunked across worker processes and the
    partial sums are folded in a fixed order.  Results are cached by n.
    Practical ceiling is n <= 8: Bell(8) = 4140 partitions with degree-7
    block sums already take minutes.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    cached = _EC_CACHE.get(n)
    if cached is not None:
        return cached
    partitions = list(enumerate_set_partitions(n))
    acc: dict = {}
    if jobs > 1 and len(partitions) > 8:
        chunks = [partitions[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for done, part in enumerate(pool.map(_summand_chunk, [(c,) for c in chunks])):
                kernels.add_into(acc, part)
                if progress:
                    progress(done + 1, len(chunks))
    else:
        for done, P in enumerate(partitions):
            kernels.add_into(acc, partition_summand(P).terms)
            if progress and (done + 1) % 64 == 0:
                progress(done + 1, len(partitions))
    kernels.strip_zeros(acc)
    poly = ZPoly._raw(n, {k: _norm(v) for k, v in acc.items()}, 0)
    poly._maxfield = poly._scan_maxfield()
    poly = poly.scale(factorial(n))
    bad = [k for k, v in poly.terms.items() if not isinstance(v, int)]
    if bad:
        zexps, pexps = poly._unpack(bad[0])
        raise IntegralityViolation(
            f"EC_{n} coefficient at z{zexps} q^{pexps[0]} t^{pexps[1]} r^{pexps[2]} "
            f"is {poly.terms[bad[0]]}, not an integer"
        )
    if poly.z_degree() > n:
        raise IntegralityViolation(f"EC_{n} has z-degree {poly.z_degree()} > n")
    result = ECPolynomial(n, poly)
    _EC_CACHE[n] = result
    return result


@dataclass(frozen=True)
class SymmetryVerdict:
    symmetric: bool
    counterexample: int | None = None  # adjacent transposition index, 1-based

    def __str__(self):
        if self.symmetric:
            return "symmetric"
        return f"counterexample at transposition (z{self.counterexample} z{self.counterexample + 1})"


def check_symmetry(p) -> SymmetryVerdict:
    """A polynomial is symmetric iff it is fixed by every adjacent
    transposition (they generate the full symmetric group)."""
    poly = p.poly if isinstance(p, ECPolynomial) else p
    for i in range(1, poly.nvars):
        if poly.apply_transposition(i) != poly:
            return SymmetryVerdict(False, i)
    return SymmetryVerdict(True)


def _specialized_ec(m: int, qv: int, tv: int, rv: int) -> dict:
    """EC_m with numbers substituted for q, t, r: {z-exponents: coeff}.
    Cached; the bridge sums many evaluations of the same polynomial."""
    key = (m, qv, tv, rv)
    cached = _EC_CACHE.get(key)
    if cached is None:
        cached = ec_poly(m).poly.specialize_params(qv, tv, rv)
        _EC_CACHE[key] = cached
    return cached


def ec_eval_bridge_point(m: int, zvals, qv: int, tv: int, rv: int):
    """Evaluate EC_m at an integer point, via the cached specialization."""
    if len(zvals) != m:
        raise VarCountMismatch(f"{len(zvals)} values for EC_{m}")
    spec = _specialized_ec(m, qv, tv, rv)
    total = 0
    for zexps, coeff in spec.items():
        prod = coeff
        for v, e in zip(zvals, zexps):
            if e:
                prod *= v**e
        total += prod
    return _norm(total)
