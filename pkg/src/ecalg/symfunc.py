"""Expansion of symmetric polynomials in five bases and sign reports.

A symmetric polynomial in n variables over the parameter ring is expanded
into monomial (m), Schur (s), elementary (e), complete homogeneous (h)
and power sum (p) symmetric polynomials.  Partitions are plain tuples of
weakly decreasing positive integers; the empty tuple is the constant
term's index with length zero.

Every expansion routes through the monomial basis one homogeneous degree
at a time: the degree-d component is expressed in m, then converted by
solving the exact integer transition system (Kostka numbers for the
Schur case, direct monomial expansions of e/h/p products otherwise) over
rationals.  Schur polynomials come from semistandard-tableau enumeration,
definition-level and slow but trustworthy for the sizes used here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import factorial

from . import kernels
from .combinatorics import partitions_of
from .errors import NotSymmetric, PreconditionViolated, SingularTransition, SizeMismatch
from .ring import ParamPoly, ZPoly, _FIELD_BITS, _norm

BASES = ("m", "s", "e", "h", "p")


# ---------------------------------------------------------------------------
# Kostka numbers via SSYT enumeration
# ---------------------------------------------------------------------------

def _ssyt_count(shape, content) -> int:
    """Count semistandard tableaux: rows weakly increase, columns strictly
    increase, entry i appears content[i-1] times."""
    rows = len(shape)
    remaining = list(content)
    tableau = [[0] * r for r in shape]

    def fill(pos):
        # positions row-major
        r = 0
        p = pos
        while r < rows and p >= shape[r]:
            p -= shape[r]
            r += 1
        if r == rows:
            return 1
        c = p
        total = 0
        lo = 1
        for v in range(1, len(remaining) + 1):
            if not remaining[v - 1]:
                continue
            if c > 0 and v < tableau[r][c - 1]:
                continue
            if r > 0 and v <= tableau[r - 1][c]:
                continue
            tableau[r][c] = v
            remaining[v - 1] -= 1
            total += fill(pos + 1)
            remaining[v - 1] += 1
            tableau[r][c] = 0
        return total

    return fill(0)


@lru_cache(maxsize=None)
def kostka(lam: tuple, mu: tuple) -> int:
    """Number of semistandard Young tableaux of shape lam and content mu."""
    if sum(lam) != sum(mu):
        raise SizeMismatch(f"|{lam}| != |{mu}|")
    if not lam:
        return 1
    return _ssyt_count(lam, mu)


def dominates(lam: tuple, mu: tuple) -> bool:
    """Dominance order on partitions of equal size: partial sums of lam
    weakly exceed those of mu."""
    if sum(lam) != sum(mu):
        raise SizeMismatch(f"|{lam}| != |{mu}|")
    run_l = run_m = 0
    for i in range(max(len(lam), len(mu))):
        run_l += lam[i] if i < len(lam) else 0
        run_m += mu[i] if i < len(mu) else 0
        if run_l < run_m:
            return False
    return True


# ---------------------------------------------------------------------------
# Basis elements as z-monomial maps (packed z-exponent keys -> int)
# ---------------------------------------------------------------------------

def _zpack(exps) -> int:
    key = 0
    shift = 0
    for e in exps:
        key |= e << shift
        shift += _FIELD_BITS
    return key


def _zunpack(key: int, n: int) -> tuple:
    out = []
    for _ in range(n):
        out.append(key & ((1 << _FIELD_BITS) - 1))
        key >>= _FIELD_BITS
    return tuple(out)


def _distinct_permutation_count(padded) -> int:
    total = factorial(len(padded))
    for v in set(padded):
        total //= factorial(padded.count(v))
    return total


@lru_cache(maxsize=None)
def _m_monomials(lam: tuple, n: int) -> dict:
    """m_lam in n variables: every distinct permutation of the padded
    exponent vector, coefficient one."""
    if len(lam) > n:
        raise PreconditionViolated(f"m_{lam} needs at least {len(lam)} variables")
    padded = tuple(lam) + (0,) * (n - len(lam))
    seen = set()

    def rec(prefix, pool):
        if not pool:
            seen.add(_zpack(prefix))
            return
        for v in sorted(set(pool)):
            rest = list(pool)
            rest.remove(v)
            rec(prefix + [v], rest)

    rec([], list(padded))
    return {k: 1 for k in seen}


@lru_cache(maxsize=None)
def _onepart_monomials(basis: str, k: int, n: int) -> dict:
    """e_k, h_k or p_k in n variables as a z-monomial map."""
    if k == 0:
        return {0: 1}
    out: dict = {}
    if basis == "e":
        for subset in combinations(range(n), k):
            exps = [0] * n
            for i in subset:
                exps[i] = 1
            out[_zpack(exps)] = 1
    elif basis == "h":
        for multi in combinations_with_replacement(range(n), k):
            exps = [0] * n
            for i in multi:
                exps[i] += 1
            out[_zpack(exps)] = 1
    elif basis == "p":
        for i in range(n):
            exps = [0] * n
            exps[i] = k
            out[_zpack(exps)] = 1
    else:
        raise ValueError(f"unknown one-part basis {basis!r}")
    return out


@lru_cache(maxsize=None)
def _basis_monomials(basis: str, lam: tuple, n: int) -> dict:
    """The basis element indexed by lam, as a z-monomial map."""
    if basis == "m":
        return _m_monomials(lam, n)
    if basis == "s":
        # Schur polynomial from its monomial expansion by Kostka numbers
        out: dict = {}
        for mu in partitions_of(sum(lam)):
            if len(mu) > n:
                continue
            k = kostka(lam, mu)
            if k:
                kernels.add_into(out, _m_monomials(mu, n), k)
        return out
    if basis in ("e", "h", "p"):
        if lam and lam[0] > n and basis in ("e",):
            return {}
        out = {0: 1}
        for part in lam:
            out = kernels.convolve(out, _onepart_monomials(basis, part, n))
        return out
    raise ValueError(f"unknown basis {basis!r}")


@lru_cache(maxsize=None)
def _basis_m_coeffs(basis: str, lam: tuple, n: int) -> dict:
    """Monomial-basis coefficients of the basis element indexed by lam:
    {mu: integer coefficient of m_mu}."""
    mono = _basis_monomials(basis, lam, n)
    out = {}
    for mu in partitions_of(sum(lam)):
        if len(mu) > n:
            continue
        key = _zpack(tuple(mu) + (0,) * (n - len(mu)))
        c = mono.get(key)
        if c:
            out[mu] = c
    return out


# ---------------------------------------------------------------------------
# Expansions
# ---------------------------------------------------------------------------

@dataclass
class SymExpansion:
    """Coefficients of a symmetric polynomial in one of the five bases."""

    basis: str
    nvars: int
    coeffs: dict  # partition tuple -> ParamPoly

    def ordered_partitions(self):
        return sorted(self.coeffs, key=lambda lam: (sum(lam), tuple(-x for x in lam)))


def expand_monomial(p: ZPoly, n: int | None = None) -> SymExpansion:
    """Monomial-basis expansion: the coefficient of m_lam is the ParamPoly
    coefficient of z^lam (exponents sorted decreasingly).

    Probes consistency: every monomial orbit must be fully present with a
    single shared coefficient, otherwise the input was not symmetric.
    """
    n = p.nvars if n is None else n
    groups: dict = {}
    for zexps, coeff in p.as_zmap().items():
        sig = tuple(sorted((e for e in zexps if e), reverse=True))
        groups.setdefault(sig, []).append((zexps, coeff))
    coeffs = {}
    for sig, members in groups.items():
        padded = tuple(sig) + (0,) * (n - len(sig))
        expected = _distinct_permutation_count(padded)
        first = members[0][1]
        if len(members) != expected or any(c != first for _, c in members[1:]):
            raise NotSymmetric(
                f"monomial orbit {sig}: {len(members)}/{expected} members, "
                "coefficients not constant on the orbit"
            )
        coeffs[sig] = first
    return SymExpansion("m", n, coeffs)


def _solve_exact(matrix, rhs):
    """Gauss-Jordan over Fractions with ParamPoly right-hand sides."""
    size = len(matrix)
    m = [[Fraction(x) for x in row] for row in matrix]
    out = list(rhs)
    for col in range(size):
        piv = next((r for r in range(col, size) if m[r][col]), None)
        if piv is None:
            raise SingularTransition(f"no pivot in column {col}")
        m[col], m[piv] = m[piv], m[col]
        out[col], out[piv] = out[piv], out[col]
        pv = m[col][col]
        if pv != 1:
            m[col] = [x / pv for x in m[col]]
            out[col] = out[col].scale(Fraction(1, 1) / pv)
        for r in range(size):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
                out[r] = out[r] - out[col].scale(f)
    return out


def expand(p: ZPoly, basis: str, n: int | None = None) -> SymExpansion:
    """Expand a symmetric polynomial in the requested basis."""
    n = p.nvars if n is None else n
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}")
    mexp = expand_monomial(p, n)
    if basis == "m":
        return mexp
    if basis in ("e", "h", "p") and p.z_degree() > n:
        raise PreconditionViolated(
            f"{basis}-expansion needs degree <= nvars, got degree {p.z_degree()}"
        )
    by_degree: dict[int, dict] = {}
    for lam, coeff in mexp.coeffs.items():
        by_degree.setdefault(sum(lam), {})[lam] = coeff
    coeffs = {}
    for d, comp in sorted(by_degree.items()):
        lams = [lam for lam in partitions_of(d) if len(lam) <= n]
        matrix = [
            [_basis_m_coeffs(basis, lam, n).get(mu, 0) for lam in lams]
            for mu in lams
        ]
        rhs = [comp.get(mu, ParamPoly.zero()) for mu in lams]
        sol = _solve_exact(matrix, rhs)
        for lam, c in zip(lams, sol):
            if not c.is_zero():
                coeffs[lam] = c
    return SymExpansion(basis, n, coeffs)


def expand_schur(p: ZPoly, n: int | None = None) -> SymExpansion:
    return expand(p, "s", n)


def expand_elementary(p: ZPoly, n: int | None = None) -> SymExpansion:
    return expand(p, "e", n)


def expand_homogeneous(p: ZPoly, n: int | None = None) -> SymExpansion:
    return expand(p, "h", n)


def expand_powersum(p: ZPoly, n: int | None = None) -> SymExpansion:
    return expand(p, "p", n)


def reconstruct(exp: SymExpansion) -> ZPoly:
    """Rebuild the polynomial from an expansion (exact round trip)."""
    n = exp.nvars
    acc: dict = {}
    shift = _FIELD_BITS * n
    for lam, coeff in exp.coeffs.items():
        mono = _basis_monomials(exp.basis, lam, n)
        pmap = {
            (dq << shift) | (dt << (shift + _FIELD_BITS)) | (dr << (shift + 2 * _FIELD_BITS)): v
            for (dq, dt, dr), v in coeff.terms.items()
        }
        kernels.convolve_into(acc, mono, pmap)
    kernels.strip_zeros(acc)
    poly = ZPoly._raw(n, {k: _norm(v) for k, v in acc.items()}, 0)
    poly._maxfield = poly._scan_maxfield()
    return poly


# ---------------------------------------------------------------------------
# Sign coherency
# ---------------------------------------------------------------------------

@dataclass
class CoherencyVerdict:
    """Per-partition sign classes plus the parity-of-length verdict."""

    basis: str
    per_partition: dict  # partition tuple -> sign class string
    coherent: bool
    violation: tuple | None = None  # (partition, canonical coefficient)
    parity_map: dict = field(default_factory=dict)  # "even"/"odd" -> sign class


def sign_coherency(exp: SymExpansion) -> CoherencyVerdict:
    """Classify each coefficient's signs; coherent iff no partition is
    mixed and, within each parity class of the partition length, all
    nonzero coefficient signs agree."""
    per = {}
    violation = None
    for lam in exp.ordered_partitions():
        cls = exp.coeffs[lam].sign_class()
        per[lam] = cls
        if cls == "mixed" and violation is None:
            violation = (lam, exp.coeffs[lam].canonical())
    parity_signs = {"even": set(), "odd": set()}
    for lam, cls in per.items():
        if cls in ("nonneg", "nonpos"):
            parity_signs["even" if len(lam) % 2 == 0 else "odd"].add(cls)
    parity_map = {}
    for parity, signs in parity_signs.items():
        if not signs:
            parity_map[parity] = "zero"
        elif len(signs) == 1:
            parity_map[parity] = next(iter(signs))
        else:
            parity_map[parity] = "mixed"
            if violation is None:
                bad = next(
                    lam
                    for lam, cls in per.items()
                    if cls in ("nonneg", "nonpos")
                    and ("even" if len(lam) % 2 == 0 else "odd") == parity
                )
                violation = (bad, exp.coeffs[bad].canonical())
    coherent = violation is None
    return CoherencyVerdict(exp.basis, per, coherent, violation, parity_map)
