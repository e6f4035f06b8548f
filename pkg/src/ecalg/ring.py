"""Exact arithmetic foundation.

Three sparse polynomial types, all with arbitrary-precision exact
coefficients and canonical term maps (no stored zeros):

* ``ParamPoly``  — polynomials in the parameters q, t, r over Q.
* ``ZPoly``      — polynomials in z1..zn whose coefficients are ParamPoly
                   values (stored flat: one term map over all n+3 symbols).
* ``LaurentPoly2`` — Laurent polynomials in x1, x2 over Z.

Rational coefficients are ``fractions.Fraction``; values with denominator
one are normalised to ``int`` (equal values compare and hash equal either
way, so term-map equality is unaffected).

Canonical text form (round-trip safe, used by golden files and the CLI)::

    poly    := "0" | term (" + " term)*
    term    := coeff | coeff "*" factor ("*" factor)*
    factor  := name "^" exponent          # exponent always printed
    coeff   := ["-"] digits ["/" digits]  # denominator omitted when 1

Factors appear in the fixed symbol order q, t, r, z1..zn (x1, x2 for
Laurent polynomials); zero exponents are omitted.  Terms are sorted by
graded lexicographic order on the exponent vector (total degree first,
then the exponent tuple in the same symbol order), ascending.
"""
from __future__ import annotations

import re
from fractions import Fraction

from . import kernels
from .errors import IndexOutOfRange, InexactDivision, VarCountMismatch

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is an optional accelerator
    _mpz = None

BigRat = Fraction

# Exponent fields are packed 16 bits apart; single exponents must stay
# below 2^15 so that one product cannot overflow a field.
_FIELD_BITS = 16
_FIELD_MAX = 1 << 15
_FIELD_MASK = (1 << _FIELD_BITS) - 1

_COEFF_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")
_FACTOR_RE = re.compile(r"^([A-Za-z]+\d*)\^(-?\d+)$")


def _norm(v):
    """Normalise a coefficient: integral Fractions become ints."""
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


def _coeff_str(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return str(v)


def _parse_coeff(s: str):
    m = _COEFF_RE.match(s)
    if not m:
        raise ValueError(f"malformed coefficient {s!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return num
    return _norm(Fraction(num, int(m.group(2))))


def _split_terms(s: str):
    s = s.strip()
    if s == "0":
        return []
    return s.split(" + ")


def _parse_term(term: str, names: dict[str, int], nfields: int):
    """Parse one canonical term into (exponent list, coefficient)."""
    parts = term.split("*")
    coeff = _parse_coeff(parts[0])
    exps = [0] * nfields
    for fac in parts[1:]:
        m = _FACTOR_RE.match(fac)
        if not m:
            raise ValueError(f"malformed factor {fac!r}")
        name, e = m.group(1), int(m.group(2))
        if name not in names:
            raise ValueError(f"unknown symbol {name!r}")
        if exps[names[name]]:
            raise ValueError(f"repeated symbol {name!r}")
        exps[names[name]] = e
    return exps, coeff


# ---------------------------------------------------------------------------
# ParamPoly
# ---------------------------------------------------------------------------

class ParamPoly:
    """Exact polynomial in the three parameters q, t, r.

    Terms are a map from exponent triples (dq, dt, dr) to nonzero
    rational coefficients; equality is term-map equality.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, val in terms.items():
                dq, dt, dr = key
                if dq < 0 or dt < 0 or dr < 0:
                    raise ValueError(f"negative parameter exponent in {key}")
                val = _norm(val if isinstance(val, (int, Fraction)) else Fraction(val))
                if val:
                    self.terms[(dq, dt, dr)] = val

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "ParamPoly":
        return cls()

    @classmethod
    def const(cls, value) -> "ParamPoly":
        return cls({(0, 0, 0): value})

    @classmethod
    def one(cls) -> "ParamPoly":
        return cls.const(1)

    @classmethod
    def monomial(cls, dq: int, dt: int, dr: int, coeff=1) -> "ParamPoly":
        return cls({(dq, dt, dr): coeff})

    @classmethod
    def q(cls) -> "ParamPoly":
        return cls.monomial(1, 0, 0)

    @classmethod
    def t(cls) -> "ParamPoly":
        return cls.monomial(0, 1, 0)

    @classmethod
    def r(cls) -> "ParamPoly":
        return cls.monomial(0, 0, 1)

    # -- ring operations ----------------------------------------------
    def __add__(self, other: "ParamPoly") -> "ParamPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = _norm(s)
            else:
                out.pop(k, None)
        return ParamPoly._raw(out)

    def __sub__(self, other: "ParamPoly") -> "ParamPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, 0) - v
            if s:
                out[k] = _norm(s)
            else:
                out.pop(k, None)
        return ParamPoly._raw(out)

    def __neg__(self) -> "ParamPoly":
        return ParamPoly._raw({k: -v for k, v in self.terms.items()})

    def __mul__(self, other: "ParamPoly") -> "ParamPoly":
        out = {}
        for (a1, a2, a3), va in self.terms.items():
            for (b1, b2, b3), vb in other.terms.items():
                k = (a1 + b1, a2 + b2, a3 + b3)
                s = out.get(k, 0) + va * vb
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return ParamPoly._raw({k: _norm(v) for k, v in out.items() if v})

    def scale(self, value) -> "ParamPoly":
        if not value:
            return ParamPoly.zero()
        return ParamPoly._raw({k: _norm(v * value) for k, v in self.terms.items()})

    @classmethod
    def _raw(cls, terms: dict) -> "ParamPoly":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    # -- queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree in q, t, r (zero polynomial has degree -1)."""
        if not self.terms:
            return -1
        return max(sum(k) for k in self.terms)

    def evaluate(self, qv, tv, rv):
        total = 0
        for (dq, dt, dr), v in self.terms.items():
            total += v * qv**dq * tv**dt * rv**dr
        return _norm(total)

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self.terms.values())

    def sign_class(self) -> str:
        """Classify the rational coefficients: zero/nonneg/nonpos/mixed."""
        if not self.terms:
            return "zero"
        has_pos = any(v > 0 for v in self.terms.values())
        has_neg = any(v < 0 for v in self.terms.values())
        if has_pos and has_neg:
            return "mixed"
        return "nonneg" if has_pos else "nonpos"

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- canonical text form ----------------------------------------------
    _NAMES = ("q", "t", "r")

    def canonical(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        chunks = []
        for key, val in items:
            facs = [f"{n}^{e}" for n, e in zip(self._NAMES, key) if e]
            chunks.append("*".join([_coeff_str(val)] + facs))
        return " + ".join(chunks)

    @classmethod
    def parse(cls, s: str) -> "ParamPoly":
        names = {n: i for i, n in enumerate(cls._NAMES)}
        terms = {}
        for chunk in _split_terms(s):
            exps, coeff = _parse_term(chunk, names, 3)
            key = tuple(exps)
            if key in terms:
                raise ValueError(f"repeated monomial in {s!r}")
            terms[key] = coeff
        return cls(terms)

    def __repr__(self):
        return f"ParamPoly({self.canonical()})"


# ---------------------------------------------------------------------------
# ZPoly
# ---------------------------------------------------------------------------

class ZPoly:
    """Polynomial in z1..zn over the parameter ring, stored flat.

    Internally a single term map over the n+3 symbols (z1..zn, q, t, r)
    with packed-integer exponent keys; the view ``as_zmap`` regroups it
    as a map from z-exponent vectors to ParamPoly coefficients.
    """

    __slots__ = ("nvars", "terms", "_maxfield")

    def __init__(self, nvars: int, terms=None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        self.nvars = nvars
        self.terms = {}
        self._maxfield = 0
        if terms:
            for key, val in terms.items():
                val = _norm(val)
                if val:
                    self.terms[key] = val
            self._maxfield = self._scan_maxfield()

    @classmethod
    def _raw(cls, nvars: int, terms: dict, maxfield: int) -> "ZPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._maxfield = maxfield
        return p

    def _scan_maxfield(self) -> int:
        best = 0
        for key in self.terms:
            while key:
                f = key & _FIELD_MASK
                if f > best:
                    best = f
                key >>= _FIELD_BITS
        return best

    # -- packing ---------------------------------------------------------
    def _pack(self, zexps, pexps=(0, 0, 0)) -> int:
        key = 0
        shift = 0
        for e in zexps:
            if e < 0 or e >= _FIELD_MAX:
                raise ValueError(f"exponent {e} out of range")
            key |= e << shift
            shift += _FIELD_BITS
        for e in pexps:
            if e < 0 or e >= _FIELD_MAX:
                raise ValueError(f"exponent {e} out of range")
            key |= e << shift
            shift += _FIELD_BITS
        return key

    def _unpack(self, key: int):
        exps = []
        for _ in range(self.nvars + 3):
            exps.append(key & _FIELD_MASK)
            key >>= _FIELD_BITS
        return tuple(exps[: self.nvars]), tuple(exps[self.nvars:])

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "ZPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value) -> "ZPoly":
        p = cls(nvars)
        value = _norm(value)
        if value:
            p.terms[0] = value
            p._maxfield = 0
        return p

    @classmethod
    def var(cls, nvars: int, i: int) -> "ZPoly":
        """The variable z_i (1-based)."""
        if not 1 <= i <= nvars:
            raise IndexOutOfRange(f"z{i} with nvars={nvars}")
        p = cls(nvars)
        p.terms[1 << (_FIELD_BITS * (i - 1))] = 1
        p._maxfield = 1
        return p

    @classmethod
    def from_param(cls, nvars: int, param: ParamPoly) -> "ZPoly":
        """Embed a ParamPoly as a z-free polynomial."""
        p = cls(nvars)
        shift = _FIELD_BITS * nvars
        mf = 0
        for (dq, dt, dr), v in param.terms.items():
            key = (dq << shift) | (dt << (shift + _FIELD_BITS)) | (dr << (shift + 2 * _FIELD_BITS))
            p.terms[key] = v
            mf = max(mf, dq, dt, dr)
        p._maxfield = mf
        return p

    @classmethod
    def from_terms(cls, nvars: int, entries) -> "ZPoly":
        """Build from ((zexps, (dq, dt, dr)), coeff) pairs."""
        p = cls(nvars)
        mf = 0
        for (zexps, pexps), coeff in entries:
            if len(zexps) != nvars:
                raise VarCountMismatch(f"exponent vector length {len(zexps)} != {nvars}")
            coeff = _norm(coeff)
            if not coeff:
                continue
            key = p._pack(zexps, pexps)
            if key in p.terms:
                raise ValueError("repeated monomial")
            p.terms[key] = coeff
            mf = max(mf, *zexps, *pexps)
        p._maxfield = mf
        return p

    @classmethod
    def linear_form(cls, nvars: int, coeffs: dict[int, int]) -> "ZPoly":
        """Integer linear form sum(coeffs[i] * z_i), 1-based indices."""
        p = cls(nvars)
        mf = 0
        for i, c in coeffs.items():
            if not 1 <= i <= nvars:
                raise IndexOutOfRange(f"z{i} with nvars={nvars}")
            if c:
                p.terms[1 << (_FIELD_BITS * (i - 1))] = c
                mf = 1
        p._maxfield = mf
        return p

    # -- ring operations -----------------------------------------------------
    def _check_compat(self, other: "ZPoly"):
        if self.nvars != other.nvars:
            raise VarCountMismatch(f"{self.nvars} != {other.nvars}")

    def __add__(self, other: "ZPoly") -> "ZPoly":
        self._check_compat(other)
        out = dict(self.terms)
        kernels.add_into(out, other.terms)
        kernels.strip_zeros(out)
        out = {k: _norm(v) for k, v in out.items()}
        return ZPoly._raw(self.nvars, out, max(self._maxfield, other._maxfield))

    def __sub__(self, other: "ZPoly") -> "ZPoly":
        self._check_compat(other)
        out = dict(self.terms)
        kernels.add_into(out, other.terms, -1)
        kernels.strip_zeros(out)
        out = {k: _norm(v) for k, v in out.items()}
        return ZPoly._raw(self.nvars, out, max(self._maxfield, other._maxfield))

    def __neg__(self) -> "ZPoly":
        return ZPoly._raw(self.nvars, {k: -v for k, v in self.terms.items()}, self._maxfield)

    def __mul__(self, other: "ZPoly") -> "ZPoly":
        self._check_compat(other)
        if self._maxfield + other._maxfield >= (1 << _FIELD_BITS):
            raise OverflowError("exponent field overflow in z-polynomial product")
        out = kernels.convolve(self.terms, other.terms)
        out = {k: _norm(v) for k, v in out.items()}
        return ZPoly._raw(self.nvars, out, self._maxfield + other._maxfield)

    def scale(self, value) -> "ZPoly":
        """Multiply by a rational scalar."""
        value = _norm(value)
        if not value:
            return ZPoly.zero(self.nvars)
        out = {k: _norm(v * value) for k, v in self.terms.items()}
        return ZPoly._raw(self.nvars, out, self._maxfield)

    def scale_param(self, param: ParamPoly) -> "ZPoly":
        """Multiply by a ParamPoly coefficient."""
        return self * ZPoly.from_param(self.nvars, param)

    # -- variable actions -------------------------------------------------
    def apply_transposition(self, i: int) -> "ZPoly":
        """Swap the variables z_i and z_{i+1} (1-based), re-canonicalised."""
        if not 1 <= i < self.nvars:
            raise IndexOutOfRange(f"transposition ({i} {i + 1}) with nvars={self.nvars}")
        lo = _FIELD_BITS * (i - 1)
        hi = _FIELD_BITS * i
        mask_lo = _FIELD_MASK << lo
        mask_hi = _FIELD_MASK << hi
        mask_rest = ~(mask_lo | mask_hi)
        out = {}
        for key, v in self.terms.items():
            a = (key & mask_lo) >> lo
            b = (key & mask_hi) >> hi
            out[(key & mask_rest) | (b << lo) | (a << hi)] = v
        return ZPoly._raw(self.nvars, out, self._maxfield)

    def permute(self, perm) -> "ZPoly":
        """Relabel variables: z_i -> z_{perm[i-1]} (perm is 1-based values)."""
        if sorted(perm) != list(range(1, self.nvars + 1)):
            raise IndexOutOfRange(f"not a permutation of 1..{self.nvars}: {perm}")
        out = {}
        for key, v in self.terms.items():
            zexps, pexps = self._unpack(key)
            new = [0] * self.nvars
            for i, e in enumerate(zexps):
                new[perm[i] - 1] = e
            out[self._pack(new, pexps)] = v
        return ZPoly._raw(self.nvars, out, self._maxfield)

    # -- evaluation -----------------------------------------------------------
    def eval_int(self, zvals, qv, tv, rv):
        """Exact evaluation at integer (or rational) points."""
        if len(zvals) != self.nvars:
            raise VarCountMismatch(f"{len(zvals)} values for {self.nvars} variables")
        vals = list(zvals) + [qv, tv, rv]
        pows = [{0: 1} for _ in vals]
        total = 0
        for key, coeff in self.terms.items():
            prod = coeff
            idx = 0
            while key:
                e = key & _FIELD_MASK
                if e:
                    tab = pows[idx]
                    pw = tab.get(e)
                    if pw is None:
                        pw = vals[idx] ** e
                        tab[e] = pw
                    prod *= pw
                key >>= _FIELD_BITS
                idx += 1
            total += prod
        return _norm(total)

    def specialize_params(self, qv, tv, rv) -> dict:
        """Substitute numbers for q, t, r; returns {z-exponent tuple: coeff}."""
        out = {}
        for key, coeff in self.terms.items():
            zexps, (dq, dt, dr) = self._unpack(key)
            val = coeff * qv**dq * tv**dt * rv**dr
            if val:
                s = out.get(zexps, 0) + val
                if s:
                    out[zexps] = s
                else:
                    out.pop(zexps, None)
        return {k: _norm(v) for k, v in out.items() if v}

    # -- views / queries ----------------------------------------------------
    def as_zmap(self) -> dict:
        """View as {z-exponent tuple: ParamPoly}."""
        grouped: dict[tuple, dict] = {}
        for key, coeff in self.terms.items():
            zexps, pexps = self._unpack(key)
            grouped.setdefault(zexps, {})[pexps] = coeff
        return {z: ParamPoly._raw(p) for z, p in grouped.items()}

    def z_degree(self) -> int:
        """Total degree in the z variables (zero polynomial: -1)."""
        if not self.terms:
            return -1
        best = -1
        for key in self.terms:
            d = 0
            for _ in range(self.nvars):
                d += key & _FIELD_MASK
                key >>= _FIELD_BITS
            if d > best:
                best = d
        return best

    def is_zero(self) -> bool:
        return not self.terms

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self.terms.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- canonical text form ---------------------------------------------------
    def _names(self):
        return ["q", "t", "r"] + [f"z{i}" for i in range(1, self.nvars + 1)]

    def canonical(self) -> str:
        if not self.terms:
            return "0"
        rows = []
        for key, val in self.terms.items():
            zexps, pexps = self._unpack(key)
            vec = pexps + zexps  # fixed symbol order q, t, r, z1..zn
            rows.append((sum(vec), vec, val))
        rows.sort(key=lambda row: (row[0], row[1]))
        names = self._names()
        chunks = []
        for _, vec, val in rows:
            facs = [f"{n}^{e}" for n, e in zip(names, vec) if e]
            chunks.append("*".join([_coeff_str(val)] + facs))
        return " + ".join(chunks)

    @classmethod
    def parse(cls, s: str, nvars: int) -> "ZPoly":
        names = {"q": 0, "t": 1, "r": 2}
        for i in range(1, nvars + 1):
            names[f"z{i}"] = 2 + i
        entries = []
        for chunk in _split_terms(s):
            exps, coeff = _parse_term(chunk, names, nvars + 3)
            pexps = tuple(exps[:3])
            zexps = tuple(exps[3:])
            entries.append(((zexps, pexps), coeff))
        return cls.from_terms(nvars, entries)

    def __repr__(self):
        return f"ZPoly(n={self.nvars}, {self.canonical()})"


# ---------------------------------------------------------------------------
# LaurentPoly2
# ---------------------------------------------------------------------------

# x2 exponents are packed in the low "digit" of a signed positional key
# (key = p1 * _L_BASE + p2), so key addition adds exponent pairs as long
# as |p2| stays below _L_BASE / 2.
_L_BASE = 1 << 26
_L_HALF = _L_BASE >> 1


def _l_pack(p1: int, p2: int) -> int:
    if not -_L_HALF < p2 < _L_HALF or not -_L_HALF < p1 < _L_HALF:
        raise ValueError(f"Laurent exponent ({p1}, {p2}) out of range")
    return p1 * _L_BASE + p2


def _l_unpack(key: int):
    p2 = ((key + _L_HALF) % _L_BASE) - _L_HALF
    return (key - p2) // _L_BASE, p2


class LaurentPoly2:
    """Laurent polynomial in x1, x2 with integer coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for (p1, p2), c in terms.items():
                if not isinstance(c, int):
                    raise ValueError("Laurent coefficients must be integers")
                if c:
                    self.terms[_l_pack(p1, p2)] = c

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly2":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls) -> "LaurentPoly2":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly2":
        return cls({(0, 0): 1})

    @classmethod
    def monomial(cls, coeff: int, p1: int, p2: int) -> "LaurentPoly2":
        return cls({(p1, p2): coeff})

    @classmethod
    def x1(cls) -> "LaurentPoly2":
        return cls.monomial(1, 1, 0)

    @classmethod
    def x2(cls) -> "LaurentPoly2":
        return cls.monomial(1, 0, 1)

    # -- ring operations -----------------------------------------------------
    def __add__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        out = dict(self.terms)
        kernels.add_into(out, other.terms)
        kernels.strip_zeros(out)
        return LaurentPoly2._raw(out)

    def __sub__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        out = dict(self.terms)
        kernels.add_into(out, other.terms, -1)
        kernels.strip_zeros(out)
        return LaurentPoly2._raw(out)

    def __neg__(self) -> "LaurentPoly2":
        return LaurentPoly2._raw({k: -v for k, v in self.terms.items()})

    def __mul__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        if _kron_applicable(self.terms, other.terms):
            return LaurentPoly2._raw(_kron_mul(self.terms, other.terms))
        return LaurentPoly2._raw(kernels.convolve(self.terms, other.terms))

    def __pow__(self, e: int) -> "LaurentPoly2":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        if e == 0:
            return LaurentPoly2.one()
        if _mpz is not None and len(self.terms) ** e > _KRON_PAIRS and _all_nonneg(self.terms):
            return LaurentPoly2._raw(_kron_pow(self.terms, e))
        result = None
        base = self
        k = e
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exact_divide(self, den: "LaurentPoly2") -> "LaurentPoly2":
        """Return Q with Q * den == self, exactly.

        Raises InexactDivision when no exact integer quotient exists.
        """
        if not den.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return LaurentPoly2.zero()
        if len(den.terms) == 1:
            return LaurentPoly2._raw(_div_monomial(self.terms, den.terms))
        if _kron_applicable(self.terms, den.terms):
            q = _kron_divexact(self.terms, den.terms)
            if q is not None:
                return LaurentPoly2._raw(q)
        return LaurentPoly2._raw(_divexact_dict(self.terms, den.terms))

    # -- queries --------------------------------------------------------------
    def coeff(self, p1: int, p2: int) -> int:
        return self.terms.get(_l_pack(p1, p2), 0)

    def items(self):
        """Iterate (p1, p2, coeff)."""
        for key, c in self.terms.items():
            p1, p2 = _l_unpack(key)
            yield p1, p2, c

    def coeff_sum(self) -> int:
        """Value at x1 = x2 = 1."""
        return sum(self.terms.values())

    def evaluate(self, x1v, x2v):
        """Exact evaluation at nonzero rational points."""
        total = Fraction(0)
        for p1, p2, c in self.items():
            total += c * Fraction(x1v) ** p1 * Fraction(x2v) ** p2
        return _norm(total)

    def min_coeff(self) -> int:
        return min(self.terms.values()) if self.terms else 0

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly2):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    # -- canonical text form -----------------------------------------------------
    def canonical(self) -> str:
        if not self.terms:
            return "0"
        rows = sorted(
            ((p1 + p2, (p1, p2), c) for p1, p2, c in self.items()),
            key=lambda row: (row[0], row[1]),
        )
        chunks = []
        for _, (p1, p2), c in rows:
            facs = []
            if p1:
                facs.append(f"x1^{p1}")
            if p2:
                facs.append(f"x2^{p2}")
            chunks.append("*".join([str(c)] + facs))
        return " + ".join(chunks)

    @classmethod
    def parse(cls, s: str) -> "LaurentPoly2":
        names = {"x1": 0, "x2": 1}
        terms = {}
        for chunk in _split_terms(s):
            exps, coeff = _parse_term(chunk, names, 2)
            key = (exps[0], exps[1])
            if key in terms:
                raise ValueError(f"repeated monomial in {s!r}")
            terms[key] = coeff
        return cls(terms)

    def __repr__(self):
        return f"LaurentPoly2({self.canonical()})"


# -- plain dict division ------------------------------------------------------

def _l_order(key: int):
    p1, p2 = _l_unpack(key)
    return (p1 + p2, p1, p2)


def _div_monomial(num: dict, den: dict) -> dict:
    (dk, dc), = den.items()
    out = {}
    for k, c in num.items():
        if c % dc:
            raise InexactDivision(f"coefficient {c} not divisible by {dc}")
        out[k - dk] = c // dc
    return out


def _support_box(terms: dict):
    p1s = []
    p2s = []
    for key in terms:
        p1, p2 = _l_unpack(key)
        p1s.append(p1)
        p2s.append(p2)
    return min(p1s), max(p1s), min(p2s), max(p2s)


def _divexact_dict(num: dict, den: dict) -> dict:
    """Greedy leading-term division under graded lex; exact or raises."""
    ltk = max(den, key=_l_order)
    ltc = den[ltk]
    nlo1, nhi1, nlo2, nhi2 = _support_box(num)
    dlo1, dhi1, dlo2, dhi2 = _support_box(den)
    # any term of an exact quotient must land in this box
    qbox = (nlo1 - dhi1, nhi1 - dlo1, nlo2 - dhi2, nhi2 - dlo2)
    rem = dict(num)
    quot = {}
    while rem:
        rk = max(rem, key=_l_order)
        rc = rem[rk]
        qk = rk - ltk
        q1, q2 = _l_unpack(qk)
        if not (qbox[0] <= q1 <= qbox[1] and qbox[2] <= q2 <= qbox[3]):
            raise InexactDivision("leading term escapes the quotient support box")
        if rc % ltc:
            raise InexactDivision(f"coefficient {rc} not divisible by {ltc}")
        qc = rc // ltc
        quot[qk] = qc
        for dk, dc in den.items():
            k = qk + dk
            s = rem.get(k, 0) - qc * dc
            if s:
                rem[k] = s
            else:
                rem.pop(k, None)
    return quot


# -- Kronecker-substitution fast path -------------------------------------------
#
# Large all-nonnegative operands are packed into one big integer per
# polynomial (coefficients in fixed-width bit slots, exponents mapped to
# slot positions) so that polynomial multiplication becomes a single
# integer multiplication, which gmpy2/GMP performs with FFT speed.

_KRON_PAIRS = 2_000_000  # term-pair count above which packing pays off


def _all_nonneg(terms: dict) -> bool:
    return all(v >= 0 for v in terms.values())


def _kron_applicable(a: dict, b: dict) -> bool:
    return (
        _mpz is not None
        and len(a) * len(b) > _KRON_PAIRS
        and _all_nonneg(a)
        and _all_nonneg(b)
    )


def _slot_bytes(coeff_bound: int) -> int:
    return (coeff_bound.bit_length() + 8) // 8


def _kron_pack(terms: dict, lo1: int, lo2: int, width: int, slot: int) -> int:
    entries = []
    nslots = 0
    for key, c in terms.items():
        p1, p2 = _l_unpack(key)
        idx = (p1 - lo1) + width * (p2 - lo2)
        entries.append((idx, c))
        if idx >= nslots:
            nslots = idx + 1
    buf = bytearray(nslots * slot)
    for idx, c in entries:
        buf[idx * slot : idx * slot + slot] = c.to_bytes(slot, "little")
    return int.from_bytes(buf, "little")


def _kron_unpack(value: int, lo1: int, lo2: int, width: int, slot: int) -> dict:
    buf = value.to_bytes((value.bit_length() + 7) // 8 + slot, "little")
    out = {}
    nslots = len(buf) // slot
    for idx in range(nslots):
        c = int.from_bytes(buf[idx * slot : (idx + 1) * slot], "little")
        if c:
            p1 = idx % width + lo1
            p2 = idx // width + lo2
            out[_l_pack(p1, p2)] = c
    return out


def _kron_mul(a: dict, b: dict) -> dict:
    alo1, ahi1, alo2, ahi2 = _support_box(a)
    blo1, bhi1, blo2, bhi2 = _support_box(b)
    width = (ahi1 - alo1) + (bhi1 - blo1) + 1
    bound = sum(a.values()) * sum(b.values())
    slot = _slot_bytes(bound)
    na = _mpz(_kron_pack(a, alo1, alo2, width, slot))
    nb = _mpz(_kron_pack(b, blo1, blo2, width, slot))
    return _kron_unpack(int(na * nb), alo1 + blo1, alo2 + blo2, width, slot)


def _kron_pow(a: dict, e: int) -> dict:
    alo1, ahi1, alo2, ahi2 = _support_box(a)
    width = e * (ahi1 - alo1) + 1
    bound = sum(a.values()) ** e
    slot = _slot_bytes(bound)
    na = _mpz(_kron_pack(a, alo1, alo2, width, slot))
    return _kron_unpack(int(na**e), e * alo1, e * alo2, width, slot)


def _kron_divexact(num: dict, den: dict):
    """Packed exact division; returns the quotient term map or None.

    The unpacked candidate is verified by re-multiplication, so a None
    (fall back to the classic algorithm) is the only possible failure
    mode; a wrong quotient can never escape.
    """
    nlo1, nhi1, nlo2, nhi2 = _support_box(num)
    dlo1, dhi1, dlo2, dhi2 = _support_box(den)
    width = (nhi1 - nlo1) + 1
    bound = sum(num.values())
    slot = _slot_bytes(bound)
    nn = _mpz(_kron_pack(num, nlo1, nlo2, width, slot))
    nd = _mpz(_kron_pack(den, dlo1, dlo2, width, slot))
    q, rem = divmod(nn, nd)
    if rem:
        return None
    cand = _kron_unpack(int(q), nlo1 - dlo1, nlo2 - dlo2, width, slot)
    if not cand:
        return None
    # verify: cand * den must reproduce num exactly
    if _kron_applicable(cand, den):
        check = _kron_mul(cand, den)
    else:
        check = kernels.convolve(cand, den)
    if check != num:
        return None
    return cand
