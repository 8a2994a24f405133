"""Exact multivariate polynomial / rational-function arithmetic over Z.

Everything is exact: coefficients are Python ints, exponents are integer
vectors with a fixed arity per variable context.  Rational expressions
are kept reduced (numerator and denominator coprime) and sign-normalized
(denominator leading coefficient positive), so equality is structural.

Internally an exponent vector is packed into one integer, 32 bits per
variable with the first variable most significant; packed values compare
exactly like exponent tuples in lexicographic order, and monomial
multiplication is a single integer addition.  The public Polynomial and
LaurentPolynomial types expose plain exponent tuples.

The gcd is the classic primitive pseudo-remainder sequence, recursing
variable by variable, with a divisibility probe first: cluster-algebra
arithmetic almost always divides by an earlier cluster variable, so the
probe usually removes the remainder sequence entirely.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd as int_gcd
from typing import Iterable, Mapping, Optional

from .errors import AlgebraError

Exponents = tuple[int, ...]
Terms = dict[int, int]  # packed exponent -> nonzero coefficient

_SHIFT = 32
_MASK = (1 << _SHIFT) - 1


def _pack(e: Exponents) -> int:
    out = 0
    for x in e:
        if x < 0 or x > _MASK:
            raise AlgebraError(f"exponent {x} out of packing range")
        out = (out << _SHIFT) | x
    return out


def _unpack(p: int, arity: int) -> Exponents:
    return tuple((p >> (_SHIFT * (arity - 1 - i))) & _MASK for i in range(arity))


def _unit(arity: int, i: int) -> int:
    return 1 << (_SHIFT * (arity - 1 - i))


def _field(p: int, arity: int, i: int) -> int:
    return (p >> (_SHIFT * (arity - 1 - i))) & _MASK


# -- raw term-dict helpers -------------------------------------------------


def _tadd(a: Terms, b: Terms) -> Terms:
    out = dict(a)
    get = out.get
    for e, c in b.items():
        n = get(e, 0) + c
        if n:
            out[e] = n
        else:
            del out[e]
    return out


def _tneg(a: Terms) -> Terms:
    return {e: -c for e, c in a.items()}


def _tmul(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    get = out.get
    bitems = list(b.items())
    for ea, ca in a.items():
        for eb, cb in bitems:
            e = ea + eb
            n = get(e, 0) + ca * cb
            if n:
                out[e] = n
            else:
                del out[e]
    return out


def _is_const(a: Terms) -> bool:
    return all(e == 0 for e in a)


def _int_content(a: Terms) -> int:
    g = 0
    for c in a.values():
        g = int_gcd(g, c)
        if g == 1:
            return 1
    return g


def _lead_exp(a: Terms) -> int:
    return max(a)


def _sign_normalize(a: Terms) -> tuple[Terms, int]:
    """Make the lexicographic leading coefficient positive; return (poly, sign)."""
    if not a:
        return a, 1
    if a[_lead_exp(a)] < 0:
        return _tneg(a), -1
    return a, 1


def _deg_in(a: Terms, arity: int, var: int) -> int:
    if not a:
        return -1
    return max(_field(e, arity, var) for e in a)


def _coeff_in(a: Terms, arity: int, var: int, power: int) -> Terms:
    """Coefficient of var**power, with that exponent slot zeroed."""
    unit = _unit(arity, var)
    out: Terms = {}
    for e, c in a.items():
        if _field(e, arity, var) == power:
            out[e - power * unit] = c
    return out


def _div_exact(a: Terms, b: Terms, arity: int) -> Optional[Terms]:
    """Exact multivariate division a / b, or None if b does not divide a.

    Lex leading terms are tracked with a lazy max-heap so each reduction
    step costs O(|b| log |rem|) instead of a full scan and dict rebuild.
    """
    if not b:
        raise AlgebraError("polynomial division by zero")
    if not a:
        return {}
    lb = _lead_exp(b)
    cb = b[lb]
    lb_fields = _unpack(lb, arity)
    bitems = list(b.items())
    quot: Terms = {}
    rem = dict(a)
    heap = [-e for e in rem]
    heapq.heapify(heap)
    while rem:
        while True:
            la = -heap[0]
            if la in rem:
                break
            heapq.heappop(heap)
        la_fields = _unpack(la, arity)
        if any(x < y for x, y in zip(la_fields, lb_fields)):
            return None
        e = la - lb
        ca = rem[la]
        if ca % cb != 0:
            return None
        q = ca // cb
        quot[e] = q
        get = rem.get
        for eb, vb in bitems:
            et = e + eb
            n = get(et, 0) - q * vb
            if n:
                if et not in rem:
                    heapq.heappush(heap, -et)
                rem[et] = n
            else:
                rem.pop(et, None)
    return quot


def _prem(a: Terms, b: Terms, arity: int, var: int) -> Terms:
    """Pseudo-remainder of a by b with respect to ``var``."""
    unit = _unit(arity, var)
    db = _deg_in(b, arity, var)
    lb = _coeff_in(b, arity, var, db)
    r = dict(a)
    while r:
        dr = _deg_in(r, arity, var)
        if dr < db:
            break
        lr = _coeff_in(r, arity, var, dr)
        shifted = {e + (dr - db) * unit: c for e, c in lr.items()}
        r = _tadd(_tmul(lb, r), _tneg(_tmul(shifted, b)))
    return r


def _content_in(a: Terms, arity: int, var: int) -> Terms:
    g: Terms = {}
    for p in range(_deg_in(a, arity, var) + 1):
        c = _coeff_in(a, arity, var, p)
        if c:
            g = _tgcd(g, c, arity)
    return g


def _tgcd(a: Terms, b: Terms, arity: int) -> Terms:
    """Multivariate gcd over Z, sign-normalized."""
    if not a:
        return _sign_normalize(b)[0]
    if not b:
        return _sign_normalize(a)[0]
    if _is_const(a) or _is_const(b):
        g = int_gcd(_int_content(a), _int_content(b))
        return {0: g}
    var = next(
        v for v in range(arity) if _deg_in(a, arity, v) > 0 or _deg_in(b, arity, v) > 0
    )
    if _deg_in(a, arity, var) == 0:
        return _tgcd(a, _content_in(b, arity, var), arity)
    if _deg_in(b, arity, var) == 0:
        return _tgcd(_content_in(a, arity, var), b, arity)
    ca = _content_in(a, arity, var)
    cb = _content_in(b, arity, var)
    c = _tgcd(ca, cb, arity)
    f = _div_exact(a, ca, arity)
    g = _div_exact(b, cb, arity)
    assert f is not None and g is not None
    if _deg_in(f, arity, var) < _deg_in(g, arity, var):
        f, g = g, f
    while g:
        r = _prem(f, g, arity, var)
        f = g
        if r:
            cr = _content_in(r, arity, var)
            r = _div_exact(r, cr, arity)
            assert r is not None
        g = r
    return _sign_normalize(_tmul(c, f))[0]


def _monomial_gcd(a: Terms, b: Terms, arity: int) -> Terms:
    """gcd when at least one side is a monomial: min exponents, int gcd."""
    coeff = int_gcd(_int_content(a), _int_content(b))
    fields = []
    for i in range(arity):
        fields.append(
            min(
                min(_field(e, arity, i) for e in a),
                min(_field(e, arity, i) for e in b),
            )
        )
    return {_pack(tuple(fields)): coeff}


def _gcd_fast(a: Terms, b: Terms, arity: int) -> Terms:
    if not a:
        return _sign_normalize(b)[0]
    if not b:
        return _sign_normalize(a)[0]
    if len(a) == 1 or len(b) == 1:
        return _monomial_gcd(a, b, arity)
    # cluster arithmetic divides by earlier cluster variables, so plain
    # divisibility is the common case; probe it before any remainder work
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    if _div_exact(big, small, arity) is not None:
        return _sign_normalize(dict(small))[0]
    # split off the common monomial factor before the remainder sequence
    mins = tuple(
        min(
            min(_field(e, arity, i) for e in a),
            min(_field(e, arity, i) for e in b),
        )
        for i in range(arity)
    )
    if any(mins):
        off = _pack(mins)
        a = {e - off: c for e, c in a.items()}
        b = {e - off: c for e, c in b.items()}
        g = _tgcd(a, b, arity)
        return {e + off: c for e, c in g.items()}
    return _tgcd(a, b, arity)


# -- public polynomial wrappers ---------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Polynomial over Z with nonnegative exponents, fixed variable tuple."""

    variables: tuple[str, ...]
    terms: tuple[tuple[Exponents, int], ...]

    @staticmethod
    def from_terms(
        variables: tuple[str, ...], terms: Mapping[Exponents, int]
    ) -> "Polynomial":
        clean = {e: c for e, c in terms.items() if c}
        return Polynomial(variables, tuple(sorted(clean.items(), reverse=True)))

    def term_dict(self) -> dict[Exponents, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == (((0,) * len(self.variables), 1),)

    def render(self) -> str:
        return render_terms(self.variables, self.term_dict())


@dataclass(frozen=True)
class LaurentPolynomial:
    """Laurent polynomial: integer exponents of either sign."""

    variables: tuple[str, ...]
    terms: tuple[tuple[Exponents, int], ...]

    @staticmethod
    def from_terms(
        variables: tuple[str, ...], terms: Mapping[Exponents, int]
    ) -> "LaurentPolynomial":
        clean = {e: c for e, c in terms.items() if c}
        return LaurentPolynomial(variables, tuple(sorted(clean.items(), reverse=True)))

    def term_dict(self) -> dict[Exponents, int]:
        return dict(self.terms)

    def render(self) -> str:
        return render_terms(self.variables, self.term_dict())

    def to_rational(self) -> "RationalExpr":
        """Clear denominators: re-express over a common monomial denominator."""
        arity = len(self.variables)
        exps = [e for e, _ in self.terms]
        shifts = tuple(
            max(0, -min((e[i] for e in exps), default=0)) for i in range(arity)
        )
        num = {
            _pack(tuple(x + s for x, s in zip(e, shifts))): c for e, c in self.terms
        }
        den = {_pack(shifts): 1}
        return RationalExpr._build(self.variables, num, den)


def _power_str(name: str, p: int) -> str:
    return name if p == 1 else f"{name}^{p}"


def render_terms(variables: tuple[str, ...], terms: Mapping[Exponents, int]) -> str:
    """Canonical text form: terms in descending lexicographic exponent order."""
    if not terms:
        return "0"
    parts: list[str] = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        factors = [_power_str(v, p) for v, p in zip(variables, e) if p != 0]
        mag = abs(c)
        if factors:
            body = "*".join(factors)
            if mag != 1:
                body = f"{mag}*{body}"
        else:
            body = str(mag)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


@dataclass(frozen=True)
class RationalExpr:
    """Reduced fraction of integer polynomials in a fixed variable context.

    ``num`` and ``den`` hold the packed internal form; use ``numerator``
    and ``denominator`` for the exponent-tuple view.
    """

    variables: tuple[str, ...]
    num: tuple[tuple[int, int], ...]
    den: tuple[tuple[int, int], ...]

    def __hash__(self) -> int:  # cached; dedup keys hash large seeds often
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.variables, self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    # -- construction ------------------------------------------------------

    @staticmethod
    def _build(variables: tuple[str, ...], num: Terms, den: Terms) -> "RationalExpr":
        if not den:
            raise AlgebraError("zero denominator")
        if not num:
            return RationalExpr(variables, (), ((0, 1),))
        arity = len(variables)
        g = _gcd_fast(num, den, arity)
        if g != {0: 1}:
            num2 = _div_exact(num, g, arity)
            den2 = _div_exact(den, g, arity)
            if num2 is None or den2 is None:
                raise AlgebraError("gcd reduction failed to divide exactly")
            num, den = num2, den2
        return RationalExpr._assume_reduced(variables, num, den)

    @staticmethod
    def _assume_reduced(
        variables: tuple[str, ...], num: Terms, den: Terms
    ) -> "RationalExpr":
        """Skip the gcd when numerator and denominator are known coprime."""
        if not num:
            return RationalExpr(variables, (), ((0, 1),))
        den, sign = _sign_normalize(den)
        if sign < 0:
            num = _tneg(num)
        return RationalExpr(
            variables,
            tuple(sorted(num.items(), reverse=True)),
            tuple(sorted(den.items(), reverse=True)),
        )

    @staticmethod
    def variable(variables: tuple[str, ...], name: str) -> "RationalExpr":
        if name not in variables:
            raise AlgebraError(f"unknown variable {name!r}")
        i = variables.index(name)
        return RationalExpr(
            variables, ((_unit(len(variables), i), 1),), ((0, 1),)
        )

    @staticmethod
    def constant(variables: tuple[str, ...], c: int) -> "RationalExpr":
        if c == 0:
            return RationalExpr(variables, (), ((0, 1),))
        return RationalExpr(variables, ((0, c),), ((0, 1),))

    # -- structure ----------------------------------------------------------

    def _tuple_terms(self, packed: Iterable[tuple[int, int]]) -> dict[Exponents, int]:
        arity = len(self.variables)
        return {_unpack(e, arity): c for e, c in packed}

    @property
    def numerator(self) -> Polynomial:
        return Polynomial.from_terms(self.variables, self._tuple_terms(self.num))

    @property
    def denominator(self) -> Polynomial:
        return Polynomial.from_terms(self.variables, self._tuple_terms(self.den))

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return _is_const(dict(self.num)) and _is_const(dict(self.den))

    def _check_context(self, other: "RationalExpr") -> None:
        if self.variables != other.variables:
            raise AlgebraError("mixed variable contexts")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "RationalExpr") -> "RationalExpr":
        self._check_context(other)
        n1, d1 = dict(self.num), dict(self.den)
        n2, d2 = dict(other.num), dict(other.den)
        num = _tadd(_tmul(n1, d2), _tmul(n2, d1))
        return RationalExpr._build(self.variables, num, _tmul(d1, d2))

    def __sub__(self, other: "RationalExpr") -> "RationalExpr":
        self._check_context(other)
        n1, d1 = dict(self.num), dict(self.den)
        n2, d2 = dict(other.num), dict(other.den)
        num = _tadd(_tmul(n1, d2), _tneg(_tmul(n2, d1)))
        return RationalExpr._build(self.variables, num, _tmul(d1, d2))

    def __mul__(self, other: "RationalExpr") -> "RationalExpr":
        self._check_context(other)
        if self.is_zero() or other.is_zero():
            return RationalExpr.constant(self.variables, 0)
        arity = len(self.variables)
        # reduce crosswise; the parts are then pairwise coprime, so the
        # product needs no further gcd
        g1 = _gcd_fast(dict(self.num), dict(other.den), arity)
        g2 = _gcd_fast(dict(other.num), dict(self.den), arity)
        n1 = _div_exact(dict(self.num), g1, arity)
        d2 = _div_exact(dict(other.den), g1, arity)
        n2 = _div_exact(dict(other.num), g2, arity)
        d1 = _div_exact(dict(self.den), g2, arity)
        assert n1 is not None and n2 is not None and d1 is not None and d2 is not None
        return RationalExpr._assume_reduced(
            self.variables, _tmul(n1, n2), _tmul(d1, d2)
        )

    def __truediv__(self, other: "RationalExpr") -> "RationalExpr":
        self._check_context(other)
        if other.is_zero():
            raise AlgebraError("division by zero")
        inv = RationalExpr(other.variables, other.den, other.num)
        return self * inv

    def __pow__(self, k: int) -> "RationalExpr":
        if k < 0:
            if self.is_zero():
                raise AlgebraError("division by zero")
            base = RationalExpr(self.variables, self.den, self.num)
            k = -k
        else:
            base = self
        out = RationalExpr.constant(self.variables, 1)
        for _ in range(k):
            out = out * base
        return out

    def __neg__(self) -> "RationalExpr":
        return RationalExpr.constant(self.variables, 0) - self

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        num = render_terms(self.variables, self._tuple_terms(self.num))
        if self.den == ((0, 1),):
            return num
        den = render_terms(self.variables, self._tuple_terms(self.den))
        return f"({num})/({den})"

    def __str__(self) -> str:  # pragma: no cover - display helper
        return self.render()


def variables(*names: str) -> tuple[RationalExpr, ...]:
    """Atoms for a fresh variable context, in the given order."""
    ctx = tuple(names)
    return tuple(RationalExpr.variable(ctx, n) for n in ctx)


def arithmetic(a: RationalExpr, b: RationalExpr, op: str) -> RationalExpr:
    """Field operation dispatch: op in {add, sub, mul, div}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise AlgebraError(f"unknown operation {op!r}")


def substitute(e: RationalExpr, assignment: Mapping[str, RationalExpr]) -> RationalExpr:
    """Evaluate e with every variable replaced by a rational expression.

    All variables of the context must be assigned; the images must share
    one variable context.  Raises if a denominator vanishes identically.
    """
    for name in e.variables:
        if name not in assignment:
            raise AlgebraError(f"variable {name!r} not assigned")
    images = [assignment[name] for name in e.variables]
    ctx = images[0].variables
    for img in images:
        if img.variables != ctx:
            raise AlgebraError("substitution images use mixed variable contexts")
    arity = len(e.variables)

    def eval_terms(packed: tuple[tuple[int, int], ...]) -> RationalExpr:
        total = RationalExpr.constant(ctx, 0)
        powers: list[dict[int, RationalExpr]] = [dict() for _ in images]
        for pe, c in packed:
            exps = _unpack(pe, arity)
            part = RationalExpr.constant(ctx, c)
            for i, p in enumerate(exps):
                if p == 0:
                    continue
                if p not in powers[i]:
                    powers[i][p] = images[i] ** p
                part = part * powers[i][p]
            total = total + part
        return total

    den_val = eval_terms(e.den)
    if den_val.is_zero():
        raise AlgebraError("denominator vanishes identically after substitution")
    return eval_terms(e.num) / den_val


def laurent_form(e: RationalExpr) -> Optional[LaurentPolynomial]:
    """Laurent expansion when the reduced denominator is a single term.

    Present iff the denominator is one monomial whose coefficient divides
    every numerator coefficient (so the expansion stays over Z).
    """
    if len(e.den) != 1:
        return None
    arity = len(e.variables)
    (dexp_packed, dcoef), = e.den
    dexp = _unpack(dexp_packed, arity)
    terms: dict[Exponents, int] = {}
    for nexp_packed, ncoef in e.num:
        if ncoef % dcoef != 0:
            return None
        nexp = _unpack(nexp_packed, arity)
        terms[tuple(a - b for a, b in zip(nexp, dexp))] = ncoef // dcoef
    return LaurentPolynomial.from_terms(e.variables, terms)
