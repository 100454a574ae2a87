"""Exact rational functions in ``q`` and in the Cartan symbols ``t_i = q^{e_ii}``.

Everything in the engine is a quotient of two integer polynomials in the
variables ``q, t_1, ..., t_N``.  Laurent monomials are absorbed into the
denominator, and every value is stored in a reduced canonical form, so two
values are equal exactly when their numerators and denominators coincide.

Polynomial arithmetic and gcds are delegated to FLINT (``python-flint``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import flint

__all__ = [
    "AffineExpr",
    "CartanRat",
    "ForbiddenPoint",
    "PoleAtOne",
    "PoleAtPoint",
    "QFieldError",
    "QRat",
    "VanishingDenominator",
    "classical_limit",
    "eval_at",
    "parse_qrat",
    "qbracket",
    "qbracket_sym",
    "qfact_ratio",
    "qint_factorial",
]


class QFieldError(ArithmeticError):
    pass


class PoleAtPoint(QFieldError):
    pass


class ForbiddenPoint(QFieldError):
    pass


class PoleAtOne(QFieldError):
    pass


class VanishingDenominator(QFieldError):
    """A denominator vanished after specializing the Cartan symbols at a weight."""


@lru_cache(maxsize=None)
def _ctx(rank: int):
    names = ("q",) + tuple(f"t{i}" for i in range(1, rank + 1))
    return flint.fmpz_mpoly_ctx.get(names, "degrevlex")


def _poly_from_laurent(rank: int, terms: Mapping[tuple, int]):
    """Split a Laurent polynomial into (polynomial, monomial shift)."""
    nv = rank + 1
    shift = [0] * nv
    for exps in terms:
        for k in range(nv):
            if exps[k] < shift[k]:
                shift[k] = exps[k]
    data = {}
    for exps, c in terms.items():
        if c:
            key = tuple(e - s for e, s in zip(exps, shift))
            data[key] = data.get(key, 0) + c
    return _ctx(rank).from_dict(data), tuple(-s for s in shift)


def _monomial(rank: int, exps: Sequence[int]):
    return _ctx(rank).from_dict({tuple(exps): 1})


class CartanRat:
    """A reduced quotient ``num/den`` of polynomials in ``q, t_1..t_rank``.

    Instances are immutable.  The canonical form removes the polynomial gcd
    and makes the coefficient of the smallest denominator monomial positive.
    """

    __slots__ = ("rank", "num", "den", "_hash")

    def __init__(self, *args, **kwargs):
        raise TypeError("use CartanRat.from_int / from_laurent / arithmetic")

    # -- construction -------------------------------------------------
    @staticmethod
    def _raw(rank: int, num, den) -> "CartanRat":
        cls = QRat if rank == 0 else CartanRat
        obj = object.__new__(cls)
        obj.rank = rank
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @staticmethod
    def _reduce(rank: int, num, den, coprime: bool = False) -> "CartanRat":
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        ctx = _ctx(rank)
        if num.is_zero():
            return CartanRat._raw(rank, ctx.from_dict({}), ctx.from_dict({(0,) * (rank + 1): 1}))
        if not coprime and not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
        if den.coeffs()[-1] < 0:
            num = -num
            den = -den
        return CartanRat._raw(rank, num, den)

    @staticmethod
    def from_int(value, rank: int = 0) -> "CartanRat":
        ctx = _ctx(rank)
        value = Fraction(value)
        one = (0,) * (rank + 1)
        return CartanRat._reduce(
            rank,
            ctx.from_dict({one: value.numerator}),
            ctx.from_dict({one: value.denominator}),
        )

    @staticmethod
    def from_laurent(rank: int, num_terms: Mapping[tuple, int],
                     den_terms: Mapping[tuple, int] | None = None) -> "CartanRat":
        """Build ``N/D`` from Laurent term dicts ``{exponent tuple: int}``."""
        num, sn = _poly_from_laurent(rank, num_terms)
        if den_terms is None:
            den, sd = _ctx(rank).from_dict({(0,) * (rank + 1): 1}), (0,) * (rank + 1)
        else:
            den, sd = _poly_from_laurent(rank, den_terms)
        # num * x^{-sn} / (den * x^{-sd}) = num * x^{sd} / (den * x^{sn})
        lift_n = tuple(max(b - a, 0) for a, b in zip(sn, sd))
        lift_d = tuple(max(a - b, 0) for a, b in zip(sn, sd))
        if any(lift_n):
            num = num * _monomial(rank, lift_n)
        if any(lift_d):
            den = den * _monomial(rank, lift_d)
        return CartanRat._reduce(rank, num, den)

    @staticmethod
    def monomial(rank: int, exps: Sequence[int], coeff: int = 1) -> "CartanRat":
        """``coeff * q^exps[0] * t_1^exps[1] ...`` (Laurent exponents allowed)."""
        return CartanRat.from_laurent(rank, {tuple(exps): coeff})

    @staticmethod
    def q_power(k: int, rank: int = 0) -> "CartanRat":
        return CartanRat.monomial(rank, (k,) + (0,) * rank)

    # -- coercion -----------------------------------------------------
    def lift(self, rank: int) -> "CartanRat":
        """Embed a value in a context with ``rank`` Cartan symbols."""
        if rank == self.rank:
            return self
        if self.rank != 0:
            raise ValueError(f"cannot move a rank-{self.rank} value to rank {rank}")
        return _lift_q(self, rank)

    def _coerce(self, other) -> "CartanRat":
        if isinstance(other, CartanRat):
            if other.rank == self.rank:
                return other
            if other.rank == 0:
                return other.lift(self.rank)
            if self.rank == 0:
                return other
            raise ValueError("mixing rational functions of different rank")
        if isinstance(other, (int, Fraction)):
            return CartanRat.from_int(other, self.rank)
        return NotImplemented

    def _common(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented, NotImplemented
        if o.rank != self.rank:  # self is rank 0, other is not
            return self.lift(o.rank), o
        return self, o

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        if a.den == b.den:
            return CartanRat._reduce(a.rank, a.num + b.num, a.den)
        return CartanRat._reduce(a.rank, a.num * b.den + b.num * a.den, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return CartanRat._raw(self.rank, -self.num, self.den)

    def __sub__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        if a.is_zero() or b.is_zero():
            return CartanRat.from_int(0, a.rank)
        if a.den.is_one() and b.den.is_one():
            return CartanRat._reduce(a.rank, a.num * b.num, a.den, coprime=True)
        # cross-cancel before multiplying to keep operands small
        g1 = a.num.gcd(b.den)
        g2 = b.num.gcd(a.den)
        n1, d2 = (a.num / g1, b.den / g1) if not g1.is_one() else (a.num, b.den)
        n2, d1 = (b.num / g2, a.den / g2) if not g2.is_one() else (b.num, a.den)
        return CartanRat._reduce(a.rank, n1 * n2, d1 * d2, coprime=True)

    __rmul__ = __mul__

    def inverse(self) -> "CartanRat":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return CartanRat._reduce(self.rank, self.den, self.num, coprime=True)

    def __truediv__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return CartanRat._reduce(self.rank, self.num ** k, self.den ** k, coprime=True)

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CartanRat.from_int(other, self.rank)
        if not isinstance(other, CartanRat):
            return NotImplemented
        if other.rank != self.rank:
            if self.rank == 0 or other.rank == 0:
                a, b = self._common(other)
                return a.num == b.num and a.den == b.den
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, tuple(self.num.terms()), tuple(self.den.terms())))
        return self._hash

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def __bool__(self):
        return not self.num.is_zero()

    def __repr__(self):
        return f"{type(self).__name__}(({self.num}) / ({self.den}))"

    # -- substitutions ------------------------------------------------
    def _map_terms(self, fn) -> "CartanRat":
        """Apply an exponent map to every monomial of num and den."""
        num = {fn(tuple(map(int, e))): int(c) for e, c in self.num.terms()}
        den = {fn(tuple(map(int, e))): int(c) for e, c in self.den.terms()}
        return CartanRat.from_laurent(self.rank, num, den)

    def shift(self, w: Sequence[int]) -> "CartanRat":
        """Substitute ``t_k -> q^{w_k} t_k`` (i.e. ``e_kk -> e_kk + w_k``)."""
        if not any(w):
            return self
        w = tuple(w)

        def fn(e):
            return (e[0] + sum(b * s for b, s in zip(e[1:], w)),) + e[1:]

        return _shift_cached(self, w, fn)

    def conjugate_circular(self) -> "CartanRat":
        """``q -> q^{-1}``, ``t_k -> t_k^{-1}`` (the circular-q antilinear map)."""
        if self.num.is_constant() and self.den.is_constant():
            return self
        return self._map_terms(lambda e: tuple(-x for x in e))

    def specialize(self, weight: Sequence[int]) -> "QRat":
        """Set ``t_k = q^{weight_k}`` and return the resulting ``QRat``."""
        if self.rank == 0:
            return self
        weight = tuple(weight)
        if len(weight) != self.rank:
            raise ValueError(f"weight of length {len(weight)} for rank {self.rank}")
        return _specialize_cached(self, weight)

    def degree_q(self) -> int:
        return max((e[0] for e in self.num.monoms()), default=0)


class QRat(CartanRat):
    """Rational function in ``q`` alone."""

    __slots__ = ()

    def coefficients(self) -> tuple[dict[int, int], dict[int, int]]:
        """Laurent split: numerator ``q^-k N`` and denominator ``D`` with ``D(0) != 0``."""
        k = min(int(e[0]) for e in self.den.monoms())
        num = {int(e[0]) - k: int(c) for e, c in self.num.terms()}
        den = {int(e[0]) - k: int(c) for e, c in self.den.terms()}
        return num, den

    def to_string(self) -> str:
        num, den = self.coefficients()
        return f"({_format_laurent(num)})/({_format_laurent(den)})"

    def __str__(self):
        return self.to_string()

    def __lt__(self, other):
        raise TypeError("QRat values are not ordered; use eval_at")


def _lift_q(v: CartanRat, rank: int) -> CartanRat:
    ctx = _ctx(rank)
    pad = (0,) * rank
    num = ctx.from_dict({e + pad: c for e, c in v.num.terms()})
    den = ctx.from_dict({e + pad: c for e, c in v.den.terms()})
    return CartanRat._raw(rank, num, den)


_SHIFT_CACHE: dict = {}
_SPEC_CACHE: dict = {}


def _shift_cached(v, w, fn):
    key = (v, w)
    hit = _SHIFT_CACHE.get(key)
    if hit is None:
        hit = v._map_terms(fn)
        if len(_SHIFT_CACHE) > 500_000:
            _SHIFT_CACHE.clear()
        _SHIFT_CACHE[key] = hit
    return hit


def _specialize_cached(v, weight):
    key = (v, weight)
    hit = _SPEC_CACHE.get(key)
    if hit is not None:
        return hit

    def collapse(poly):
        out: dict[tuple, int] = {}
        for e, c in poly.terms():
            e = tuple(map(int, e))
            k = e[0] + sum(b * s for b, s in zip(e[1:], weight))
            out[(k,)] = out.get((k,), 0) + int(c)
        return {k: c for k, c in out.items() if c}

    num = collapse(v.num)
    den = collapse(v.den)
    if not den:
        raise VanishingDenominator(f"denominator vanishes at weight {weight}")
    hit = CartanRat.from_laurent(0, num, den)
    if len(_SPEC_CACHE) > 500_000:
        _SPEC_CACHE.clear()
    _SPEC_CACHE[key] = hit
    return hit


# -- serialization ----------------------------------------------------

def _format_laurent(terms: Mapping[int, int]) -> str:
    items = sorted((k, c) for k, c in terms.items() if c)
    if not items:
        return "0"
    out = []
    for idx, (k, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = "q" if k == 1 else f"q^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_TERM_RE = re.compile(r"^(\d+)?\*?(q(?:\^(-?\d+))?)?$")


def _parse_laurent(text: str) -> dict[tuple, int]:
    text = text.strip().replace(" - ", " + -").replace(" ", "")
    out: dict[tuple, int] = {}
    if text == "0":
        return out
    for chunk in text.split("+"):
        sign = 1
        if chunk.startswith("-"):
            sign, chunk = -1, chunk[1:]
        m = _TERM_RE.match(chunk)
        if not m or not chunk:
            raise ValueError(f"bad Laurent term {chunk!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        if m.group(2):
            k = int(m.group(3)) if m.group(3) else 1
        else:
            k = 0
        out[(k,)] = out.get((k,), 0) + sign * coeff
    return out


def parse_qrat(text: str) -> QRat:
    """Inverse of :meth:`QRat.to_string`."""
    m = re.fullmatch(r"\s*\((.*)\)\s*/\s*\((.*)\)\s*", text)
    if not m:
        return CartanRat.from_laurent(0, _parse_laurent(text))
    return CartanRat.from_laurent(0, _parse_laurent(m.group(1)), _parse_laurent(m.group(2)))


# -- affine Cartan expressions ----------------------------------------

@dataclass(frozen=True)
class AffineExpr:
    """``sum_i coeffs[i] * e_ii + constant`` with integer data."""

    coeffs: tuple[int, ...]
    constant: int = 0

    @staticmethod
    def zero(rank: int) -> "AffineExpr":
        return AffineExpr((0,) * rank, 0)

    @staticmethod
    def const(value: int, rank: int = 0) -> "AffineExpr":
        return AffineExpr((0,) * rank, value)

    @staticmethod
    def phi(i: int, j: int, rank: int) -> "AffineExpr":
        """``phi_ij = e_ii - e_jj + j - i`` (1-based indices)."""
        c = [0] * rank
        c[i - 1] += 1
        c[j - 1] -= 1
        return AffineExpr(tuple(c), j - i)

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def __add__(self, other):
        if isinstance(other, int):
            return AffineExpr(self.coeffs, self.constant + other)
        if isinstance(other, AffineExpr):
            return AffineExpr(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                              self.constant + other.constant)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return AffineExpr(self.coeffs, self.constant - other)
        return self + (-other)

    def __neg__(self):
        return AffineExpr(tuple(-a for a in self.coeffs), -self.constant)

    def evaluate(self, weight: Sequence[int]) -> int:
        return self.constant + sum(a * w for a, w in zip(self.coeffs, weight))

    def is_constant(self) -> bool:
        return not any(self.coeffs)


# -- q-numbers ----------------------------------------------------------

@lru_cache(maxsize=4096)
def qbracket(x: int) -> QRat:
    """``[x] = (q^x - q^-x)/(q - q^-1)``."""
    if x == 0:
        return CartanRat.from_int(0)
    # [x] = sign(x) * sum_{k=0}^{|x|-1} q^{|x|-1-2k}
    s = 1 if x > 0 else -1
    n = abs(x)
    return CartanRat.from_laurent(0, {(n - 1 - 2 * k,): s for k in range(n)})


@lru_cache(maxsize=65536)
def qbracket_sym(expr: AffineExpr) -> CartanRat:
    rank = expr.rank
    if expr.is_constant():
        return qbracket(expr.constant).lift(rank)
    plus = (expr.constant,) + expr.coeffs
    minus = tuple(-a for a in plus)
    lowest = (-1,) + (0,) * rank
    highest = (1,) + (0,) * rank
    return CartanRat.from_laurent(rank, {plus: 1, minus: -1}, {highest: 1, lowest: -1})


def qfact_ratio(expr: AffineExpr, a: int, b: int) -> CartanRat:
    """``[expr + a]! / [expr + b]!`` as the finite product ``prod_{s=b+1}^{a} [expr + s]``."""
    if a < b:
        return qfact_ratio(expr, b, a).inverse()
    out = CartanRat.from_int(1, expr.rank)
    for s in range(b + 1, a + 1):
        out = out * qbracket_sym(expr + s)
    return out


@lru_cache(maxsize=1024)
def qint_factorial(m: int) -> QRat:
    """``[m]!`` for an integer ``m >= 0``."""
    if m < 0:
        raise ValueError(f"q-factorial of negative integer {m}")
    out = CartanRat.from_int(1)
    for s in range(1, m + 1):
        out = out * qbracket(s)
    return out


# -- numeric evaluation -------------------------------------------------

def _eval_poly(poly, q0: Fraction) -> Fraction:
    total = Fraction(0)
    for e, c in poly.terms():
        total += int(c) * q0 ** int(e[0])
    return total


def eval_at(v: CartanRat, q0) -> Fraction:
    """Exact value of a ``QRat`` at a rational point ``q0``."""
    if v.rank != 0:
        raise TypeError("eval_at needs a QRat; specialize Cartan symbols first")
    q0 = Fraction(q0)
    if q0 in (0, 1, -1):
        raise ForbiddenPoint(f"q0 = {q0} is not allowed")
    d = _eval_poly(v.den, q0)
    if d == 0:
        raise PoleAtPoint(f"pole at q = {q0}")
    return _eval_poly(v.num, q0) / d


def classical_limit(v: CartanRat) -> Fraction:
    """Limit as ``q -> 1`` of a ``QRat`` (no pole at 1 allowed)."""
    if v.rank != 0:
        raise TypeError("classical_limit needs a QRat")
    d = sum(int(c) for c in v.den.coeffs())
    if d == 0:
        raise PoleAtOne("denominator vanishes at q = 1")
    return Fraction(sum(int(c) for c in v.num.coeffs()), d)


def product(values: Iterable[CartanRat], rank: int = 0) -> CartanRat:
    out = CartanRat.from_int(1, rank)
    for v in values:
        out = out * v
    return out
