"""Discrete series data for U_q(u(n,1)).

An extremal weight lists the components ``lam_1 >= ... >= lam_{n+1}``; the
representation type ``alpha`` says which slot carries the noncompact
component.  On the extremal vector the Cartan elements act by the
*physical* weight ``mu``:

    mu_i = lam_i (i <= alpha),  mu_{n+1} = lam_{alpha+1},  mu_l = lam_{l+1} (l > alpha).

All normalization factors are returned as squares.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .qfield import (AffineExpr, CartanRat, QRat, VanishingDenominator, classical_limit,
                     eval_at, qbracket, qbracket_sym)
from .zalg import ZAlgebra

__all__ = [
    "BetweenViolation",
    "DEFAULT_Q_SAMPLES",
    "EmptyBox",
    "ExponentVector",
    "ExtremalWeight",
    "GGTPattern",
    "GTRow",
    "InadmissibleRow",
    "PositivityReport",
    "U21_SHIFT",
    "between",
    "branching",
    "compact_norm",
    "compact_norm_classical",
    "compact_norm_symbolic",
    "enumerate_patterns",
    "exponents",
    "fit_u21_shift",
    "format_inequality",
    "gt_exponents",
    "gt_lowering_norm",
    "gt_lowering_norm_classical",
    "normalization_factor",
    "normalization_factor_classical",
    "positivity_scan",
    "satisfies_branching",
    "shapovalov_cross",
    "shapovalov_cross_symbolic",
    "shapovalov_norm",
    "shapovalov_norm_classical",
    "shapovalov_norm_recursive",
    "shapovalov_symbolic",
    "u21_reference_check",
    "u21_scheme_holds",
    "u21_scheme_rows",
]


class EmptyBox(ValueError):
    pass


class InadmissibleRow(ValueError):
    pass


class BetweenViolation(ValueError):
    pass


@dataclass(frozen=True)
class ExtremalWeight:
    n: int
    alpha: int
    lam: tuple[int, ...]

    def __post_init__(self):
        lam = tuple(int(x) for x in self.lam)
        object.__setattr__(self, "lam", lam)
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if len(lam) != self.n + 1:
            raise ValueError(f"extremal weight needs {self.n + 1} components, got {len(lam)}")
        if not 0 <= self.alpha <= self.n:
            raise ValueError(f"alpha={self.alpha} outside 0..{self.n}")
        if any(a < b for a, b in zip(lam, lam[1:])):
            raise ValueError(f"extremal weight {lam} is not weakly decreasing")

    @property
    def mu(self) -> tuple[int, ...]:
        """Eigenvalues of ``e_11 .. e_{n+1,n+1}`` on the extremal vector."""
        a, n, lam = self.alpha, self.n, self.lam
        return lam[:a] + lam[a + 1:] + (lam[a],)

    def l_label(self, s: int) -> int:
        return self.lam[s - 1] - s


@dataclass(frozen=True)
class GTRow:
    lam: tuple[int, ...]

    def __post_init__(self):
        lam = tuple(int(x) for x in self.lam)
        object.__setattr__(self, "lam", lam)
        if any(a < b for a, b in zip(lam, lam[1:])):
            raise ValueError(f"row {lam} is not weakly decreasing")

    @property
    def k(self) -> int:
        return len(self.lam)

    def l_label(self, s: int) -> int:
        return self.lam[s - 1] - s

    @property
    def l_labels(self) -> tuple[int, ...]:
        return tuple(self.l_label(s) for s in range(1, self.k + 1))


@dataclass(frozen=True)
class ExponentVector:
    r: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))

    def is_valid(self) -> bool:
        return all(x >= 0 for x in self.r)

    @property
    def total(self) -> int:
        return sum(self.r)


def _r(r) -> tuple[int, ...]:
    return r.r if isinstance(r, ExponentVector) else tuple(int(x) for x in r)


def _row(row) -> tuple[int, ...]:
    return row.lam if isinstance(row, GTRow) else tuple(int(x) for x in row)


def exponents(xw: ExtremalWeight, row) -> ExponentVector:
    """Exponents of the z-monomial producing the gl(n)-highest vector of weight ``row``."""
    row = _row(row)
    if len(row) != xw.n:
        raise ValueError(f"row must have {xw.n} components")
    a, lam = xw.alpha, xw.lam
    r = [row[i] - lam[i] for i in range(a)] + [lam[l] - row[l - 1] for l in range(a + 1, xw.n + 1)]
    return ExponentVector(tuple(r))


# -- closed product formulas ------------------------------------------------

def _fact_ratio(bracket, one, expr, a: int, b: int):
    """``[expr + a]! / [expr + b]!`` through the given bracket backend."""
    if a < b:
        return one / _fact_ratio(bracket, one, expr, b, a)
    out = one
    for s in range(b + 1, a + 1):
        out = out * bracket(expr + s)
    return out


def _int_factorial(bracket, one, rank, m: int):
    return _fact_ratio(bracket, one, AffineExpr.const(0, rank), m, 0)


def _sf_closed(n: int, alpha: int, r: Sequence[int], bracket, one):
    N = n + 1
    ph = lambda i, j: AffineExpr.phi(i, j, N)  # noqa: E731
    fr = lambda e, a, b: _fact_ratio(bracket, one, e, a, b)  # noqa: E731
    fac = lambda m: _int_factorial(bracket, one, N, m)  # noqa: E731
    out = one
    for i in range(1, alpha + 1):
        ri = r[i - 1]
        out = out * fac(ri) * fr(ph(i, N) - alpha - 1, ri, 0)
    for l in range(alpha + 1, n + 1):
        rl = r[l - 1]
        out = out * fac(rl) * fr(ph(N, l) + alpha, rl, 0)
    for i in range(1, alpha + 1):
        for j in range(i + 1, alpha + 1):
            ri, rj = r[i - 1], r[j - 1]
            out = out * fr(ph(i, j), ri - rj, ri) * fr(ph(i, j), -1, -rj - 1)
    for k in range(alpha + 1, n + 1):
        for l in range(k + 1, n + 1):
            rk, rl = r[k - 1], r[l - 1]
            out = out * fr(ph(k, l), -rk + rl, rl) * fr(ph(k, l), -1, -rk - 1)
    for i in range(1, alpha + 1):
        for l in range(alpha + 1, n + 1):
            ri, rl = r[i - 1], r[l - 1]
            out = (out * fr(ph(i, l), ri - 1, ri + rl) * fr(ph(i, l), rl - 1, -1)
                   * bracket(ph(i, l)))
    return out


def _compact_closed(n: int, r: Sequence[int], bracket, one):
    N = n + 1
    ph = lambda i, j: AffineExpr.phi(i, j, N)  # noqa: E731
    fr = lambda e, a, b: _fact_ratio(bracket, one, e, a, b)  # noqa: E731
    out = one
    for l in range(1, n + 1):
        rl = r[l - 1]
        out = out * _int_factorial(bracket, one, N, rl) * fr(ph(l, N), -1, -rl - 1)
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            rk, rl = r[k - 1], r[l - 1]
            out = out * fr(ph(k, l), -rk + rl, rl) * fr(ph(k, l), -1, -rk - 1)
    return out


def _check_r(n: int, r) -> tuple[int, ...]:
    r = _r(r)
    if len(r) != n:
        raise ValueError(f"exponent vector must have {n} entries")
    if any(x < 0 for x in r):
        raise ValueError(f"exponents must be nonnegative, got {r}")
    return r


@lru_cache(maxsize=4096)
def shapovalov_symbolic(n: int, alpha: int, r: tuple[int, ...]) -> CartanRat:
    """Closed-form ``B^(alpha)(v_r, v_r)`` as a rational function of ``q^{e_kk}``."""
    r = _check_r(n, r)
    return _sf_closed(n, alpha, r, qbracket_sym, CartanRat.from_int(1, n + 1))


@lru_cache(maxsize=4096)
def compact_norm_symbolic(n: int, r: tuple[int, ...]) -> CartanRat:
    r = _check_r(n, r)
    return _compact_closed(n, r, qbracket_sym, CartanRat.from_int(1, n + 1))


def _classical_bracket(weight):
    return lambda e: Fraction(e.evaluate(weight))


def shapovalov_norm(xw: ExtremalWeight, r) -> QRat:
    """Closed-form norm of ``v_r`` at the extremal weight."""
    return shapovalov_symbolic(xw.n, xw.alpha, _check_r(xw.n, r)).specialize(xw.mu)


def shapovalov_norm_classical(xw: ExtremalWeight, r) -> Fraction:
    """The same closed formula with every ``[x]`` replaced by ``x``."""
    return _sf_closed(xw.n, xw.alpha, _check_r(xw.n, r), _classical_bracket(xw.mu), Fraction(1))


def compact_norm(weight: Sequence[int], r) -> QRat:
    """Norm of ``z_-1^{r_1} ... z_-n^{r_n} v`` for the compact form at highest weight ``weight``."""
    weight = tuple(int(x) for x in weight)
    n = len(weight) - 1
    return compact_norm_symbolic(n, _check_r(n, r)).specialize(weight)


def compact_norm_classical(weight: Sequence[int], r) -> Fraction:
    weight = tuple(int(x) for x in weight)
    n = len(weight) - 1
    return _compact_closed(n, _check_r(n, r), _classical_bracket(weight), Fraction(1))


# -- recursive norm through z-normal ordering -------------------------------

def _v_word(n: int, alpha: int, r: Sequence[int]) -> tuple[int, ...]:
    word: list[int] = []
    for i in range(alpha, 0, -1):
        word += [i] * r[i - 1]
    for l in range(alpha + 1, n + 1):
        word += [-l] * r[l - 1]
    return tuple(word)


def _star(word: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Noncompact involution of a coefficient-free word: ``z_a^* = -z_-a``, order reversed."""
    return tuple(-a for a in reversed(word)), (-1) ** len(word)


@lru_cache(maxsize=None)
def _z_algebra(n: int, alpha: int) -> ZAlgebra:
    return ZAlgebra(n, alpha)


def shapovalov_cross_symbolic(n: int, alpha: int, r, r2) -> CartanRat:
    """``z_0`` coefficient of ``v_{r2}^* v_r`` after alpha-normal ordering."""
    r, r2 = _check_r(n, r), _check_r(n, r2)
    alg = _z_algebra(n, alpha)
    star, sign = _star(_v_word(n, alpha, r2))
    return alg.normalize(star + _v_word(n, alpha, r)).coefficient(()) * sign


def shapovalov_norm_recursive(xw: ExtremalWeight, r) -> QRat:
    return shapovalov_cross_symbolic(xw.n, xw.alpha, r, r).specialize(xw.mu)


def shapovalov_cross(xw: ExtremalWeight, r, r2) -> QRat:
    return shapovalov_cross_symbolic(xw.n, xw.alpha, r, r2).specialize(xw.mu)


# -- branching and positivity ---------------------------------------------------

def satisfies_branching(xw: ExtremalWeight, row) -> bool:
    """The interlacing conditions between the extremal weight and a gl(n) row."""
    row = _row(row)
    n, a, lam = xw.n, xw.alpha, xw.lam
    if len(row) != n:
        return False
    for i in range(a):
        if not row[i] >= lam[i]:
            return False
        if i + 1 < a and not lam[i] >= row[i + 1]:
            return False
    for l in range(a + 1, n + 1):
        if not lam[l] >= row[l - 1]:
            return False
        if l < n and not row[l - 1] >= lam[l + 1]:
            return False
    return True


def _box_rows(box) -> list[tuple[int, ...]]:
    ranges = []
    for lo, hi in box:
        if lo > hi:
            raise EmptyBox(f"empty range [{lo}, {hi}]")
        ranges.append(range(lo, hi + 1))
    if not ranges:
        raise EmptyBox("box has no coordinates")
    return [tuple(x) for x in itertools.product(*ranges)]


def branching(xw: ExtremalWeight, box) -> list[GTRow]:
    """All gl(n) highest weights in the box allowed by the branching rule, sorted."""
    if len(box) != xw.n:
        raise ValueError(f"box must bound {xw.n} coordinates")
    rows = [row for row in _box_rows(box) if satisfies_branching(xw, row)]
    return [GTRow(row) for row in sorted(rows, reverse=True)]


DEFAULT_Q_SAMPLES = (Fraction(1, 2), Fraction(2, 3), Fraction(3, 2))


@dataclass
class PositivityReport:
    xw: ExtremalWeight
    box: tuple
    samples: tuple
    admissible: list = field(default_factory=list)
    zero_norm: list = field(default_factory=list)
    excluded: list = field(default_factory=list)
    no_vector: list = field(default_factory=list)
    beyond_null: list = field(default_factory=list)
    poles: list = field(default_factory=list)
    limit_mismatch: list = field(default_factory=list)
    branching_rows: list = field(default_factory=list)

    @property
    def matches_branching(self) -> bool:
        return sorted(self.admissible) == sorted(self.branching_rows)


def positivity_scan(xw: ExtremalWeight, box, q_samples=DEFAULT_Q_SAMPLES) -> PositivityReport:
    """Classify every row of the box by the sign of its norm at the sample points."""
    q_samples = tuple(Fraction(x) for x in q_samples)
    for x in q_samples:
        if x in (0, 1, -1):
            raise ValueError(f"sample point {x} is not allowed")
    report = PositivityReport(xw, tuple(tuple(b) for b in box), q_samples)
    report.branching_rows = [row.lam for row in branching(xw, box)]
    norms = {}
    rows = sorted(_box_rows(box), reverse=True)
    for row in rows:
        r = exponents(xw, row)
        if not r.is_valid():
            # no z-monomial produces this weight
            report.no_vector.append(row)
            continue
        try:
            norm = shapovalov_norm(xw, r)
        except VanishingDenominator as exc:
            report.poles.append({"row": row, "sample": None, "detail": str(exc)})
            continue
        vals = []
        for x in q_samples:
            try:
                vals.append(eval_at(norm, x))
            except ZeroDivisionError as exc:
                report.poles.append({"row": row, "sample": str(x), "detail": str(exc)})
        if len(vals) < len(q_samples):
            continue
        limit = classical_limit(norm)
        signs = {(v > 0) - (v < 0) for v in vals}
        if len(signs) == 1 and ((limit > 0) - (limit < 0)) not in signs:
            report.limit_mismatch.append(row)
        norms[r.r] = signs
    null = [r for r, signs in norms.items() if signs == {0}]
    for row in rows:
        r = exponents(xw, row).r
        signs = norms.get(r)
        if signs is None:
            continue
        if signs == {0}:
            report.zero_norm.append(row)
        elif any(r0 != r and all(a >= b for a, b in zip(r, r0)) for r0 in null):
            # v_r lies in the submodule generated by a null vector
            report.beyond_null.append(row)
        elif signs == {1}:
            report.admissible.append(row)
        else:
            report.excluded.append(row)
    return report


# -- normalization factors ------------------------------------------------------

def _qfr(a: int, b: int, bracket=qbracket, one=None):
    """``[a]!/[b]!`` for integers, as ``prod_{s=b+1}^{a} [s]`` (or its inverse)."""
    one = QRat.from_int(1) if one is None else one
    if a < b:
        den = _qfr(b, a, bracket, one)
        if den == 0:
            raise VanishingDenominator(f"[{b}]!/[{a}]! vanishes in a denominator")
        return one / den
    out = one
    for s in range(b + 1, a + 1):
        out = out * bracket(s)
    return out


def _normalization(xw: ExtremalWeight, row, bracket, one):
    n, a = xw.n, xw.alpha
    L = xw.l_label
    row = _row(row)
    ln = lambda s: row[s - 1] - s  # noqa: E731
    fr = lambda x, y: _qfr(x, y, bracket, one)  # noqa: E731
    out = one
    for i in range(1, a + 1):
        A = L(i) - L(a + 1) - 2 * a + n - 1
        out = out * fr(A, ln(i) - L(a + 1) - 2 * a + n - 1) / fr(ln(i) - L(i), 0)
    for l in range(a + 1, n + 1):
        C = L(a + 1) - L(l + 1) + 2 * a - n - 1
        # printed as [l_{l+1,n+1} - l_{ln} - 1]!; the identity N^2 B = 1 needs +1
        out = out * fr(C, L(a + 1) - ln(l) + 2 * a - n) / fr(L(l + 1) - ln(l) + 1, 0)
    for i in range(1, a + 1):
        for j in range(i + 1, a + 1):
            out = out * fr(ln(i) - L(j), ln(i) - ln(j)) * fr(L(i) - ln(j) - 1, L(i) - L(j) - 1)
    for k in range(a + 1, n + 1):
        for l in range(k + 1, n + 1):
            out = (out * fr(ln(k) - L(l + 1) - 2, ln(k) - ln(l))
                   * fr(L(k + 1) - ln(l) + 1, L(k + 1) - L(l + 1) - 1))
    for i in range(1, a + 1):
        for l in range(a + 1, n + 1):
            plain = bracket(L(i) - L(l + 1) - 1)
            if plain == 0:
                raise VanishingDenominator("[l_i,n+1 - l_l+1,n+1 - 1] vanishes")
            out = (out * fr(ln(i) - ln(l), ln(i) - L(l + 1) - 2)
                   * fr(L(i) - L(l + 1) - 2, L(i) - ln(l) - 1) / plain)
    return out


def normalization_factor(xw: ExtremalWeight, row) -> QRat:
    """Square of the normalization of the gl(n)-highest vector with weight ``row``."""
    row = _row(row)
    if not satisfies_branching(xw, row):
        raise InadmissibleRow(f"row {row} violates the branching conditions for {xw.lam}")
    return _normalization(xw, row, qbracket, QRat.from_int(1))


def normalization_factor_classical(xw: ExtremalWeight, row) -> Fraction:
    row = _row(row)
    if not satisfies_branching(xw, row):
        raise InadmissibleRow(f"row {row} violates the branching conditions for {xw.lam}")
    return _normalization(xw, row, Fraction, Fraction(1))


def between(upper, lower) -> bool:
    upper, lower = _row(upper), _row(lower)
    if len(upper) != len(lower) + 1:
        return False
    return all(upper[i] >= lower[i] >= upper[i + 1] for i in range(len(lower)))


def _gt_norm(lower, upper, bracket, one):
    k = len(lower)
    lk = lambda s: lower[s - 1] - s  # noqa: E731
    lk1 = lambda s: upper[s - 1] - s  # noqa: E731
    fr = lambda x, y: _qfr(x, y, bracket, one)  # noqa: E731
    out = one
    for i in range(1, k + 1):
        out = out * fr(lk(i) - lk1(k + 1) - 1, lk1(i) - lk1(k + 1) - 1) / fr(lk1(i) - lk(i), 0)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            out = (out * fr(lk1(i) - lk(j), lk(i) - lk(j))
                   * fr(lk(i) - lk1(j) - 1, lk1(i) - lk1(j) - 1))
    return out


def gt_lowering_norm(lower, upper) -> QRat:
    """Square of the compact GT normalization ``N(Lambda_k; Lambda_{k+1})``."""
    lower, upper = _row(lower), _row(upper)
    if not between(upper, lower):
        raise BetweenViolation(f"{lower} does not interlace {upper}")
    return _gt_norm(lower, upper, qbracket, QRat.from_int(1))


def gt_lowering_norm_classical(lower, upper) -> Fraction:
    lower, upper = _row(lower), _row(upper)
    if not between(upper, lower):
        raise BetweenViolation(f"{lower} does not interlace {upper}")
    return _gt_norm(lower, upper, Fraction, Fraction(1))


def gt_exponents(lower, upper) -> tuple[int, ...]:
    lower, upper = _row(lower), _row(upper)
    return tuple(upper[i] - lower[i] for i in range(len(lower)))


# -- patterns ---------------------------------------------------------------------

@dataclass(frozen=True)
class GGTPattern:
    xw: ExtremalWeight
    rows: tuple[GTRow, ...]  # Lambda_n, ..., Lambda_1

    @property
    def exponents(self) -> ExponentVector:
        return exponents(self.xw, self.rows[0])

    def validate(self) -> bool:
        if len(self.rows) != self.xw.n:
            return False
        if not satisfies_branching(self.xw, self.rows[0]):
            return False
        return all(between(u, l) for u, l in zip(self.rows, self.rows[1:]))

    def normalization(self) -> QRat:
        return normalization_factor(self.xw, self.rows[0])

    def gt_norms(self) -> list[QRat]:
        return [gt_lowering_norm(l, u) for u, l in zip(self.rows, self.rows[1:])]


def _below(row: tuple[int, ...]) -> list[tuple[int, ...]]:
    if len(row) <= 1:
        return []
    ranges = [range(row[i + 1], row[i] + 1) for i in range(len(row) - 1)]
    return [tuple(x) for x in itertools.product(*ranges)]


def enumerate_patterns(xw: ExtremalWeight, depth: int, box=None) -> list[GGTPattern]:
    """All patterns whose top gl(n) row lies in ``[-depth, depth]^n`` (or ``box``)."""
    if box is None:
        if depth < 0:
            raise EmptyBox("depth must be nonnegative")
        box = [(-depth, depth)] * xw.n
    out = []
    for top in branching(xw, box):
        chains = [[top.lam]]
        for _ in range(xw.n - 1):
            chains = [c + [lo] for c in chains for lo in _below(c[-1])]
        for c in chains:
            out.append(GGTPattern(xw, tuple(GTRow(x) for x in c)))
    out.sort(key=lambda p: tuple(tuple(-x for x in r.lam) for r in p.rows))
    return out


# -- u(2,1) reference schemes -------------------------------------------------------

# each inequality reads  m[a] + da >= m[b] + db
_U21_SCHEMES = {
    (2, 0): [("m12", 0, "m13", 1), ("m13", 1, "m22", 0), ("m22", 0, "m23", 1),
             ("m12", 0, "m11", 0), ("m11", 0, "m22", 0)],
    (1, 1): [("m12", 0, "m13", 1), ("m33", -1, "m22", 0),
             ("m12", 0, "m11", 0), ("m11", 0, "m22", 0)],
    (0, 2): [("m23", -1, "m12", 0), ("m12", 0, "m33", -1), ("m33", -1, "m22", 0),
             ("m12", 0, "m11", 0), ("m11", 0, "m22", 0)],
}

# lam_{i3} = m_{i3} + shift_i; second and third rows carry no shift.  The slot of
# the noncompact component never enters the inequalities and is given shift 0.
U21_SHIFT = {2: (1, 1, 0), 1: (1, 0, -1), 0: (0, -1, -1)}


def u21_reference_check(scheme_type) -> list[tuple[str, int, str, int]]:
    """Reference inequalities ``m[a] + da >= m[b] + db`` for a u(2,1) scheme type."""
    key = tuple(scheme_type)
    if key not in _U21_SCHEMES:
        raise ValueError(f"unknown scheme type {scheme_type}; use (2,0), (1,1) or (0,2)")
    return list(_U21_SCHEMES[key])


def format_inequality(ineq) -> str:
    a, da, b, db = ineq
    side = lambda x, d: x if d == 0 else f"{x}{d:+d}"  # noqa: E731
    return f"{side(a, da)} >= {side(b, db)}"


def u21_scheme_holds(scheme_type, m: dict, top_only: bool = False) -> bool:
    for a, da, b, db in u21_reference_check(scheme_type):
        if top_only and ("m11" in (a, b)):
            continue
        if not m[a] + da >= m[b] + db:
            return False
    return True


def u21_scheme_rows(xw: ExtremalWeight, box, shift=None) -> list[tuple[int, int]]:
    """gl(2) rows in the box satisfying the reference scheme mapped through the shift."""
    if xw.n != 2:
        raise ValueError("reference schemes exist for u(2,1) only")
    s = U21_SHIFT[xw.alpha] if shift is None else shift
    m = {f"m{i}3": xw.lam[i - 1] - s[i - 1] for i in (1, 2, 3)}
    scheme = (xw.alpha, 2 - xw.alpha)
    rows = []
    for row in _box_rows(box):
        mm = dict(m, m12=row[0], m22=row[1])
        if u21_scheme_holds(scheme, mm, top_only=True):
            rows.append(row)
    return sorted(rows, reverse=True)


def fit_u21_shift(xw: ExtremalWeight, box, span: int = 2, rows=None) -> list[tuple[int, int, int]]:
    """Every shift in ``[-span, span]^3`` whose scheme rows equal the admissible rows.

    ``rows`` defaults to the admissible set of :func:`positivity_scan` on ``box``.
    """
    if rows is None:
        rows = positivity_scan(xw, box).admissible
    target = sorted(rows, reverse=True)
    return [s for s in itertools.product(range(-span, span + 1), repeat=3)
            if u21_scheme_rows(xw, box, s) == target]
