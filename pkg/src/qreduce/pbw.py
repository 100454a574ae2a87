"""PBW rewriting engine for U_q(gl(N)).

Elements are kept in the shape

    (lowering monomial) * C(q, t_1..t_N) * (raising monomial)

where both monomials follow the fixed convex order of positive roots
``(1,2), (1,3), (2,3), (1,4), ...`` and ``t_i`` stands for ``q^{e_ii}``.
Products are normal ordered through a table of adjacent-pair rewrite rules
built from the Cartan-Weyl commutation relations and their images under the
compact Cartan involution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .qfield import AffineExpr, CartanRat, QRat, qbracket_sym

__all__ = [
    "AlgebraContext",
    "AlgebraReport",
    "AlgebraElement",
    "DegreeCapError",
    "InvalidRank",
    "InvalidSplit",
    "composite_root_vector",
    "involution",
    "make_algebra",
    "multiply",
    "q_commutator",
    "random_element",
    "serre_elements",
    "verify_algebra",
    "weight",
]


class InvalidRank(ValueError):
    pass


class InvalidSplit(ValueError):
    pass


class DegreeCapError(RuntimeError):
    pass


def _q(k: int) -> QRat:
    return CartanRat.q_power(k)


class AlgebraContext:
    """Root data, generator numbering and rewrite rules for U_q(gl(N)).

    Generator ids: ``p`` is the lowering vector ``e_ji`` and ``M + p`` the
    raising vector ``e_ij`` for the ``p``-th positive root ``(i, j)``.
    """

    def __init__(self, N: int, degree_cap: int = 64):
        if N < 2:
            raise InvalidRank(f"N must be >= 2, got {N}")
        self.N = N
        self.degree_cap = degree_cap
        self.roots: tuple[tuple[int, int], ...] = tuple(
            (i, j) for j in range(2, N + 1) for i in range(1, j)
        )
        self.M = len(self.roots)
        self.pos = {r: p for p, r in enumerate(self.roots)}
        self.zero_mono = (0,) * self.M
        self.gen_weight: list[tuple[int, ...]] = []
        for kind in (-1, 1):
            for i, j in self.roots:
                w = [0] * N
                w[i - 1] += kind
                w[j - 1] -= kind
                self.gen_weight.append(tuple(w))
        self._rules: dict[tuple[int, int], list[tuple[CartanRat, tuple[int, ...]]]] = {}
        self._build_rules()
        self._insert_cache: dict = {}
        self._push_cache: dict = {}
        self._mono_mul_cache: dict = {}
        self._cross_cache: dict = {}
        self._inv_cache: dict = {}

    # -- naming ---------------------------------------------------------
    def gen_id(self, a: int, b: int) -> int:
        """Id of the root vector ``e_ab`` (``a != b``)."""
        if a < b:
            return self.M + self.pos[(a, b)]
        return self.pos[(b, a)]

    def gen_indices(self, g: int) -> tuple[int, int]:
        i, j = self.roots[g % self.M]
        return (i, j) if g >= self.M else (j, i)

    def is_raising(self, g: int) -> bool:
        return g >= self.M

    def gen_name(self, g: int) -> str:
        a, b = self.gen_indices(g)
        return f"e_{a}{b}" if self.N < 10 else f"e_{a},{b}"

    def root_product(self, a: tuple[int, int], b: tuple[int, int]) -> int:
        """Inner product of ``eps_a0 - eps_a1`` and ``eps_b0 - eps_b1``."""
        (i, j), (k, l) = a, b
        d = lambda x, y: 1 if x == y else 0  # noqa: E731
        return d(i, k) - d(i, l) - d(j, k) + d(j, l)

    def cartan(self, value) -> CartanRat:
        if isinstance(value, CartanRat):
            return value.lift(self.N)
        return CartanRat.from_int(value, self.N)

    def t_monomial(self, exps: Sequence[int], qexp: int = 0) -> CartanRat:
        return CartanRat.monomial(self.N, (qexp,) + tuple(exps))

    def _t_ratio(self, a: int, b: int) -> CartanRat:
        w = [0] * self.N
        w[a - 1] += 1
        w[b - 1] -= 1
        return self.t_monomial(w)

    # -- rule table -----------------------------------------------------
    def _build_rules(self) -> None:
        M = self.M
        q, qi = _q(1), _q(-1)
        one = CartanRat.from_int(1)
        E = lambda a, b: M + self.pos[(a, b)]  # noqa: E731
        F = lambda a, b: self.pos[(a, b)]  # e_ba for a < b  # noqa: E731
        rules = self._rules
        for P, (a, b) in enumerate(self.roots):
            for Q, (c, d) in enumerate(self.roots):
                # raising pair and lowering pair, P > Q out of order
                if P > Q:
                    x, y = M + P, M + Q
                    fx, fy = P, Q
                    if b == d:
                        rules[(x, y)] = [(q, (y, x))]
                        rules[(fx, fy)] = [(q, (fy, fx))]
                    elif a == c:
                        rules[(x, y)] = [(q, (y, x))]
                        rules[(fx, fy)] = [(q, (fy, fx))]
                    elif a == d:
                        rules[(x, y)] = [(qi, (y, x)), (-qi, (E(c, b),))]
                        rules[(fx, fy)] = [(qi, (fy, fx)), (one, (F(c, b),))]
                    elif d < a or a < c:
                        rules[(x, y)] = [(one, (y, x))]
                        rules[(fx, fy)] = [(one, (fy, fx))]
                    else:  # crossing c < a < d < b
                        rules[(x, y)] = [(one, (y, x)), (q - qi, (E(a, d), E(c, b)))]
                        rules[(fx, fy)] = [(one, (fy, fx)), (q - qi, (F(c, b), F(a, d)))]
                # raising e_ab left of lowering e_dc
                x, y = M + P, Q
                swap = (self.cartan(1), (y, x))
                if (a, b) == (c, d):
                    h = AffineExpr(tuple((1 if k == a else -1 if k == b else 0)
                                         for k in range(1, self.N + 1)), 0)
                    rules[(x, y)] = [swap, (qbracket_sym(h), ())]
                elif b == c or d == a or {a, b}.isdisjoint({c, d}) and (
                        b < c or d < a or a < c < d < b or c < a < b < d):
                    rules[(x, y)] = [swap]
                elif a < c < b < d:
                    coeff = self.cartan(q - qi) * self._t_ratio(b, c)
                    rules[(x, y)] = [swap, (coeff, (E(a, c), F(b, d)))]
                elif c < a < d < b:
                    word = (E(d, b), F(c, a))
                    K = self._t_ratio(a, d).shift(self._neg_weight(word))
                    rules[(x, y)] = [swap, (self.cartan(qi - q) * K, word)]
                elif a == c and d < b:
                    word = (E(d, b),)
                    K = self._t_ratio(a, d).shift(self._neg_weight(word))
                    rules[(x, y)] = [swap, (-K, word)]
                elif a == c and b < d:
                    rules[(x, y)] = [swap, (-self._t_ratio(b, a), (F(b, d),))]
                elif b == d and a > c:
                    word = (F(c, a),)
                    K = self._t_ratio(a, b).shift(self._neg_weight(word))
                    rules[(x, y)] = [swap, (K, word)]
                elif b == d and a < c:
                    rules[(x, y)] = [swap, (self._t_ratio(b, c), (E(a, c),))]
                else:  # pragma: no cover - every configuration is listed above
                    raise AssertionError((a, b, c, d))

    def _word_weight(self, word: Iterable[int]) -> tuple[int, ...]:
        w = [0] * self.N
        for g in word:
            for k, x in enumerate(self.gen_weight[g]):
                w[k] += x
        return tuple(w)

    def _neg_weight(self, word) -> tuple[int, ...]:
        return tuple(-x for x in self._word_weight(word))

    def mono_weight(self, mono: Sequence[int], raising: bool) -> tuple[int, ...]:
        w = [0] * self.N
        base = self.M if raising else 0
        for p, e in enumerate(mono):
            if e:
                for k, x in enumerate(self.gen_weight[base + p]):
                    w[k] += e * x
        return tuple(w)

    def mono_height(self, mono: Sequence[int]) -> int:
        return sum(e * (j - i) for e, (i, j) in zip(mono, self.roots))

    def mono_word(self, mono: Sequence[int], raising: bool) -> tuple[int, ...]:
        base = self.M if raising else 0
        return tuple(base + p for p, e in enumerate(mono) for _ in range(e))

    # -- kernels ----------------------------------------------------------
    def _insert(self, x: int, mono: tuple[int, ...]) -> dict[tuple[int, ...], QRat]:
        """``x * mono`` inside the lowering (or raising) subalgebra."""
        key = (x, mono)
        hit = self._insert_cache.get(key)
        if hit is not None:
            return hit
        raising = x >= self.M
        base = self.M if raising else 0
        p = x - base
        first = next((k for k, e in enumerate(mono) if e), self.M)
        if p <= first:
            m = list(mono)
            m[p] += 1
            out = {tuple(m): CartanRat.from_int(1)}
        else:
            rest = list(mono)
            rest[first] -= 1
            rest = tuple(rest)
            out: dict = {}
            for coeff, word in self._rules[(x, base + first)]:
                part = {rest: CartanRat.from_int(1)}
                for g in reversed(word):
                    nxt: dict = {}
                    for m, c in part.items():
                        for m2, c2 in self._insert(g, m).items():
                            _acc(nxt, m2, c * c2)
                    part = nxt
                for m, c in part.items():
                    _acc(out, m, coeff * c)
        self._insert_cache[key] = out
        return out

    def _mono_mul(self, left: tuple[int, ...], right: tuple[int, ...], raising: bool):
        """Product of two sorted monomials of the same kind."""
        if not any(left):
            return {right: CartanRat.from_int(1)}
        if not any(right):
            return {left: CartanRat.from_int(1)}
        key = (left, right, raising)
        hit = self._mono_mul_cache.get(key)
        if hit is not None:
            return hit
        part = {right: CartanRat.from_int(1)}
        for g in reversed(self.mono_word(left, raising)):
            nxt: dict = {}
            for m, c in part.items():
                for m2, c2 in self._insert(g, m).items():
                    _acc(nxt, m2, c * c2)
            part = nxt
        self._mono_mul_cache[key] = part
        return part

    def _push(self, x: int, low: tuple[int, ...]) -> dict:
        """Raising generator ``x`` times lowering monomial, as a PBW element dict."""
        key = (x, low)
        hit = self._push_cache.get(key)
        if hit is not None:
            return hit
        first = next((k for k, e in enumerate(low) if e), None)
        if first is None:
            r = [0] * self.M
            r[x - self.M] = 1
            out = {(low, tuple(r)): self.cartan(1)}
        else:
            rest = list(low)
            rest[first] -= 1
            rest = tuple(rest)
            out = {}
            for coeff, word in self._rules[(x, first)]:
                elem = {(rest, self.zero_mono): self.cartan(1)}
                for g in reversed(word):
                    elem = self._gen_times(g, elem)
                elem = self._cartan_times(coeff, elem)
                for k, c in elem.items():
                    _acc(out, k, c)
        self._push_cache[key] = out
        return out

    def _cartan_times(self, C: CartanRat, elem: dict) -> dict:
        C = self.cartan(C)
        if C.is_one():
            return elem
        out = {}
        for (L, R), c in elem.items():
            _acc(out, (L, R), C.shift(self.mono_weight(L, False)) * c)
        return out

    def _gen_times(self, g: int, elem: dict) -> dict:
        out: dict = {}
        if g < self.M:
            for (L, R), c in elem.items():
                for L2, c2 in self._insert(g, L).items():
                    _acc(out, (L2, R), c2 * c)
            return out
        for (L, R), c in elem.items():
            for (L2, R2), c2 in self._push(g, L).items():
                cc = c2 * c.shift(tuple(-x for x in self.mono_weight(R2, True)))
                for R3, c3 in self._mono_mul(R2, R, True).items():
                    _acc(out, (L2, R3), c3 * cc)
        return out

    def _cross(self, R: tuple[int, ...], L: tuple[int, ...]) -> dict:
        """Raising monomial times lowering monomial."""
        key = (R, L)
        hit = self._cross_cache.get(key)
        if hit is not None:
            return hit
        elem = {(L, self.zero_mono): self.cartan(1)}
        for g in reversed(self.mono_word(R, True)):
            elem = self._gen_times(g, elem)
        self._cross_cache[key] = elem
        return elem

    def mul_terms(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for (L1, R1), C1 in a.items():
            d1 = sum(L1) + sum(R1)
            for (L2, R2), C2 in b.items():
                if d1 + sum(L2) + sum(R2) > self.degree_cap:
                    raise DegreeCapError(
                        f"product degree {d1 + sum(L2) + sum(R2)} exceeds cap {self.degree_cap}")
                for (Lx, Rx), Cx in self._cross(R1, L2).items():
                    coeff = (C1.shift(self.mono_weight(Lx, False)) * Cx
                             * C2.shift(tuple(-x for x in self.mono_weight(Rx, True))))
                    if coeff.is_zero():
                        continue
                    lows = self._mono_mul(L1, Lx, False)
                    highs = self._mono_mul(Rx, R2, True)
                    for Ly, cl in lows.items():
                        for Ry, cr in highs.items():
                            _acc(out, (Ly, Ry), coeff * cl * cr)
        return out

    # -- constructors -------------------------------------------------------
    def element(self, terms: dict) -> "AlgebraElement":
        return AlgebraElement(self, {k: v for k, v in terms.items() if not v.is_zero()})

    def one(self) -> "AlgebraElement":
        return self.element({(self.zero_mono, self.zero_mono): self.cartan(1)})

    def scalar(self, value) -> "AlgebraElement":
        return self.element({(self.zero_mono, self.zero_mono): self.cartan(value)})

    def e(self, a: int, b: int) -> "AlgebraElement":
        """The root vector ``e_ab`` as an element (composite vectors use k = a+1 or b+1)."""
        g = self.gen_id(a, b)
        return self.gen(g)

    def gen(self, g: int) -> "AlgebraElement":
        m = [0] * self.M
        m[g % self.M] = 1
        m = tuple(m)
        key = (self.zero_mono, m) if g >= self.M else (m, self.zero_mono)
        return self.element({key: self.cartan(1)})

    def k(self, i: int, power: int = 1) -> "AlgebraElement":
        """``q^{power * e_ii}``."""
        w = [0] * self.N
        w[i - 1] = power
        return self.scalar(self.t_monomial(w))

    def monomial(self, low: Sequence[int] = None, high: Sequence[int] = None,
                 cartan=1) -> "AlgebraElement":
        low = tuple(low) if low is not None else self.zero_mono
        high = tuple(high) if high is not None else self.zero_mono
        return self.element({(low, high): self.cartan(cartan)})

    def word(self, gens: Iterable[int]) -> "AlgebraElement":
        out = self.one()
        for g in gens:
            out = out * self.gen(g)
        return out


class AlgebraElement:
    """Finite sum of PBW terms ``L * C * R`` over an :class:`AlgebraContext`."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms: dict):
        self.ctx = ctx
        self.terms = terms

    def _wrap(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            if other.ctx is not self.ctx:
                raise ValueError("elements from different algebra contexts")
            return other
        return self.ctx.scalar(other)

    def __add__(self, other):
        other = self._wrap(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return AlgebraElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.ctx, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, CartanRat)) and not isinstance(other, AlgebraElement):
            other = self.ctx.scalar(other)
        other = self._wrap(other)
        return AlgebraElement(self.ctx, self.ctx.mul_terms(self.terms, other.terms))

    def __rmul__(self, other):
        return self._wrap(other) * self

    def __pow__(self, k: int):
        out = self.ctx.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            if isinstance(other, (int, CartanRat)):
                other = self.ctx.scalar(other)
            else:
                return NotImplemented
        return self.ctx is other.ctx and (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        return max((sum(L) + sum(R) for L, R in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        ctx = self.ctx
        for (L, R), c in sorted(self.terms.items(), key=lambda kv: kv[0]):
            word = []
            for raising, mono in ((False, L), (True, R)):
                base = ctx.M if raising else 0
                for p, e in enumerate(mono):
                    if e:
                        name = ctx.gen_name(base + p)
                        word.append(name if e == 1 else f"{name}^{e}")
                if not raising and not c.is_one():
                    word.append(f"[{c.num}/{c.den}]" if not c.den.is_one() else f"({c.num})")
            parts.append("*".join(word) if word else "1")
        return " + ".join(parts)


def _acc(d: dict, key, value) -> None:
    if value.is_zero():
        return
    cur = d.get(key)
    if cur is None:
        d[key] = value
    else:
        s = cur + value
        if s.is_zero():
            del d[key]
        else:
            d[key] = s


# -- public operations ----------------------------------------------------

@lru_cache(maxsize=None)
def make_algebra(N: int, degree_cap: int = 64) -> AlgebraContext:
    return AlgebraContext(N, degree_cap)


def multiply(ctx: AlgebraContext, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.ctx is not ctx or b.ctx is not ctx:
        raise ValueError("elements do not belong to this context")
    return a * b


def q_commutator(ctx: AlgebraContext, a: AlgebraElement, b: AlgebraElement,
                 beta: tuple[int, int], gamma: tuple[int, int], sign: int = 1) -> AlgebraElement:
    """``[a, b]_{q^sign} = a b - q^{sign * (beta, gamma)} b a`` for root vectors of roots beta, gamma.

    Roots are given as index pairs ``(i, j)`` meaning ``eps_i - eps_j``.
    """
    k = sign * ctx.root_product(beta, gamma)
    return a * b - CartanRat.q_power(k) * (b * a)


def composite_root_vector(ctx: AlgebraContext, i: int, j: int, k: int | None = None) -> AlgebraElement:
    """Expand ``e_ij`` (``|i - j| >= 2``) through the splitting index ``k``.

    For ``i < j``: ``e_ij = [e_ik, e_kj]_{q^-1}``; for ``i > j``:
    ``e_ij = [e_ik, e_kj]_q``.  The two factors are themselves expanded in
    Chevalley generators (default splits) before multiplying, so the result
    is independent of the engine's own composite generators.
    """
    lo, hi = min(i, j), max(i, j)
    if not (1 <= lo and hi <= ctx.N) or hi - lo < 1:
        raise IndexError(f"invalid root vector indices ({i}, {j})")
    if hi - lo == 1:
        return ctx.e(i, j)
    if k is None:
        k = lo + 1
    if not lo < k < hi:
        raise IndexError(f"splitting index {k} not strictly between {lo} and {hi}")
    left = _chevalley_expansion(ctx, i, k)
    right = _chevalley_expansion(ctx, k, j)
    sign = -1 if i < j else 1
    return q_commutator(ctx, left, right, (i, k), (k, j), sign)


def _chevalley_expansion(ctx: AlgebraContext, i: int, j: int) -> AlgebraElement:
    if abs(i - j) == 1:
        return ctx.e(i, j)
    return composite_root_vector(ctx, i, j, min(i, j) + 1)


def weight(ctx: AlgebraContext, m) -> tuple[int, ...]:
    """Weight of a PBW term key ``(low, high)`` or of a homogeneous element."""
    if isinstance(m, AlgebraElement):
        ws = {weight(ctx, k) for k in m.terms}
        if len(ws) > 1:
            raise ValueError("element is not weight homogeneous")
        return ws.pop() if ws else (0,) * ctx.N
    L, R = m
    a = ctx.mono_weight(L, False)
    b = ctx.mono_weight(R, True)
    return tuple(x + y for x, y in zip(a, b))


# -- involutions -----------------------------------------------------------

def _conj(C: CartanRat, q_mode: str) -> CartanRat:
    return C.conjugate_circular() if q_mode == "circular" else C


def involution(ctx: AlgebraContext, a: AlgebraElement, kind: str = "compact",
               q_mode: str = "circular", n: int | None = None) -> AlgebraElement:
    """Antilinear anti-automorphism: compact ``star`` or noncompact ``*`` for u(n, N-n)."""
    if kind not in ("compact", "noncompact"):
        raise ValueError(f"unknown involution kind {kind!r}")
    if q_mode not in ("real", "circular"):
        raise ValueError(f"unknown q mode {q_mode!r}")
    if kind == "noncompact":
        if n is None or not 1 <= n < ctx.N:
            raise InvalidSplit(f"split index n={n} invalid for N={ctx.N}")
    else:
        n = None
    out = ctx.element({})
    for (L, R), C in a.terms.items():
        img = _mono_image(ctx, R, True, kind, q_mode, n)
        img = img * ctx.scalar(_conj(C, q_mode))
        img = img * _mono_image(ctx, L, False, kind, q_mode, n)
        out = out + img
    return out


def _mono_image(ctx, mono, raising, kind, q_mode, n) -> AlgebraElement:
    key = ("mono", mono, raising, kind, q_mode, n)
    hit = ctx._inv_cache.get(key)
    if hit is not None:
        return hit
    out = ctx.one()
    # image of g1 g2 ... gk is img(gk) ... img(g1)
    for g in reversed(ctx.mono_word(mono, raising)):
        out = out * _gen_image(ctx, g, kind, q_mode, n)
    ctx._inv_cache[key] = out
    return out


def _gen_image(ctx, g, kind, q_mode, n) -> AlgebraElement:
    key = ("gen", g, kind, q_mode, n)
    hit = ctx._inv_cache.get(key)
    if hit is not None:
        return hit
    a, b = ctx.gen_indices(g)
    if abs(a - b) == 1:
        img = ctx.e(b, a)
        if kind == "noncompact" and min(a, b) == n:
            img = -img
    else:
        lo = min(a, b)
        k = lo + 1
        left = _gen_image(ctx, ctx.gen_id(a, k), kind, q_mode, n)
        right = _gen_image(ctx, ctx.gen_id(k, b), kind, q_mode, n)
        # e_ab = X Y - c Y X with c = q^{sign (beta, gamma)}
        sign = -1 if a < b else 1
        c = CartanRat.q_power(sign * ctx.root_product((a, k), (k, b)))
        img = right * left - ctx.scalar(_conj(c, q_mode)) * (left * right)
    ctx._inv_cache[key] = img
    return img


# -- self-consistency suite ----------------------------------------------------

def serre_elements(ctx: AlgebraContext) -> list[tuple[str, AlgebraElement]]:
    """Chevalley relations that must normal-order to zero."""
    N = ctx.N
    two = CartanRat.q_power(1) + CartanRat.q_power(-1)
    out = []
    for i in range(1, N):
        k = ctx.k(i) * ctx.k(i + 1, -1)
        kinv = ctx.k(i, -1) * ctx.k(i + 1)
        comm = ctx.e(i, i + 1) * ctx.e(i + 1, i) - ctx.e(i + 1, i) * ctx.e(i, i + 1)
        out.append((f"[e{i}{i + 1},e{i + 1}{i}]",
                    comm - ctx.scalar(QRat.from_int(1) / (CartanRat.q_power(1) - CartanRat.q_power(-1))) * (k - kinv)))
        for j in range(1, N):
            if abs(i - j) >= 2:
                out.append((f"e{i}{i + 1} e{j}{j + 1}",
                            ctx.e(i, i + 1) * ctx.e(j, j + 1) - ctx.e(j, j + 1) * ctx.e(i, i + 1)))
                out.append((f"e{i + 1}{i} e{j + 1}{j}",
                            ctx.e(i + 1, i) * ctx.e(j + 1, j) - ctx.e(j + 1, j) * ctx.e(i + 1, i)))
            if i != j:
                out.append((f"[e{i}{i + 1},e{j + 1}{j}]",
                            ctx.e(i, i + 1) * ctx.e(j + 1, j) - ctx.e(j + 1, j) * ctx.e(i, i + 1)))
            if abs(i - j) == 1:
                for a, b, tag in ((ctx.e(i, i + 1), ctx.e(j, j + 1), "up"),
                                  (ctx.e(i + 1, i), ctx.e(j + 1, j), "down")):
                    rel = a * a * b - ctx.scalar(two) * (a * b * a) + b * a * a
                    out.append((f"serre-{tag} ({i},{j})", rel))
    return out


def k_independence_pairs(ctx: AlgebraContext) -> list[tuple[str, AlgebraElement, AlgebraElement]]:
    out = []
    for i in range(1, ctx.N + 1):
        for j in range(1, ctx.N + 1):
            if abs(i - j) < 2:
                continue
            ref = ctx.e(i, j)
            for k in range(min(i, j) + 1, max(i, j)):
                out.append((f"e{i}{j} via k={k}", composite_root_vector(ctx, i, j, k), ref))
    return out


def random_element(ctx: AlgebraContext, rng, maxdeg: int = 3, terms: int = 2) -> AlgebraElement:
    """Small random element: a few PBW monomials with q-power Cartan parts."""
    out = ctx.element({})
    for _ in range(terms):
        deg = rng.randint(0, maxdeg)
        gens = [rng.randrange(2 * ctx.M) for _ in range(deg)]
        x = ctx.word(gens)
        i = rng.randint(1, ctx.N)
        x = ctx.scalar(CartanRat.q_power(rng.randint(-2, 2))) * ctx.k(i, rng.choice((-1, 1))) * x
        out = out + x
    return out


@dataclass
class AlgebraReport:
    N: int
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, what: str, label: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append({"check": what, "item": label})


def verify_algebra(N: int, rng, triples: int = 50, maxdeg: int = 3) -> AlgebraReport:
    ctx = make_algebra(N)
    report = AlgebraReport(N)
    for label, rel in serre_elements(ctx):
        report.record(rel.is_zero(), "relation", label)
    for label, a, b in k_independence_pairs(ctx):
        report.record(a == b, "k-independence", label)
    for t in range(triples):
        a, b, c = (random_element(ctx, rng, maxdeg, 1) for _ in range(3))
        report.record((a * b) * c == a * (b * c), "associativity", f"triple {t}")
        for mode in ("real", "circular"):
            lhs = involution(ctx, a * b, "compact", mode)
            rhs = involution(ctx, b, "compact", mode) * involution(ctx, a, "compact", mode)
            report.record(lhs == rhs, f"antihomomorphism-{mode}", f"triple {t}")
    return report
