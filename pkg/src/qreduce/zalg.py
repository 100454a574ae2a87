"""The reduction algebra Z_q(gl(n+1), gl(n)).

Generators are ``z_0 = p``, ``z_i = p e_{i,n+1} p`` and ``z_-i = p e_{n+1,i} p``
where ``p`` is the extremal projector of the gl(n) block.  Words are tuples of
nonzero signed indices (the empty word is ``z_0``).

Coefficients are stored to the *right* of their word, as rational functions of
``t_k = q^{e_kk}`` (k = 1..n+1).  A right coefficient acts first, so it is
evaluated at the weight of the vector the word is applied to.  Moving a
coefficient leftward past a word ``w`` shifts its Cartan symbols by the weight
of ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .pbw import _acc, make_algebra
from .projector import ProjectorSpec, apply_projector
from .qfield import AffineExpr, CartanRat, VanishingDenominator, qbracket_sym
from .verma import VermaVector, act_gen, highest_vector

__all__ = [
    "ClassicalZTable",
    "IndexOutOfRange",
    "NotHighest",
    "ZAlgebra",
    "ZCoefficientTable",
    "ZElement",
    "ZReport",
    "inversion_residuals",
    "verify_z_relations",
    "z_apply",
    "z_normal_order",
    "z_weight",
]


class NotHighest(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


def z_weight(n: int, word: Iterable[int]) -> tuple[int, ...]:
    """Weight of a z-word: ``z_i`` adds ``eps_i - eps_{n+1}``, ``z_-i`` the opposite."""
    w = [0] * (n + 1)
    for a in word:
        if a == 0:
            continue
        s = 1 if a > 0 else -1
        w[abs(a) - 1] += s
        w[n] -= s
    return tuple(w)


class ZCoefficientTable:
    """Closed-form coefficient families of the reduction algebra, symbolic in ``e_kk``."""

    def __init__(self, n: int, alpha: int = 0):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if not 0 <= alpha <= n:
            raise IndexOutOfRange(f"alpha={alpha} outside 0..{n}")
        self.n = n
        self.alpha = alpha
        self.rank = n + 1

    # -- building blocks -------------------------------------------------
    def phi(self, i: int, j: int) -> AffineExpr:
        return AffineExpr.phi(i, j, self.rank)

    def bracket(self, expr: AffineExpr):
        """Backend hook: the q-number of an affine expression."""
        return qbracket_sym(expr)

    def br(self, i: int, j: int, c: int = 0):
        """``[phi_ij + c]``."""
        return self.bracket(self.phi(i, j) + c)

    def num(self, r: int):
        return self.bracket(AffineExpr.const(r, self.rank))

    def one(self):
        return CartanRat.from_int(1, self.rank)

    def fact_ratio(self, expr: AffineExpr, a: int, b: int):
        """``[expr + a]! / [expr + b]!``."""
        if a < b:
            return self.one() / self.fact_ratio(expr, b, a)
        out = self.one()
        for s in range(b + 1, a + 1):
            out = out * self.bracket(expr + s)
        return out

    def _ratio(self, i: int, s_range, num_c: int, den_c: int) -> CartanRat:
        out = self.one()
        for s in s_range:
            out = out * self.br(i, s, num_c) / self.br(i, s, den_c)
        return out

    def _check(self, *idx):
        for i in idx:
            if not 1 <= i <= self.n:
                raise IndexOutOfRange(f"index {i} outside 1..{self.n}")

    # -- basic relations ---------------------------------------------------
    def b_basic(self, i: int, sign: int) -> CartanRat:
        self._check(i)
        return self._ratio(i, range(i + 1, self.n + 1), sign, 0)

    def B(self, i: int, j: int) -> CartanRat:
        self._check(i, j)
        return -self.b_basic(i, -1) * self.b_basic(j, 1) / self.br(i, j, -1)

    def gamma(self, i: int) -> CartanRat:
        self._check(i)
        return self.br(i, self.n + 1, -1) * self.b_basic(i, -1)

    def coeffs_basic(self, i: int, j: int) -> dict:
        return {"B": self.B(i, j), "gamma": self.gamma(i),
                "b_plus": self.b_basic(i, 1), "b_minus": self.b_basic(i, -1)}

    # -- alpha relations ---------------------------------------------------
    def b_alpha(self, i: int, sign: int) -> CartanRat:
        self._check(i)
        a, n = self.alpha, self.n
        if i <= a:
            return (self._ratio(i, range(1, i), sign, 0)
                    * self._ratio(i, range(a + 1, n + 1), 0, sign))
        return (self._ratio(i, range(1, a + 1), 0, sign)
                * self._ratio(i, range(i + 1, n + 1), sign, 0))

    def B_alpha(self, a_idx: int, b_idx: int) -> CartanRat:
        self._check(a_idx, b_idx)
        al = self.alpha
        if a_idx <= al:
            if b_idx <= al:
                return self.b_alpha(a_idx, 1) * self.b_alpha(b_idx, -1) / self.br(a_idx, b_idx, 1)
            return self.b_alpha(a_idx, 1) * self.b_alpha(b_idx, 1) / self.br(a_idx, b_idx)
        if b_idx <= al:
            return -self.b_alpha(a_idx, -1) * self.b_alpha(b_idx, -1) / self.br(a_idx, b_idx)
        return -self.b_alpha(a_idx, -1) * self.b_alpha(b_idx, 1) / self.br(a_idx, b_idx, -1)

    def gamma_alpha(self, i: int) -> CartanRat:
        self._check(i)
        al, n = self.alpha, self.n
        if i <= al:
            return -self.br(i, n + 1, -al) * self.b_alpha(i, 1)
        return self.br(i, n + 1, -al - 1) * self.b_alpha(i, -1)

    def coeffs_alpha(self, i: int) -> dict:
        """Row ``i`` of the alpha system: ``{"B": {j: ...}, "gamma": ...}``."""
        return {"B": {j: self.B_alpha(i, j) for j in range(1, self.n + 1)},
                "gamma": self.gamma_alpha(i)}

    # -- power relations -----------------------------------------------
    def b_power(self, i: int, sign: int, r: int) -> CartanRat:
        """``b^{(alpha)+}_i(r)`` for ``i <= alpha`` and ``b^{(alpha)-}_k(r)`` for ``k > alpha``."""
        self._check(i)
        al, n = self.alpha, self.n
        if i <= al:
            if sign != 1:
                raise IndexOutOfRange("r-dependent minus factor only exists for k > alpha")
            return (self._ratio(i, range(1, i), r, r - 1)
                    * self._ratio(i, range(al + 1, n + 1), r - 1, r))
        if sign != -1:
            raise IndexOutOfRange("r-dependent plus factor only exists for i <= alpha")
        return (self._ratio(i, range(1, al + 1), -r + 1, -r)
                * self._ratio(i, range(i + 1, n + 1), -r, -r + 1))

    def B_power(self, a_idx: int, b_idx: int, r: int) -> CartanRat:
        if r < 1:
            raise IndexOutOfRange("power relations need r >= 1")
        self._check(a_idx, b_idx)
        al = self.alpha
        rr = self.num(r)
        if a_idx <= al:
            bi = self.b_power(a_idx, 1, r)
            if b_idx <= al:
                return rr / self.br(a_idx, b_idx, r) * bi * self.b_alpha(b_idx, -1)
            return rr / self.br(a_idx, b_idx, r - 1) * bi * self.b_alpha(b_idx, 1)
        bk = self.b_power(a_idx, -1, r)
        if b_idx <= al:
            return -rr / self.br(a_idx, b_idx, -r + 1) * bk * self.b_alpha(b_idx, -1)
        return -rr / self.br(a_idx, b_idx, -r) * bk * self.b_alpha(b_idx, 1)

    def gamma_power(self, i: int, r: int) -> CartanRat:
        if r < 1:
            raise IndexOutOfRange("power relations need r >= 1")
        self._check(i)
        al, n = self.alpha, self.n
        rr = self.num(r)
        if i <= al:
            return -rr * self.br(i, n + 1, -al + r - 1) * self.b_power(i, 1, r)
        return rr * self.br(i, n + 1, -al - r) * self.b_power(i, -1, r)

    def coeffs_power(self, i: int, r: int) -> dict:
        return {"B": {j: self.B_power(i, j, r) for j in range(1, self.n + 1)},
                "gamma": self.gamma_power(i, r)}

    # -- commutation factors -------------------------------------------
    def swap_factor(self, x: int, y: int) -> CartanRat:
        """``C`` with ``z_x z_y = z_y z_x C`` for ``|x| != |y|``."""
        a, b = abs(x), abs(y)
        if (x > 0) != (y > 0):
            return self.one()
        if x > 0:
            return self.br(a, b, 1) / self.br(a, b) if a < b else self.br(b, a) / self.br(b, a, 1)
        return self.br(a, b) / self.br(a, b, 1) if a < b else self.br(b, a, 1) / self.br(b, a)

    def power_swap_factor(self, i: int, j: int, r: int, s: int, negative: bool) -> CartanRat:
        """Factor of ``z_i^r z_j^s = z_j^s z_i^r C`` (or the negative-index version), ``i < j``."""
        ph = self.phi(i, j)
        if not negative:
            return self.fact_ratio(ph, r, 0) * self.fact_ratio(ph, -s, r - s)
        return self.fact_ratio(ph, 0, -r) * self.fact_ratio(ph, s - r, s)


class ClassicalZTable(ZCoefficientTable):
    """The same coefficient formulas with ``[x] -> x``, evaluated at a fixed weight."""

    def __init__(self, n: int, alpha: int, weight):
        super().__init__(n, alpha)
        self.weight = tuple(weight)

    def bracket(self, expr: AffineExpr):
        return Fraction(expr.evaluate(self.weight))

    def one(self):
        return Fraction(1)


class ZElement:
    """Linear combination of z-words with right-placed coefficients."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: "ZAlgebra", terms: dict):
        self.alg = alg
        self.terms = {w: c for w, c in terms.items() if not c.is_zero()}

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            _acc(out, w, c)
        return ZElement(self.alg, out)

    def __neg__(self):
        return ZElement(self.alg, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ZElement):
            return self.alg.multiply(self, other)
        if isinstance(other, (int, CartanRat)):
            return ZElement(self.alg, {w: c * other for w, c in self.terms.items()})
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, ZElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, word: Sequence[int] = ()) -> CartanRat:
        return self.terms.get(tuple(word), CartanRat.from_int(0, self.alg.rank))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            ("*".join(f"z{a}" for a in w) or "z0") + f"*({c})" for w, c in sorted(self.terms.items()))


class ZAlgebra:
    """Rewriting system for z-words, canonical with respect to the type ``alpha``.

    Lowering letters ``z_1..z_alpha, z_-(alpha+1)..z_-n`` stand left of the raising
    letters ``z_-1..z_-alpha, z_(alpha+1)..z_n``; each group ascends in ``|index|``.
    """

    def __init__(self, n: int, alpha: int = 0, table: ZCoefficientTable | None = None):
        self.table = table or ZCoefficientTable(n, alpha)
        self.n = n
        self.alpha = alpha
        self.rank = n + 1
        self._cache: dict = {}

    def is_lowering(self, x: int) -> bool:
        return (0 < x <= self.alpha) or (x < -self.alpha)

    def check_word(self, word) -> tuple[int, ...]:
        word = tuple(int(a) for a in word)
        for a in word:
            if abs(a) > self.n:
                raise IndexOutOfRange(f"z-index {a} outside -{self.n}..{self.n}")
        return tuple(a for a in word if a != 0)

    def element(self, word=(), coeff=1) -> ZElement:
        c = coeff if isinstance(coeff, CartanRat) else CartanRat.from_int(coeff, self.rank)
        return ZElement(self, {self.check_word(word): c.lift(self.rank)})

    def _pair_rule(self, x: int, y: int):
        """Rewrite of an out-of-order adjacent pair, or ``None`` if already ordered."""
        lx, ly = self.is_lowering(x), self.is_lowering(y)
        if lx and not ly:
            return None
        if lx == ly and abs(x) < abs(y):
            return None
        if abs(x) != abs(y):
            return [((y, x), self.table.swap_factor(x, y))]
        if lx == ly:
            return None  # identical letters
        # raising letter z_x meets its partner: z_-i z_i (i <= alpha) or z_k z_-k (k > alpha)
        i = abs(x)
        row = self.table.coeffs_alpha(i)
        out = []
        for j in range(1, self.n + 1):
            c = row["B"][j]
            w = (j, -j) if j <= self.alpha else (-j, j)
            out.append((w, c))
        out.append(((), row["gamma"]))
        return out

    def normal_order(self, word) -> dict:
        word = self.check_word(word)
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        out: dict = None
        for p in range(len(word) - 1):
            rule = self._pair_rule(word[p], word[p + 1])
            if rule is None:
                continue
            head, tail = word[:p], word[p + 2:]
            shift = z_weight(self.n, tail)
            out = {}
            for w, c in rule:
                cc = c.shift(shift)
                for w2, c2 in self.normal_order(head + w + tail).items():
                    _acc(out, w2, c2 * cc)
            break
        if out is None:
            out = {word: CartanRat.from_int(1, self.rank)}
        self._cache[word] = out
        return out

    def normalize(self, x) -> ZElement:
        if isinstance(x, ZElement):
            out: dict = {}
            for w, c in x.terms.items():
                for w2, c2 in self.normal_order(w).items():
                    _acc(out, w2, c2 * c)
            return ZElement(self, out)
        return ZElement(self, dict(self.normal_order(x)))

    def multiply(self, a: ZElement, b: ZElement) -> ZElement:
        out: dict = {}
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                cc = c1.shift(z_weight(self.n, w2)) * c2
                for w, c in self.normal_order(w1 + w2).items():
                    _acc(out, w, c * cc)
        return ZElement(self, out)

    def is_canonical(self, word) -> bool:
        word = self.check_word(word)
        return all(self._pair_rule(x, y) is None for x, y in zip(word, word[1:]))


def z_normal_order(table: ZCoefficientTable, w) -> ZElement:
    return _algebra_for(table).normalize(w)


_ALGEBRAS: dict = {}


def _algebra_for(table: ZCoefficientTable) -> ZAlgebra:
    key = id(table)
    alg = _ALGEBRAS.get(key)
    if alg is None or alg.table is not table:
        alg = ZAlgebra(table.n, table.alpha, table)
        _ALGEBRAS[key] = alg
    return alg


# -- oracle realization -------------------------------------------------

@lru_cache(maxsize=None)
def _gl_projector(n: int) -> ProjectorSpec:
    return ProjectorSpec(make_algebra(n + 1), n, 0)


def z_apply(ctx, i: int, v: VermaVector, check: bool = True) -> VermaVector:
    """Apply ``z_i`` to a gl(n)-highest Verma vector of gl(n+1)."""
    n = ctx.N - 1
    if abs(i) > n:
        raise IndexOutOfRange(f"z-index {i} outside -{n}..{n}")
    spec = _gl_projector(n) if ctx is make_algebra(n + 1) else ProjectorSpec(ctx, n, 0)
    if check:
        for g in spec.simple_raising():
            if not act_gen(ctx, g, v).is_zero():
                raise NotHighest("vector is not annihilated by the gl(n) raising generators")
    if i == 0:
        return apply_projector(spec, v)
    g = ctx.gen_id(i, n + 1) if i > 0 else ctx.gen_id(n + 1, -i)
    return apply_projector(spec, act_gen(ctx, g, v))


class _WordRunner:
    """Memoized evaluation of z-words on a fixed gl(n)-highest vector."""

    def __init__(self, ctx, v: VermaVector):
        self.ctx = ctx
        self.v = v
        self.base = v.weight()
        self.n = ctx.N - 1
        self._memo: dict = {(): v}

    def run(self, word: tuple[int, ...]) -> VermaVector:
        hit = self._memo.get(word)
        if hit is None:
            inner = self.run(word[1:])
            hit = z_apply(self.ctx, word[0], inner, check=False) if not inner.is_zero() else inner
            self._memo[word] = hit
        return hit

    def side(self, terms) -> VermaVector:
        out = VermaVector(self.ctx, self.v.lam, {})
        for word, coeff in terms:
            word = tuple(a for a in word if a != 0) if word not in ((0,),) else ()
            res = self.run(tuple(word))
            if res.is_zero():
                continue
            val = coeff.specialize(self.base) if coeff.rank else coeff
            if val.is_zero():
                continue
            out = out + res.scale(val)
        return out


def relation_instances(table: ZCoefficientTable, rmax: int = 3, families=None):
    """Yield ``(family, label, lhs_terms, rhs_terms)`` with right-placed coefficients."""
    n, al = table.n, table.alpha
    one = table.one()
    want = (lambda f: True) if families is None else (lambda f: f in families)
    idx = [i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)]
    if want("z5"):
        for i in idx:
            yield "z5", f"z0 z{i}", [((0, i), one)], [((i,), one)]
            yield "z5", f"z{i} z0", [((i, 0), one)], [((i,), one)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j and want("z6"):
                yield "z6", f"z{i} z-{j}", [((i, -j), one)], [((-j, i), one)]
            if i < j:
                if want("z7"):
                    c = table.br(i, j, 1) / table.br(i, j)
                    yield "z7", f"z{i} z{j}", [((i, j), one)], [((j, i), c)]
                if want("z8"):
                    c = table.br(i, j) / table.br(i, j, 1)
                    yield "z8", f"z-{i} z-{j}", [((-i, -j), one)], [((-j, -i), c)]
    if want("z9"):
        for i in range(1, n + 1):
            rhs = [((-j, j), table.B(i, j)) for j in range(1, n + 1)] + [((), table.gamma(i))]
            yield "z9", f"z{i} z-{i}", [((i, -i), one)], rhs
    for i in range(1, n + 1):
        fam = "z12" if i <= al else "z13"
        if not want(fam):
            continue
        row = table.coeffs_alpha(i)
        rhs = [(((j, -j) if j <= al else (-j, j)), row["B"][j]) for j in range(1, n + 1)]
        rhs.append(((), row["gamma"]))
        lhs = ((-i, i) if i <= al else (i, -i))
        yield fam, f"{'z-%d z%d' % (i, i) if i <= al else 'z%d z-%d' % (i, i)}", [(lhs, one)], rhs
    rng = range(1, rmax + 1)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for r in rng:
                for s in rng:
                    if i != j and want("z18"):
                        yield ("z18", f"z{i}^{r} z-{j}^{s}",
                               [((i,) * r + (-j,) * s, one)], [((-j,) * s + (i,) * r, one)])
                    if i < j and want("z19"):
                        c = table.power_swap_factor(i, j, r, s, negative=False)
                        yield ("z19", f"z{i}^{r} z{j}^{s}",
                               [((i,) * r + (j,) * s, one)], [((j,) * s + (i,) * r, c)])
                    if i < j and want("z20"):
                        c = table.power_swap_factor(i, j, r, s, negative=True)
                        yield ("z20", f"z-{i}^{r} z-{j}^{s}",
                               [((-i,) * r + (-j,) * s, one)], [((-j,) * s + (-i,) * r, c)])
    for i in range(1, n + 1):
        fam = "z21" if i <= al else "z22"
        if not want(fam):
            continue
        for r in rng:
            row = table.coeffs_power(i, r)
            x = i if i <= al else -i
            lhs = [((-x,) + (x,) * r, one)]
            rhs = []
            for j in range(1, n + 1):
                w = (j, -j) if j <= al else (-j, j)
                rhs.append(((x,) * (r - 1) + w, row["B"][j]))
            rhs.append(((x,) * (r - 1), row["gamma"]))
            yield fam, f"{'z%d' % -x} {'z%d' % x}^{r}", lhs, rhs


@dataclass
class ZReport:
    n: int
    alpha: int
    checks: int = 0
    by_family: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and not self.errors


ALPHA_FREE = ("z5", "z6", "z7", "z8", "z9", "z18", "z19", "z20")
ALPHA_FAMILIES = ("z12", "z13", "z21", "z22")


def test_vectors(ctx, lam, depth: int = 2) -> list[VermaVector]:
    """gl(n)-highest vectors: ``v`` and products of lowering z's of total degree <= depth."""
    n = ctx.N - 1
    v = highest_vector(ctx, lam)
    out = [v]
    frontier = [((), v)]
    for _ in range(depth):
        nxt = []
        for word, u in frontier:
            last = word[0] if word else -(n + 1)
            for j in range(1, n + 1):
                if -j < last:
                    continue  # build z_-j words with nondecreasing j from the right
                w = z_apply(ctx, -j, u, check=False)
                if not w.is_zero():
                    nxt.append(((-j,) + word, w))
                    out.append(w)
        frontier = nxt
    return out


def verify_z_relations(n: int, alpha: int, weights, rmax: int = 3, families=None,
                       table: ZCoefficientTable | None = None, depth: int = 2) -> ZReport:
    """Evaluate both sides of every relation instance on gl(n)-highest Verma vectors."""
    table = table or ZCoefficientTable(n, alpha)
    ctx = make_algebra(n + 1)
    report = ZReport(n, alpha)
    instances = list(relation_instances(table, rmax, families))
    for lam in weights:
        lam = tuple(lam)
        try:
            vecs = test_vectors(ctx, lam, depth)
        except VanishingDenominator as exc:
            report.errors.append({"weight": list(lam), "detail": str(exc)})
            continue
        for vi, v in enumerate(vecs):
            runner = _WordRunner(ctx, v)
            for fam, label, lhs, rhs in instances:
                try:
                    ok = runner.side(lhs) == runner.side(rhs)
                except VanishingDenominator as exc:
                    report.errors.append({"family": fam, "relation": label, "weight": list(lam),
                                          "vector": vi, "detail": str(exc)})
                    continue
                report.checks += 1
                stats = report.by_family.setdefault(fam, [0, 0])
                stats[0] += 1
                if not ok:
                    stats[1] += 1
                    report.failures.append({"family": fam, "relation": label,
                                            "weight": list(lam), "vector": vi})
    return report


def inversion_residuals(table: ZCoefficientTable) -> list[CartanRat]:
    """Substitute the alpha system into the basic system; every returned entry must be zero.

    Unknowns ``P_i = z_i z_-i`` and ``Q_i = z_-i z_i`` are weight-zero words, so
    their coefficients commute with them and the check is linear algebra over
    rational functions.  Free variables are ``P_j (j <= alpha)``, ``Q_l (l > alpha)``
    and ``z_0``.
    """
    n, al = table.n, table.alpha
    zero = CartanRat.from_int(0, table.rank)
    # linear forms keyed by ("P", j), ("Q", l) or ("1",)
    def free(kind, j):
        return {(kind, j): table.one()}

    forms = {}
    for i in range(1, n + 1):
        row = table.coeffs_alpha(i)
        f = {}
        for j in range(1, n + 1):
            key = ("P", j) if j <= al else ("Q", j)
            f[key] = row["B"][j]
        f[("1",)] = row["gamma"]
        if i <= al:
            forms[("Q", i)] = f
            forms[("P", i)] = free("P", i)
        else:
            forms[("P", i)] = f
            forms[("Q", i)] = free("Q", i)
    residuals = []
    for i in range(1, n + 1):
        total: dict = {}
        for k, c in forms[("P", i)].items():
            total[k] = total.get(k, zero) + c
        for j in range(1, n + 1):
            for k, c in forms[("Q", j)].items():
                total[k] = total.get(k, zero) - table.B(i, j) * c
        total[("1",)] = total.get(("1",), zero) - table.gamma(i)
        residuals.extend(total.values())
    return residuals
