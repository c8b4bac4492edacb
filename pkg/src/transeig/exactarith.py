"""Exact arithmetic substrate: Gaussian rationals, multivariate polynomials over
named formal generators, and Laurent polynomials in one distinguished variable.

Everything here is immutable and exact (no floating point).  The distinguished
Laurent variable is called "rho" by default; the shifted-variable tables use
the same machinery under the name "rho_t".
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

# The only tags a Generator may carry.  The first group is index-free, the
# second is indexed by a nonnegative integer.
PLAIN_TAGS = ("z", "h", "psi", "rho_t")
INDEXED_TAGS = ("n", "r", "qs", "qf")

ScalarLike = Union[int, Fraction, "GaussianRational"]


class Generator:
    """A named formal generator, e.g. z, psi, n(2), qf(0)."""

    __slots__ = ("tag", "index")

    def __init__(self, tag: str, index: int | None = None):
        if tag in PLAIN_TAGS:
            if index is not None:
                raise ValueError(f"generator {tag!r} takes no index")
        elif tag in INDEXED_TAGS:
            if not isinstance(index, int) or index < 0:
                raise ValueError(f"generator {tag!r} needs a nonnegative index")
        else:
            raise ValueError(f"unknown generator tag {tag!r}")
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "index", index)

    def __setattr__(self, *a):
        raise AttributeError("Generator is immutable")

    def key(self) -> tuple:
        return (self.tag, -1 if self.index is None else self.index)

    @property
    def name(self) -> str:
        return self.tag if self.index is None else f"{self.tag}{self.index}"

    def __eq__(self, other) -> bool:
        return isinstance(other, Generator) and self.key() == other.key()

    def __lt__(self, other: "Generator") -> bool:
        return self.key() < other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Generator({self.name})"


# Shorthand constructors used throughout the parametrix module.
def g_z() -> Generator:
    return Generator("z")


def g_h() -> Generator:
    return Generator("h")


def g_psi() -> Generator:
    return Generator("psi")


def g_n(k: int) -> Generator:
    return Generator("n", k)


def g_r(k: int) -> Generator:
    return Generator("r", k)


def g_qs(k: int) -> Generator:
    return Generator("qs", k)


def g_qf(k: int) -> Generator:
    return Generator("qf", k)


class GaussianRational:
    """Exact complex number with Fraction real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: ScalarLike = 0, im=0):
        if isinstance(re, GaussianRational):
            if im != 0:
                raise ValueError("cannot combine GaussianRational with im part")
            object.__setattr__(self, "re", re.re)
            object.__setattr__(self, "im", re.im)
            return
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, *a):
        raise AttributeError("GaussianRational is immutable")

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __add__(self, other: ScalarLike) -> "GaussianRational":
        o = _coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other: ScalarLike) -> "GaussianRational":
        return self + (-_coerce(other))

    def __rsub__(self, other: ScalarLike) -> "GaussianRational":
        return _coerce(other) + (-self)

    def __mul__(self, other: ScalarLike) -> "GaussianRational":
        o = _coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "GaussianRational":
        o = _coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational((self.re * o.re + self.im * o.im) / d,
                                (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other: ScalarLike) -> "GaussianRational":
        return _coerce(other) / self

    def __pow__(self, k: int) -> "GaussianRational":
        if k < 0:
            return GaussianRational(1) / self ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, GaussianRational)):
            o = _coerce(other)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __str__(self) -> str:
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"

    __repr__ = __str__


def _coerce(x: ScalarLike) -> GaussianRational:
    return x if isinstance(x, GaussianRational) else GaussianRational(x)


I = GaussianRational(0, 1)
ONE = GaussianRational(1)
ZERO = GaussianRational(0)

# A monomial is a sorted tuple of (Generator, positive exponent) pairs.
Monomial = tuple

EMPTY_MONOMIAL: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: dict[Generator, int] = dict(a)
    for gen, e in b:
        exps[gen] = exps.get(gen, 0) + e
    return tuple(sorted(((gen, e) for gen, e in exps.items() if e != 0),
                        key=lambda p: p[0].key()))


def _mono_key(m: Monomial) -> tuple:
    return tuple((gen.tag, -1 if gen.index is None else gen.index, e) for gen, e in m)


def _mono_str(m: Monomial) -> str:
    parts = []
    for gen, e in m:
        parts.append(gen.name if e == 1 else f"{gen.name}^{e}")
    return "*".join(parts)


class MultiPoly:
    """Multivariate polynomial: monomial -> GaussianRational, zeros pruned."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, GaussianRational] | None = None):
        pruned = {}
        if terms:
            for mono, c in terms.items():
                if not c.is_zero():
                    pruned[mono] = c
        object.__setattr__(self, "terms", pruned)

    def __setattr__(self, *a):
        raise AttributeError("MultiPoly is immutable")

    @staticmethod
    def constant(c: ScalarLike) -> "MultiPoly":
        return MultiPoly({EMPTY_MONOMIAL: _coerce(c)})

    @staticmethod
    def generator(gen: Generator, exp: int = 1) -> "MultiPoly":
        if exp < 0:
            raise ValueError("generator exponents must be nonnegative")
        if exp == 0:
            return MultiPoly.constant(1)
        return MultiPoly({((gen, exp),): ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, ZERO) + c
            if s.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = s
        return MultiPoly(out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        out: dict[Monomial, GaussianRational] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                s = out.get(m)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = s
        return MultiPoly(out)

    def scale(self, c: ScalarLike) -> "MultiPoly":
        cc = _coerce(c)
        if cc.is_zero():
            return MultiPoly()
        return MultiPoly({m: q * cc for m, q in self.terms.items()})

    def diff(self, gen: Generator) -> "MultiPoly":
        out: dict[Monomial, GaussianRational] = {}
        for mono, c in self.terms.items():
            for i, (g, e) in enumerate(mono):
                if g == gen:
                    rest = mono[:i] + ((g, e - 1),) + mono[i + 1:]
                    rest = tuple(p for p in rest if p[1] != 0)
                    s = out.get(rest, ZERO) + c * e
                    if s.is_zero():
                        out.pop(rest, None)
                    else:
                        out[rest] = s
                    break
        return MultiPoly(out)

    def subs_zero(self, gens: frozenset | set) -> "MultiPoly":
        return MultiPoly({m: c for m, c in self.terms.items()
                          if not any(g in gens for g, _ in m)})

    def subs_one(self, gens: frozenset | set) -> "MultiPoly":
        out: dict[Monomial, GaussianRational] = {}
        for mono, c in self.terms.items():
            kept = tuple(p for p in mono if p[0] not in gens)
            s = out.get(kept, ZERO) + c
            if s.is_zero():
                out.pop(kept, None)
            else:
                out[kept] = s
        return MultiPoly(out)

    def contains(self, gen: Generator) -> bool:
        return any(g == gen for m in self.terms for g, _ in m)

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            s = f"({c})"
            if mono:
                s += "*" + _mono_str(mono)
            parts.append(s)
        return " + ".join(parts)

    __repr__ = __str__


class SymbolExpr:
    """Laurent polynomial in one distinguished variable with MultiPoly coefficients.

    `var` names the distinguished variable ("rho" for the main tables,
    "rho_t" for the shifted tables); mixed-variable arithmetic is rejected.
    """

    __slots__ = ("coef", "var")

    def __init__(self, coef: Mapping[int, MultiPoly] | None = None, var: str = "rho"):
        pruned = {}
        if coef:
            for d, p in coef.items():
                if not p.is_zero():
                    pruned[d] = p
        object.__setattr__(self, "coef", pruned)
        object.__setattr__(self, "var", var)

    def __setattr__(self, *a):
        raise AttributeError("SymbolExpr is immutable")

    # -- constructors ------------------------------------------------------
    @staticmethod
    def constant(c: ScalarLike, var: str = "rho") -> "SymbolExpr":
        return SymbolExpr({0: MultiPoly.constant(c)}, var)

    @staticmethod
    def rho(exp: int = 1, var: str = "rho") -> "SymbolExpr":
        return SymbolExpr({exp: MultiPoly.constant(1)}, var)

    @staticmethod
    def generator(gen: Generator, exp: int = 1, var: str = "rho") -> "SymbolExpr":
        return SymbolExpr({0: MultiPoly.generator(gen, exp)}, var)

    @staticmethod
    def zero(var: str = "rho") -> "SymbolExpr":
        return SymbolExpr({}, var)

    # -- ring operations ---------------------------------------------------
    def _check(self, other: "SymbolExpr"):
        if self.var != other.var:
            raise ValueError(f"mixed distinguished variables {self.var!r}/{other.var!r}")

    def __add__(self, other: "SymbolExpr") -> "SymbolExpr":
        self._check(other)
        out = dict(self.coef)
        for d, p in other.coef.items():
            s = out.get(d)
            s = p if s is None else s + p
            if s.is_zero():
                out.pop(d, None)
            else:
                out[d] = s
        return SymbolExpr(out, self.var)

    def __neg__(self) -> "SymbolExpr":
        return SymbolExpr({d: -p for d, p in self.coef.items()}, self.var)

    def __sub__(self, other: "SymbolExpr") -> "SymbolExpr":
        return self + (-other)

    def __mul__(self, other: "SymbolExpr") -> "SymbolExpr":
        self._check(other)
        out: dict[int, MultiPoly] = {}
        for d1, p1 in self.coef.items():
            for d2, p2 in other.coef.items():
                d = d1 + d2
                prod = p1 * p2
                s = out.get(d)
                s = prod if s is None else s + prod
                out[d] = s
        return SymbolExpr(out, self.var)

    def scale(self, c: ScalarLike) -> "SymbolExpr":
        return SymbolExpr({d: p.scale(c) for d, p in self.coef.items()}, self.var)

    def is_zero(self) -> bool:
        return not self.coef

    # -- module-level ring operations ---------------------------------------------------
    def divide_by_rho_monomial(self, c: ScalarLike, d: int) -> "SymbolExpr":
        """Exact division by c*var^d; inverse of multiplying by that monomial."""
        cc = _coerce(c)
        if cc.is_zero():
            raise ZeroDivisionError("divide_by_rho_monomial with c = 0")
        inv = ONE / cc
        return SymbolExpr({e - d: p.scale(inv) for e, p in self.coef.items()}, self.var)

    def diff(self, gen: Generator) -> "SymbolExpr":
        """Formal partial derivative with respect to a generator (never rho)."""
        return SymbolExpr({d: p.diff(gen) for d, p in self.coef.items()}, self.var)

    def subs_zero(self, gens: Iterable[Generator]) -> "SymbolExpr":
        gset = frozenset(gens)
        return SymbolExpr({d: p.subs_zero(gset) for d, p in self.coef.items()}, self.var)

    def subs_one(self, gens: Iterable[Generator]) -> "SymbolExpr":
        gset = frozenset(gens)
        return SymbolExpr({d: p.subs_one(gset) for d, p in self.coef.items()}, self.var)

    def rename_var(self, var: str) -> "SymbolExpr":
        return SymbolExpr(self.coef, var)

    def contains(self, gen: Generator) -> bool:
        return any(p.contains(gen) for p in self.coef.values())

    # -- inspection --------------------------------------------------------
    def min_order(self) -> int | None:
        """Smallest rho-exponent present (None for the zero symbol)."""
        return min(self.coef) if self.coef else None

    def max_order(self) -> int | None:
        return max(self.coef) if self.coef else None

    def rho_coefficient(self, d: int) -> MultiPoly:
        return self.coef.get(d, MultiPoly())

    def __eq__(self, other) -> bool:
        return (isinstance(other, SymbolExpr) and self.var == other.var
                and self.coef == other.coef)

    def __hash__(self) -> int:
        return hash((self.var, frozenset((d, hash(p)) for d, p in self.coef.items())))

    def to_text(self) -> str:
        """Deterministic text form: rho-exponent descending, lexicographic monomials."""
        if not self.coef:
            return "0"
        parts = []
        for d in sorted(self.coef, reverse=True):
            for mono, c in self.coef[d].sorted_terms():
                s = f"({c})"
                if mono:
                    s += "*" + _mono_str(mono)
                if d != 0:
                    s += f"*{self.var}^{d}" if d != 1 else f"*{self.var}"
                parts.append(s)
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    __repr__ = __str__


def ring_ops(a: SymbolExpr, b: SymbolExpr | None, op: str) -> SymbolExpr:
    """Named entry point over the operator overloads: add, sub, mul, neg."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown ring op {op!r}")


def divide_by_rho_monomial(a: SymbolExpr, c: ScalarLike, d: int) -> SymbolExpr:
    return a.divide_by_rho_monomial(c, d)


def partial_derivative(a: SymbolExpr, g: Generator) -> SymbolExpr:
    return a.diff(g)


def substitute_zero(a: SymbolExpr, gens: Iterable[Generator]) -> SymbolExpr:
    return a.subs_zero(gens)
