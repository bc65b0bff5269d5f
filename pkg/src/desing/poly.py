"""Sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to nonzero ``Fraction``
coefficients. Variables are positional; names live in the chart.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]


class Infinity:
    """Signed infinity for extended orders (order of the zero polynomial)."""

    __slots__ = ("sign",)

    def __init__(self, sign: int = 1):
        self.sign = sign

    def __repr__(self):
        return "inf" if self.sign > 0 else "-inf"

    __str__ = __repr__

    def __neg__(self):
        return NEG_INF if self.sign > 0 else INF

    def __eq__(self, other):
        return isinstance(other, Infinity) and other.sign == self.sign

    def __hash__(self):
        return hash(("inf", self.sign))

    def __lt__(self, other):
        if isinstance(other, Infinity):
            return self.sign < other.sign
        return self.sign < 0

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        if isinstance(other, Infinity):
            return self.sign > other.sign
        return self.sign > 0

    def __ge__(self, other):
        return self == other or self > other

    def __add__(self, other):
        if isinstance(other, Infinity) and other.sign != self.sign:
            raise ArithmeticError("inf - inf")
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Infinity):
            return self + (-other)
        return self

    def __rsub__(self, other):
        return -self

    def __truediv__(self, other):
        if isinstance(other, Infinity) or other <= 0:
            raise ArithmeticError("division of infinity by a non-positive or infinite value")
        return self

    def __mul__(self, other):
        if isinstance(other, Infinity):
            return INF if self.sign == other.sign else NEG_INF
        if other == 0:
            raise ArithmeticError("0 * inf")
        return self if other > 0 else -self

    __rmul__ = __mul__


INF = Infinity(1)
NEG_INF = Infinity(-1)


class NonExactDivision(ArithmeticError):
    """Raised by ``divide_exact``; ``witness`` is a remainder term."""

    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


def grevlex_key(m: Monomial):
    """Sort key for the graded reverse lexicographic order (larger is bigger)."""
    return (sum(m), tuple(-e for e in reversed(m)))


def _madd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | Iterable[tuple[Monomial, Scalar]], nvars: int):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Monomial, Fraction] = {}
        for m, c in items:
            m = tuple(m)
            if len(m) != nvars:
                raise ValueError(f"monomial {m} has wrong length for {nvars} variables")
            if any(e < 0 for e in m):
                raise ValueError(f"negative exponent in {m}")
            c = Fraction(c)
            if c:
                c = clean.get(m, 0) + c
                if c:
                    clean[m] = c
                else:
                    clean.pop(m, None)
        self._terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction], nvars: int) -> "Poly":
        p = object.__new__(cls)
        p._terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw({}, nvars)

    @classmethod
    def const(cls, c: Scalar, nvars: int) -> "Poly":
        c = Fraction(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def one(cls, nvars: int) -> "Poly":
        return cls.const(1, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable {i} out of range for {nvars} variables")
        m = [0] * nvars
        m[i] = 1
        return cls._raw({tuple(m): Fraction(1)}, nvars)

    @classmethod
    def monomial(cls, m: Sequence[int], coeff: Scalar = 1) -> "Poly":
        return cls({tuple(m): coeff}, len(m))

    # inspection

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def min_degree(self):
        return min((sum(m) for m in self._terms), default=INF)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self._terms), default=-1)

    def support(self) -> frozenset[int]:
        """Indices of variables that occur."""
        return frozenset(i for m in self._terms for i, e in enumerate(m) if e)

    def leading_monomial(self) -> Monomial:
        return max(self._terms, key=grevlex_key)

    def leading_coefficient(self) -> Fraction:
        return self._terms[self.leading_monomial()]

    def monic(self) -> "Poly":
        if not self._terms:
            return self
        return self.scale(1 / self.leading_coefficient())

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    # arithmetic

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"ring mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly._raw({m: v * c for m, v in self._terms.items()}, self.nvars)

    def mul_term(self, m: Monomial, c: Fraction) -> "Poly":
        return Poly._raw({_madd(k, m): v * c for k, v in self._terms.items()}, self.nvars)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _madd(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Poly.const(other, self.nvars)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # calculus and substitution

    def diff(self, i: int, k: int = 1) -> "Poly":
        """k-th partial derivative in variable i."""
        out: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            e = m[i]
            if e < k:
                continue
            f = 1
            for t in range(e - k + 1, e + 1):
                f *= t
            n = list(m)
            n[i] = e - k
            out[tuple(n)] = c * f
        return Poly._raw(out, self.nvars)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        pt = [Fraction(p) for p in point]
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for p, e in zip(pt, m):
                if e:
                    v *= p ** e
            total += v
        return total

    def substitute(self, images: Mapping[int, "Poly"], nvars: int | None = None) -> "Poly":
        """Replace variable i by ``images[i]``; all images share one target ring.

        Every variable occurring in ``self`` needs an image. Unlisted
        variables are an error unless ``nvars`` equals ``self.nvars``, in
        which case they map to themselves.
        """
        if nvars is None:
            nvars = next(iter(images.values())).nvars if images else self.nvars
        for p in images.values():
            if p.nvars != nvars:
                raise ValueError("images live in different rings")
        imgs: dict[int, Poly] = dict(images)
        for i in self.support():
            if i not in imgs:
                if nvars != self.nvars:
                    raise ValueError(f"variable {i} has no image")
                imgs[i] = Poly.var(i, nvars)
        powers: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in powers:
                powers[key] = imgs[i] if e == 1 else power(i, e - 1) * imgs[i]
            return powers[key]

        out = Poly.zero(nvars)
        for m, c in self._terms.items():
            t = Poly.const(c, nvars)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            out = out + t
        return out

    def translate(self, offsets: Mapping[int, Scalar]) -> "Poly":
        """f(x + p): variables in ``offsets`` are shifted by the given value."""
        imgs = {i: Poly.var(i, self.nvars) + Fraction(p) for i, p in offsets.items() if p}
        if not imgs:
            return self
        return self.substitute(imgs, self.nvars)

    def expand_in(self, i: int) -> dict[int, "Poly"]:
        """Coefficients of powers of variable i: f = sum_s G_s * x_i**s."""
        out: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            n = list(m)
            s = n[i]
            n[i] = 0
            out.setdefault(s, {})[tuple(n)] = c
        return {s: Poly._raw(t, self.nvars) for s, t in sorted(out.items())}

    def reindex(self, mapping: Sequence[int | None], nvars: int) -> "Poly":
        """Move variable i to position ``mapping[i]``; ``None`` drops an unused variable."""
        out: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            n = [0] * nvars
            for i, e in enumerate(m):
                if e:
                    j = mapping[i]
                    if j is None:
                        raise ValueError(f"variable {i} occurs but is dropped")
                    n[j] += e
            out[tuple(n)] = c
        return Poly._raw(out, nvars)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, nvars={self.nvars})"


def format_poly(f: Poly, names: Sequence[str] | None = None) -> str:
    """Deterministic human-readable form; the parser reads it back."""
    if names is None:
        names = [f"x{i}" for i in range(f.nvars)]
    if f.is_zero():
        return "0"
    parts = []
    for m in sorted(f.terms, key=grevlex_key, reverse=True):
        c = f.terms[m]
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = f"{mag}*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


@dataclass(frozen=True)
class CoordSubspace:
    """The coordinate subspace where the listed variables vanish."""

    vars: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "vars", frozenset(self.vars))
        if not self.vars:
            raise ValueError("a coordinate subspace needs at least one zeroed variable")

    @classmethod
    def of(cls, *idx: int) -> "CoordSubspace":
        return cls(frozenset(idx))


def order_at_point(f: Poly, point: Sequence[Scalar]):
    """Order of f at a rational point; INF for the zero polynomial."""
    if f.is_zero():
        return INF
    shifted = f.translate({i: p for i, p in enumerate(point) if p})
    return shifted.min_degree()


def order_along_vars(f: Poly, zeroed: Iterable[int]):
    """Generic order along the coordinate subspace ``x_i = 0, i in zeroed``."""
    if f.is_zero():
        return INF
    zs = tuple(zeroed)
    return min(sum(m[i] for i in zs) for m in f.terms)


def order_along(f: Poly, subspace: CoordSubspace):
    return order_along_vars(f, subspace.vars)


def monomial_content(f: Poly, allowed: Iterable[int]) -> Monomial:
    """Largest monomial in the allowed variables dividing f."""
    allowed = set(allowed)
    if f.is_zero():
        raise ValueError("content of the zero polynomial is undefined")
    return tuple(
        min(m[i] for m in f.terms) if i in allowed else 0 for i in range(f.nvars)
    )


def divide_exact(f: Poly, divisor: Poly | Monomial) -> Poly:
    """Exact quotient f / divisor; raises NonExactDivision with a remainder witness."""
    if not isinstance(divisor, Poly):
        m = tuple(divisor)
        if len(m) != f.nvars:
            raise ValueError("monomial has wrong length")
        out = {}
        for k, c in f.terms.items():
            if any(a < b for a, b in zip(k, m)):
                raise NonExactDivision(f"term {k} is not divisible by {m}", witness=(k, c))
            out[tuple(a - b for a, b in zip(k, m))] = c
        return Poly._raw(out, f.nvars)
    g = divisor
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if len(g) == 1:
        (m, c), = g.terms.items()
        return divide_exact(f, m).scale(1 / c)
    lm = g.leading_monomial()
    lc = g.terms[lm]
    rem = dict(f.terms)
    quot: dict[Monomial, Fraction] = {}
    while rem:
        m = max(rem, key=grevlex_key)
        c = rem[m]
        if any(a < b for a, b in zip(m, lm)):
            raise NonExactDivision("nonzero remainder", witness=(m, c))
        qm = tuple(a - b for a, b in zip(m, lm))
        qc = c / lc
        quot[qm] = qc
        for gm, gc in g.terms.items():
            k = _madd(gm, qm)
            s = rem.get(k, 0) - qc * gc
            if s:
                rem[k] = s
            else:
                rem.pop(k, None)
    return Poly._raw(quot, f.nvars)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(f: Poly) -> list[Fraction]:
    """Distinct rational roots of a nonzero polynomial in one variable, ascending."""
    if f.nvars != 1:
        raise ValueError("expected a polynomial in one variable")
    if f.is_zero():
        raise ValueError("the zero polynomial has every root")
    roots = set()
    low = min(m[0] for m in f.terms)
    if low:
        roots.add(Fraction(0))
        f = divide_exact(f, (low,))
    if f.is_constant():
        return sorted(roots)
    den = 1
    for c in f.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    ints = {m[0]: int(c * den) for m, c in f.terms.items()}
    a0, an = ints[0], ints[max(ints)]
    for p in _divisors(a0):
        for q in _divisors(an):
            for r in (Fraction(p, q), Fraction(-p, q)):
                if r not in roots and f.evaluate((r,)) == 0:
                    roots.add(r)
    return sorted(roots)
