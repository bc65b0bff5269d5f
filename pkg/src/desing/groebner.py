"""Buchberger's algorithm and the variety queries built on it.

Everything is exact over the rationals and uses the graded reverse
lexicographic order. The basis is reduced and monic, so the output is
deterministic for a given generating set.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .poly import Monomial, Poly, grevlex_key

ORDER = "grevlex"


class GroebnerFuelExceeded(RuntimeError):
    """The basis grew past the configured size or degree bound."""


@dataclass(frozen=True)
class IdealBasis:
    generators: tuple[Poly, ...]
    nvars: int

    def __init__(self, generators: Iterable[Poly], nvars: int | None = None):
        gens = tuple(generators)
        if nvars is None:
            if not gens:
                raise ValueError("cannot infer the ring of an empty generating set")
            nvars = gens[0].nvars
        if any(g.nvars != nvars for g in gens):
            raise ValueError("generators live in different rings")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "nvars", nvars)


@dataclass(frozen=True)
class GroebnerBasis:
    elements: tuple[Poly, ...]
    nvars: int
    order: str = ORDER

    def is_unit(self) -> bool:
        return any(g.is_constant() and g for g in self.elements)

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial() for g in self.elements]

    def reduce(self, f: Poly) -> Poly:
        return _reduce_full(f, list(self.elements))


# Fuel defaults are generous for the small ideals this package handles.
MAX_BASIS = 400
MAX_DEGREE = 120
MAX_PAIRS = 20000

_memo: dict[tuple, GroebnerBasis] = {}
_memo_lock = threading.Lock()
_MEMO_LIMIT = 4096


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class _P:
    """Mutable working polynomial with a cached leading monomial."""

    __slots__ = ("terms", "lm")

    def __init__(self, terms: dict[Monomial, Fraction]):
        self.terms = terms
        self.lm = max(terms, key=grevlex_key) if terms else None


def _monic(terms: dict[Monomial, Fraction]) -> _P:
    p = _P(terms)
    c = terms[p.lm]
    if c != 1:
        p.terms = {m: v / c for m, v in terms.items()}
    return p


def _reduce_terms(terms: dict[Monomial, Fraction], basis: Sequence[_P]) -> dict[Monomial, Fraction]:
    """Full reduction of ``terms`` by a list of monic polynomials."""
    rem = dict(terms)
    out: dict[Monomial, Fraction] = {}
    while rem:
        m = max(rem, key=grevlex_key)
        c = rem[m]
        for g in basis:
            if _divides(g.lm, m):
                q = tuple(a - b for a, b in zip(m, g.lm))
                for gm, gc in g.terms.items():
                    k = tuple(a + b for a, b in zip(gm, q))
                    s = rem.get(k, 0) - c * gc
                    if s:
                        rem[k] = s
                    else:
                        rem.pop(k, None)
                break
        else:
            out[m] = c
            del rem[m]
    return out


def _reduce_full(f: Poly, basis: Sequence[Poly]) -> Poly:
    work = [_monic(dict(g.terms)) for g in basis if g]
    return Poly._raw(_reduce_terms(dict(f.terms), work), f.nvars)


def _spoly(f: _P, g: _P) -> dict[Monomial, Fraction]:
    lcm = _lcm(f.lm, g.lm)
    out: dict[Monomial, Fraction] = {}
    for p, sign in ((f, 1), (g, -1)):
        q = tuple(a - b for a, b in zip(lcm, p.lm))
        for m, c in p.terms.items():
            k = tuple(a + b for a, b in zip(m, q))
            s = out.get(k, 0) + sign * c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def groebner(ideal: IdealBasis, max_basis: int = MAX_BASIS, max_degree: int = MAX_DEGREE) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal``."""
    n = ideal.nvars
    key = (n, frozenset(g for g in ideal.generators if g))
    with _memo_lock:
        hit = _memo.get(key)
    if hit is not None:
        return hit

    one = (0,) * n
    basis: list[_P] = []
    for g in sorted(key[1], key=lambda p: grevlex_key(p.leading_monomial())):
        r = _reduce_terms(dict(g.terms), basis)
        if r:
            basis.append(_monic(r))
    pairs = [(i, j) for i, j in combinations(range(len(basis)), 2)]
    done: set[tuple[int, int]] = set()
    processed = 0

    while pairs and not any(b.lm == one for b in basis):
        pairs.sort(key=lambda ij: grevlex_key(_lcm(basis[ij[0]].lm, basis[ij[1]].lm)), reverse=True)
        i, j = pairs.pop()
        done.add((i, j))
        processed += 1
        if processed > MAX_PAIRS:
            raise GroebnerFuelExceeded(f"more than {MAX_PAIRS} critical pairs")
        fi, fj = basis[i], basis[j]
        lcm = _lcm(fi.lm, fj.lm)
        # Buchberger's first criterion: coprime leading monomials.
        if all(a == 0 or b == 0 for a, b in zip(fi.lm, fj.lm)):
            continue
        # Chain criterion.
        if any(
            k not in (i, j)
            and _divides(basis[k].lm, lcm)
            and (min(i, k), max(i, k)) in done
            and (min(j, k), max(j, k)) in done
            for k in range(len(basis))
        ):
            continue
        r = _reduce_terms(_spoly(fi, fj), basis)
        if not r:
            continue
        p = _monic(r)
        if sum(p.lm) > max_degree:
            raise GroebnerFuelExceeded(f"basis element of degree {sum(p.lm)} exceeds {max_degree}")
        basis.append(p)
        if len(basis) > max_basis:
            raise GroebnerFuelExceeded(f"basis grew past {max_basis} elements")
        k = len(basis) - 1
        pairs.extend((a, k) for a in range(k))

    if any(b.lm == one for b in basis):
        result = GroebnerBasis((Poly.one(n),), n)
    else:
        result = GroebnerBasis(tuple(_interreduce(basis, n)), n)
    with _memo_lock:
        if len(_memo) >= _MEMO_LIMIT:
            _memo.clear()
        _memo[key] = result
    return result


def _interreduce(basis: list[_P], n: int) -> list[Poly]:
    minimal = []
    for idx, b in enumerate(basis):
        if any(
            _divides(o.lm, b.lm) and (o.lm != b.lm or jdx < idx)
            for jdx, o in enumerate(basis)
            if jdx != idx
        ):
            continue
        minimal.append(b)
    out = []
    for idx, b in enumerate(minimal):
        others = [o for jdx, o in enumerate(minimal) if jdx != idx]
        lead = {b.lm: b.terms[b.lm]}
        tail = {m: c for m, c in b.terms.items() if m != b.lm}
        tail = _reduce_terms(tail, others)
        lead.update(tail)
        out.append(Poly._raw(_monic(lead).terms, n))
    out.sort(key=lambda p: grevlex_key(p.leading_monomial()))
    return out


def is_empty_variety(ideal: IdealBasis) -> bool:
    """True iff the ideal has no zeros over an algebraically closed field."""
    gens = [g for g in ideal.generators if g]
    if any(g.is_constant() for g in gens):
        return True
    if not gens:
        return False
    return groebner(ideal).is_unit()


def radical_member(f: Poly, ideal: IdealBasis) -> bool:
    """f vanishes on V(ideal), decided by the Rabinowitsch trick."""
    if f.is_zero():
        return True
    n = ideal.nvars
    up = list(range(n))
    lifted = [g.reindex(up, n + 1) for g in ideal.generators]
    t = Poly.var(n, n + 1)
    lifted.append(Poly.one(n + 1) - t * f.reindex(up, n + 1))
    return is_empty_variety(IdealBasis(lifted, n + 1))


def ideal_member(f: Poly, ideal: IdealBasis) -> bool:
    return groebner(ideal).reduce(f).is_zero()


def dimension(ideal: IdealBasis) -> int:
    """Krull dimension of the variety; -1 when it is empty."""
    gens = [g for g in ideal.generators if g]
    n = ideal.nvars
    if not gens:
        return n
    gb = groebner(ideal)
    if gb.is_unit():
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in gb.leading_monomials()]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def same_variety(a: IdealBasis, b: IdealBasis) -> bool:
    """V(a) == V(b), checked by radical membership in both directions."""
    return all(radical_member(g, b) for g in a.generators) and all(
        radical_member(g, a) for g in b.generators
    )


def univariate_generator(ideal: IdealBasis) -> Poly:
    """Monic generator of an ideal in one variable."""
    if ideal.nvars != 1:
        raise ValueError("expected an ideal in one variable")
    gb = groebner(ideal)
    if len(gb.elements) != 1:
        raise AssertionError("a reduced basis in one variable has one element")
    return gb.elements[0]
