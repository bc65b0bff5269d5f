"""The exponent game for marked monomials supported on a divisor.

A state is an exponent per divisor label and a mark d. It is singular
while some set of labels has exponents summing to at least d. Centers are
intersections of divisor components, chosen by a fixed rule.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterator, Mapping


class FuelExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class LogState:
    exponents: tuple[tuple[str, int], ...]
    d: int

    def __post_init__(self):
        exps = tuple(sorted(dict(self.exponents).items()))
        if len(exps) != len(self.exponents):
            raise ValueError("duplicate label")
        if any(a < 0 for _, a in exps):
            raise ValueError("exponents must be non-negative")
        if self.d < 1:
            raise ValueError("mark must be positive")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def of(cls, exps: Mapping[str, int], d: int) -> "LogState":
        return cls(tuple(exps.items()), d)

    def as_dict(self) -> dict[str, int]:
        return dict(self.exponents)

    def total(self) -> int:
        return sum(a for _, a in self.exponents)

    def is_singular(self) -> bool:
        return self.total() >= self.d


def log_sing_strata(s: LogState) -> list[frozenset[str]]:
    """Inclusion-minimal label sets whose exponents sum to at least d."""
    exps = s.as_dict()
    labels = sorted(exps)
    found: list[frozenset[str]] = []
    for k in range(1, len(labels) + 1):
        for combo in combinations(labels, k):
            b = frozenset(combo)
            if any(m <= b for m in found):
                continue
            if sum(exps[l] for l in combo) >= s.d:
                found.append(b)
    return found


def choose_center(s: LogState) -> frozenset[str] | None:
    """Smallest stratum first, then the largest exponent sum, then label order."""
    strata = log_sing_strata(s)
    if not strata:
        return None
    exps = s.as_dict()
    return min(strata, key=lambda b: (len(b), -sum(exps[l] for l in b), tuple(sorted(b))))


def log_blowup(s: LogState, center: frozenset[str], fresh: str) -> dict[str, LogState]:
    """Children of one step, keyed by the label whose chart they are.

    A single label is divided out. For a larger center, chart l loses the
    label l and gains ``fresh`` with exponent sum(center) - d.
    """
    exps = s.as_dict()
    if not center or not center <= exps.keys():
        raise ValueError("center must be a nonempty set of present labels")
    total = sum(exps[l] for l in center)
    if total < s.d:
        raise ValueError("center is not in the singular locus")
    if len(center) == 1:
        (l,) = center
        new = dict(exps)
        new[l] -= s.d
        return {l: LogState.of(new, s.d)}
    if fresh in exps:
        raise ValueError(f"label {fresh!r} already present")
    out = {}
    for l in sorted(center):
        new = {k: a for k, a in exps.items() if k != l}
        new[fresh] = total - s.d
        out[l] = LogState.of(new, s.d)
    return out


@dataclass
class MonomialNode:
    state: LogState
    center: frozenset[str] | None = None
    fresh: str | None = None
    children: dict[str, "MonomialNode"] = field(default_factory=dict)

    def leaves(self) -> Iterator["MonomialNode"]:
        if not self.children:
            yield self
        for c in self.children.values():
            yield from c.leaves()

    def steps(self) -> int:
        return (1 if self.center else 0) + sum(c.steps() for c in self.children.values())


@dataclass
class MonomialTrace:
    root: MonomialNode
    log: list[tuple[tuple[str, ...], tuple[str, ...]]]

    def leaves(self) -> list[LogState]:
        return [n.state for n in self.root.leaves()]


def monomial_resolve(s: LogState, fuel: int = 100_000, fresh: Callable[[], str] | None = None) -> MonomialTrace:
    """Run the game to the end. ``log`` lists (path of chart keys, center)."""
    if fresh is None:
        taken = {l for l, _ in s.exponents}
        counter = [0]

        def fresh() -> str:
            while True:
                counter[0] += 1
                name = f"N{counter[0]}"
                if name not in taken:
                    return name

    root = MonomialNode(s)
    log = []
    used = 0
    stack: list[tuple[MonomialNode, tuple[str, ...]]] = [(root, ())]
    while stack:
        node, path = stack.pop()
        b = choose_center(node.state)
        if b is None:
            continue
        used += 1
        if used > fuel:
            raise FuelExceeded(f"monomial game exceeded {fuel} steps")
        name = fresh() if len(b) > 1 else None
        node.center, node.fresh = b, name
        log.append((path, tuple(sorted(b))))
        for key, child in log_blowup(node.state, b, name or "").items():
            node.children[key] = MonomialNode(child)
        for key in reversed(list(node.children)):
            stack.append((node.children[key], path + (key,)))
    return MonomialTrace(root, log)
