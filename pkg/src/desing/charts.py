"""Affine charts with a normal-crossings divisor made of coordinate hyperplanes.

A chart is an affine space with named coordinates. Divisor components are
coordinate hyperplanes identified by labels that stay stable across
charts. An optional immersed subspace is given by its zeroed variables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .poly import CoordSubspace, Poly

OLD = "old"
EXCEPTIONAL = "exceptional"


@dataclass(frozen=True, order=True)
class DivisorLabel:
    id: str
    origin: str = OLD
    step: int | None = None

    def __post_init__(self):
        if self.origin not in (OLD, EXCEPTIONAL):
            raise ValueError(f"unknown divisor origin {self.origin!r}")


@dataclass(frozen=True)
class ChartMap:
    """Images of the parent coordinates, written in the child coordinates."""

    kind: str  # blowup | division | projection | substitution | declare
    images: tuple[Poly, ...]
    exceptional: tuple[DivisorLabel, int] | None = None


@dataclass(frozen=True)
class Chart:
    variables: tuple[str, ...]
    divisor: tuple[tuple[DivisorLabel, int], ...] = ()
    subspace: frozenset[int] | None = None
    id: str = "root"
    parent: str | None = None
    map: ChartMap | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        div = tuple(sorted(self.divisor, key=lambda lv: lv[0].id))
        object.__setattr__(self, "divisor", div)
        vars_used = [v for _, v in div]
        if len(set(vars_used)) != len(vars_used):
            raise ValueError("two divisor labels on one variable")
        if len({lab.id for lab, _ in div}) != len(div):
            raise ValueError("duplicate divisor label")
        if any(not 0 <= v < self.nvars for v in vars_used):
            raise ValueError("divisor variable out of range")
        if self.subspace is not None:
            sub = frozenset(self.subspace)
            object.__setattr__(self, "subspace", sub or None)
            if sub & set(vars_used):
                raise ValueError("immersed subspace must be transverse to the divisor")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def indices(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self.index(n) for n in names)

    def names(self, idx: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.variables[i] for i in sorted(idx))

    @property
    def labels(self) -> tuple[DivisorLabel, ...]:
        return tuple(lab for lab, _ in self.divisor)

    def label_map(self) -> dict[str, int]:
        """Label id -> variable index."""
        return {lab.id: v for lab, v in self.divisor}

    def label_at(self, var: int) -> DivisorLabel | None:
        for lab, v in self.divisor:
            if v == var:
                return lab
        return None

    def label(self, label_id: str) -> DivisorLabel:
        for lab, _ in self.divisor:
            if lab.id == label_id:
                return lab
        raise KeyError(label_id)

    def divisor_vars(self) -> frozenset[int]:
        return frozenset(v for _, v in self.divisor)

    def free_vars(self) -> tuple[int, ...]:
        """Coordinates of the immersed subspace (all of them if not immersed)."""
        sub = self.subspace or frozenset()
        return tuple(i for i in range(self.nvars) if i not in sub)

    def fresh_name(self, stem: str = "w") -> str:
        k = 1
        while f"{stem}{k}" in self.variables:
            k += 1
        return f"{stem}{k}"


class LabelMint:
    """Hands out exceptional labels with increasing step numbers."""

    def __init__(self, start: int = 0, prefix: str = "E", taken: Iterable[str] = ()):
        self.step = start
        self.prefix = prefix
        self.taken = set(taken)

    def __call__(self) -> DivisorLabel:
        while True:
            self.step += 1
            lid = f"{self.prefix}{self.step}"
            if lid not in self.taken:
                self.taken.add(lid)
                return DivisorLabel(lid, EXCEPTIONAL, self.step)


def _identity(n: int) -> tuple[Poly, ...]:
    return tuple(Poly.var(i, n) for i in range(n))


def blowup_charts(c: Chart, center: CoordSubspace, label: DivisorLabel) -> list[tuple[Chart, ChartMap]]:
    """Standard charts of the blow-up along a coordinate center with at least two variables.

    Chart l keeps x_l and sets x_i = x_l * x_i' for the other center
    variables. The new label sits on x_l; a label already on x_l does not
    meet this chart and is dropped.
    """
    cvars = sorted(center.vars)
    if len(cvars) < 2:
        raise ValueError("use division_chart for a codimension-one center")
    if any(not 0 <= i < c.nvars for i in cvars):
        raise ValueError("center variable out of range")
    n = c.nvars
    out = []
    for ell in cvars:
        images = list(_identity(n))
        xl = Poly.var(ell, n)
        for i in cvars:
            if i != ell:
                images[i] = xl * Poly.var(i, n)
        div = [(lab, v) for lab, v in c.divisor if v != ell]
        div.append((label, ell))
        sub = c.subspace
        if sub is not None and ell in sub:
            # The strict transform of the immersed subspace misses this chart.
            sub = None
        cmap = ChartMap("blowup", tuple(images), (label, ell))
        child = Chart(c.variables, tuple(div), sub, f"{c.id}/{c.variables[ell]}", c.id, cmap)
        out.append((child, cmap))
    return out


def division_chart(c: Chart, var: int, label: DivisorLabel | None) -> tuple[Chart, ChartMap]:
    """Blow-up along the hyperplane x_var = 0: the identity, recorded as a step.

    The hyperplane becomes a divisor component; if it already carries a
    label that label is kept and ``label`` is unused.
    """
    existing = c.label_at(var)
    if c.subspace and var in c.subspace:
        raise ValueError("cannot divide along a zeroed variable of the immersed subspace")
    lab = existing or label
    if lab is None:
        raise ValueError("a new label is required")
    div = list(c.divisor) if existing else list(c.divisor) + [(lab, var)]
    cmap = ChartMap("division", _identity(c.nvars), (lab, var))
    child = Chart(c.variables, tuple(div), c.subspace, f"{c.id}/{c.variables[var]}", c.id, cmap)
    return child, cmap


def open_projection(c: Chart, m: int) -> tuple[Chart, ChartMap]:
    """Product with an affine m-space: m fresh coordinates appended."""
    if m < 1:
        raise ValueError("m must be positive")
    names = list(c.variables)
    for _ in range(m):
        names.append(Chart(tuple(names)).fresh_name())
    n = len(names)
    images = tuple(Poly.var(i, n) for i in range(c.nvars))
    cmap = ChartMap("projection", images, None)
    child = Chart(tuple(names), c.divisor, c.subspace, f"{c.id}/+{m}", c.id, cmap)
    return child, cmap


def substitution_chart(c: Chart, shifts: Mapping[int, Poly]) -> tuple[Chart, ChartMap]:
    """Coordinate change x_v -> x_v + shifts[v].

    A shift may not mention its own variable. Labels on shifted variables
    are dropped: the component no longer is a coordinate hyperplane, and
    the chart is read as a neighbourhood of the working locus away from it.
    """
    n = c.nvars
    images = list(_identity(n))
    for v, s in shifts.items():
        if s.nvars != n:
            raise ValueError("shift lives in the wrong ring")
        if v in s.support():
            raise ValueError("a shift may not involve its own variable")
        images[v] = Poly.var(v, n) + s
    moved = {v for v, s in shifts.items() if s}
    div = tuple((lab, v) for lab, v in c.divisor if v not in moved)
    sub = c.subspace
    if sub and moved & sub:
        raise ValueError("cannot shift a zeroed variable of the immersed subspace")
    cmap = ChartMap("substitution", tuple(images), None)
    child = Chart(c.variables, div, sub, f"{c.id}/~", c.id, cmap)
    return child, cmap


def declare_divisor(c: Chart, variables: Iterable[int], mint) -> tuple[Chart, ChartMap]:
    """Add coordinate hyperplanes to the divisor. Coordinates are unchanged."""
    variables = sorted(set(variables))
    if not variables:
        raise ValueError("nothing to declare")
    taken = c.divisor_vars()
    sub = c.subspace or frozenset()
    if any(v in taken or v in sub for v in variables):
        raise ValueError("variable already carries a label or is zeroed")
    div = list(c.divisor) + [(mint(), v) for v in variables]
    cmap = ChartMap("declare", _identity(c.nvars), None)
    child = Chart(c.variables, tuple(div), c.subspace, f"{c.id}/!", c.id, cmap)
    return child, cmap


def restrict_to_subspace(c: Chart, zeroed: Iterable[int]) -> tuple[Chart, list[int | None]]:
    """Chart on the coordinates of ``x_i = 0, i in zeroed``.

    Returns the chart and the index map old -> new (None for dropped
    variables). Labels on dropped variables are removed, which for a
    divisor variable means restricting the remaining divisor to that
    component.
    """
    zeroed = frozenset(zeroed)
    keep = [i for i in range(c.nvars) if i not in zeroed]
    mapping: list[int | None] = [None] * c.nvars
    for new, old in enumerate(keep):
        mapping[old] = new
    div = tuple((lab, mapping[v]) for lab, v in c.divisor if mapping[v] is not None)
    sub = None
    if c.subspace:
        sub = frozenset(mapping[i] for i in c.subspace if mapping[i] is not None) or None
    child = Chart(tuple(c.variables[i] for i in keep), div, sub, c.id, c.parent)
    return child, mapping


def coordinate_subspace(c: Chart, names: Iterable[str]) -> CoordSubspace:
    return CoordSubspace(c.indices(names))


def center_from_labels(c: Chart, label_ids: Iterable[str]) -> CoordSubspace | None:
    """Intersection of the named divisor components, or None if one is absent."""
    lm = c.label_map()
    try:
        return CoordSubspace(frozenset(lm[l] for l in label_ids))
    except KeyError:
        return None


@dataclass
class TreeNode:
    chart: Chart
    payload: object = None
    children: dict[str, str] = field(default_factory=dict)
    step: object = None


class ChartTree:
    """Rooted tree of charts keyed by chart id, plus the ordered step log."""

    def __init__(self, root: Chart, payload=None):
        self.root = root.id
        self.nodes: dict[str, TreeNode] = {root.id: TreeNode(root, payload)}
        self.trace: list[tuple[str, object]] = []

    def add_children(self, parent: str, step, children: Mapping[str, tuple[Chart, object]]):
        node = self.nodes[parent]
        if node.children:
            raise ValueError(f"chart {parent} already expanded")
        node.step = step
        for key, (chart, payload) in children.items():
            if chart.id in self.nodes:
                raise ValueError(f"duplicate chart id {chart.id}")
            self.nodes[chart.id] = TreeNode(chart, payload)
            node.children[key] = chart.id
        self.trace.append((parent, step))

    def leaves(self) -> list[TreeNode]:
        out = []
        stack = [self.root]
        while stack:
            nid = stack.pop()
            node = self.nodes[nid]
            if node.children:
                stack.extend(reversed(list(node.children.values())))
            else:
                out.append(node)
        return out

    def path(self, nid: str) -> list[str]:
        out = [nid]
        while self.nodes[out[-1]].chart.parent is not None and self.nodes[out[-1]].chart.parent in self.nodes:
            out.append(self.nodes[out[-1]].chart.parent)
        return out[::-1]
