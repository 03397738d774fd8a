"""Functional digraphs of countable self-maps.

A countable self-map is described by finitely many component templates:

``FiniteCore``
    a finite connected functional graph (so exactly one cycle);
``Natural``
    a graded component, levels ``0, 1, 2, ..`` with eventually periodic level
    sizes and parent pattern; every edge goes from level ``k`` to ``k + 1``;
``ZChain``
    a bi-infinite orbit with finite in-trees hanging off it.

plus families of templates repeated a finite number of times or ``OMEGA``
times.  Universality is decided from the component count and the component
kinds; :func:`brute_force_lifting_exists` is an independent search over
finite truncations used to cross-check those verdicts.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence

from .action import Square
from .errors import EmptyCarrier, InputError, MalformedTemplate, NoFixedPoint, NotEnoughNaturalComponents

OMEGA = "omega"

NATURAL = "natural"
HAS_CYCLE = "has_cycle"
UNBOUNDED_BELOW = "unbounded_below"


# -- finite self-maps (targets) --------------------------------------------


@dataclass(frozen=True)
class FiniteSelfMap:
    points: tuple
    images: dict = field(hash=False)

    def __post_init__(self):
        if not self.points:
            raise EmptyCarrier("a self-map needs a nonempty set")
        if len(set(self.points)) != len(self.points):
            raise InputError("duplicate points")
        pts = set(self.points)
        if set(self.images) != pts or not set(self.images.values()) <= pts:
            raise InputError("images must define a total self-map of the points")

    @classmethod
    def from_list(cls, images: Sequence[int]) -> "FiniteSelfMap":
        return cls(tuple(range(len(images))), dict(enumerate(images)))

    def __call__(self, x):
        return self.images[x]

    def iterate(self, x, m: int):
        for _ in range(m):
            x = self.images[x]
        return x

    def fixed_points(self) -> list:
        return [x for x in self.points if self.images[x] == x]

    def components(self) -> list[frozenset]:
        parent = {x: x for x in self.points}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x in self.points:
            a, b = find(x), find(self.images[x])
            if a != b:
                parent[a] = b
        groups: dict = {}
        for x in self.points:
            groups.setdefault(find(x), []).append(x)
        return [frozenset(g) for g in groups.values()]

    def to_json(self) -> dict:
        return {"points": list(self.points), "map": {str(x): self.images[x] for x in self.points}}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteSelfMap":
        try:
            points = tuple(data["points"])
            raw = data["map"]
        except (KeyError, TypeError):
            raise InputError("a finite self-map needs 'points' and 'map'") from None
        by_str = {str(p): p for p in points}
        if isinstance(raw, list):
            if len(raw) != len(points):
                raise InputError("map list length must match points")
            images = dict(zip(points, raw))
        else:
            try:
                images = {by_str[str(k)]: v for k, v in raw.items()}
            except KeyError as exc:
                raise InputError(f"unknown point {exc}") from None
        return cls(points, images)


def all_self_maps(n: int) -> Iterator[FiniteSelfMap]:
    for images in itertools.product(range(n), repeat=n):
        yield FiniteSelfMap.from_list(images)


# -- templates --------------------------------------------------------------


@dataclass(frozen=True)
class Periodic:
    """An eventually periodic sequence ``preperiod + period + period + ..``."""

    preperiod: tuple
    period: tuple

    def __post_init__(self):
        if not self.period:
            raise MalformedTemplate("a periodic pattern needs a nonempty period")

    def at(self, k: int):
        if k < len(self.preperiod):
            return self.preperiod[k]
        return self.period[(k - len(self.preperiod)) % len(self.period)]

    @classmethod
    def constant(cls, value) -> "Periodic":
        return cls((), (value,))

    def to_json(self) -> dict:
        return {"preperiod": _plain(self.preperiod), "period": _plain(self.period)}


def _plain(x):
    if isinstance(x, tuple):
        return [_plain(v) for v in x]
    return x


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(v) for v in x)
    return x


def _periodic_from_json(data, what: str) -> Periodic:
    if isinstance(data, dict):
        return Periodic(_freeze(data.get("preperiod", [])), _freeze(data.get("period", [])))
    raise MalformedTemplate(f"{what} must be an object with preperiod/period")


@dataclass(frozen=True)
class FiniteCore:
    """Finite connected functional graph given as ``vertex -> image`` list."""

    map: tuple
    kind = "finite_core"

    def __post_init__(self):
        n = len(self.map)
        if n == 0:
            raise MalformedTemplate("finite core must have a vertex")
        if any(type(v) is not int or not 0 <= v < n for v in self.map):
            raise MalformedTemplate("finite core map must index its vertices")
        if len(FiniteSelfMap.from_list(self.map).components()) != 1:
            raise MalformedTemplate("finite core must be connected")

    def cycle(self) -> list[int]:
        x = 0
        seen = {}
        while x not in seen:
            seen[x] = len(seen)
            x = self.map[x]
        cyc = [x]
        y = self.map[x]
        while y != x:
            cyc.append(y)
            y = self.map[y]
        return cyc

    def to_json(self) -> dict:
        return {"kind": self.kind, "map": list(self.map)}


@dataclass(frozen=True)
class Natural:
    """Graded component: level ``k`` has ``levels.at(k)`` vertices.

    ``parents.at(k)[i]`` is the index, at level ``k + 1``, of the image of
    vertex ``i`` at level ``k``; ``None`` sends every vertex to index 0.
    """

    levels: Periodic
    parents: Periodic | None = None
    kind = "natural"

    def __post_init__(self):
        sizes = self.levels.preperiod + self.levels.period
        if any(type(s) is not int or s < 1 for s in sizes):
            raise MalformedTemplate("level sizes must be positive integers")
        horizon = self._horizon()
        for k in range(horizon + 1):
            row = self.parent_row(k)
            if len(row) != self.levels.at(k):
                raise MalformedTemplate(f"level {k}: parent row length != level size")
            if any(type(p) is not int or not 0 <= p < self.levels.at(k + 1) for p in row):
                raise MalformedTemplate(f"level {k}: parent index out of range")
        if not self._merges():
            raise MalformedTemplate("levels never merge: template is not one component")

    def _horizon(self) -> int:
        pre = len(self.levels.preperiod)
        per = len(self.levels.period)
        if self.parents is not None:
            pre = max(pre, len(self.parents.preperiod))
            per = math.lcm(per, len(self.parents.period))
        return pre + 2 * per

    def parent_row(self, k: int) -> tuple:
        if self.parents is None:
            return (0,) * self.levels.at(k)
        return tuple(self.parents.at(k))

    def successor(self, level: int, index: int) -> tuple[int, int]:
        return level + 1, self.parent_row(level)[index]

    def _merges(self) -> bool:
        pre = len(self.levels.preperiod)
        per = len(self.levels.period)
        if self.parents is not None:
            pre = max(pre, len(self.parents.preperiod))
            per = math.lcm(per, len(self.parents.period))
        size = self.levels.at(pre)
        # one full period from level `pre` back to the same phase
        g = []
        for i in range(size):
            lvl, idx = pre, i
            for _ in range(per):
                lvl, idx = self.successor(lvl, idx)
            g.append(idx)
        current = set(range(size))
        for _ in range(size + 1):
            current = {g[i] for i in current}
        return len(current) == 1

    def to_json(self) -> dict:
        out = {"kind": self.kind, "levels": self.levels.to_json()}
        if self.parents is not None:
            out["parents"] = self.parents.to_json()
        return out


@dataclass(frozen=True)
class ZChain:
    """Bi-infinite spine ``.. -> (-1) -> (0) -> (1) -> ..`` with finite in-trees.

    ``above.at(k)`` lists the trees attached to spine vertex ``k >= 0`` and
    ``below[(-k - 1) % len(below)]`` those attached to spine vertex ``k < 0``.
    A tree is a nested tuple of child trees; ``()`` is a single vertex whose
    image is the spine vertex.
    """

    above: Periodic = Periodic((), ((),))
    below: tuple = ((),)
    kind = "z_chain"

    def __post_init__(self):
        if not self.below:
            raise MalformedTemplate("below pattern must be nonempty")
        for trees in self.above.preperiod + self.above.period + self.below:
            if not isinstance(trees, tuple) or not all(_is_tree(t) for t in trees):
                raise MalformedTemplate("attachments must be lists of nested lists")

    def trees_at(self, k: int) -> tuple:
        if k >= 0:
            return self.above.at(k)
        return self.below[(-k - 1) % len(self.below)]

    def to_json(self) -> dict:
        return {"kind": self.kind, "above": self.above.to_json(), "below": _plain(self.below)}


def _is_tree(t) -> bool:
    return isinstance(t, tuple) and all(_is_tree(c) for c in t)


Template = FiniteCore | Natural | ZChain


def template_from_json(data: dict) -> Template:
    if not isinstance(data, dict):
        raise MalformedTemplate("template must be an object")
    kind = data.get("kind")
    try:
        if kind == "finite_core":
            return FiniteCore(tuple(data["map"]))
        if kind == "natural":
            levels = _periodic_from_json(data["levels"], "levels")
            parents = data.get("parents")
            return Natural(levels, _periodic_from_json(parents, "parents") if parents else None)
        if kind == "z_chain":
            above = data.get("above", {"preperiod": [], "period": [[]]})
            return ZChain(_periodic_from_json(above, "above"), _freeze(data.get("below", [[]])))
    except KeyError as exc:
        raise MalformedTemplate(f"template missing field {exc}") from None
    raise MalformedTemplate(f"unknown template kind {kind!r}")


@dataclass(frozen=True)
class SelfMapDescription:
    components: tuple = ()
    families: tuple = ()  # (template, multiplicity) with multiplicity int >= 1 or OMEGA

    def __post_init__(self):
        for _, mult in self.families:
            if mult != OMEGA and (type(mult) is not int or mult < 1):
                raise MalformedTemplate(f"bad multiplicity {mult!r}")
        if not self.components and not self.families:
            raise EmptyCarrier("a self-map description needs at least one component")

    @property
    def infinitely_many_components(self) -> bool:
        return any(mult == OMEGA for _, mult in self.families)

    def templates(self) -> list[tuple[str, Template]]:
        out = [(f"component {i}", t) for i, t in enumerate(self.components)]
        out += [(f"family {j}", t) for j, (t, _) in enumerate(self.families)]
        return out

    def iter_components(self) -> Iterator[tuple[tuple, Template]]:
        """Components in a fixed order; omega families interleave round-robin."""
        for i, t in enumerate(self.components):
            yield ("C", i), t
        for j, (t, mult) in enumerate(self.families):
            if mult != OMEGA:
                for c in range(mult):
                    yield ("F", j, c), t
        omega = [(j, t) for j, (t, mult) in enumerate(self.families) if mult == OMEGA]
        for c in itertools.count():
            if not omega:
                return
            for j, t in omega:
                yield ("F", j, c), t

    def to_json(self) -> dict:
        return {
            "components": [t.to_json() for t in self.components],
            "families": [
                {"template": t.to_json(), "multiplicity": m} for t, m in self.families
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SelfMapDescription":
        if not isinstance(data, dict):
            raise InputError("self-map description must be an object")
        comps = tuple(template_from_json(c) for c in data.get("components", []))
        fams = []
        for fam in data.get("families", []):
            try:
                mult = fam["multiplicity"]
                tmpl = template_from_json(fam["template"])
            except (KeyError, TypeError):
                raise MalformedTemplate("family needs template and multiplicity") from None
            fams.append((tmpl, mult))
        return cls(comps, tuple(fams))


def nu_description() -> SelfMapDescription:
    """``<m, n> -> <m + 1, n>``: omega copies of the plain natural chain."""
    return SelfMapDescription((), ((Natural(Periodic.constant(1)), OMEGA),))


def nu(pair: tuple[int, int]) -> tuple[int, int]:
    m, n = pair
    return (m + 1, n)


# -- classification ---------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    kind: str
    witness: Any = None  # level function for natural components
    certificate: Any = None  # cycle grading contradiction / backward spine


def grading_contradiction(core: FiniteCore) -> dict:
    """Propagate a would-be grading around the cycle.

    Starting from ``r = 0`` at one cycle vertex and adding one per edge, the
    walk returns to its start with ``r = len(cycle)``, so no grading exists.
    """
    cyc = core.cycle()
    r = {cyc[0]: 0}
    x, val = cyc[0], 0
    while True:
        x, val = core.map[x], val + 1
        if x in r:
            return {"cycle": cyc, "start": x, "assigned": r[x], "returned": val}
        r[x] = val


def classify_component(c: Template) -> Classification:
    if isinstance(c, FiniteCore):
        return Classification(HAS_CYCLE, None, grading_contradiction(c))
    if isinstance(c, Natural):
        return Classification(NATURAL, lambda v: v[0])
    if isinstance(c, ZChain):
        return Classification(UNBOUNDED_BELOW, None, {"spine": "levels k -> k+1 for all integers k"})
    raise MalformedTemplate(f"not a component template: {c!r}")


# -- truncations ------------------------------------------------------------


@dataclass
class Truncation:
    """Finite piece of a self-map; ``succ[v] is None`` marks a boundary vertex."""

    vertices: list
    succ: dict
    complete: bool
    components: list = field(default_factory=list)  # (label, template, vertex list)

    def edges(self) -> Iterator[tuple]:
        for v in self.vertices:
            w = self.succ[v]
            if w is not None:
                yield v, w


def _truncate_component(t: Template, depth: int) -> tuple[list, dict, bool]:
    if isinstance(t, FiniteCore):
        vs = list(range(len(t.map)))
        return vs, {v: t.map[v] for v in vs}, True
    if isinstance(t, Natural):
        vs = [(k, i) for k in range(depth) for i in range(t.levels.at(k))]
        succ = {}
        for v in vs:
            w = t.successor(*v)
            succ[v] = w if w[0] < depth else None
        # follow the top level forward until every orbit has merged
        frontier = {t.successor(*v) for v in vs if v[0] == depth - 1}
        top_level = [v for v in vs if v[0] == depth - 1]
        for v in top_level:
            succ[v] = t.successor(*v)
        while True:
            for v in sorted(frontier):
                if v not in succ:
                    vs.append(v)
            if len(frontier) == 1:
                (last,) = frontier
                succ[last] = None
                break
            nxt = {}
            for v in sorted(frontier):
                nxt[v] = t.successor(*v)
                succ[v] = nxt[v]
            frontier = set(nxt.values())
        return vs, succ, False
    if isinstance(t, ZChain):
        vs, succ = [], {}
        for k in range(-depth, depth):
            spine = ("s", k)
            vs.append(spine)
            succ[spine] = ("s", k + 1) if k + 1 < depth else None
        for k in range(-depth, depth):
            for ti, tree in enumerate(t.trees_at(k)):
                stack = [((), tree, ("s", k), k - 1)]
                while stack:
                    path, node, image, level = stack.pop()
                    if level < -depth:
                        continue
                    v = ("t", k, ti, path)
                    vs.append(v)
                    succ[v] = image
                    for ci, child in enumerate(node):
                        stack.append((path + (ci,), child, v, level - 1))
        return vs, succ, False
    raise MalformedTemplate(f"not a component template: {t!r}")


INF = math.inf


@functools.lru_cache(maxsize=None)
def _natural_heights(t: Natural, level: int) -> tuple:
    if level == 0:
        return (0,) * t.levels.at(0)
    below = _natural_heights(t, level - 1)
    out = [-1] * t.levels.at(level)
    for i, p in enumerate(t.parent_row(level - 1)):
        out[p] = max(out[p], below[i] + 1)
    return tuple(max(h, 0) for h in out)


def _tree_height(tree: tuple) -> int:
    return 1 + max((_tree_height(c) for c in tree), default=-1)


def backward_height(t: Template, local) -> float:
    """Length of the longest backward chain ending at a vertex (``inf`` if unbounded)."""
    if isinstance(t, FiniteCore):
        if local in t.cycle():
            return INF
        kids = [v for v in range(len(t.map)) if t.map[v] == local]
        return 1 + max((backward_height(t, v) for v in kids), default=-1)
    if isinstance(t, Natural):
        return _natural_heights(t, local[0])[local[1]]
    if local[0] == "s":
        return INF
    _, k, ti, path = local
    node = t.trees_at(k)[ti]
    for i in path:
        node = node[i]
    return _tree_height(node)


def minimum_height(t: Template) -> float:
    """Smallest backward height over the whole (untruncated) component."""
    if isinstance(t, Natural):
        return 0
    if isinstance(t, FiniteCore):
        return 0 if len(t.cycle()) < len(t.map) else INF
    trees = t.above.preperiod + t.above.period + t.below
    return 0 if any(trees) else INF


def truncate(d: SelfMapDescription, depth: int, copies: int = 3) -> Truncation:
    """All finite-multiplicity components plus ``copies`` copies of each omega family."""
    if depth < 1:
        raise InputError("depth must be positive")
    vertices, succ, comps = [], {}, []
    complete = not d.infinitely_many_components
    per_family: dict = {}
    for label, t in d.iter_components():
        if label[0] == "F" and d.families[label[1]][1] == OMEGA:
            if per_family.get(label[1], 0) >= copies:
                if all(per_family.get(j, 0) >= copies for j, (_, m) in enumerate(d.families) if m == OMEGA):
                    break
                continue
            per_family[label[1]] = per_family.get(label[1], 0) + 1
        vs, sc, comp_complete = _truncate_component(t, depth)
        complete = complete and comp_complete
        n = len(comps)
        gvs = [(n, v) for v in vs]
        vertices.extend(gvs)
        for v in vs:
            w = sc[v]
            succ[(n, v)] = None if w is None else (n, w)
        comps.append((label, t, gvs))
    return Truncation(vertices, succ, complete, comps)


def vertex_id(v) -> str:
    """Stable string form of a truncation vertex, used in JSON reports."""
    n, local = v
    return f"{n}:{_plain_str(local)}"


def _plain_str(x) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(_plain_str(y) for y in x) + ")"
    return str(x)


# -- liftings ---------------------------------------------------------------


@dataclass
class NuLifting:
    points: tuple
    depth: int
    table: dict  # (m, n) -> point
    certificate: tuple
    surjective: bool

    @property
    def passes(self) -> bool:
        return self.surjective and all(sq.ok for sq in self.certificate)

    def __call__(self, pair):
        return self.table[pair]


def lift_finite_map_to_nu(points: Sequence, f: Callable, depth: int) -> NuLifting:
    """``q<m, n> = f^m(s_n)`` for ``m < depth`` and ``n < len(points)``.

    ``f`` may be any callable; points need not be closed under it.  Each square
    compares ``q(nu<m, n>)`` (evaluated by the same rule at ``m + 1``) with
    ``f(q<m, n>)``.
    """
    points = tuple(points)
    if not points:
        raise EmptyCarrier("lifting needs a nonempty set")
    table = {}
    for n, s in enumerate(points):
        x = s
        for m in range(depth):
            table[(m, n)] = x
            x = f(x)
    squares = []
    for (m, n), x in table.items():
        up = nu((m, n))
        lhs = table[up] if up in table else f(table[(m, n)])
        squares.append(Square("nu", (m, n), lhs, f(x)))
    hit = {table[(0, n)] for n in range(len(points))} if depth else set()
    return NuLifting(points, depth, table, tuple(squares), all(s in hit for s in points))


@dataclass
class SelfMapLifting:
    truncation: Truncation
    target: FiniteSelfMap
    q: dict
    certificate: tuple
    surjective: bool
    method: str

    @property
    def passes(self) -> bool:
        return self.surjective and all(sq.ok for sq in self.certificate)

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "map": {vertex_id(v): self.q[v] for v in self.truncation.vertices},
            "squares": [
                [vertex_id(sq.x), vertex_id(sq.m), sq.lhs, sq.rhs] for sq in self.certificate
            ],
            "surjective": self.surjective,
            "passes": self.passes,
        }


def certify_selfmap_lifting(tr: Truncation, f: FiniteSelfMap, q: dict) -> tuple[tuple, bool]:
    """Squares ``q(w v) == f(q v)`` on every edge inside the truncation."""
    squares = tuple(Square(w, v, q[w], f(q[v])) for v, w in tr.edges())
    image = {q[v] for v in tr.vertices}
    return squares, all(s in image for s in f.points)


def _natural_level(t: Template, local) -> int:
    return local[0]


def _column_lift(tr: Truncation, f: FiniteSelfMap, columns: dict, constant=None) -> dict:
    """``q(v) = f^{level(v)}(column point)`` on natural components, else ``constant``."""
    q = {}
    for ci, (label, t, gvs) in enumerate(tr.components):
        start = columns.get(ci)
        for v in gvs:
            if start is None:
                q[v] = constant
            else:
                q[v] = f.iterate(start, _natural_level(t, v[1]))
    return q


@dataclass
class UniversalityVerdict:
    is_universal: bool
    condition_I: bool
    condition_W: dict  # template name -> classification kind
    classifications: dict = field(default_factory=dict)
    counterexample: Any = None
    description: SelfMapDescription | None = None

    def lift(self, f: FiniteSelfMap, depth: int, copies: int | None = None) -> SelfMapLifting:
        """Realize ``p(x) = <level(x), n>`` followed by ``<m, n> -> f^m(s_n)``."""
        if not self.is_universal:
            raise NotEnoughNaturalComponents("witness only exists for universal maps")
        copies = copies or max(len(f.points), 1)
        tr = truncate(self.description, depth, copies)
        k = len(f.points)
        columns = {ci: f.points[ci % k] for ci in range(len(tr.components))}
        q = _column_lift(tr, f, columns)
        squares, surj = certify_selfmap_lifting(tr, f, q)
        return SelfMapLifting(tr, f, q, squares, surj, "universal")

    def to_json(self) -> dict:
        n_comp = "omega components" if self.condition_I else "finitely many components"
        kinds = set(self.condition_W.values())
        out = {
            "universal": self.is_universal,
            "condition_I": n_comp,
            "condition_W": "all natural" if kinds <= {NATURAL} else "not all natural",
            "components": dict(sorted(self.condition_W.items())),
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def decide_universality(d: SelfMapDescription) -> UniversalityVerdict:
    cond_i = d.infinitely_many_components
    kinds, classes = {}, {}
    for name, t in d.templates():
        cls = classify_component(t)
        kinds[name] = cls.kind
        classes[name] = cls
    cond_w = all(k == NATURAL for k in kinds.values())
    counter = None
    if not cond_w:
        for prefer in (HAS_CYCLE, UNBOUNDED_BELOW):
            bad = [n for n, k in kinds.items() if k == prefer]
            if bad:
                counter = prefer
                break
    elif not cond_i:
        counter = "finitely many components"
    return UniversalityVerdict(cond_i and cond_w, cond_i, kinds, classes, counter, d)


def natural_part(d: SelfMapDescription) -> list[tuple[Template, Any]]:
    return [(t, m) for t, m in d.families if isinstance(t, Natural)] + [
        (t, 1) for t in d.components if isinstance(t, Natural)
    ]


def lift_with_fixed_point(
    w: SelfMapDescription,
    f: FiniteSelfMap,
    fixed_point=None,
    depth: int = 6,
    copies: int | None = None,
) -> SelfMapLifting:
    """Lift a self-map with a fixed point through a map with omega natural components.

    Natural components take columns enumerating ``S - {s0}``; every other
    component goes to ``s0``.  When all components are natural the first one
    is held back and also sent to ``s0``.
    """
    if fixed_point is None:
        fixed = f.fixed_points()
        if not fixed:
            raise NoFixedPoint("target map has no fixed point")
        fixed_point = fixed[0]
    elif f(fixed_point) != fixed_point:
        raise NoFixedPoint(f"{fixed_point!r} is not fixed by the target map")
    if not any(isinstance(t, Natural) and m == OMEGA for t, m in w.families):
        raise NotEnoughNaturalComponents("need a family of omega natural components")
    rest = [s for s in f.points if s != fixed_point]
    copies = copies or len(rest) + 1
    tr = truncate(w, depth, copies)
    natural_idx = [ci for ci, (_, t, _) in enumerate(tr.components) if isinstance(t, Natural)]
    if all(isinstance(t, Natural) for _, t in w.templates()):
        natural_idx = natural_idx[1:]
    columns = {}
    if rest:
        for j, ci in enumerate(natural_idx):
            columns[ci] = rest[j % len(rest)]
    q = _column_lift(tr, f, columns, constant=fixed_point)
    squares, surj = certify_selfmap_lifting(tr, f, q)
    return SelfMapLifting(tr, f, q, squares, surj, "fixed_point")


# -- brute-force oracle -----------------------------------------------------


@dataclass
class OracleResult:
    outcome: str  # "yes" | "no" | "inconclusive"
    witness: dict | None = None
    truncation: Truncation | None = None
    reason: str = ""

    def __str__(self):
        return self.outcome


def _children(vs: list, succ: dict) -> dict:
    ch = {v: [] for v in vs}
    for v in vs:
        w = succ[v]
        if w is not None and w in ch:
            ch[w].append(v)
    return ch


class _ComponentSearch:
    """Exact image sets of homomorphisms from one truncated component into ``f``.

    Image sets are bitmasks over ``f.points``.  In-trees are solved by dynamic
    programming from the leaves; for a cycle the value on one cycle vertex
    fixes the whole cycle.
    """

    def __init__(self, vs: list, succ: dict, f: FiniteSelfMap, allowed: dict | None = None):
        self.f = f
        self.allowed = allowed or {}
        self.idx = {p: i for i, p in enumerate(f.points)}
        self.pre = {p: [x for x in f.points if f(x) == p] for p in f.points}
        self.vs = vs
        self.succ = succ
        self.children = _children(vs, succ)
        self.cycle = self._find_cycle()
        on_cycle = set(self.cycle)
        # tree children exclude cycle edges
        self.tree_children = {
            v: [c for c in self.children[v] if c not in on_cycle] for v in vs
        }
        self.table: dict = {}
        for v in self._postorder():
            for p in f.points:
                self.table[(v, p)] = self._subtree_sets(v, p)

    def _find_cycle(self) -> list:
        seen = set()
        x = self.vs[0]
        while x is not None and x not in seen:
            seen.add(x)
            x = self.succ[x]
        if x is None:
            return []
        cyc = [x]
        y = self.succ[x]
        while y != x:
            cyc.append(y)
            y = self.succ[y]
        return cyc

    def _roots(self) -> list:
        if self.cycle:
            return list(self.cycle)
        return [v for v in self.vs if self.succ[v] is None]

    def _postorder(self) -> list:
        order = []
        stack = [(r, False) for r in self._roots()]
        while stack:
            v, done = stack.pop()
            if done:
                order.append(v)
                continue
            stack.append((v, True))
            for c in self.tree_children[v]:
                stack.append((c, False))
        return order

    def _subtree_sets(self, v, p) -> frozenset:
        if v in self.allowed and p not in self.allowed[v]:
            return frozenset()
        acc = {1 << self.idx[p]}
        for c in self.tree_children[v]:
            options = set()
            for u in self.pre[p]:
                options |= self.table[(c, u)]
            acc = {a | b for a in acc for b in options}
            if not acc:
                break
        return frozenset(acc)

    def root_values(self) -> Iterator[dict]:
        """Admissible assignments of the root (boundary vertex or whole cycle)."""
        if not self.cycle:
            (root,) = self._roots()
            for p in self.f.points:
                yield {root: p}
            return
        for p in self.f.points:
            vals, x = {}, p
            for v in self.cycle:
                vals[v] = x
                x = self.f(x)
            if x == p:
                yield vals

    def image_sets(self) -> dict:
        """mask -> root assignment realizing it."""
        out = {}
        for vals in self.root_values():
            acc = {0}
            for v, p in vals.items():
                acc = {a | b for a in acc for b in self.table[(v, p)]}
            for mask in acc:
                out.setdefault(mask, vals)
        return out

    def realize(self, vals: dict, mask: int) -> dict:
        """A homomorphism with the given root values and image exactly ``mask``."""
        q: dict = {}
        roots = list(vals)
        parts = [self.table[(v, vals[v])] for v in roots]
        choice = _split(parts, mask)
        for v, sub in zip(roots, choice):
            self._realize_tree(v, vals[v], sub, q)
        return q

    def _realize_tree(self, v, p, mask: int, q: dict):
        q[v] = p
        kids = self.tree_children[v]
        if not kids:
            return
        options = []
        for c in kids:
            opts = {}
            for u in self.pre[p]:
                for m in self.table[(c, u)]:
                    if m & ~mask == 0:
                        opts.setdefault(m, u)
            options.append(opts)
        own = 1 << self.idx[p]
        choice = _split([frozenset(o) for o in options], mask, cover=mask & ~own)
        for c, m, opts in zip(kids, choice, options):
            self._realize_tree(c, opts[m], m, q)


def _split(parts: list, target: int, cover: int | None = None) -> list:
    """Pick one mask from each part, all within ``target``, whose union covers ``cover``.

    ``cover`` defaults to ``target`` itself, i.e. the union must equal it.
    """
    cover = target if cover is None else cover
    reach = [{0: None}]
    for opts in parts:
        nxt = {}
        for acc in reach[-1]:
            for m in opts:
                if m & ~target:
                    continue
                u = acc | m
                if u not in nxt:
                    nxt[u] = (acc, m)
        reach.append(nxt)
    goals = [u for u in reach[-1] if u & cover == cover]
    if not goals:
        raise LookupError("no admissible choice")
    u = goals[0]
    picks = []
    for level in range(len(parts), 0, -1):
        acc, m = reach[level][u]
        picks.append(m)
        u = acc
    return picks[::-1]


def _images_after(f: FiniteSelfMap) -> Callable[[float], frozenset]:
    """``h -> f^h(S)``; ``inf`` gives the periodic points."""
    stages = [frozenset(f.points)]
    while True:
        nxt = frozenset(f(x) for x in stages[-1])
        if nxt == stages[-1]:
            break
        stages.append(nxt)

    def after(h: float) -> frozenset:
        return stages[-1] if h >= len(stages) - 1 else stages[int(h)]

    return after


def brute_force_lifting_exists(
    w: SelfMapDescription, f: FiniteSelfMap, depth: int = 6, copies: int | None = None
) -> OracleResult:
    """Search for a surjection ``q`` with ``q(w v) = f(q v)`` on a truncation of ``w``.

    A vertex with a backward chain of length ``h`` in the whole map can only
    go to a point of ``f^h(S)``; that constraint is imposed on the truncation.
    ``yes`` carries a witness on the truncation.  ``no`` is reported only when
    it follows for the whole map: either every component is finite and was
    searched exactly, or no assignment of whole components to components of
    ``f`` can cover ``f`` (each component of ``w`` lands inside one component
    of ``f``, and a truncation that admits no homomorphism into a component
    rules it out for the whole component).  Everything else is
    ``inconclusive``.
    """
    k = len(f.points)
    copies = copies or max(k, 1)
    tr = truncate(w, depth, copies)
    full = (1 << k) - 1
    reach_after = _images_after(f)
    searches = []
    for label, t, gvs in tr.components:
        succ = {v: tr.succ[v] for v in gvs}
        allowed = {v: reach_after(backward_height(t, v[1])) for v in gvs}
        searches.append(_ComponentSearch(gvs, succ, f, allowed))
    exact = [s.image_sets() for s in searches]

    # exact search on the truncation
    reach = [{0: None}]
    for sets in exact:
        nxt = {}
        for acc in reach[-1]:
            for m in sets:
                u = acc | m
                if u not in nxt:
                    nxt[u] = (acc, m)
        reach.append(nxt)
    if full in reach[-1]:
        q = {}
        u = full
        for ci in range(len(exact), 0, -1):
            acc, m = reach[ci][u]
            q.update(searches[ci - 1].realize(exact[ci - 1][m], m))
            u = acc
        return OracleResult("yes", q, tr, "surjective homomorphism found on the truncation")
    if tr.complete:
        return OracleResult("no", None, tr, "finite map searched exhaustively")

    # sound over-approximation for incomplete components
    f_comps = [sum(1 << f.points.index(x) for x in comp) for comp in f.components()]
    approx = []
    for (label, t, gvs), sets in zip(tr.components, exact):
        if isinstance(t, FiniteCore):
            approx.append(set(sets))
            continue
        allowed = set()
        values = sum(1 << f.points.index(x) for x in reach_after(minimum_height(t)))
        for comp in f_comps:
            if any(m & ~comp == 0 for m in sets):
                comp &= values
                sub = comp
                while sub:
                    allowed.add(sub)
                    sub = (sub - 1) & comp
        approx.append(allowed)
    covered = {0}
    for sets in approx:
        covered = {a | b for a in covered for b in sets}
    if full not in covered:
        return OracleResult("no", None, tr, "components of the map cannot cover the target")
    return OracleResult("inconclusive", None, tr, "truncation boundary blocks a verdict")
