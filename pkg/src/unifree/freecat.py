"""Concrete categories with a free functor, and monoid actions on their objects.

Three built-in instances:

``ens``        nonempty sets; ``F`` and ``eta`` are identities.
``monounary``  sets with one unary operation; ``F X = X x N`` with the shift,
               enumerated up to a depth in the second coordinate.
``finvecq``    rational spaces ``Q^X`` with the l1 norm and non-expansive
               linear maps; ``U[A]`` is the unit ball and ``F X = Q^X``.

The extension operator ``f -> fbar`` and the nice-epi predicate are the only
category-specific ingredients; the laws, generation and the monoid-action
constructions are written once against :class:`Instance`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .action import (
    Lifting,
    SetCarrier,
    SetMAction,
    Square,
    lift_action_to_zeta,
    orbit_closure,
)
from .ellone import SparseVec, rank
from .errors import DoesNotGenerate, EmptyCarrier, InputError, NotInUnitBall, PreconditionViolated
from .monoid import EnumerationBound, Monoid


@dataclass(eq=False)
class Morphism:
    source: Any
    target: Any
    fn: Callable

    def __call__(self, x):
        return self.fn(x)


def _fn(f) -> Callable:
    return f if callable(f) else f.__getitem__


class Instance:
    """Capability record of a concrete category with a left adjoint to ``U``."""

    name = "abstract"

    def __init__(self, nice: str = "surjective"):
        if nice not in ("surjective", "right_invertible"):
            raise InputError(f"unknown nice-epi mode {nice!r}")
        self.nice = nice

    # objects and the forgetful functor
    def points(self, A) -> list:
        raise NotImplementedError

    def underlying(self, A) -> SetCarrier:
        return SetCarrier(getattr(A, "kind", "finite"), tuple(self.points(A)), self.is_complete(A))

    def is_complete(self, A) -> bool:
        return True

    # free functor
    def free(self, X: SetCarrier):
        raise NotImplementedError

    def eta(self, X: SetCarrier, x):
        raise NotImplementedError

    def extend(self, X: SetCarrier, A, f) -> Morphism:
        raise NotImplementedError

    def free_map(self, X: SetCarrier, Y: SetCarrier, f) -> Morphism:
        """``F f``, computed as the extension of ``eta_Y o f``."""
        f = _fn(f)
        FY = self.free(Y)
        return self.extend(X, FY, lambda x: self.eta(Y, f(x)))

    # morphisms
    def compose(self, g: Morphism, h: Morphism) -> Morphism:
        return Morphism(h.source, g.target, lambda x: g(h(x)))

    def identity(self, A) -> Morphism:
        return Morphism(A, A, lambda x: x)

    def key(self, g: Morphism) -> tuple:
        return tuple(g(x) for x in self.points(g.source))

    def equal(self, g: Morphism, h: Morphism) -> bool:
        return all(g(x) == h(x) for x in self.points(g.source))

    def hom_set(self, A, B) -> list:
        raise NotImplementedError

    def small_objects(self, size: int) -> list:
        raise NotImplementedError

    # nice epimorphisms
    def is_surjective(self, g: Morphism) -> bool:
        image = {g(x) for x in self.points(g.source)}
        return all(y in image for y in self.points(g.target))

    def is_right_invertible(self, g: Morphism) -> bool:
        ident = self.identity(g.target)
        return any(self.equal(self.compose(g, h), ident) for h in self.hom_set(g.target, g.source))

    def is_nice(self, g: Morphism) -> bool:
        if self.nice == "right_invertible":
            return self.is_right_invertible(g)
        return self.is_surjective(g)

    def __repr__(self):
        return f"<{self.name} instance, nice={self.nice}>"


# -- Ens ------------------------------------------------------------------


class Ens(Instance):
    name = "ens"

    def points(self, A: SetCarrier) -> list:
        return list(A.points)

    def underlying(self, A: SetCarrier) -> SetCarrier:
        return A

    def is_complete(self, A) -> bool:
        return A.complete

    def free(self, X: SetCarrier) -> SetCarrier:
        return X

    def eta(self, X, x):
        return x

    def extend(self, X, A, f) -> Morphism:
        if not X.points:
            raise EmptyCarrier("free objects are built over nonempty sets")
        return Morphism(X, A, _fn(f))

    def hom_set(self, A: SetCarrier, B: SetCarrier) -> list:
        out = []
        for images in itertools.product(B.points, repeat=len(A)):
            table = dict(zip(A.points, images))
            out.append(Morphism(A, B, table.__getitem__))
        return out

    def small_objects(self, size: int) -> list:
        return [SetCarrier.finite(range(n)) for n in range(1, size + 1)]


# -- monounary algebras ---------------------------------------------------


@dataclass(eq=False)
class MonounaryAlgebra:
    carrier: SetCarrier
    op: Callable
    name: str = ""

    @classmethod
    def from_images(cls, images: Sequence[int], name: str = "") -> "MonounaryAlgebra":
        table = dict(enumerate(images))
        return cls(SetCarrier.finite(range(len(images))), table.__getitem__, name or f"alg{tuple(images)}")

    @property
    def kind(self) -> str:
        return self.carrier.kind

    def __repr__(self):
        return f"MonounaryAlgebra({self.name})"


def functional_graphs_up_to_iso(n: int) -> list[tuple]:
    """Canonical representatives of self-maps of ``{0..n-1}`` up to relabelling."""
    seen = set()
    out = []
    perms = list(itertools.permutations(range(n)))
    for images in itertools.product(range(n), repeat=n):
        best = min(
            tuple(p[images[inv]] for inv in _inverse_perm(p)) for p in perms
        )
        if best not in seen:
            seen.add(best)
            out.append(best)
    return out


def _inverse_perm(p: tuple) -> list:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return inv


class Monounary(Instance):
    name = "monounary"

    def __init__(self, nice: str = "surjective", depth: int = 4):
        super().__init__(nice)
        self.depth = depth

    def points(self, A: MonounaryAlgebra) -> list:
        return list(A.carrier.points)

    def underlying(self, A: MonounaryAlgebra) -> SetCarrier:
        return A.carrier

    def is_complete(self, A) -> bool:
        return A.carrier.complete

    def free(self, X: SetCarrier) -> MonounaryAlgebra:
        if not X.points:
            raise EmptyCarrier("free objects are built over nonempty sets")
        pts = tuple((x, n) for n in range(self.depth) for x in X.points)
        return MonounaryAlgebra(SetCarrier("free", pts, False), _shift, f"F{len(X)}")

    def eta(self, X, x):
        return (x, 0)

    def extend(self, X, A: MonounaryAlgebra, f) -> Morphism:
        if not X.points:
            raise EmptyCarrier("free objects are built over nonempty sets")
        f = _fn(f)

        def fbar(pt):
            x, n = pt
            y = f(x)
            for _ in range(n):
                y = A.op(y)
            return y

        return Morphism(self.free(X), A, fbar)

    def free_map(self, X, Y, f) -> Morphism:
        f = _fn(f)
        return Morphism(self.free(X), self.free(Y), lambda pt: (f(pt[0]), pt[1]))

    def is_homomorphism(self, g: Morphism) -> bool:
        A, B = g.source, g.target
        return all(g(A.op(x)) == B.op(g(x)) for x in self.points(A))

    def hom_set(self, A: MonounaryAlgebra, B: MonounaryAlgebra) -> list:
        pa, pb = self.points(A), self.points(B)
        out = []
        for images in itertools.product(pb, repeat=len(pa)):
            table = dict(zip(pa, images))
            if all(table[A.op(x)] == B.op(table[x]) for x in pa):
                out.append(Morphism(A, B, table.__getitem__))
        return out

    def small_objects(self, size: int) -> list:
        return [
            MonounaryAlgebra.from_images(g)
            for n in range(1, size + 1)
            for g in functional_graphs_up_to_iso(n)
        ]


def _shift(pt):
    x, n = pt
    return (x, n + 1)


def naturals_algebra(depth: int) -> MonounaryAlgebra:
    """``<N, succ>`` enumerated up to ``depth`` points."""
    return MonounaryAlgebra(SetCarrier("nat", tuple(range(depth)), False), lambda n: n + 1, "N")


# -- finite-dimensional rational l1 spaces -------------------------------


@dataclass(frozen=True)
class RationalSpace:
    """``Q^labels`` with the l1 norm; ``complete`` is false for truncated bases."""

    labels: tuple
    complete: bool = True

    kind = "open"

    @classmethod
    def of_dim(cls, d: int) -> "RationalSpace":
        return cls(tuple(range(d)))

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __repr__(self):
        return f"Q^{self.dim}" if self.labels == tuple(range(self.dim)) else f"Q^{self.labels}"


@dataclass(eq=False)
class LinearMap(Morphism):
    columns: dict = field(default_factory=dict)

    @classmethod
    def from_columns(cls, source: RationalSpace, target: RationalSpace, columns) -> "LinearMap":
        col = _fn(columns)
        cols = {s: col(s) for s in source.labels}
        lm = cls(source, target, None, cols)
        lm.fn = lm._apply
        lm._rule = col
        return lm

    def column(self, s) -> SparseVec:
        if s in self.columns:
            return self.columns[s]
        return self._rule(s)

    def _apply(self, v: SparseVec) -> SparseVec:
        out = []
        for s, c in v.items():
            out.extend((t, c * d) for t, d in self.column(s).items())
        return SparseVec(out)

    def matrix(self) -> tuple:
        return tuple(
            tuple(self.columns[s][t] for s in self.source.labels) for t in self.target.labels
        )

    def operator_norm(self) -> Fraction:
        return max((c.norm1() for c in self.columns.values()), default=Fraction(0))


def unit_ball_sample(A: RationalSpace) -> list:
    """Deterministic finite sample of the rational unit ball, basis vectors first."""
    pts = [SparseVec.basis(s) for s in A.labels]
    pts += [SparseVec({s: -1}) for s in A.labels]
    pts.append(SparseVec())
    half = Fraction(1, 2)
    for s, t in itertools.combinations(A.labels[:4], 2):
        pts.append(SparseVec({s: half, t: half}))
        pts.append(SparseVec({s: half, t: -half}))
    return pts


class FinVecQ(Instance):
    name = "finvecq"

    def __init__(self, nice: str = "surjective", grid: Sequence = (-1, 0, 1)):
        super().__init__(nice)
        self.grid = tuple(Fraction(g) for g in grid)

    def points(self, A: RationalSpace) -> list:
        return unit_ball_sample(A)

    def underlying(self, A: RationalSpace) -> SetCarrier:
        return SetCarrier("open", tuple(self.points(A)), False)

    def is_complete(self, A) -> bool:
        return False

    def free(self, X: SetCarrier) -> RationalSpace:
        if not X.points:
            raise EmptyCarrier("free objects are built over nonempty sets")
        return RationalSpace(tuple(X.points), X.complete)

    def eta(self, X, x) -> SparseVec:
        return SparseVec.basis(x)

    def extend(self, X, A: RationalSpace, f) -> LinearMap:
        f = _fn(f)
        FX = self.free(X)
        for x in X.points:
            v = f(x)
            if v.norm1() > 1:
                raise NotInUnitBall(f"image of {x!r} has norm {v.norm1()}")
        return LinearMap.from_columns(FX, A, f)

    def free_map(self, X, Y, f) -> LinearMap:
        f = _fn(f)
        return LinearMap.from_columns(self.free(X), self.free(Y), lambda x: SparseVec.basis(f(x)))

    def compose(self, g: LinearMap, h: LinearMap) -> LinearMap:
        return LinearMap.from_columns(h.source, g.target, lambda s: g(h.column(s)))

    def identity(self, A) -> LinearMap:
        return LinearMap.from_columns(A, A, SparseVec.basis)

    def key(self, g: LinearMap) -> tuple:
        return tuple(g.column(s) for s in g.source.labels)

    def equal(self, g, h) -> bool:
        return self.key(g) == self.key(h)

    def set_function_key(self, g) -> tuple:
        return tuple(g(v) for v in self.points(g.source))

    def column_options(self, B: RationalSpace) -> list:
        opts = []
        for entries in itertools.product(self.grid, repeat=B.dim):
            v = SparseVec(zip(B.labels, entries))
            if v.norm1() <= 1:
                opts.append(v)
        return opts

    def hom_set(self, A: RationalSpace, B: RationalSpace) -> list:
        opts = self.column_options(B)
        return [
            LinearMap.from_columns(A, B, dict(zip(A.labels, cols)))
            for cols in itertools.product(opts, repeat=A.dim)
        ]

    def is_surjective(self, g: LinearMap) -> bool:
        """Every target basis vector lies in the span of the enumerated columns."""
        labels = list(dict.fromkeys(list(g.target.labels) + [t for c in g.columns.values() for t, _ in c.items()]))
        cols = [[c[t] for t in labels] for c in g.columns.values()]
        r = rank(cols)
        basis = [[Fraction(int(t == u)) for t in labels] for u in g.target.labels]
        return rank(cols + basis) == r

    def small_objects(self, size: int) -> list:
        return [RationalSpace.of_dim(d) for d in range(1, size + 1)]


INSTANCES = {"ens": Ens, "monounary": Monounary, "finvecq": FinVecQ}


def instance_by_name(name: str, **kw) -> Instance:
    try:
        return INSTANCES[name](**kw)
    except KeyError:
        raise InputError(f"unknown category {name!r}; choose from {sorted(INSTANCES)}") from None


# -- laws of the extension operator --------------------------------------


def extend(inst: Instance, X: SetCarrier, A, f) -> Morphism:
    """``fbar: F X -> A`` with its unit law checked."""
    fbar = inst.extend(X, A, f)
    if not unit_law_holds(inst, X, fbar, f):
        raise PreconditionViolated("extension violates the unit law")
    return fbar


def unit_law_holds(inst: Instance, X: SetCarrier, fbar: Morphism, f) -> bool:
    f = _fn(f)
    return all(fbar(inst.eta(X, x)) == f(x) for x in X.points)


def extension_candidates(inst: Instance, X: SetCarrier, A) -> list:
    """Morphisms ``F X -> A`` available for the uniqueness check.

    Ens: all functions.  Monounary: every op-compatible map on the enumerated
    free algebra, found by assigning generator images and propagating.
    FinVecQ: grid matrices.
    """
    if isinstance(inst, Ens):
        return inst.hom_set(X, A)
    if isinstance(inst, Monounary):
        FX = inst.free(X)
        pa = inst.points(A)
        out = []
        for images in itertools.product(pa, repeat=len(X)):
            table = {}
            for x, y in zip(X.points, images):
                for n in range(inst.depth):
                    table[(x, n)] = y
                    y = A.op(y)
            g = Morphism(FX, A, table.__getitem__)
            out.append(g)
        return out
    if isinstance(inst, FinVecQ):
        return inst.hom_set(inst.free(X), A)
    raise InputError(f"no candidate enumeration for {inst}")


def extension_is_unique(inst: Instance, X: SetCarrier, A, f, candidates=None) -> bool:
    fbar = inst.extend(X, A, f)
    if candidates is None:
        candidates = extension_candidates(inst, X, A)
    return all(inst.equal(g, fbar) for g in candidates if unit_law_holds(inst, X, g, f))


def law_compose_right(inst: Instance, X: SetCarrier, Y: SetCarrier, A, f, g) -> bool:
    """``(g o f)bar == gbar o F f`` on the enumerated carrier of ``F X``."""
    f, g = _fn(f), _fn(g)
    lhs = inst.extend(X, A, lambda x: g(f(x)))
    rhs = inst.compose(inst.extend(Y, A, g), inst.free_map(X, Y, f))
    return inst.equal(lhs, rhs)


def law_compose_left(inst: Instance, X: SetCarrier, A, f, g: Morphism) -> bool:
    """``(U[g] o f)bar == g o fbar``."""
    f = _fn(f)
    lhs = inst.extend(X, g.target, lambda x: g(f(x)))
    rhs = inst.compose(g, inst.extend(X, A, f))
    return inst.equal(lhs, rhs)


def generates(inst: Instance, X: SetCarrier, A, f) -> bool:
    return inst.is_nice(inst.extend(X, A, f))


def enlarge_generating_set(inst: Instance, X: SetCarrier, A, f, S: Iterable) -> bool:
    """Check that a superset ``S`` of the image of a generating ``f`` generates.

    Verifies the factorisation ``fbar == ebar o F f_S`` for the inclusion
    ``e: S -> U[A]`` and then that ``ebar`` is nice.
    """
    f = _fn(f)
    if not generates(inst, X, A, f):
        raise PreconditionViolated("f does not generate A")
    S_car = SetCarrier.finite(S)
    image = {f(x) for x in X.points}
    if not image <= set(S_car.points):
        raise PreconditionViolated("S must contain the image of f")
    ebar = inst.extend(S_car, A, lambda s: s)
    factor = inst.compose(ebar, inst.free_map(X, S_car, f))
    return inst.equal(inst.extend(X, A, f), factor) and inst.is_nice(ebar)


# -- nice-epi axioms ------------------------------------------------------


@dataclass
class LawReport:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        out = {"law": self.name, "passed": self.passed, "checked": self.checked}
        if self.failures:
            out["failure"] = repr(self.failures[0])
        return out


def check_n0(inst: Instance, objects: list) -> LawReport:
    """Nice morphisms are left-cancellable against the enumerated test morphisms."""
    rep = LawReport("N0")
    homs = {(i, j): inst.hom_set(A, B) for i, A in enumerate(objects) for j, B in enumerate(objects)}
    for (i, j), gs in homs.items():
        for g in gs:
            if not inst.is_nice(g):
                continue
            for k in range(len(objects)):
                seen = {}
                for h in homs[(j, k)]:
                    rep.checked += 1
                    key = inst.key(inst.compose(h, g))
                    if key in seen and not inst.equal(seen[key], h):
                        rep.failures.append((objects[i], objects[j], objects[k]))
                        break
                    seen.setdefault(key, h)
    return rep


def check_n1(inst: Instance, objects: list) -> LawReport:
    rep = LawReport("N1")
    for A, B in itertools.product(objects, repeat=2):
        sections = inst.hom_set(B, A)
        ident = inst.identity(B)
        for g in inst.hom_set(A, B):
            rep.checked += 1
            if any(inst.equal(inst.compose(g, h), ident) for h in sections) and not inst.is_nice(g):
                rep.failures.append((A, B, inst.key(g)))
    return rep


def check_n2(inst: Instance, objects: list) -> LawReport:
    rep = LawReport("N2")
    homs = {(i, j): inst.hom_set(A, B) for i, A in enumerate(objects) for j, B in enumerate(objects)}
    nice_cache: dict = {}

    def nice(m):
        k = (id(m.target), inst.key(m))
        if k not in nice_cache:
            nice_cache[k] = inst.is_nice(m)
        return nice_cache[k]

    n = len(objects)
    for i, j, k in itertools.product(range(n), repeat=3):
        for g in homs[(j, k)]:
            if nice(g):
                rep.checked += len(homs[(i, j)])
                continue
            for h in homs[(i, j)]:
                rep.checked += 1
                if nice(inst.compose(g, h)):
                    rep.failures.append((objects[i], objects[j], objects[k]))
                    break
    return rep


def check_faithful(inst: Instance, objects: list) -> LawReport:
    """Distinct morphisms induce distinct functions on the enumerated universe."""
    rep = LawReport("faithful")
    set_key = getattr(inst, "set_function_key", inst.key)
    for A, B in itertools.product(objects, repeat=2):
        seen = {}
        for g in inst.hom_set(A, B):
            rep.checked += 1
            sk = set_key(g)
            if sk in seen and inst.key(seen[sk]) != inst.key(g):
                rep.failures.append((A, B))
            seen.setdefault(sk, g)
    return rep


# -- monoid actions on objects --------------------------------------------


class ObjectAction:
    """An action of ``monoid`` on an object of ``inst`` by morphisms."""

    def __init__(self, inst: Instance, monoid: Monoid, obj, rule: Callable[[Any], Morphism]):
        self.inst = inst
        self.monoid = monoid
        self.obj = obj
        self._rule = rule
        self._cache: dict = {}

    @classmethod
    def from_generators(cls, inst: Instance, monoid: Monoid, obj, gens: dict) -> "ObjectAction":
        """Finite tables list every element; word kinds list their generators."""
        from .monoid import Kind

        if monoid.kind is Kind.FINITE_TABLE:
            table = dict(gens)
            table.setdefault(monoid.identity, inst.identity(obj))
            return cls(inst, monoid, obj, table.__getitem__)

        def rule(m):
            acc = inst.identity(obj)
            for g in monoid.factor(m):
                acc = inst.compose(acc, gens[g])
            return acc

        return cls(inst, monoid, obj, rule)

    def act(self, m) -> Morphism:
        if m not in self._cache:
            self._cache[m] = self._rule(m)
        return self._cache[m]

    def underlying(self) -> SetMAction:
        return SetMAction(self.monoid, self.inst.underlying(self.obj), lambda m, x: self.act(m)(x))

    def law_failures(self, bound: EnumerationBound | None = None) -> list:
        inst = self.inst
        elems = self.monoid.enumerate(bound)
        bad = []
        if not inst.equal(self.act(self.monoid.identity), inst.identity(self.obj)):
            bad.append(("identity",))
        for m0, m1 in itertools.product(elems, repeat=2):
            lhs = self.act(self.monoid.multiply(m0, m1))
            if not inst.equal(lhs, inst.compose(self.act(m0), self.act(m1))):
                bad.append(("compatibility", m0, m1))
        return bad


def certify_homomorphism(
    p: Morphism, source: ObjectAction, target: ObjectAction, bound: EnumerationBound | None
) -> tuple:
    inst = source.inst
    elems = source.monoid.enumerate(bound)
    return tuple(
        Square(m, y, p(source.act(m)(y)), target.act(m)(p(y)))
        for m in elems
        for y in inst.points(source.obj)
    )


def universal_action_on_free(
    inst: Instance, monoid: Monoid, index: SetCarrier, bound: EnumerationBound | None = None
) -> ObjectAction:
    """``F zeta``: each ``m`` acts on ``F(M x index)`` by ``F(<a, k> -> <m a, k>)``."""
    bound = bound or EnumerationBound()
    pairs = SetCarrier.pairs(monoid, index, bound)
    obj = inst.free(pairs)

    def rule(m):
        return inst.free_map(pairs, pairs, lambda pr: (monoid.multiply(m, pr[0]), pr[1]))

    action = ObjectAction(inst, monoid, obj, rule)
    action.pairs = pairs
    return action


@dataclass
class FreeMObject:
    """``MF S = (F(M x S), F zeta_S)`` with its unit ``s -> eta<1, s>``."""

    inst: Instance
    monoid: Monoid
    base: SetCarrier
    pairs: SetCarrier
    action: ObjectAction

    @property
    def obj(self):
        return self.action.obj

    def unit(self, s):
        return self.inst.eta(self.pairs, (self.monoid.identity, s))

    def extend(self, phi: ObjectAction, f) -> Morphism:
        """``f~<x, s> = x^{U phi} f(s)``, then the extension of ``f~``."""
        f = _fn(f)
        ftilde = lambda pr: phi.act(pr[0])(f(pr[1]))  # noqa: E731
        return self.inst.extend(self.pairs, phi.obj, ftilde)

    def certify_extension(self, phi: ObjectAction, f, bound: EnumerationBound | None = None) -> Lifting:
        f = _fn(f)
        fbar = self.extend(phi, f)
        squares = certify_homomorphism(fbar, self.action, phi, bound)
        triangle = all(fbar(self.unit(s)) == f(s) for s in self.base.points)
        return Lifting(self.action, phi, fbar, squares, self.inst.is_surjective(fbar), bound, triangle)


def free_maction_functor(
    inst: Instance, monoid: Monoid, S: SetCarrier, bound: EnumerationBound | None = None
) -> FreeMObject:
    if not S.points:
        raise EmptyCarrier("free action needs a nonempty set")
    bound = bound or EnumerationBound()
    action = universal_action_on_free(inst, monoid, S, bound)
    return FreeMObject(inst, monoid, S, action.pairs, action)


def mf_extension_is_unique(
    free_obj: FreeMObject, phi: ObjectAction, f, bound: EnumerationBound | None = None, domain=None
) -> bool:
    """Search every ``h: M x S -> domain`` with ``h<1, s> = f(s)`` whose extension
    is a homomorphism; all of them must agree with :meth:`FreeMObject.extend`.

    Candidate values come from ``domain`` (default: the enumerated universe of
    the target).  A partial assignment is pruned as soon as some
    ``h<m a, s> != m^phi h<a, s>`` with both sides assigned.
    """
    inst, monoid = free_obj.inst, free_obj.monoid
    f = _fn(f)
    pts = list(free_obj.pairs.points)
    domain = list(domain if domain is not None else inst.points(phi.obj))
    elems = monoid.enumerate(bound)
    one = monoid.identity
    reference = free_obj.extend(phi, f)
    h: dict = {}
    agreed = True
    found = 0

    def consistent(pr) -> bool:
        a, s = pr
        for m in elems:
            tgt = (monoid.multiply(m, a), s)
            if tgt in h and h[tgt] != phi.act(m)(h[pr]):
                return False
        for m in elems:
            for b in elems:
                if monoid.multiply(m, b) == a and (b, s) in h and h[pr] != phi.act(m)(h[(b, s)]):
                    return False
        return True

    def search(i):
        nonlocal agreed, found
        if not agreed:
            return
        if i == len(pts):
            # every square inside the bound already holds by `consistent`
            g = inst.extend(free_obj.pairs, phi.obj, h.__getitem__)
            found += 1
            if not inst.equal(g, reference):
                agreed = False
            return
        pr = pts[i]
        options = [f(pr[1])] if pr[0] == one else domain
        for v in options:
            h[pr] = v
            if consistent(pr):
                search(i + 1)
            del h[pr]

    search(0)
    return agreed and found >= 1


def lift_object_action(
    inst: Instance,
    phi: ObjectAction,
    S: Sequence,
    bound: EnumerationBound | None = None,
    cap: int = 10_000,
) -> Lifting:
    """Lift ``phi`` to the universal action on ``F(M x S')`` by a nice epimorphism.

    Steps: close ``S`` under the action; restrict the action to the closure
    ``S'``; extend the inclusion ``S' -> U[A]`` to ``ibar: F S' -> A``; and
    precompose with ``F q`` where ``q<a, s> = a^psi s``.
    """
    bound = bound or EnumerationBound()
    S = list(S)
    if not S:
        raise EmptyCarrier("generating set must be nonempty")
    S_car = SetCarrier.finite(S)
    if not inst.is_nice(inst.extend(S_car, phi.obj, lambda s: s)):
        raise DoesNotGenerate("the given set does not generate the object")
    closed = orbit_closure(phi.underlying(), S, bound, strict=True, cap=cap)
    order = {x: i for i, x in enumerate(S)}
    closure = sorted(closed, key=lambda x: (order.get(x, len(order)), repr(x)))
    S2 = SetCarrier.finite(closure)
    psi = SetMAction(phi.monoid, S2, lambda m, x: phi.act(m)(x))
    ibar = inst.extend(S2, phi.obj, lambda s: s)
    F_psi = ObjectAction(
        inst, phi.monoid, inst.free(S2), lambda m: inst.free_map(S2, S2, lambda s: psi.act(m, s))
    )
    iota_squares = certify_homomorphism(ibar, F_psi, phi, bound)
    q = lift_action_to_zeta(psi, bound)
    universal = universal_action_on_free(inst, phi.monoid, S2, bound)
    Fq = inst.free_map(universal.pairs, S2, q.map)
    composite = inst.compose(ibar, Fq)
    squares = certify_homomorphism(composite, universal, phi, bound)
    return Lifting(
        universal,
        phi,
        composite,
        squares,
        inst.is_nice(composite),
        bound,
        extras={
            "closure": closure,
            "iota_certificate": iota_squares,
            "zeta_lifting": q,
            "generated": inst.is_nice(ibar),
        },
    )


def diagram_coherence(
    inst: Instance, monoid: Monoid, S: SetCarrier, bound: EnumerationBound | None = None
) -> bool:
    """``MF S`` against ``F^M`` applied to ``zeta S``, pointwise on the bound.

    The object must be ``F`` of the underlying set of ``zeta S`` and each
    ``m`` must act by ``F`` of the set map ``m^zeta``; forgetting the action
    of ``MF S`` lands on ``U[F(M x S)]``.
    """
    from .action import zeta_of_set

    bound = bound or EnumerationBound()
    z = zeta_of_set(monoid, S, bound)
    mf = free_maction_functor(inst, monoid, S, bound)
    F_of_z = inst.free(z.carrier)
    if inst.points(F_of_z) != inst.points(mf.obj):
        return False
    for m in monoid.enumerate(bound):
        Fm = inst.free_map(z.carrier, z.carrier, lambda x, m=m: z.act(m, x))
        if not inst.equal(Fm, mf.action.act(m)):
            return False
    return all(
        mf.unit(s) == inst.eta(z.carrier, z.eta(s)) for s in S.points
    )


# -- exhaustive law runs --------------------------------------------------


def maps_into(inst: Instance, X: SetCarrier, A) -> list:
    """All functions ``X -> U[A]`` with values in the enumerated universe.

    For FinVecQ the universe is the grid of column options rather than the
    unit-ball sample, so that candidate morphisms and data match.
    """
    values = inst.column_options(A) if isinstance(inst, FinVecQ) else inst.points(A)
    return [dict(zip(X.points, vs)) for vs in itertools.product(values, repeat=len(X))]


def law_suite(inst: Instance, size: int, set_size: int = 2) -> list[LawReport]:
    """Unit law, uniqueness, both composition laws, faithfulness and (N0)-(N2).

    Objects are ``inst.small_objects(size)``; domain sets have at most
    ``set_size`` points.  The left composition law pairs every ``f`` with
    every morphism out of ``A`` when ``X`` is a single point, and with
    identities and the first nonidentity morphisms otherwise.
    """
    objects = inst.small_objects(size)
    sets = [SetCarrier.finite(range(n)) for n in range(1, set_size + 1)]
    unit, unique = LawReport("unit"), LawReport("uniqueness")
    right, left = LawReport("compose_right"), LawReport("compose_left")
    for X in sets:
        for A in objects:
            by_data: dict = {}
            for g in extension_candidates(inst, X, A):
                by_data.setdefault(tuple(g(inst.eta(X, x)) for x in X.points), []).append(g)
            for f in maps_into(inst, X, A):
                fbar = inst.extend(X, A, f)
                unit.checked += 1
                if not unit_law_holds(inst, X, fbar, f):
                    unit.failures.append((X, A, f))
                for g in by_data.get(tuple(f[x] for x in X.points), []):
                    unique.checked += 1
                    if not inst.equal(g, fbar):
                        unique.failures.append((X, A, f))
    for X, Y in itertools.product(sets, repeat=2):
        for fx in itertools.product(Y.points, repeat=len(X)):
            f = dict(zip(X.points, fx))
            for A in objects:
                for g in maps_into(inst, Y, A):
                    right.checked += 1
                    if not law_compose_right(inst, X, Y, A, f, g):
                        right.failures.append((X, Y, A, f, g))
    for X in sets:
        for A, B in itertools.product(objects, repeat=2):
            homs = inst.hom_set(A, B)
            if len(X) > 1:
                homs = homs[:3]
            for f in maps_into(inst, X, A):
                for g in homs:
                    left.checked += 1
                    if not law_compose_left(inst, X, A, f, g):
                        left.failures.append((X, A, B, f))
    return [
        unit,
        unique,
        right,
        left,
        check_faithful(inst, objects),
        check_n0(inst, objects),
        check_n1(inst, objects),
        check_n2(inst, objects),
    ]


def set_action_as_object_action(inst: Ens, psi: SetMAction) -> ObjectAction:
    A = psi.carrier
    return ObjectAction(inst, psi.monoid, A, lambda m: Morphism(A, A, lambda x: psi.act(m, x)))


def monogenic_actions(inst: Instance, monoid: Monoid, obj) -> list[ObjectAction]:
    """Every action of a one-generator monoid on ``obj`` by enumerated endomorphisms.

    ``N`` and the free monoid on one letter take any endomorphism, ``Z_n``
    one with ``g^n = id`` and ``Z`` an automorphism whose inverse is in the
    hom-set.  Other monoids get the trivial action only.
    """
    from .monoid import Kind

    ident = inst.identity(obj)
    ends = inst.hom_set(obj, obj)
    out = []
    if monoid.kind in (Kind.NAT, Kind.FREE_MONOID) and monoid.generators == 1:
        gen = monoid.generator_elements()[0]
        out = [ObjectAction.from_generators(inst, monoid, obj, {gen: g}) for g in ends]
    elif monoid.kind is Kind.CYCLIC and monoid.size > 1:
        for g in ends:
            acc = ident
            for _ in range(monoid.size):
                acc = inst.compose(g, acc)
            if inst.equal(acc, ident):
                out.append(ObjectAction.from_generators(inst, monoid, obj, {1: g}))
    elif monoid.kind is Kind.INT:
        for g in ends:
            for h in ends:
                if inst.equal(inst.compose(g, h), ident) and inst.equal(inst.compose(h, g), ident):
                    out.append(ObjectAction.from_generators(inst, monoid, obj, {1: g, -1: h}))
                    break
    else:
        out = [ObjectAction(inst, monoid, obj, lambda m: ident)]
    return out


def maction_suite(
    inst: Instance,
    actions: Iterable[ObjectAction],
    base: SetCarrier,
    bound: EnumerationBound,
    values: Callable[[Any], list] | None = None,
) -> list[LawReport]:
    """Unit law, homomorphism property and uniqueness for ``MF`` extensions.

    For each action ``phi`` and each ``f: base -> values(phi.obj)`` the
    extension of ``f`` along ``MF base`` is certified and compared against a
    backtracking search over all homomorphic candidates.
    """
    unit, hom, unique = LawReport("mf_unit"), LawReport("mf_homomorphism"), LawReport("mf_uniqueness")
    free_objs: dict = {}
    for phi in actions:
        key = id(phi.monoid)
        if key not in free_objs:
            free_objs[key] = free_maction_functor(inst, phi.monoid, base, bound)
        mf = free_objs[key]
        vals = values(phi.obj) if values else inst.points(phi.obj)
        for fv in itertools.product(vals, repeat=len(base)):
            f = dict(zip(base.points, fv))
            cert = mf.certify_extension(phi, f, bound)
            unit.checked += 1
            hom.checked += len(cert.certificate)
            unique.checked += 1
            if not cert.triangle_ok:
                unit.failures.append((phi.monoid, f))
            if cert.failing:
                hom.failures.append((phi.monoid, f, cert.failing[0]))
            if not mf_extension_is_unique(mf, phi, f, bound, domain=vals):
                unique.failures.append((phi.monoid, f))
    return [unit, hom, unique]
