"""Monoid actions on sets, the free action functor zeta, and liftings.

An action is evaluated from a table of generator images (or of every element,
for finite-table monoids); products are evaluated by factoring the monoid
element into generators, so elements outside an enumeration bound are still
acted on exactly.  Homomorphism checks are recorded as :class:`Square`
certificates that carry the bound they were checked on.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping

from .errors import BoundExceeded, EmptyCarrier, InputError, PreconditionViolated
from .monoid import EnumerationBound, Kind, Monoid

Point = Hashable

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class SetCarrier:
    """An enumerated nonempty set.

    ``complete`` is true when ``points`` is the whole carrier; infinite kinds
    (``nat``, ``pairs``) list only the prefix allowed by their bound, and
    ``open`` carriers make no claim about which points exist beyond those
    listed.
    """

    kind: str
    points: tuple
    complete: bool = True

    def __post_init__(self):
        if not self.points:
            raise EmptyCarrier("carriers must be nonempty")
        if len(set(self.points)) != len(self.points):
            raise InputError("carrier point labels must be pairwise distinct")

    @classmethod
    def finite(cls, labels: Iterable[Point]) -> "SetCarrier":
        return cls("finite", tuple(labels), True)

    @classmethod
    def naturals(cls, bound: EnumerationBound) -> "SetCarrier":
        return cls("nat", tuple(range(bound.max_elements)), False)

    @classmethod
    def pairs(cls, monoid: Monoid, base: "SetCarrier", bound: EnumerationBound) -> "SetCarrier":
        elems = monoid.enumerate(bound)
        return cls(
            "pairs",
            tuple((a, s) for a in elems for s in base.points),
            monoid.is_finite and base.complete,
        )

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, x) -> bool:
        return x in self._index

    @property
    def _index(self) -> frozenset:
        cached = self.__dict__.get("_idx")
        if cached is None:
            cached = frozenset(self.points)
            object.__setattr__(self, "_idx", cached)
        return cached


class SetMAction:
    """A monoid action on a set carrier, ``act(m, x) = m^phi . x``."""

    def __init__(self, monoid: Monoid, carrier: SetCarrier, rule: Callable[[Any, Point], Point]):
        self.monoid = monoid
        self.carrier = carrier
        self._rule = rule

    def act(self, m, x) -> Point:
        return self._rule(m, x)

    def endomorphism(self, m) -> dict:
        return {x: self.act(m, x) for x in self.carrier}

    def tabulate(self, bound: EnumerationBound | None = None) -> dict:
        return {m: self.endomorphism(m) for m in self.monoid.enumerate(bound)}

    # -- constructors -------------------------------------------------

    @classmethod
    def from_table(cls, monoid: Monoid, carrier: SetCarrier, table: Mapping) -> "SetMAction":
        """``table`` maps generators (or all elements of a finite table) to point maps.

        For ``int_additive`` only the image of ``1`` is needed; it must be a
        bijection and ``-1`` acts by its inverse.  Likewise a free group needs
        only the positive letters.
        """
        gens = {m: dict(v) for m, v in table.items()}
        if monoid.kind is Kind.INT and -1 not in gens:
            gens[-1] = _inverse(gens[1])
        if monoid.kind is Kind.FREE_GROUP:
            for i in range(monoid.generators):
                if (-(i + 1),) not in gens:
                    gens[(-(i + 1),)] = _inverse(gens[(i + 1,)])
        one = monoid.identity
        if monoid.kind is Kind.FINITE_TABLE:
            gens.setdefault(one, {x: x for x in carrier})
            missing = [m for m in monoid.enumerate() if m not in gens]
            if missing:
                raise PreconditionViolated(f"no table entry for elements {missing}")

            def rule(m, x):
                return gens[m][x]

            return cls(monoid, carrier, rule)
        for g in monoid.generator_elements():
            if g not in gens:
                raise PreconditionViolated(f"no table entry for generator {g!r}")

        def rule(m, x):
            for g in reversed(monoid.factor(m)):
                x = gens[g][x]
            return x

        return cls(monoid, carrier, rule)

    @classmethod
    def trivial(cls, monoid: Monoid, carrier: SetCarrier) -> "SetMAction":
        return cls(monoid, carrier, lambda m, x: x)

    # -- laws ---------------------------------------------------------

    def law_failures(self, bound: EnumerationBound | None = None) -> list:
        """Identity and compatibility failures over enumerated elements and points."""
        elems = self.monoid.enumerate(bound)
        one = self.monoid.identity
        bad = []
        for x in self.carrier:
            if self.act(one, x) != x:
                bad.append(("identity", one, x))
        for m0, m1 in itertools.product(elems, repeat=2):
            prod = self.monoid.multiply(m0, m1)
            for x in self.carrier:
                if self.act(prod, x) != self.act(m0, self.act(m1, x)):
                    bad.append(("compatibility", (m0, m1), x))
        return bad


def _inverse(perm: Mapping) -> dict:
    inv = {v: k for k, v in perm.items()}
    if len(inv) != len(perm) or set(inv) != set(perm):
        raise PreconditionViolated("an invertible generator must act by a bijection")
    return inv


class ZetaAction(SetMAction):
    """The free action on ``M x S``: ``m . <a, s> = <m a, s>``."""

    def __init__(self, monoid: Monoid, base: SetCarrier, bound: EnumerationBound):
        self.base = base
        self.bound = bound
        carrier = SetCarrier.pairs(monoid, base, bound)
        super().__init__(monoid, carrier, self._zeta_rule)

    def _zeta_rule(self, m, pair):
        a, s = pair
        return (self.monoid.multiply(m, a), s)

    def eta(self, s) -> tuple:
        """The unit ``s -> <1, s>``."""
        return (self.monoid.identity, s)


@dataclass(frozen=True)
class Square:
    """One checked square ``p(m^phi x) == m^psi p(x)``."""

    m: Any
    x: Any
    lhs: Any
    rhs: Any

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


@dataclass
class Lifting:
    source: Any
    target: Any
    map: Callable
    certificate: tuple
    surjective_on_bound: bool
    bound: EnumerationBound | None = None
    triangle_ok: bool | None = None
    extras: dict = field(default_factory=dict)

    @property
    def failing(self) -> list:
        return [sq for sq in self.certificate if not sq.ok]

    @property
    def passes(self) -> bool:
        return not self.failing and self.triangle_ok is not False

    def __call__(self, x):
        return self.map(x)

    def table(self) -> dict:
        return {x: self.map(x) for x in self.source.carrier}


def certify(p: Callable, source: SetMAction, target: SetMAction, bound: EnumerationBound | None) -> tuple:
    elems = source.monoid.enumerate(bound)
    return tuple(
        Square(m, x, p(source.act(m, x)), target.act(m, p(x)))
        for m in elems
        for x in source.carrier
    )


def surjective_on(p: Callable, source_points: Iterable, target_points: Iterable) -> bool:
    image = {p(x) for x in source_points}
    return all(y in image for y in target_points)


def _as_function(f) -> Callable:
    if callable(f):
        return f
    return f.__getitem__


def make_lifting(p, source, target, bound, **kw) -> Lifting:
    return Lifting(
        source=source,
        target=target,
        map=p,
        certificate=certify(p, source, target, bound),
        surjective_on_bound=surjective_on(p, source.carrier, target.carrier),
        bound=bound,
        **kw,
    )


# -- operations -----------------------------------------------------------


def zeta_of_set(
    monoid: Monoid, s: SetCarrier, bound: EnumerationBound | None = None, cap: int = DEFAULT_CAP
) -> ZetaAction:
    bound = bound or EnumerationBound()
    if not s.points:
        raise EmptyCarrier("zeta needs a nonempty base set")
    n_elems = len(monoid.enumerate(bound))
    if n_elems * len(s) > cap:
        raise BoundExceeded(f"zeta carrier would have {n_elems * len(s)} > {cap} points")
    return ZetaAction(monoid, s, bound)


def zeta_of_map(
    monoid: Monoid, f, source: SetCarrier, target: SetCarrier, bound: EnumerationBound | None = None
) -> Lifting:
    """``zeta f <a, s> = <a, f s>`` as a certified homomorphism ``zeta S -> zeta T``."""
    bound = bound or EnumerationBound()
    fn = _as_function(f)
    zs = zeta_of_set(monoid, source, bound)
    zt = zeta_of_set(monoid, target, bound)

    def zf(pair):
        a, s = pair
        return (a, fn(s))

    return make_lifting(zf, zs, zt, bound)


def lift_action_to_zeta(psi: SetMAction, bound: EnumerationBound | None = None) -> Lifting:
    """The surjection ``q<a, s> = a^psi s`` from ``zeta S`` onto ``psi``."""
    bound = bound or EnumerationBound()
    z = zeta_of_set(psi.monoid, psi.carrier, bound)

    def q(pair):
        a, s = pair
        return psi.act(a, s)

    return make_lifting(q, z, psi, bound)


def counit_extension(
    phi: SetMAction, f, s: SetCarrier, bound: EnumerationBound | None = None
) -> Lifting:
    """Extend ``f: S -> X`` to the homomorphism ``<a, s> -> a^phi f(s)``.

    The returned lifting also records the triangle ``fbar(eta s) == f(s)``.
    """
    bound = bound or EnumerationBound()
    fn = _as_function(f)
    z = zeta_of_set(phi.monoid, s, bound)

    def fbar(pair):
        a, x = pair
        return phi.act(a, fn(x))

    one = phi.monoid.identity
    triangle = all(fbar((one, x)) == fn(x) for x in s)
    lifting = make_lifting(fbar, z, phi, bound, triangle_ok=triangle)
    lifting.surjective_on_bound = surjective_on(fbar, z.carrier, phi.carrier)
    return lifting


def verify_extension_uniqueness(
    phi: SetMAction, f, candidate, s: SetCarrier, bound: EnumerationBound | None = None
) -> bool:
    """True iff ``candidate`` agrees with :func:`counit_extension` on every enumerated pair."""
    reference = counit_extension(phi, f, s, bound)
    cand = candidate.map if isinstance(candidate, Lifting) else _as_function(candidate)
    return all(cand(x) == reference.map(x) for x in reference.source.carrier)


def orbit_closure(
    phi: SetMAction,
    seed: Iterable,
    bound: EnumerationBound | None = None,
    strict: bool = False,
    cap: int = DEFAULT_CAP,
) -> frozenset:
    """Smallest invariant superset of ``seed``.

    Closes under the monoid's generators and every enumerated element.  On a
    bounded infinite carrier, points beyond the enumerated prefix are dropped,
    or raise :class:`BoundExceeded` when ``strict``.
    """
    seed = list(seed)
    if not seed:
        raise EmptyCarrier("orbit closure needs a nonempty seed")
    movers = list(dict.fromkeys(phi.monoid.generator_elements() + phi.monoid.enumerate(bound)))
    carrier = phi.carrier
    limit = cap
    if carrier.kind == "open" and bound is not None:
        limit = min(cap, bound.max_elements)
    seen = set()
    queue = deque()
    for x in seed:
        if x not in seen:
            seen.add(x)
            queue.append(x)
    while queue:
        x = queue.popleft()
        for m in movers:
            y = phi.act(m, x)
            if y in seen:
                continue
            if carrier.kind != "open" and y not in carrier:
                if carrier.complete:
                    raise PreconditionViolated(f"action leaves its carrier at {y!r}")
                if strict:
                    raise BoundExceeded(f"orbit leaves the enumerated carrier at {y!r}")
                continue
            seen.add(y)
            if len(seen) > limit:
                raise BoundExceeded(f"orbit closure exceeded {limit} points")
            queue.append(y)
    return frozenset(seen)


def restrict(phi: SetMAction, subset: Iterable) -> SetMAction:
    """Restriction of ``phi`` to an invariant subset, in carrier order when possible."""
    subset = list(subset)
    order = {x: i for i, x in enumerate(phi.carrier.points)}
    subset.sort(key=lambda x: (order.get(x, len(order)), repr(x)))
    return SetMAction(phi.monoid, SetCarrier.finite(subset), phi._rule)


# -- enumeration of all actions on small carriers -------------------------


def all_actions(monoid: Monoid, n: int) -> Iterable[SetMAction]:
    """Every action of ``monoid`` on ``{0, .., n-1}``.

    Supported for finite monoids and for N, Z and free monoids/groups, whose
    actions are free choices of generator images (bijections where inverses
    exist).  Finite tables are searched by backtracking over element images
    with the homomorphism equations checked as soon as they are determined.
    """
    pts = tuple(range(n))
    carrier = SetCarrier.finite(pts)
    all_maps = list(itertools.product(pts, repeat=n))
    perms = [p for p in all_maps if len(set(p)) == n]
    k = monoid.kind
    if k in (Kind.NAT, Kind.INT, Kind.FREE_MONOID, Kind.FREE_GROUP, Kind.CYCLIC):
        invertible = k in (Kind.INT, Kind.FREE_GROUP)
        pool = perms if invertible else all_maps
        if k is Kind.CYCLIC:
            pool = [g for g in all_maps if _power(g, monoid.size) == pts]
        if k in (Kind.NAT, Kind.INT, Kind.CYCLIC):
            keys = [1] if monoid.generators else []
        else:
            keys = [(i + 1,) if invertible else (i,) for i in range(monoid.generators)]
        for choice in itertools.product(pool, repeat=len(keys)):
            table = {g: dict(enumerate(img)) for g, img in zip(keys, choice)}
            if k is Kind.CYCLIC and not keys:
                yield SetMAction.trivial(monoid, carrier)
                continue
            if k is Kind.CYCLIC:
                yield _cyclic_action(monoid, carrier, choice[0])
                continue
            yield SetMAction.from_table(monoid, carrier, table)
        return
    yield from _finite_table_actions(monoid, carrier, all_maps)


def _power(g: tuple, e: int) -> tuple:
    out = tuple(range(len(g)))
    for _ in range(e):
        out = tuple(g[i] for i in out)
    return out


def _cyclic_action(monoid: Monoid, carrier: SetCarrier, g: tuple) -> SetMAction:
    powers = [_power(g, e) for e in range(monoid.size)]
    return SetMAction(monoid, carrier, lambda m, x: powers[m][x])


def _generation_order(monoid: Monoid) -> list:
    """Non-identity elements, generators first, then each element after factors of it."""
    t = monoid.table
    one = monoid.identity
    rest = [e for e in monoid.enumerate() if e != one]
    products = {t[a][b] for a in rest for b in rest}
    gens = [e for e in rest if e not in products]
    order = list(gens)
    reached = {one, *gens}
    while len(reached) < monoid.size:
        grew = True
        while grew:
            grew = False
            for a in list(reached):
                for b in list(reached):
                    c = t[a][b]
                    if c not in reached:
                        reached.add(c)
                        order.append(c)
                        grew = True
        if len(reached) < monoid.size:
            extra = next(e for e in rest if e not in reached)
            reached.add(extra)
            order.append(extra)
    return order


def _finite_table_actions(monoid: Monoid, carrier: SetCarrier, all_maps: list):
    n = len(carrier)
    t = monoid.table
    one = monoid.identity
    elems = _generation_order(monoid)
    ident = tuple(range(n))
    assigned: dict = {one: ident}

    def compose(a, b):  # a after b
        return tuple(a[b[i]] for i in range(n))

    def forced(e):
        for a in assigned:
            for b in assigned:
                if t[a][b] == e:
                    return compose(assigned[a], assigned[b])
        return None

    def power_relation(e):
        # smallest i < j with e^i == e^j, as a filter on candidate images
        seen = {one: 0}
        x, k = one, 0
        while True:
            x, k = t[e][x], k + 1
            if x in seen:
                return seen[x], k
            seen[x] = k

    def power(img, k):
        out = ident
        for _ in range(k):
            out = compose(img, out)
        return out

    def ok(e) -> bool:
        for a in assigned:
            for b in (e, a) if a != e else (e,):
                for x, y in ((a, b), (b, a)):
                    c = t[x][y]
                    if c in assigned and assigned[c] != compose(assigned[x], assigned[y]):
                        return False
        img = assigned[e]
        for a in assigned:
            for b in assigned:
                if t[a][b] == e and compose(assigned[a], assigned[b]) != img:
                    return False
        return True

    def search(i):
        if i == len(elems):
            snapshot = dict(assigned)
            yield SetMAction(monoid, carrier, lambda m, x, s=snapshot: s[m][x])
            return
        e = elems[i]
        f = forced(e)
        if f is not None:
            options = [f]
        else:
            lo, hi = power_relation(e)
            options = [g for g in all_maps if power(g, lo) == power(g, hi)]
        for img in options:
            assigned[e] = img
            if ok(e):
                yield from search(i + 1)
            del assigned[e]

    yield from search(0)
