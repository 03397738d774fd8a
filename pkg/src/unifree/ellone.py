"""Exact finitely supported l1 vectors, basic operators and their liftings.

Everything here is exact rational arithmetic (``fractions.Fraction``); there
is no floating point.  Target spaces are ``Q^d`` with the l1 norm, where the
operator norm of a matrix is its largest column l1 norm.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import IndexOutOfDomain, InputError, NotInUnitBall, SquareDoesNotCommuteAtSetLevel
from .funcgraph import lift_finite_map_to_nu, nu


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass ints, Fractions or 'p/q' strings")
    return Fraction(x)


class SparseVec:
    """Finitely supported vector ``label -> Fraction``; zero entries are dropped."""

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Mapping | Iterable = ()):
        acc: dict = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for k, v in items:
            v = to_fraction(v)
            if v:
                total = acc.get(k, 0) + v
                if total:
                    acc[k] = total
                else:
                    acc.pop(k, None)
        self._entries = acc
        self._hash = None

    @classmethod
    def basis(cls, label) -> "SparseVec":
        return cls({label: 1})

    def __getitem__(self, k) -> Fraction:
        return self._entries.get(k, Fraction(0))

    def items(self):
        return self._entries.items()

    def support(self) -> frozenset:
        return frozenset(self._entries)

    def norm1(self) -> Fraction:
        return sum((abs(v) for v in self._entries.values()), Fraction(0))

    def __add__(self, other: "SparseVec") -> "SparseVec":
        return SparseVec(list(self.items()) + list(other.items()))

    def __sub__(self, other: "SparseVec") -> "SparseVec":
        return self + (-1) * other

    def __rmul__(self, c) -> "SparseVec":
        c = to_fraction(c)
        return SparseVec({k: c * v for k, v in self.items()})

    def __neg__(self):
        return (-1) * self

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseVec) and self._entries == other._entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __bool__(self):
        return bool(self._entries)

    def __len__(self):
        return len(self._entries)

    def __repr__(self):
        inner = ", ".join(f"{k!r}: {v}" for k, v in self.items())
        return f"SparseVec({{{inner}}})"

    def to_json(self, label=str) -> dict:
        return {label(k): str(v) for k, v in sorted(self.items(), key=lambda kv: repr(kv[0]))}


def apply_basic(phi, v: SparseVec) -> SparseVec:
    """Linear extension of ``e_s -> e_{phi(s)}``; coefficients with equal images merge."""
    lookup = phi if callable(phi) else None
    out = []
    for s, c in v.items():
        if lookup is None:
            if s not in phi:
                raise IndexOutOfDomain(s)
            t = phi[s]
        else:
            t = lookup(s)
        out.append((t, c))
    return SparseVec(out)


@dataclass(frozen=True)
class BasicOperator:
    phi: Any  # callable or mapping on basis labels

    def __call__(self, v: SparseVec) -> SparseVec:
        return apply_basic(self.phi, v)

    def on_basis(self, s):
        return self.phi(s) if callable(self.phi) else self.phi[s]


# -- dense rational linear algebra -----------------------------------------


Vector = tuple  # of Fractions


def vec(xs: Iterable) -> Vector:
    return tuple(to_fraction(x) for x in xs)


def norm1(v: Sequence[Fraction]) -> Fraction:
    return sum((abs(x) for x in v), Fraction(0))


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank by Gaussian elimination over Q."""
    rows = [list(map(to_fraction, r)) for r in vectors]
    if not rows:
        return 0
    r, ncols = 0, len(rows[0])
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c] / rows[r][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


@dataclass(frozen=True)
class RationalTarget:
    """A non-expansive operator on ``(Q^d, l1)`` given by a square matrix."""

    matrix: tuple  # rows of Fractions

    def __post_init__(self):
        d = len(self.matrix)
        if d == 0 or any(len(r) != d for r in self.matrix):
            raise InputError("target operator must be a non-empty square matrix")
        if self.operator_norm() > 1:
            raise InputError(f"operator norm {self.operator_norm()} exceeds 1")

    @classmethod
    def from_rows(cls, rows) -> "RationalTarget":
        return cls(tuple(vec(r) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def operator_norm(self) -> Fraction:
        d = len(self.matrix)
        return max(norm1([self.matrix[i][j] for i in range(d)]) for j in range(d))

    def __call__(self, x: Vector) -> Vector:
        return tuple(sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in self.matrix)

    def to_json(self) -> list:
        return [[str(x) for x in row] for row in self.matrix]


def combine(columns: Mapping, v: SparseVec, dim: int) -> Vector:
    """``sum_s v(s) * columns[s]`` in ``Q^dim``."""
    out = [Fraction(0)] * dim
    for s, c in v.items():
        col = columns(s) if callable(columns) else columns[s]
        for i in range(dim):
            out[i] += c * col[i]
    return tuple(out)


def in_unit_ball(x: Vector) -> bool:
    return norm1(x) <= 1


# -- liftings ---------------------------------------------------------------


@dataclass
class TargetLifting:
    """``q: l1(S') -> Q^d`` with ``q(e_s) = s`` and ``T = l1(f restricted to S')``."""

    target: RationalTarget
    points: list  # S', the closure in order of discovery
    truncated: bool
    T: BasicOperator
    certificate: list  # (s, f(q e_s), q(T e_s))
    surjective: bool
    nonexpansive: bool

    def q(self, v: SparseVec) -> Vector:
        return combine(lambda s: s, v, self.target.dim)

    @property
    def passes(self) -> bool:
        return self.surjective and self.nonexpansive and all(a == b for _, a, b in self.certificate)


def closure_under(f: Callable, seed: Sequence, depth: int) -> tuple[list, bool]:
    """Points reachable from ``seed`` in at most ``depth`` steps; flag set if not closed."""
    points = list(dict.fromkeys(seed))
    seen = set(points)
    frontier = list(points)
    for _ in range(depth):
        nxt = []
        for x in frontier:
            y = f(x)
            if y not in seen:
                seen.add(y)
                points.append(y)
                nxt.append(y)
        frontier = nxt
        if not frontier:
            return points, False
    truncated = any(f(x) not in seen for x in frontier)
    return points, truncated


def lift_target_operator(target: RationalTarget, seed: Sequence, depth: int = 8) -> TargetLifting:
    """Lift ``target`` to the basic operator ``l1(f)`` on the closure of ``seed``.

    Basis labels of ``l1(S')`` are the points of ``S'`` themselves, so
    ``T e_s = e_{f(s)}`` is defined even for points at the truncation edge.
    Surjectivity is exact: the points of ``S'`` must span ``Q^d``.
    """
    seed = [vec(s) for s in seed]
    if not seed:
        raise InputError("seed must be nonempty")
    for s in seed:
        if len(s) != target.dim:
            raise InputError("seed point has wrong dimension")
        if not in_unit_ball(s):
            raise NotInUnitBall(f"{s} has l1 norm {norm1(s)} > 1")
    points, truncated = closure_under(target, seed, depth)
    T = BasicOperator(target)
    cert = []
    for s in points:
        e = SparseVec.basis(s)
        lhs = target(combine(lambda x: x, e, target.dim))
        rhs = combine(lambda x: x, T(e), target.dim)
        cert.append((s, lhs, rhs))
    surj = rank(points) == target.dim
    nonexp = all(norm1(s) <= 1 for s in points)
    return TargetLifting(target, points, truncated, T, cert, surj, nonexp)


@dataclass
class SquareCertificate:
    basis_checks: list
    sample_checks: list
    norm_checks: list
    section_checks: list
    norm_one: bool

    @property
    def passes(self) -> bool:
        return (
            self.norm_one
            and all(a == b for _, a, b in self.basis_checks)
            and all(a == b for _, a, b in self.sample_checks)
            and all(ok for _, ok in self.norm_checks)
            and all(a == b for _, a, b in self.section_checks)
        )


def _random_combination(rng: random.Random, labels: Sequence, max_support: int = 4) -> SparseVec:
    k = rng.randint(1, min(max_support, len(labels)))
    chosen = rng.sample(list(labels), k)
    return SparseVec({s: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for s in chosen})


def functor_square(
    p: Callable,
    g: Callable,
    f: Callable,
    domain: Sequence,
    samples: int = 20,
    seed: int = 0,
) -> SquareCertificate:
    """Certify ``l1(p) l1(g) = l1(f) l1(p)`` and that ``l1(p)`` is a norm-one projection.

    ``domain`` enumerates the points of ``T`` to check.  The set-level square
    ``p g = f p`` is checked first.
    """
    domain = list(domain)
    for t in domain:
        if p(g(t)) != f(p(t)):
            raise SquareDoesNotCommuteAtSetLevel(f"p(g({t!r})) != f(p({t!r}))")
    L_p, L_g, L_f = BasicOperator(p), BasicOperator(g), BasicOperator(f)
    basis = []
    for t in domain:
        e = SparseVec.basis(t)
        basis.append((t, L_p(L_g(e)), L_f(L_p(e))))
    rng = random.Random(seed)
    sampled, norms = [], []
    for _ in range(samples):
        v = _random_combination(rng, domain)
        sampled.append((v, L_p(L_g(v)), L_f(L_p(v))))
        norms.append((v, L_p(v).norm1() <= v.norm1()))
        pos = SparseVec({s: abs(c) for s, c in v.items()})
        norms.append((pos, L_p(pos).norm1() == pos.norm1()))
    # a section of p on the image: first preimage in domain order
    section = {}
    for t in domain:
        section.setdefault(p(t), t)
    sec = []
    for s, t in section.items():
        e = SparseVec.basis(s)
        sec.append((s, L_p(BasicOperator(section)(e)), e))
    norm_one = bool(domain) and all(L_p(SparseVec.basis(t)).norm1() == 1 for t in domain)
    return SquareCertificate(basis, sampled, norms, sec, norm_one)


def universal_operator_nu(bound: int | None = None) -> BasicOperator:
    """``l1(nu)`` on basis labels ``(m, n)``; ``bound`` is advisory only."""
    return BasicOperator(nu)


@dataclass
class NuOperatorLifting:
    """``Q = q o l1(p)``: ``l1(N x N) -> l1(S') -> Q^d`` with ``f Q = Q l1(nu)``."""

    target: RationalTarget
    seed: list
    depth: int
    columns: dict  # (m, n) -> point of Q^d
    target_lifting: TargetLifting
    square: SquareCertificate
    direct_checks: list
    rank: int
    column_norms_ok: bool
    extras: dict = field(default_factory=dict)

    def Q(self, v: SparseVec) -> Vector:
        return combine(self.columns, v, self.target.dim)

    @property
    def surjective(self) -> bool:
        return self.rank == self.target.dim

    @property
    def passes(self) -> bool:
        return (
            self.surjective
            and self.column_norms_ok
            and self.square.passes
            and self.target_lifting.passes
            and all(a == b for _, a, b in self.direct_checks)
        )

    def to_json(self) -> dict:
        return {
            "target": self.target.to_json(),
            "seed": [[str(x) for x in s] for s in self.seed],
            "depth": self.depth,
            "columns": {
                f"{m},{n}": [str(x) for x in col] for (m, n), col in sorted(self.columns.items())
            },
            "rank": self.rank,
            "surjective": self.surjective,
            "column_norms_ok": self.column_norms_ok,
            "square_passes": self.square.passes,
            "closure_truncated": self.target_lifting.truncated,
            "passes": self.passes,
        }


def lift_through_nu(
    target: RationalTarget, seed: Sequence, depth: int = 6, samples: int = 20, rng_seed: int = 0
) -> NuOperatorLifting:
    """Lift a non-expansive ``f`` on ``Q^d`` to ``l1(nu)``.

    ``p<m, n> = f^m(s_n)`` comes from the set-level lift to nu; ``q(e_s) = s``
    from :func:`lift_target_operator`.  The composite is checked on its own
    (``f Q e = Q l1(nu) e`` on all basis vectors with ``m < depth`` plus random
    combinations) besides the two factor certificates.
    """
    seed_pts = [vec(s) for s in seed]
    tl = lift_target_operator(target, seed_pts, depth)
    nl = lift_finite_map_to_nu(seed_pts, target, depth + 1)
    domain = [(m, n) for m in range(depth) for n in range(len(seed_pts))]

    def p(pair):
        m, n = pair
        if (m, n) in nl.table:
            return nl.table[(m, n)]
        x = seed_pts[n]
        for _ in range(m):
            x = target(x)
        return x

    square = functor_square(p, nu, target, domain, samples=samples, seed=rng_seed)
    columns = {mn: p(mn) for mn in domain}
    columns.update({nu(mn): p(nu(mn)) for mn in domain})
    L_nu = universal_operator_nu()
    direct = []
    for mn in domain:
        e = SparseVec.basis(mn)
        direct.append((mn, target(combine(columns, e, target.dim)), combine(columns, L_nu(e), target.dim)))
    rng = random.Random(rng_seed)
    for _ in range(samples):
        v = _random_combination(rng, domain)
        direct.append((v, target(combine(columns, v, target.dim)), combine(columns, L_nu(v), target.dim)))
    r = rank(list(columns.values()))
    norms_ok = all(norm1(c) <= 1 for c in columns.values())
    return NuOperatorLifting(target, seed_pts, depth, columns, tl, square, direct, r, norms_ok)


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational: {text!r}") from None
    raise InputError(f"rationals must be ints or 'p/q' strings, got {text!r}")
