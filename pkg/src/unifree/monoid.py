"""Exact monoids: finite tables and a few countable kinds with canonical forms.

Element handles are plain Python values so that equality of handles is
equality in the monoid:

* ``finite_table`` and ``cyclic``: ``int`` index into the carrier
* ``nat_additive`` / ``int_additive``: ``int``
* ``free_monoid``: ``tuple`` of generator indices ``0..k-1``
* ``free_group``: freely reduced ``tuple`` of nonzero ints, ``+(i+1)`` for the
  i-th generator and ``-(i+1)`` for its inverse

Countable kinds are enumerated in length-then-lexicographic order and cut
off by an :class:`EnumerationBound`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Hashable, Iterator, Sequence

from .errors import ElementNotInMonoid, InputError

Element = Hashable

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class Kind(str, Enum):
    FINITE_TABLE = "finite_table"
    NAT = "nat_additive"
    INT = "int_additive"
    CYCLIC = "cyclic"
    FREE_MONOID = "free_monoid"
    FREE_GROUP = "free_group"


WORD_KINDS = (Kind.NAT, Kind.INT, Kind.FREE_MONOID, Kind.FREE_GROUP)


@dataclass(frozen=True)
class EnumerationBound:
    max_elements: int = 64
    max_word_length: int | None = None

    def __post_init__(self):
        if self.max_elements < 1:
            raise InputError("max_elements must be positive")
        if self.max_word_length is not None and self.max_word_length < 0:
            raise InputError("max_word_length must be non-negative")


@dataclass(frozen=True)
class AxiomReport:
    associative: bool
    identity: bool
    complete: bool
    failures: tuple = ()

    @property
    def passed(self) -> bool:
        return self.associative and self.identity


def reduce_group_word(word: Sequence[int]) -> tuple:
    """Free reduction by a single left-to-right stack pass."""
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


@dataclass(frozen=True)
class Monoid:
    kind: Kind
    size: int | None = None
    generators: int = 0
    table: tuple | None = field(default=None, repr=False)
    identity_index: int = 0
    name: str | None = None

    # -- constructors -------------------------------------------------

    @classmethod
    def finite_table(cls, table, identity: int = 0, name: str | None = None) -> "Monoid":
        rows = tuple(tuple(int(v) for v in row) for row in table)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise InputError("multiplication table must be a non-empty square")
        if any(not 0 <= v < n for r in rows for v in r):
            raise InputError("table entries must index the carrier")
        if not 0 <= identity < n:
            raise InputError("identity index out of range")
        return cls(Kind.FINITE_TABLE, size=n, table=rows, identity_index=identity, name=name)

    @classmethod
    def trivial(cls) -> "Monoid":
        return cls.finite_table([[0]], name="1")

    @classmethod
    def cyclic(cls, n: int) -> "Monoid":
        if n < 1:
            raise InputError("cyclic order must be positive")
        return cls(Kind.CYCLIC, size=n, generators=1 if n > 1 else 0, name=f"Z{n}")

    @classmethod
    def naturals(cls) -> "Monoid":
        return cls(Kind.NAT, generators=1, name="N")

    @classmethod
    def integers(cls) -> "Monoid":
        return cls(Kind.INT, generators=1, name="Z")

    @classmethod
    def free_monoid(cls, k: int) -> "Monoid":
        if not 0 <= k <= len(_LETTERS):
            raise InputError("free monoid rank out of range")
        return cls(Kind.FREE_MONOID, generators=k, name=f"Free{k}")

    @classmethod
    def free_group(cls, k: int) -> "Monoid":
        if not 0 <= k <= len(_LETTERS):
            raise InputError("free group rank out of range")
        return cls(Kind.FREE_GROUP, generators=k, name=f"FreeGroup{k}")

    # -- basic structure ----------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind in (Kind.FINITE_TABLE, Kind.CYCLIC) or (
            self.kind in (Kind.FREE_MONOID, Kind.FREE_GROUP) and self.generators == 0
        )

    @property
    def identity(self) -> Element:
        if self.kind is Kind.FINITE_TABLE:
            return self.identity_index
        if self.kind in (Kind.FREE_MONOID, Kind.FREE_GROUP):
            return ()
        return 0

    def __contains__(self, a) -> bool:
        k = self.kind
        if k in (Kind.FINITE_TABLE, Kind.CYCLIC):
            return type(a) is int and 0 <= a < self.size
        if k is Kind.NAT:
            return type(a) is int and a >= 0
        if k is Kind.INT:
            return type(a) is int
        if not isinstance(a, tuple):
            return False
        if k is Kind.FREE_MONOID:
            return all(type(x) is int and 0 <= x < self.generators for x in a)
        return (
            all(type(x) is int and x != 0 and abs(x) <= self.generators for x in a)
            and reduce_group_word(a) == a
        )

    def check(self, a) -> Element:
        if a not in self:
            raise ElementNotInMonoid(f"{a!r} is not an element of {self}")
        return a

    def multiply(self, a, b) -> Element:
        self.check(a)
        self.check(b)
        k = self.kind
        if k is Kind.FINITE_TABLE:
            return self.table[a][b]
        if k is Kind.CYCLIC:
            return (a + b) % self.size
        if k in (Kind.NAT, Kind.INT):
            return a + b
        if k is Kind.FREE_MONOID:
            return a + b
        return reduce_group_word(a + b)

    def product(self, elements) -> Element:
        acc = self.identity
        for e in elements:
            acc = self.multiply(acc, e)
        return acc

    def generator_elements(self) -> list:
        """A generating set; for finite tables every non-identity element."""
        k = self.kind
        if k is Kind.FINITE_TABLE:
            return [i for i in range(self.size) if i != self.identity_index]
        if k is Kind.CYCLIC:
            return [1] if self.size > 1 else []
        if k is Kind.NAT:
            return [1]
        if k is Kind.INT:
            return [1, -1]
        if k is Kind.FREE_MONOID:
            return [(i,) for i in range(self.generators)]
        return [(s * (i + 1),) for i in range(self.generators) for s in (1, -1)]

    def factor(self, a) -> list:
        """Write ``a`` as a product of :meth:`generator_elements`, left to right."""
        self.check(a)
        k = self.kind
        if k is Kind.FINITE_TABLE:
            return [] if a == self.identity_index else [a]
        if k in (Kind.CYCLIC, Kind.NAT):
            return [1] * a
        if k is Kind.INT:
            return [1] * a if a >= 0 else [-1] * (-a)
        return [(x,) for x in a]

    # -- enumeration --------------------------------------------------

    def _letters(self) -> list:
        if self.kind is Kind.FREE_MONOID:
            return list(range(self.generators))
        return [s * (i + 1) for i in range(self.generators) for s in (1, -1)]

    def _words(self, max_len: int | None) -> Iterator[tuple]:
        letters = self._letters()
        length = 0
        while max_len is None or length <= max_len:
            emitted = False
            for w in itertools.product(letters, repeat=length):
                if self.kind is Kind.FREE_GROUP and reduce_group_word(w) != w:
                    continue
                emitted = True
                yield w
            if not emitted or not letters:
                return
            length += 1

    def enumerate(self, bound: EnumerationBound | None = None) -> list:
        bound = bound or EnumerationBound()
        k = self.kind
        if k is Kind.FINITE_TABLE:
            rest = [i for i in range(self.size) if i != self.identity_index]
            return [self.identity_index] + rest
        if k is Kind.CYCLIC:
            return list(range(self.size))
        cap, max_len = bound.max_elements, bound.max_word_length
        if k is Kind.NAT:
            top = cap if max_len is None else min(cap, max_len + 1)
            return list(range(top))
        if k is Kind.INT:
            out = [0]
            n = 1
            while len(out) < cap and (max_len is None or n <= max_len):
                out.extend((n, -n))
                n += 1
            return out[:cap]
        return list(itertools.islice(self._words(max_len), cap))

    # -- presentation -------------------------------------------------

    def format(self, a) -> str:
        k = self.kind
        if k in (Kind.FREE_MONOID, Kind.FREE_GROUP):
            if a == ():
                return "1"
            if k is Kind.FREE_MONOID:
                return "".join(_LETTERS[x] for x in a)
            return "".join(
                _LETTERS[x - 1] if x > 0 else _LETTERS[-x - 1].upper() for x in a
            )
        return str(a)

    def parse(self, text) -> Element:
        k = self.kind
        if k in (Kind.FREE_MONOID, Kind.FREE_GROUP):
            text = str(text)
            if text in ("", "1"):
                return ()
            word = []
            for ch in text:
                idx = _LETTERS.find(ch.lower())
                if idx < 0 or idx >= self.generators:
                    raise ElementNotInMonoid(f"bad letter {ch!r} for {self}")
                if k is Kind.FREE_MONOID:
                    if ch.isupper():
                        raise ElementNotInMonoid(f"no inverses in {self}")
                    word.append(idx)
                else:
                    word.append(-(idx + 1) if ch.isupper() else idx + 1)
            return reduce_group_word(word) if k is Kind.FREE_GROUP else tuple(word)
        try:
            value = int(text)
        except (TypeError, ValueError):
            raise ElementNotInMonoid(f"cannot parse {text!r} as element of {self}") from None
        return self.check(value)

    def to_json(self) -> dict:
        k = self.kind
        if k is Kind.FINITE_TABLE:
            return {
                "kind": k.value,
                "size": self.size,
                "table": [list(r) for r in self.table],
                "identity": self.identity_index,
                "name": self.name,
            }
        if k is Kind.CYCLIC:
            return {"kind": k.value, "n": self.size}
        if k in (Kind.FREE_MONOID, Kind.FREE_GROUP):
            return {"kind": k.value, "generators": self.generators}
        return {"kind": k.value}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Monoid":
        try:
            kind = Kind(data["kind"])
        except (KeyError, ValueError, TypeError):
            raise InputError(f"unknown monoid description {data!r}") from None
        try:
            if kind is Kind.FINITE_TABLE:
                table = data["table"]
                if "size" in data and data["size"] != len(table):
                    raise InputError("size does not match table")
                return cls.finite_table(table, data.get("identity", 0), data.get("name"))
            if kind is Kind.CYCLIC:
                return cls.cyclic(int(data["n"]))
            if kind is Kind.NAT:
                return cls.naturals()
            if kind is Kind.INT:
                return cls.integers()
            if kind is Kind.FREE_MONOID:
                return cls.free_monoid(int(data["generators"]))
            return cls.free_group(int(data["generators"]))
        except KeyError as exc:
            raise InputError(f"monoid description missing field {exc}") from None

    def __str__(self):
        return self.name or self.kind.value


_NAMED = {
    "trivial": Monoid.trivial,
    "N": Monoid.naturals,
    "nat": Monoid.naturals,
    "Z": Monoid.integers,
    "int": Monoid.integers,
}


def monoid_by_name(name: str) -> Monoid:
    """``trivial``, ``N``, ``Z``, ``Z<n>``, ``free<k>``, ``freegroup<k>``."""
    if name in _NAMED:
        return _NAMED[name]()
    lowered = name.lower()
    for prefix, ctor in (("freegroup", Monoid.free_group), ("free", Monoid.free_monoid)):
        if lowered.startswith(prefix) and lowered[len(prefix):].isdigit():
            return ctor(int(lowered[len(prefix):]))
    if name[:1] == "Z" and name[1:].isdigit():
        return Monoid.cyclic(int(name[1:]))
    raise InputError(f"unknown monoid name {name!r}")


def check_monoid_axioms(m: Monoid, bound: EnumerationBound | None = None) -> AxiomReport:
    """Evaluate associativity and the identity law on enumerated elements.

    Only finite tables get an exhaustive (``complete``) verdict.  Failures are
    collected, not raised.
    """
    elems = m.enumerate(bound)
    one = m.identity
    failures = []
    identity_ok = True
    for a in elems:
        left, right = m.multiply(one, a), m.multiply(a, one)
        if left != a or right != a:
            identity_ok = False
            failures.append(("identity", a, left, right))
    assoc_ok = True
    for a, b, c in itertools.product(elems, repeat=3):
        lhs = m.multiply(m.multiply(a, b), c)
        rhs = m.multiply(a, m.multiply(b, c))
        if lhs != rhs:
            assoc_ok = False
            failures.append(("associativity", (a, b, c), lhs, rhs))
    complete = m.kind in (Kind.FINITE_TABLE, Kind.CYCLIC) or m.is_finite
    return AxiomReport(assoc_ok, identity_ok, complete, tuple(failures))


def _canonical_table(table: list[list[int]]) -> tuple:
    n = len(table)
    best = None
    for perm in itertools.permutations(range(1, n)):
        p = (0,) + perm
        inv = [0] * n
        for i, v in enumerate(p):
            inv[v] = i
        relabelled = tuple(
            tuple(p[table[inv[i]][inv[j]]] for j in range(n)) for i in range(n)
        )
        if best is None or relabelled < best:
            best = relabelled
    return best


def small_monoids(order: int) -> list[Monoid]:
    """All monoids of the given order up to isomorphism, identity at index 0.

    Backtracking fill of the table with associativity checked as soon as the
    three products involved are known.
    """
    if order < 1:
        return []
    n = order
    table = [[-1] * n for _ in range(n)]
    for i in range(n):
        table[0][i] = i
        table[i][0] = i
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]
    found: set = set()

    def consistent() -> bool:
        for a in range(1, n):
            for b in range(1, n):
                ab = table[a][b]
                if ab < 0:
                    continue
                for c in range(1, n):
                    bc = table[b][c]
                    if bc < 0:
                        continue
                    lhs = table[ab][c]
                    rhs = table[a][bc]
                    if lhs >= 0 and rhs >= 0 and lhs != rhs:
                        return False
        return True

    def fill(k: int):
        if k == len(cells):
            found.add(_canonical_table(table))
            return
        i, j = cells[k]
        for v in range(n):
            table[i][j] = v
            if consistent():
                fill(k + 1)
        table[i][j] = -1

    fill(0)
    return [
        Monoid.finite_table(t, 0, name=f"M{n}.{idx}") for idx, t in enumerate(sorted(found))
    ]
