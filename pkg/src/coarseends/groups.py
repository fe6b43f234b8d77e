"""Countable groups presented as computable oracles.

A group is given by identity, multiplication, inversion and a weighted,
symmetric generator list. Elements are kept in a canonical hashable form at
all times (ints, tuples, strings, Fractions), so equality and dict lookup
are exact. Infinitely generated groups expose a generator *stream*: callers
ask for the generators of weight up to some cap and can query whether
heavier generators exist beyond it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Iterable

Element = Any


class GroupOracle:
    """Base class for group oracles.

    Subclasses must set ``name`` and implement the four group operations
    plus the generator stream. ``locally_finite`` marks groups in which
    every finite subset generates a finite subgroup; the ends machinery
    reads components of such groups through hops bounded by the lightest
    generator (see ``ends_defaults``).
    """

    name: str = "?"
    locally_finite: bool = False

    @property
    def identity(self) -> Element:
        raise NotImplementedError

    def multiply(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inverse(self, a: Element) -> Element:
        raise NotImplementedError

    def canonical(self, a: Element) -> Element:
        """Return the canonical (hashable) form of ``a``.

        All shipped oracles keep elements canonical at all times, so the
        default is the identity map; a subclass with redundant internal
        representations would normalize here.
        """
        return a

    def generators_within(self, cap: int) -> list[tuple[Element, int]]:
        """Symmetric list of (generator, weight) with weight <= cap."""
        raise NotImplementedError

    def has_generators_beyond(self, cap: int) -> bool:
        """True if the stream continues past weight ``cap``."""
        raise NotImplementedError

    def serialize(self, a: Element) -> str:
        """Stable string form of an element, used in reports and ordering."""
        return str(a)

    def ends_defaults(self) -> dict:
        """Default parameters for the component-tree pipeline."""
        return {
            "radii": list(range(1, 21)),
            "horizon_factor": 3,
            "window_w": 5,
            "step_cap": None,
        }

    # -- convenience -------------------------------------------------

    def conjugate_free_sanity(self, g: Element) -> None:
        """Cheap self-check used by tests: g * g^-1 == identity."""
        if self.canonical(self.multiply(g, self.inverse(g))) != self.canonical(self.identity):
            raise ValueError(f"inverse law fails for {self.serialize(g)}")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


def _symmetrize(pairs: Iterable[tuple[Element, int]], group: "GroupOracle") -> list[tuple[Element, int]]:
    """Close a generator list under inversion, dropping identity and dups."""
    seen: dict[Element, int] = {}
    for g, w in pairs:
        if w < 1:
            raise ValueError(f"generator weight must be >= 1, got {w}")
        for h in (group.canonical(g), group.canonical(group.inverse(g))):
            if h == group.canonical(group.identity):
                continue
            if h in seen:
                seen[h] = min(seen[h], w)
            else:
                seen[h] = w
    return sorted(seen.items(), key=lambda gw: (gw[1], group.serialize(gw[0])))


class IntLine(GroupOracle):
    """The integers under addition, with configurable weighted step sizes.

    ``steps`` is a sequence of (step, weight) pairs; each contributes the
    generators +step and -step at that weight. The default is the unit
    generating set {+1, -1}.
    """

    def __init__(self, steps: tuple[tuple[int, int], ...] = ((1, 1),), name: str | None = None):
        for s, w in steps:
            if s <= 0 or w <= 0:
                raise ValueError(f"steps need positive step and weight, got ({s}, {w})")
        self.steps = tuple(steps)
        if name is not None:
            self.name = name
        elif steps == ((1, 1),):
            self.name = "Z"
        else:
            self.name = "Z[" + ",".join(f"{s}:{w}" for s, w in steps) + "]"

    @property
    def identity(self) -> int:
        return 0

    def multiply(self, a: int, b: int) -> int:
        return a + b

    def inverse(self, a: int) -> int:
        return -a

    def generators_within(self, cap: int) -> list[tuple[int, int]]:
        return _symmetrize(((s, w) for s, w in self.steps if w <= cap), self)

    def has_generators_beyond(self, cap: int) -> bool:
        return any(w > cap for _, w in self.steps)


class IntLattice(GroupOracle):
    """Z^n with the standard unit generators along each axis."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("lattice rank must be >= 1")
        self.n = n
        self.name = f"Z^{n}"

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.n

    def multiply(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inverse(self, a):
        return tuple(-x for x in a)

    def generators_within(self, cap: int) -> list:
        if cap < 1:
            return []
        gens = []
        for i in range(self.n):
            e = tuple(1 if j == i else 0 for j in range(self.n))
            gens.append((e, 1))
        return _symmetrize(gens, self)

    def has_generators_beyond(self, cap: int) -> bool:
        return False

    def ends_defaults(self) -> dict:
        d = super().ends_defaults()
        if self.n >= 3:
            d["radii"] = list(range(1, 11))
        return d


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class FreeGroup(GroupOracle):
    """Free group of finite rank, elements as reduced words.

    A word is a string over a..z (generators) and A..Z (their inverses);
    the empty string is the identity. Multiplication cancels at the
    junction only, which preserves reducedness.
    """

    def __init__(self, rank: int = 2):
        if not 1 <= rank <= 26:
            raise ValueError("rank must be between 1 and 26")
        self.rank = rank
        self.name = f"F{rank}"
        self._letters = _LETTERS[:rank] + _LETTERS[:rank].upper()

    @property
    def identity(self) -> str:
        return ""

    def multiply(self, a: str, b: str) -> str:
        i = len(a)
        j = 0
        while i > 0 and j < len(b) and a[i - 1] == b[j].swapcase():
            i -= 1
            j += 1
        return a[:i] + b[j:]

    def inverse(self, a: str) -> str:
        return a[::-1].swapcase()

    def generators_within(self, cap: int) -> list:
        if cap < 1:
            return []
        return _symmetrize(((c, 1) for c in self._letters[: self.rank]), self)

    def has_generators_beyond(self, cap: int) -> bool:
        return False

    def serialize(self, a: str) -> str:
        return a if a else "e"

    def ends_defaults(self) -> dict:
        return {
            "radii": list(range(1, 7)),
            "horizon_factor": 2,
            "window_w": 5,
            "step_cap": None,
        }

    def enumerate_ball(self, radius: int, memory_cap: int) -> dict[str, int]:
        """Direct reduced-word enumeration; every word is unique, so no
        dedup pass is needed. Only valid for the standard generators."""
        from .errors import BallTooLarge

        norms = {"": 0}
        frontier = [""]
        for r in range(1, radius + 1):
            nxt = []
            for w in frontier:
                last = w[-1] if w else ""
                for c in self._letters:
                    if last and c == last.swapcase():
                        continue
                    nxt.append(w + c)
            if len(norms) + len(nxt) > memory_cap:
                raise BallTooLarge(radius_reached=r - 1, cap=memory_cap)
            for w in nxt:
                norms[w] = r
            frontier = nxt
        return norms


class CyclicGroup(GroupOracle):
    """Z/m under addition mod m, generated by +-1 at unit weight."""

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("modulus must be >= 2")
        self.m = m
        self.name = f"Z/{m}"

    @property
    def identity(self) -> int:
        return 0

    def multiply(self, a: int, b: int) -> int:
        return (a + b) % self.m

    def inverse(self, a: int) -> int:
        return (-a) % self.m

    def canonical(self, a: int) -> int:
        return a % self.m

    def generators_within(self, cap: int) -> list:
        if cap < 1:
            return []
        return _symmetrize([(1, 1)], self)

    def has_generators_beyond(self, cap: int) -> bool:
        return False

    def ends_defaults(self) -> dict:
        d = super().ends_defaults()
        d["radii"] = list(range(1, 13))
        return d


class DirectProduct(GroupOracle):
    """Direct product of finitely many oracles; elements are tuples."""

    def __init__(self, *factors: GroupOracle, name: str | None = None):
        if not factors:
            raise ValueError("need at least one factor")
        self.factors = factors
        self.name = name or "x".join(f.name for f in factors)
        self.locally_finite = all(f.locally_finite for f in factors)

    @property
    def identity(self):
        return tuple(f.identity for f in self.factors)

    def multiply(self, a, b):
        return tuple(f.multiply(x, y) for f, x, y in zip(self.factors, a, b))

    def inverse(self, a):
        return tuple(f.inverse(x) for f, x in zip(self.factors, a))

    def canonical(self, a):
        return tuple(f.canonical(x) for f, x in zip(self.factors, a))

    def generators_within(self, cap: int) -> list:
        gens = []
        for i, f in enumerate(self.factors):
            for g, w in f.generators_within(cap):
                e = list(self.identity)
                e[i] = g
                gens.append((tuple(e), w))
        return _symmetrize(gens, self)

    def has_generators_beyond(self, cap: int) -> bool:
        return any(f.has_generators_beyond(cap) for f in self.factors)

    def serialize(self, a) -> str:
        return "(" + ",".join(f.serialize(x) for f, x in zip(self.factors, a)) + ")"

    def ends_defaults(self) -> dict:
        d = super().ends_defaults()
        d["radii"] = list(range(1, 13))
        return d


class FreeProductCyclic(GroupOracle):
    """Free product Z/p * Z/q in alternating normal form.

    An element is a tuple of syllables (slot, exp) with slot 0 carrying
    exponents mod p and slot 1 mod q; adjacent syllables always sit in
    different slots and no exponent is 0. Generators are the two factor
    generators and their inverses at unit weight (for Z/2 and Z/3 these
    are exactly the non-identity factor elements).
    """

    def __init__(self, p: int, q: int, name: str | None = None):
        if p < 2 or q < 2:
            raise ValueError("factor orders must be >= 2")
        self.orders = (p, q)
        self.name = name or f"Z/{p}*Z/{q}"

    @property
    def identity(self) -> tuple:
        return ()

    def _reduce(self, syllables: list[tuple[int, int]]) -> tuple:
        out: list[tuple[int, int]] = []
        for slot, exp in syllables:
            exp %= self.orders[slot]
            if exp == 0:
                continue
            if out and out[-1][0] == slot:
                merged = (out[-1][1] + exp) % self.orders[slot]
                out.pop()
                if merged:
                    out.append((slot, merged))
                    continue
                # the merge annihilated; the new tail may merge further
                continue
            out.append((slot, exp))
        return tuple(out)

    def multiply(self, a: tuple, b: tuple) -> tuple:
        # only the junction can reduce, but exponent annihilation may
        # cascade, so run the generic reducer over the concatenation
        return self._reduce(list(a) + list(b))

    def inverse(self, a: tuple) -> tuple:
        return tuple((slot, self.orders[slot] - exp) for slot, exp in reversed(a))

    def generators_within(self, cap: int) -> list:
        if cap < 1:
            return []
        return _symmetrize([(((0, 1),), 1), (((1, 1),), 1)], self)

    def has_generators_beyond(self, cap: int) -> bool:
        return False

    def serialize(self, a: tuple) -> str:
        if not a:
            return "e"
        names = ("a", "b")
        parts = []
        for slot, exp in a:
            parts.append(names[slot] if exp == 1 else f"{names[slot]}{exp}")
        return "".join(parts)

    def ends_defaults(self) -> dict:
        d = super().ends_defaults()
        if self.orders != (2, 2):
            d["radii"] = list(range(1, 9))
        return d


class RestrictedSumZ2(GroupOracle):
    """Restricted direct sum of copies of Z/2, indexed by 1, 2, 3, ...

    An element is the sorted tuple of indices where it is 1; the product
    is symmetric difference. The i-th generator (support {i}) carries
    weight 2^i, so the stream is infinite and the ball of any radius is
    finite. Every finite subset generates a finite subgroup.
    """

    locally_finite = True
    name = "sumZ/2"

    @property
    def identity(self) -> tuple:
        return ()

    def multiply(self, a: tuple, b: tuple) -> tuple:
        return tuple(sorted(set(a) ^ set(b)))

    def inverse(self, a: tuple) -> tuple:
        return a

    def generators_within(self, cap: int) -> list:
        gens = []
        i = 1
        while 2**i <= cap:
            gens.append(((i,), 2**i))
            i += 1
        return gens

    def has_generators_beyond(self, cap: int) -> bool:
        return True

    def serialize(self, a: tuple) -> str:
        return "{" + ",".join(map(str, a)) + "}" if a else "e"

    def ends_defaults(self) -> dict:
        # the complement of any ball reconnects through arbitrarily heavy
        # generators, so components are read through hops of the lightest
        # generator weight; see the component-tree module
        return {
            "radii": list(range(1, 21)),
            "horizon_factor": 3,
            "window_w": 5,
            "step_cap": 2,
        }


class FactorialRationals(GroupOracle):
    """The union of the chain (1/n!) Z under addition.

    Generators are 1/i! with strictly increasing integer weights. The
    weights grow slowly up to index 6 and then jump by a factor of ten,
    which keeps default windows free of isolated single-generator
    clusters while preserving properness (finite balls).
    """

    name = "Q-like"

    _WEIGHT_JUMP_AT = 7

    def _weight(self, i: int) -> int:
        return i if i < self._WEIGHT_JUMP_AT else 10 * i

    @property
    def identity(self) -> Fraction:
        return Fraction(0)

    def multiply(self, a: Fraction, b: Fraction) -> Fraction:
        return a + b

    def inverse(self, a: Fraction) -> Fraction:
        return -a

    def generators_within(self, cap: int) -> list:
        gens = []
        i = 1
        while self._weight(i) <= cap:
            gens.append((Fraction(1, math.factorial(i)), self._weight(i)))
            i += 1
        return _symmetrize(gens, self)

    def has_generators_beyond(self, cap: int) -> bool:
        return True

    def ends_defaults(self) -> dict:
        return {
            "radii": list(range(1, 9)),
            "horizon_factor": 3,
            "window_w": 5,
            "step_cap": None,
        }


class ExtendedGenerators(GroupOracle):
    """Wrap an oracle with extra (redundant) generators.

    The wrapped group is unchanged as a group; only the generating set,
    and hence the word metric, differs. Used by the generating-set
    invariance and perturbation suites.
    """

    def __init__(self, base: GroupOracle, extras: list[tuple[Element, int]], name: str | None = None):
        self.base = base
        self.extras = [(base.canonical(g), w) for g, w in extras]
        self.name = name or f"{base.name}+{len(self.extras)}g"
        self.locally_finite = base.locally_finite

    @property
    def identity(self):
        return self.base.identity

    def multiply(self, a, b):
        return self.base.multiply(a, b)

    def inverse(self, a):
        return self.base.inverse(a)

    def canonical(self, a):
        return self.base.canonical(a)

    def serialize(self, a):
        return self.base.serialize(a)

    def generators_within(self, cap: int) -> list:
        pairs = list(self.base.generators_within(cap))
        pairs.extend((g, w) for g, w in self.extras if w <= cap)
        return _symmetrize(pairs, self)

    def has_generators_beyond(self, cap: int) -> bool:
        if self.base.has_generators_beyond(cap):
            return True
        return any(w > cap for _, w in self.extras)

    def ends_defaults(self) -> dict:
        return self.base.ends_defaults()


def builtin_groups() -> dict[str, GroupOracle]:
    """Catalog of shipped groups, keyed by the names the CLI accepts."""
    return {
        "Z": IntLine(),
        "Z^2": IntLattice(2),
        "Z^3": IntLattice(3),
        "F2": FreeGroup(2),
        "Z/5": CyclicGroup(5),
        "Z/2xZ/2": DirectProduct(CyclicGroup(2), CyclicGroup(2)),
        "Dinf": FreeProductCyclic(2, 2, name="Dinf"),
        "Z/2*Z/3": FreeProductCyclic(2, 3),
        "sumZ/2": RestrictedSumZ2(),
        "Q-like": FactorialRationals(),
    }
