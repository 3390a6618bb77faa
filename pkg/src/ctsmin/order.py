"""Finite posets, downward closed sets and poset quotients.

Carriers are small sets of opaque strings.  The order relation is stored
fully reflexive-transitive closed (not as a Hasse diagram) and every
operation iterates in lexicographic element order, so all outputs are
deterministic and serialise identically across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping


class OrderError(Exception):
    """Base class for order-theoretic construction errors."""


class AntisymmetryViolation(OrderError):
    """The reflexive-transitive closure of the given pairs contains a cycle."""

    def __init__(self, cycle: Iterable[str]):
        self.cycle = tuple(cycle)
        super().__init__("antisymmetry violated on cycle: " + " <= ".join(self.cycle))


class UnknownElement(OrderError):
    def __init__(self, element: str):
        self.element = element
        super().__init__(f"unknown element: {element!r}")


@dataclass(frozen=True)
class Poset:
    """A finite partial order.  ``relation`` is the full closure, including
    the diagonal."""

    elements: tuple[str, ...]
    relation: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(sorted(self.elements)))

    @classmethod
    def discrete(cls, elements: Iterable[str]) -> "Poset":
        elems = tuple(sorted(set(elements)))
        return cls(elems, frozenset((e, e) for e in elems))

    @classmethod
    def chain(cls, elements: Iterable[str]) -> "Poset":
        """Chain ordered by the given sequence, first element at the bottom."""
        elems = tuple(elements)
        rel = frozenset(
            (elems[i], elems[j]) for i in range(len(elems)) for j in range(i, len(elems))
        )
        return cls(elems, rel)

    @cached_property
    def _element_set(self) -> frozenset[str]:
        return frozenset(self.elements)

    @cached_property
    def _down(self) -> Mapping[str, frozenset[str]]:
        table: dict[str, set[str]] = {e: set() for e in self.elements}
        for p, q in self.relation:
            table[q].add(p)
        return {e: frozenset(s) for e, s in table.items()}

    def leq(self, p: str, q: str) -> bool:
        return (p, q) in self.relation

    def lt(self, p: str, q: str) -> bool:
        return p != q and (p, q) in self.relation

    def check_element(self, p: str) -> None:
        if p not in self._element_set:
            raise UnknownElement(p)

    def below(self, p: str) -> frozenset[str]:
        """All q with q <= p."""
        self.check_element(p)
        return self._down[p]

    def strictly_below(self, p: str) -> frozenset[str]:
        return self.below(p) - {p}

    def is_downward_closed(self, members: Iterable[str]) -> bool:
        ms = set(members)
        return all(self._down[q] <= ms for q in ms)

    def down_close(self, members: Iterable[str]) -> frozenset[str]:
        closed: set[str] = set()
        for q in members:
            self.check_element(q)
            closed |= self._down[q]
        return frozenset(closed)

    @cached_property
    def top_down_order(self) -> tuple[str, ...]:
        """Linear extension listing larger elements first, ties broken
        lexicographically.  Used for table rows and display."""
        remaining = set(self.elements)
        out: list[str] = []
        while remaining:
            maximal = sorted(
                p for p in remaining if not any(self.lt(p, q) for q in remaining)
            )
            out.append(maximal[0])
            remaining.remove(maximal[0])
        return tuple(out)

    def __repr__(self) -> str:
        strict = sorted((p, q) for p, q in self.relation if p != q)
        pairs = ", ".join(f"{p}<={q}" for p, q in strict)
        return f"Poset({list(self.elements)}" + (f", {pairs})" if pairs else ")")


@dataclass(frozen=True)
class Downset:
    """A downward closed subset of ``base``.  Closure is validated."""

    base: Poset
    members: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))
        for q in self.members:
            self.base.check_element(q)
        if not self.base.is_downward_closed(self.members):
            raise OrderError(f"not downward closed: {sorted(self.members)}")

    def __contains__(self, p: str) -> bool:
        return p in self.members

    def __le__(self, other: "Downset") -> bool:
        return self.members <= other.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        return "Downset({" + ", ".join(sorted(self.members)) + "})"


@dataclass(frozen=True)
class MonotoneMap:
    """A total map between posets; monotonicity is a checked property, not
    a construction invariant (see is_monotone)."""

    dom: Poset
    cod: Poset
    entries: tuple[tuple[str, str], ...]

    @classmethod
    def of(cls, dom: Poset, cod: Poset, table: Mapping[str, str]) -> "MonotoneMap":
        missing = set(dom.elements) - set(table)
        if missing:
            raise OrderError(f"map not total, missing {sorted(missing)}")
        for x, y in table.items():
            dom.check_element(x)
            cod.check_element(y)
        return cls(dom, cod, tuple(sorted((x, table[x]) for x in dom.elements)))

    @cached_property
    def _table(self) -> Mapping[str, str]:
        return dict(self.entries)

    def __call__(self, x: str) -> str:
        return self._table[x]


def validate_poset(elements: Iterable[str], pairs: Iterable[tuple[str, str]]) -> Poset:
    """Close ``pairs`` reflexively and transitively over ``elements`` and
    reject the result unless it is antisymmetric.  The reported cycle is
    the sorted strongly connected component of the first offending pair."""
    elems = tuple(sorted(set(elements)))
    known = set(elems)
    reach: dict[str, set[str]] = {e: {e} for e in elems}
    for p, q in pairs:
        if p not in known:
            raise UnknownElement(p)
        if q not in known:
            raise UnknownElement(q)
        reach[p].add(q)
    changed = True
    while changed:
        changed = False
        for p in elems:
            extra: set[str] = set()
            for q in reach[p]:
                extra |= reach[q]
            if not extra <= reach[p]:
                reach[p] |= extra
                changed = True
    for p in elems:
        for q in sorted(reach[p]):
            if q != p and p in reach[q]:
                cycle = sorted(r for r in reach[p] if p in reach[r])
                raise AntisymmetryViolation(cycle)
    relation = frozenset((p, q) for p in elems for q in reach[p])
    return Poset(elems, relation)


def down_closure(poset: Poset, members: Iterable[str]) -> Downset:
    """Smallest downward closed superset of ``members``."""
    return Downset(poset, poset.down_close(members))


def principal_downset(poset: Poset, p: str) -> Downset:
    return Downset(poset, poset.below(p))


def is_monotone(candidate: MonotoneMap) -> bool:
    table = dict(candidate.entries)
    return all(
        candidate.cod.leq(table[p], table[q])
        for p, q in candidate.dom.relation
    )


def coequalise(
    poset: Poset, pairs: Iterable[tuple[str, str]]
) -> tuple[Poset, dict[str, str]]:
    """Quotient ``poset`` by the equivalence generated by ``pairs``.

    Classes lying on a common cycle of the induced preorder are merged as
    well, so the result is again a poset, and its order is the least one
    making the returned (surjective) map monotone.  Class names are the
    lexicographically least members.
    """
    parent: dict[str, str] = {e: e for e in poset.elements}

    def find(e: str) -> str:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for p, q in pairs:
        poset.check_element(p)
        poset.check_element(q)
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[max(rp, rq)] = min(rp, rq)

    groups: dict[str, set[str]] = {}
    for e in poset.elements:
        groups.setdefault(find(e), set()).add(e)

    # Transitive closure of the induced relation on classes.
    roots = sorted(groups)
    reach: dict[str, set[str]] = {r: {r} for r in roots}
    for p, q in poset.relation:
        reach[find(p)].add(find(q))
    changed = True
    while changed:
        changed = False
        for r in roots:
            extra: set[str] = set()
            for s in reach[r]:
                extra |= reach[s]
            if not extra <= reach[r]:
                reach[r] |= extra
                changed = True

    # Antisymmetry: collapse mutually reachable classes.
    for r in roots:
        for s in reach[r]:
            if s != r and r in reach[s]:
                ra, rb = find(r), find(s)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    final_groups: dict[str, set[str]] = {}
    for e in poset.elements:
        final_groups.setdefault(find(e), set()).add(e)
    names = {root: min(members) for root, members in final_groups.items()}
    mapping = {e: names[find(e)] for e in poset.elements}

    class_elems = tuple(sorted(names.values()))
    relation = set()
    for r in final_groups:
        for s in reach[find(r)]:
            relation.add((names[find(r)], names[find(s)]))
    for c in class_elems:
        relation.add((c, c))
    return Poset(class_elems, frozenset(relation)), mapping
