"""Transition system models: conditional, lattice-labelled, plain, and
the one-step upgrade coalgebra.

A conditional system fixes a finite condition poset and gives every
edge a downward closed set of conditions; reading the label set of an
edge as a lattice element yields the lattice-labelled presentation, and
fixing a single condition projects out a plain transition system.  The
upgrade encoding additionally tracks the version a successor is entered
at, which is what the minimisation chain runs on.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

from .frame import Frame
from .order import Downset, Poset, UnknownElement


class NotDownwardClosed(Exception):
    """An edge label set is not closed under smaller conditions."""

    def __init__(self, detail: str, line: int | None = None):
        self.detail = detail
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"label set not downward closed{where}: {detail}")


Edge = tuple[str, str, str]


class Cts:
    """A conditional transition system over a finite condition poset.

    ``labels`` maps (src, action, dst) to the set of conditions under
    which the edge is present.  Each label set must be downward closed,
    which is the same thing as the successor structure shrinking under
    upgrades; pass close=True to normalise instead of reject.
    """

    def __init__(
        self,
        states: Iterable[str],
        actions: Iterable[str],
        conditions: Poset,
        labels: Mapping[Edge, Iterable[str]],
        close: bool = False,
    ):
        if not conditions.elements:
            raise ValueError("condition poset must be non-empty")
        self.states: tuple[str, ...] = tuple(sorted(set(states)))
        self.actions: tuple[str, ...] = tuple(sorted(set(actions)))
        self.conditions = conditions
        state_set = set(self.states)
        action_set = set(self.actions)
        table: dict[Edge, frozenset[str]] = {}
        for (src, act, dst), conds in labels.items():
            if src not in state_set:
                raise UnknownElement(src)
            if dst not in state_set:
                raise UnknownElement(dst)
            if act not in action_set:
                raise UnknownElement(act)
            members = frozenset(conds)
            for c in members:
                conditions.check_element(c)
            if close:
                members = conditions.down_close(members)
            elif not conditions.is_downward_closed(members):
                raise NotDownwardClosed(f"{src} {act} {dst} : {sorted(members)}")
            if members:
                table[(src, act, dst)] = members
        self._labels = table
        out: dict[tuple[str, str], list[tuple[str, frozenset[str]]]] = {}
        for (src, act, dst) in sorted(table):
            out.setdefault((src, act), []).append((dst, table[(src, act, dst)]))
        self._out = out

    def label(self, src: str, act: str, dst: str) -> frozenset[str]:
        return self._labels.get((src, act, dst), frozenset())

    def outgoing(self, src: str, act: str) -> list[tuple[str, frozenset[str]]]:
        return self._out.get((src, act), [])

    def successors(self, src: str, act: str, phi: str) -> frozenset[str]:
        self.conditions.check_element(phi)
        return frozenset(
            dst for dst, conds in self.outgoing(src, act) if phi in conds
        )

    def edges(self) -> list[tuple[str, str, str, frozenset[str]]]:
        return [
            (s, a, d, self._labels[(s, a, d)])
            for (s, a, d) in sorted(self._labels)
        ]

    def _key(self):
        return (
            self.states,
            self.actions,
            self.conditions,
            tuple(sorted((e, c) for e, c in self._labels.items())),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Cts) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"Cts(states={len(self.states)}, edges={len(self._labels)})"


class Lats:
    """A transition system labelled in the downset lattice of a frame.
    The bottom label means the absence of an edge and is never stored."""

    def __init__(
        self,
        states: Iterable[str],
        actions: Iterable[str],
        frame: Frame,
        labels: Mapping[Edge, Downset],
    ):
        self.states = tuple(sorted(set(states)))
        self.actions = tuple(sorted(set(actions)))
        self.frame = frame
        table: dict[Edge, Downset] = {}
        for edge, value in labels.items():
            if value.base != frame.base:
                raise ValueError("label downset over the wrong base")
            if value.members:
                table[edge] = value
        self._labels = table

    def label(self, src: str, act: str, dst: str) -> Downset:
        got = self._labels.get((src, act, dst))
        return got if got is not None else self.frame.bottom

    def edges(self) -> list[tuple[str, str, str, Downset]]:
        return [(s, a, d, self._labels[(s, a, d)]) for (s, a, d) in sorted(self._labels)]

    def _key(self):
        return (
            self.states,
            self.actions,
            self.frame,
            tuple(sorted((e, d.members) for e, d in self._labels.items())),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Lats) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


class Lts:
    """A plain labelled transition system."""

    def __init__(self, states: Iterable[str], actions: Iterable[str], edges: Iterable[Edge]):
        self.states = tuple(sorted(set(states)))
        self.actions = tuple(sorted(set(actions)))
        self.edges = frozenset(edges)
        for (s, a, d) in self.edges:
            if s not in self.states or d not in self.states:
                raise UnknownElement(s if s not in self.states else d)
            if a not in self.actions:
                raise UnknownElement(a)

    def successors(self, src: str, act: str) -> frozenset[str]:
        return frozenset(d for (s, a, d) in self.edges if s == src and a == act)

    def _key(self):
        return (self.states, self.actions, self.edges)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Lts) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


def cts_to_lats(m: Cts) -> Lats:
    """Read each label set as an element of the downset frame."""
    frame = Frame(m.conditions)
    labels = {
        (s, a, d): Downset(m.conditions, conds) for (s, a, d, conds) in m.edges()
    }
    return Lats(m.states, m.actions, frame, labels)


def lats_to_cts(m: Lats) -> Cts:
    """Conditions of the result are the base of the frame, so for frames
    of downsets this inverts cts_to_lats on the nose."""
    labels = {(s, a, d): value.members for (s, a, d, value) in m.edges()}
    return Cts(m.states, m.actions, m.frame.base, labels)


def project(m: Cts | Lats, phi: str) -> Lts:
    """The plain transition system seen at one fixed condition."""
    if isinstance(m, Lats):
        m = lats_to_cts(m)
    m.conditions.check_element(phi)
    edges = [
        (s, a, d) for (s, a, d, conds) in m.edges() if phi in conds
    ]
    return Lts(m.states, m.actions, edges)


SuccessorPairs = frozenset[tuple[str, str]]


class UpgradeCoalgebra:
    """One-step behaviour with explicit successor versions: alpha(x, phi, a)
    collects the pairs (x', phi') with an a-edge to x' live at phi' <= phi.

    Invariants (checked unless validate=False, which mutation tests use):
    successor sets grow with the condition, and every successor pair
    respects the version bound phi' <= phi.
    """

    def __init__(
        self,
        states: Iterable[str],
        actions: Iterable[str],
        conditions: Poset,
        table: Mapping[tuple[str, str, str], SuccessorPairs],
        validate: bool = True,
    ):
        self.states = tuple(sorted(set(states)))
        self.actions = tuple(sorted(set(actions)))
        self.conditions = conditions
        self._table = {
            key: frozenset(pairs) for key, pairs in table.items() if pairs
        }
        if validate:
            self.validate()

    def alpha(self, x: str, phi: str, a: str) -> SuccessorPairs:
        return self._table.get((x, phi, a), frozenset())

    def validate(self) -> None:
        for (x, phi, a), pairs in sorted(self._table.items()):
            for (y, psi) in sorted(pairs):
                if y not in self.states:
                    raise UnknownElement(y)
                if not self.conditions.leq(psi, phi):
                    raise ValueError(
                        f"version bound broken: ({y},{psi}) in alpha({x},{phi},{a})"
                    )
        for x in self.states:
            for a in self.actions:
                for phi in self.conditions.elements:
                    for psi in self.conditions.elements:
                        if self.conditions.leq(psi, phi):
                            if not self.alpha(x, psi, a) <= self.alpha(x, phi, a):
                                raise ValueError(
                                    f"not monotone in the condition at ({x},{a}): "
                                    f"{psi} <= {phi}"
                                )

    def mutated(
        self, key: tuple[str, str, str], pairs: SuccessorPairs
    ) -> "UpgradeCoalgebra":
        """Copy with one entry replaced, skipping validation."""
        table = dict(self._table)
        if pairs:
            table[key] = pairs
        else:
            table.pop(key, None)
        return UpgradeCoalgebra(
            self.states, self.actions, self.conditions, table, validate=False
        )

    def _key(self):
        return (
            self.states,
            self.actions,
            self.conditions,
            tuple(sorted(self._table.items())),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UpgradeCoalgebra) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


def coalgebra_encode(m: Cts) -> UpgradeCoalgebra:
    """Encode a conditional system as its upgrade coalgebra."""
    table: dict[tuple[str, str, str], SuccessorPairs] = {}
    for x in m.states:
        for a in m.actions:
            for phi in m.conditions.elements:
                pairs = set()
                for (d, conds) in m.outgoing(x, a):
                    for psi in conds:
                        if m.conditions.leq(psi, phi):
                            pairs.add((d, psi))
                if pairs:
                    table[(x, phi, a)] = frozenset(pairs)
    return UpgradeCoalgebra(m.states, m.actions, m.conditions, table)


def version_filter(pairs: SuccessorPairs, phi: str) -> SuccessorPairs:
    """Keep the successors entered at exactly the given version."""
    return frozenset((y, psi) for (y, psi) in pairs if psi == phi)


def v_hat_apply(
    f: Callable[[str, str], object],
    p: Mapping[str, SuccessorPairs],
    phi: str,
) -> dict[str, frozenset]:
    """Apply a state map under the behaviour functor to one state's
    one-step structure.  Successors are rewritten at their own recorded
    version; the ambient condition does not enter the formula and is
    kept only for signature fidelity with the reader-indexed setting."""
    del phi
    return {
        a: frozenset((f(y, psi), psi) for (y, psi) in pairs)
        for a, pairs in p.items()
    }


def check_upgrade_preserving(
    c: UpgradeCoalgebra,
) -> tuple[bool, tuple[str, str, str, str] | None]:
    """Check the two version-filter laws: at comparable conditions the
    same-version slice must agree with the slice taken at the lower
    condition, and an incomparable version must never occur.  Returns
    the lexicographically least witness (x, a, phi, psi) on failure."""
    for x in c.states:
        for a in c.actions:
            for phi in c.conditions.elements:
                here = c.alpha(x, phi, a)
                for psi in c.conditions.elements:
                    if c.conditions.leq(psi, phi):
                        if version_filter(here, psi) != version_filter(
                            c.alpha(x, psi, a), psi
                        ):
                            return False, (x, a, phi, psi)
                    else:
                        if version_filter(here, psi):
                            return False, (x, a, phi, psi)
    return True, None
