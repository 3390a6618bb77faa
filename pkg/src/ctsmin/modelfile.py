"""Line-oriented text format for conditional and lattice-labelled
systems.

A model file gives its kind, the condition poset, the state and action
sets, and one line per labelled edge.  Comments run from '#' to the end
of the line.  The serialiser emits a canonical form: conditions top
down, order lines as covering pairs, everything else sorted, so parse
and serialise are mutually inverse on canonical text.
"""

from __future__ import annotations

from .frame import Frame
from .models import Cts, Lats, NotDownwardClosed, cts_to_lats, lats_to_cts
from .order import Poset, validate_poset

SECTIONS = ("conditions", "states", "actions", "transitions")


class ParseError(Exception):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def parse_model(text: str, close: bool = False) -> Cts | Lats:
    kind: str | None = None
    section: str | None = None
    seen: dict[str, int] = {}
    conditions: list[str] = []
    order_pairs: list[tuple[str, str]] = []
    states: list[str] = []
    actions: list[str] = []
    transitions: list[tuple[int, str, str, str, frozenset[str]]] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if kind is None:
            if not line.startswith("kind:"):
                raise ParseError(number, "expected 'kind: cts' or 'kind: lats'")
            kind = line[len("kind:"):].strip()
            if kind not in ("cts", "lats"):
                raise ParseError(number, f"unknown kind {kind!r}")
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise ParseError(number, f"unknown section {section!r}")
            if section in seen:
                raise ParseError(number, f"duplicate section {section!r}")
            seen[section] = number
            continue
        if section is None:
            raise ParseError(number, "content outside any section")
        if section == "conditions":
            tokens = line.split()
            if "<=" in tokens:
                if len(tokens) != 3 or tokens[1] != "<=":
                    raise ParseError(number, "order lines read 'a <= b'")
                for name in (tokens[0], tokens[2]):
                    if name not in conditions:
                        raise ParseError(number, f"undeclared condition {name!r}")
                order_pairs.append((tokens[0], tokens[2]))
            elif len(tokens) == 1:
                if tokens[0] in conditions:
                    raise ParseError(number, f"condition {tokens[0]!r} declared twice")
                conditions.append(tokens[0])
            else:
                raise ParseError(number, "one condition name per line")
        elif section == "states":
            states.extend(line.split())
        elif section == "actions":
            actions.extend(line.split())
        elif section == "transitions":
            tokens = line.split()
            if len(tokens) < 5 or tokens[3] != ":":
                raise ParseError(
                    number, "transitions read 'src action dst : cond [cond ...]'"
                )
            transitions.append(
                (number, tokens[0], tokens[1], tokens[2], frozenset(tokens[4:]))
            )

    if kind is None:
        raise ParseError(1, "empty model file")
    for name in SECTIONS:
        if name not in seen:
            raise ParseError(1, f"missing section [{name}]")
    if not conditions:
        raise ParseError(seen["conditions"], "at least one condition is required")

    poset = validate_poset(conditions, order_pairs)
    state_set = set(states)
    action_set = set(actions)
    labels: dict[tuple[str, str, str], set[str]] = {}
    for (number, src, act, dst, conds) in transitions:
        for name, pool, what in (
            (src, state_set, "state"),
            (dst, state_set, "state"),
            (act, action_set, "action"),
        ):
            if name not in pool:
                raise ParseError(number, f"undeclared {what} {name!r}")
        for c in conds:
            if c not in set(conditions):
                raise ParseError(number, f"undeclared condition {c!r}")
        members = conds
        if close:
            members = poset.down_close(members)
        elif not poset.is_downward_closed(members):
            raise NotDownwardClosed(
                f"{src} {act} {dst} : {' '.join(sorted(members))}", line=number
            )
        labels.setdefault((src, act, dst), set()).update(members)

    model = Cts(states, actions, poset, labels, close=close)
    if kind == "lats":
        return cts_to_lats(model)
    return model


def _cover_pairs(poset: Poset) -> list[tuple[str, str]]:
    covers = []
    for p in poset.elements:
        for q in poset.elements:
            if not poset.lt(p, q):
                continue
            if any(poset.lt(p, r) and poset.lt(r, q) for r in poset.elements):
                continue
            covers.append((p, q))
    return sorted(covers)


def serialise_model(model: Cts | Lats) -> str:
    if isinstance(model, Lats):
        kind = "lats"
        as_cts = lats_to_cts(model)
    else:
        kind = "cts"
        as_cts = model
    poset = as_cts.conditions
    rank = {c: i for i, c in enumerate(poset.top_down_order)}
    lines = [f"kind: {kind}", "", "[conditions]"]
    lines.extend(poset.top_down_order)
    lines.extend(f"{p} <= {q}" for (p, q) in _cover_pairs(poset))
    lines.append("")
    lines.append("[states]")
    if as_cts.states:
        lines.append(" ".join(as_cts.states))
    lines.append("")
    lines.append("[actions]")
    if as_cts.actions:
        lines.append(" ".join(as_cts.actions))
    lines.append("")
    lines.append("[transitions]")
    for (src, act, dst, conds) in as_cts.edges():
        shown = " ".join(sorted(conds, key=lambda c: (rank[c], c)))
        lines.append(f"{src} {act} {dst} : {shown}")
    return "\n".join(lines) + "\n"


def convert_model(model: Cts | Lats, target: str) -> Cts | Lats:
    if target == "cts":
        return model if isinstance(model, Cts) else lats_to_cts(model)
    if target == "lats":
        return model if isinstance(model, Lats) else cts_to_lats(model)
    raise ValueError(f"unknown target kind {target!r}")
