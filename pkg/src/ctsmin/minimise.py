"""Minimisation by the final-chain construction, and its fixed-point twin.

Stage tables assign every (state, condition) pair a behaviour term.
Stage zero is constant; each later stage records, per action, the set
of (previous term, entry version) pairs reachable in one step.  Tables
are pseudo-factorised into a kernel partition and a least-ordered
codomain, and the construction stops as soon as the partition repeats.
The same result can be derived from the lattice fixed-point relation,
which the fixpoint-kernel route does stage by stage.

Terms are hash-consed through a module interner keyed by sub-term
identity, so equality is pointer equality and table comparisons stay
cheap even when printed forms would be large.  The interner is a plain
dict guarded by the interpreter lock, which is atomic enough here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .equivalence import LatticeRelation, lattice_fixpoint_stages
from .models import Cts, NotDownwardClosed, UpgradeCoalgebra, coalgebra_encode
from .monad import StarMap, tau
from .order import Poset, coequalise

PairKey = tuple[str, str]


class BehaviourTerm:
    """A node of the stage tables.  Use bullet() and node() to obtain
    instances; direct construction bypasses interning."""

    __slots__ = ("tid", "level", "branches", "_pretty")

    def __init__(self, tid: int, level: int, branches):
        self.tid = tid
        self.level = level
        # branches: None for the stage-zero constant, otherwise a tuple of
        # (action, ((sub, cond), ...)) with every action present.
        self.branches = branches
        self._pretty: str | None = None

    def successors(self, action: str) -> tuple[tuple["BehaviourTerm", str], ...]:
        assert self.branches is not None
        return dict(self.branches)[action]

    def as_nested(self):
        """Structural expansion into plain hashable values, for test
        comparison against literal nested sets."""
        if self.branches is None:
            return "•"
        return tuple(
            (a, frozenset((sub.as_nested(), cond) for (sub, cond) in pairs))
            for a, pairs in self.branches
        )

    def pretty(self) -> str:
        """Deterministic print form.  Single-action terms render as bare
        pair sets matching the usual table notation."""
        if self._pretty is None:
            if self.branches is None:
                text = "•"
            else:
                parts = []
                for a, pairs in self.branches:
                    inner = sorted(
                        (cond, sub.pretty()) for (sub, cond) in pairs
                    )
                    body = (
                        "{" + ",".join(f"({s},{c})" for c, s in inner) + "}"
                        if inner
                        else "∅"
                    )
                    parts.append((a, body))
                if len(parts) == 1:
                    text = parts[0][1]
                else:
                    text = "{" + ", ".join(f"{a}:{b}" for a, b in parts) + "}"
            self._pretty = text
        return self._pretty

    def __repr__(self) -> str:
        return f"BehaviourTerm(level={self.level}, {self.pretty()})"


_INTERN: dict[tuple, BehaviourTerm] = {}
_BULLET_KEY = ("bullet",)


def bullet() -> BehaviourTerm:
    term = _INTERN.get(_BULLET_KEY)
    if term is None:
        term = _INTERN.setdefault(_BULLET_KEY, BehaviourTerm(0, 0, None))
    return term


def node(branches: Mapping[str, Iterable[tuple[BehaviourTerm, str]]]) -> BehaviourTerm:
    """Intern the term with the given per-action successor pair sets."""
    canonical = []
    level = 0
    for a in sorted(branches):
        pairs = tuple(
            sorted(set(branches[a]), key=lambda pc: (pc[1], pc[0].tid))
        )
        for sub, _ in pairs:
            level = max(level, sub.level)
        canonical.append((a, pairs))
    key = tuple(
        (a, tuple((sub.tid, cond) for (sub, cond) in pairs))
        for a, pairs in canonical
    )
    term = _INTERN.get(key)
    if term is None:
        term = _INTERN.setdefault(
            key, BehaviourTerm(len(_INTERN) + 1, level + 1, tuple(canonical))
        )
    return term


@dataclass(frozen=True)
class BehaviourTable:
    """One stage of the chain: a total map from (state, condition) pairs
    to interned terms."""

    stage: int
    states: tuple[str, ...]
    conditions: Poset
    entries: tuple[tuple[PairKey, BehaviourTerm], ...]

    def value(self, x: str, cond: str) -> BehaviourTerm:
        return dict(self.entries)[(x, cond)]

    def table(self) -> dict[PairKey, BehaviourTerm]:
        return dict(self.entries)

    def rows(self) -> list[tuple[str, list[tuple[str, BehaviourTerm]]]]:
        """Per-condition rows in top-down condition order, states sorted."""
        got = self.table()
        return [
            (cond, [(x, got[(x, cond)]) for x in self.states])
            for cond in self.conditions.top_down_order
        ]


def chain_init(c: UpgradeCoalgebra) -> BehaviourTable:
    entries = tuple(
        ((x, cond), bullet())
        for x in c.states
        for cond in c.conditions.elements
    )
    return BehaviourTable(0, c.states, c.conditions, entries)


def chain_step(c: UpgradeCoalgebra, d: BehaviourTable) -> BehaviourTable:
    """One unfolding: look up every successor pair in the previous table
    at its own entry version."""
    prev = d.table()
    entries = []
    for x in c.states:
        for cond in c.conditions.elements:
            branches = {
                a: [
                    (prev[(x1, chi)], chi)
                    for (x1, chi) in c.alpha(x, cond, a)
                ]
                for a in c.actions
            }
            entries.append(((x, cond), node(branches)))
    return BehaviourTable(d.stage + 1, c.states, c.conditions, tuple(entries))


def _pair_name(pair: PairKey) -> str:
    return f"{pair[0]}@{pair[1]}"


def _product_poset(states: tuple[str, ...], conditions: Poset) -> tuple[Poset, dict[str, PairKey]]:
    """States crossed with conditions, states discrete.  Elements are the
    state@condition names."""
    pairs = [(x, c) for x in states for c in conditions.elements]
    names = {_pair_name(p): p for p in pairs}
    relation = set()
    for (x, c1) in pairs:
        for c2 in conditions.elements:
            if conditions.leq(c1, c2):
                relation.add((_pair_name((x, c1)), _pair_name((x, c2))))
    return Poset(tuple(names), frozenset(relation)), names


Partition = tuple[tuple[PairKey, ...], ...]


def _canonical_partition(groups: Iterable[Iterable[PairKey]]) -> Partition:
    classes = [tuple(sorted(g)) for g in groups]
    return tuple(sorted(classes, key=lambda cls: cls[0]))


def pseudo_factorise(d: BehaviourTable) -> tuple[Partition, Poset, dict[str, BehaviourTerm]]:
    """Split a stage table into its kernel partition and the codomain of
    reached terms, ordered by the least order making the quotient map
    monotone.  Codomain elements are named by least representatives."""
    fibres: dict[BehaviourTerm, list[PairKey]] = {}
    for (pair, term) in d.entries:
        fibres.setdefault(term, []).append(pair)
    partition = _canonical_partition(fibres.values())
    product, _ = _product_poset(d.states, d.conditions)
    merge_pairs = []
    for cls in partition:
        first = _pair_name(cls[0])
        for other in cls[1:]:
            merge_pairs.append((first, _pair_name(other)))
    quotient, mapping = coequalise(product, merge_pairs)
    # coequalise names classes by least element string, which sorts the
    # tick character before '@'; rename to least (state, condition) pair.
    rename = {}
    for cls in partition:
        target = _pair_name(cls[0])
        rename[mapping[_pair_name(cls[0])]] = target
    renamed = Poset(
        tuple(rename[e] for e in quotient.elements),
        frozenset((rename[p], rename[q]) for (p, q) in quotient.relation),
    )
    table = d.table()
    terms = {_pair_name(cls[0]): table[cls[0]] for cls in partition}
    return partition, renamed, terms


def kernel_matrix(d: BehaviourTable) -> LatticeRelation:
    """Same-condition kernel of a stage table as a lattice relation.  The
    values are downward closed for every table the chain produces; a
    violation indicates a corrupted table and is rejected."""
    got = d.table()
    table: dict[tuple[str, str], frozenset[str]] = {}
    for x in d.states:
        for y in d.states:
            conds = frozenset(
                c for c in d.conditions.elements if got[(x, c)] is got[(y, c)]
            )
            if conds and not d.conditions.is_downward_closed(conds):
                raise NotDownwardClosed(f"kernel value at ({x},{y}): {sorted(conds)}")
            table[(x, y)] = conds
    return LatticeRelation.of(d.states, d.conditions, table)


@dataclass(frozen=True)
class StageInfo:
    stage: int
    partition: Partition
    matrix: LatticeRelation
    table: BehaviourTable | None


@dataclass(frozen=True)
class ChainResult:
    """Outcome of minimisation: the stabilised stage, its kernel
    partition and quotient, and the full stage history.

    ``stage`` is the first index whose partition equals the next one and
    ``confirmed_at`` is that next index.  ``matrix_stage`` is the first
    index whose kernel matrix repeats; it can precede ``stage`` by one
    when the very first table is non-constant but no two states ever
    separate."""

    algorithm: str
    stage: int
    confirmed_at: int
    matrix_stage: int
    stages: tuple[StageInfo, ...]
    class_of: tuple[tuple[PairKey, str], ...]
    z_poset: Poset
    transitions: tuple[tuple[str, str, tuple[tuple[str, str], ...]], ...]

    def class_name(self, x: str, cond: str) -> str:
        return dict(self.class_of)[(x, cond)]

    def quotient_states(self) -> tuple[str, ...]:
        return self.z_poset.elements

    def state_partition(self, stage: int) -> tuple[tuple[str, ...], ...]:
        """States identified at a stage when all their columns agree."""
        info = self.stages[stage]
        index: dict[PairKey, int] = {}
        for i, cls in enumerate(info.partition):
            for pair in cls:
                index[pair] = i
        states = sorted({x for (x, _) in index})
        conds = sorted({c for (_, c) in index})
        sig = {x: tuple(index[(x, c)] for c in conds) for x in states}
        groups: dict[tuple, list[str]] = {}
        for x in states:
            groups.setdefault(sig[x], []).append(x)
        return tuple(sorted((tuple(g) for g in groups.values()), key=lambda g: g[0]))


def _quotient_transitions(
    c: UpgradeCoalgebra, partition: Partition
) -> tuple[dict[PairKey, str], tuple[tuple[str, str, tuple[tuple[str, str], ...]], ...]]:
    class_of: dict[PairKey, str] = {}
    for cls in partition:
        name = _pair_name(cls[0])
        for pair in cls:
            class_of[pair] = name
    moves: dict[tuple[str, str], tuple[tuple[str, str], ...]] = {}
    for cls in partition:
        name = _pair_name(cls[0])
        for a in c.actions:
            values = set()
            for (x, cond) in cls:
                image = frozenset(
                    (class_of[(x1, chi)], chi) for (x1, chi) in c.alpha(x, cond, a)
                )
                values.add(image)
            if len(values) != 1:
                raise AssertionError(
                    f"quotient not well defined at {name}, action {a}"
                )
            moves[(name, a)] = tuple(sorted(values.pop()))
    transitions = tuple(
        (name, a, moves[(name, a)]) for (name, a) in sorted(moves)
    )
    return class_of, transitions


def minimise_chain(c: UpgradeCoalgebra, max_stages: int | None = None) -> ChainResult:
    """Iterate the chain until the kernel partition repeats.  Returns the
    stage at which it first stabilised, with the following stage kept as
    confirmation."""
    bound = max_stages if max_stages is not None else (
        len(c.states) * len(c.conditions.elements) + 2
    )
    table = chain_init(c)
    infos: list[StageInfo] = []
    partition, _, _ = pseudo_factorise(table)
    infos.append(StageInfo(0, partition, kernel_matrix(table), table))
    stage = None
    while stage is None:
        if len(infos) > bound:
            raise AssertionError("chain failed to stabilise within its bound")
        table = chain_step(c, table)
        partition, _, _ = pseudo_factorise(table)
        infos.append(
            StageInfo(len(infos), partition, kernel_matrix(table), table)
        )
        if infos[-1].partition == infos[-2].partition:
            stage = len(infos) - 2
    matrix_stage = next(
        i for i in range(len(infos) - 1) if infos[i].matrix == infos[i + 1].matrix
    )
    final = infos[stage]
    assert final.table is not None
    _, z_poset, _ = pseudo_factorise(final.table)
    class_of, transitions = _quotient_transitions(c, final.partition)
    return ChainResult(
        "chain",
        stage,
        stage + 1,
        matrix_stage,
        tuple(infos),
        tuple(sorted(class_of.items())),
        z_poset,
        transitions,
    )


def _step_partition(
    c: UpgradeCoalgebra, prev: Mapping[tuple[str, str], frozenset[str]]
) -> Partition:
    """Kernel partition induced by one unfolding against a lattice
    relation: two pairs agree when every successor of one is matched by
    a same-version successor of the other that the relation accepts at
    that version."""
    pairs = [(x, cond) for x in c.states for cond in c.conditions.elements]

    def related(p: PairKey, q: PairKey) -> bool:
        for a in c.actions:
            left = c.alpha(p[0], p[1], a)
            right = c.alpha(q[0], q[1], a)
            for (x1, chi) in left:
                if not any(
                    psi == chi and chi in prev[(x1, y1)] for (y1, psi) in right
                ):
                    return False
            for (y1, chi) in right:
                if not any(
                    psi == chi and chi in prev[(x1, y1)] for (x1, psi) in left
                ):
                    return False
        return True

    classes: list[list[PairKey]] = []
    for p in pairs:
        for cls in classes:
            if related(cls[0], p):
                # matching one member must mean matching all of them
                assert all(related(q, p) for q in cls[1:])
                cls.append(p)
                break
        else:
            classes.append([p])
    return _canonical_partition(classes)


def minimise_fixpoint_kernel(m: Cts) -> ChainResult:
    """Derive the chain's result from the lattice fixed-point iteration.
    Stage kernels come from unfolding each intermediate relation once,
    which separates exactly the pairs the corresponding table does."""
    c = coalgebra_encode(m)
    relations = lattice_fixpoint_stages(m)

    def rel(k: int) -> dict[tuple[str, str], frozenset[str]]:
        return relations[min(k, len(relations) - 1)]

    pairs_all = _canonical_partition(
        [[(x, cond) for x in c.states for cond in c.conditions.elements]]
    )
    product, _ = _product_poset(c.states, c.conditions)

    infos: list[StageInfo] = []
    partitions: list[Partition] = [pairs_all]
    stage = None
    k = 0
    while stage is None:
        infos.append(
            StageInfo(k, partitions[k], _partition_matrix(c, partitions[k]), None)
        )
        nxt = _step_partition(c, rel(k))
        partitions.append(nxt)
        if nxt == partitions[k]:
            stage = k
        else:
            k += 1
    infos.append(
        StageInfo(k + 1, partitions[k + 1], _partition_matrix(c, partitions[k + 1]), None)
    )
    matrix_stage = next(
        i
        for i in range(len(relations) - 1)
        if relations[i] == relations[i + 1]
    )
    final = infos[stage]
    merge = []
    for cls in final.partition:
        first = _pair_name(cls[0])
        for other in cls[1:]:
            merge.append((first, _pair_name(other)))
    quotient, mapping = coequalise(product, merge)
    rename = {mapping[_pair_name(cls[0])]: _pair_name(cls[0]) for cls in final.partition}
    z_poset = Poset(
        tuple(rename[e] for e in quotient.elements),
        frozenset((rename[p], rename[q]) for (p, q) in quotient.relation),
    )
    class_of, transitions = _quotient_transitions(c, final.partition)
    return ChainResult(
        "fixpoint-kernel",
        stage,
        stage + 1,
        matrix_stage,
        tuple(infos),
        tuple(sorted(class_of.items())),
        z_poset,
        transitions,
    )


def _partition_matrix(c: UpgradeCoalgebra, partition: Partition) -> LatticeRelation:
    index: dict[PairKey, int] = {}
    for i, cls in enumerate(partition):
        for pair in cls:
            index[pair] = i
    table: dict[tuple[str, str], frozenset[str]] = {}
    for x in c.states:
        for y in c.states:
            conds = frozenset(
                cond
                for cond in c.conditions.elements
                if index[(x, cond)] == index[(y, cond)]
            )
            if conds and not c.conditions.is_downward_closed(conds):
                raise NotDownwardClosed(f"kernel value at ({x},{y}): {sorted(conds)}")
            table[(x, y)] = conds
    return LatticeRelation.of(c.states, c.conditions, table)


def quotient_to_cts(result: ChainResult, conditions: Poset) -> Cts:
    """Re-read the quotient as a conditional system over the original
    conditions.  Successor versions become edge conditions; the label
    sets are closed downward because a quotient state fixes its own
    version context while edges must stay condition-monotone."""
    labels: dict[tuple[str, str, str], set[str]] = {}
    actions = sorted({a for (_, a, _) in result.transitions})
    for (src, a, pairs) in result.transitions:
        for (dst, chi) in pairs:
            labels.setdefault((src, a, dst), set()).add(chi)
    return Cts(
        result.quotient_states(),
        actions,
        conditions,
        {edge: conds for edge, conds in labels.items()},
        close=True,
    )


def chain_result_json(result: ChainResult) -> dict:
    """Plain serialisable form: stage history with kernel and state
    partitions, and the final quotient with its order and transitions."""
    stages = []
    for info in result.stages:
        stages.append(
            {
                "stage": info.stage,
                "kernel": [
                    [_pair_name(p) for p in cls] for cls in info.partition
                ],
                "states": [list(g) for g in result.state_partition(info.stage)],
            }
        )
    z = result.z_poset
    return {
        "algorithm": result.algorithm,
        "stage": result.stage,
        "confirmed_at": result.confirmed_at,
        "matrix_stage": result.matrix_stage,
        "stages": stages,
        "quotient": {
            "states": list(z.elements),
            "order": [
                [p, q] for (p, q) in sorted(z.relation) if p != q
            ],
            "transitions": [
                {
                    "src": src,
                    "action": a,
                    "dst": dst,
                    "conditions": sorted(conds),
                }
                for (src, a, pairs) in result.transitions
                for (dst, conds) in sorted(
                    _group_conditions(pairs).items()
                )
            ],
        },
    }


def _group_conditions(pairs: tuple[tuple[str, str], ...]) -> dict[str, set[str]]:
    grouped: dict[str, set[str]] = {}
    for (dst, chi) in pairs:
        grouped.setdefault(dst, set()).add(chi)
    return grouped


def chain_result_dot(result: ChainResult, conditions: Poset) -> str:
    """Graphviz rendering of the quotient, nodes named by their least
    representatives and edges labelled by condition sets."""
    order = {c: i for i, c in enumerate(conditions.top_down_order)}
    actions = sorted({a for (_, a, _) in result.transitions})
    lines = ["digraph minimised {", "  rankdir=LR;"]
    for name in result.z_poset.elements:
        lines.append(f'  "{name}";')
    for (src, a, pairs) in result.transitions:
        for dst, conds in sorted(_group_conditions(pairs).items()):
            shown = ",".join(sorted(conds, key=lambda c: (order[c], c)))
            label = shown if len(actions) == 1 else f"{a}: {shown}"
            lines.append(f'  "{src}" -> "{dst}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def klT_factorise(
    f: Mapping[str, StarMap], dom: Poset
) -> tuple[Poset, dict[str, StarMap]]:
    """Shrink the codomain of a Kleisli map to the elements that matter:
    those that are a least witness for some input and condition.  On a
    discrete codomain these are exactly the elements with a non-bottom
    value somewhere."""
    if not dom.elements:
        return Poset((), frozenset()), {}
    witnesses: set[str] = set()
    for x in dom.elements:
        reader = tau(f[x])
        witnesses.update(v for (_, v) in reader.entries)
    sample = next(iter(f.values()))
    cod = sample.dom
    frame = sample.frame
    kept = tuple(sorted(witnesses))
    restricted_poset = Poset(
        kept, frozenset((p, q) for (p, q) in cod.relation if p in witnesses and q in witnesses)
    )
    restricted = {
        x: StarMap.of(
            restricted_poset,
            frame,
            {y: f[x].value(y) for y in kept},
        )
        for x in dom.elements
    }
    return restricted_poset, restricted
