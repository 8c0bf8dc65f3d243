# core/model.py
"""
Many-sorted structures, assignments and the bounded enumerations the
evaluators are built on.

Elements are opaque strings. A name may belong to the domains of several
sorts; equality across sorts is name identity.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
from networkx.algorithms import isomorphism

from .errors import BudgetExceeded, MissingDomain, SortViolation, Violation
from .syntax import IndividualVar, RelationVar, Vocabulary

logger = logging.getLogger(__name__)

Element = str
Row = Tuple[Element, ...]
Relation = FrozenSet[Row]

FRESH_PREFIX = "_n"


class Structure:
    """A partial map from sorts to finite domains plus interpretations of a vocabulary.

    Equality and hashing are by content; the hash is computed once.
    """

    __slots__ = ("domains", "interps", "vocabulary", "_sorted", "_hash")

    def __init__(self, domains: Mapping[int, Iterable[Element]],
                 interps: Optional[Mapping[str, Iterable[Sequence[Element]]]] = None,
                 vocabulary: Optional[Vocabulary] = None):
        self.domains: Dict[int, FrozenSet[Element]] = {int(n): frozenset(d) for n, d in domains.items()}
        # empty relations are not stored, so a missing name and an empty relation compare equal
        relations = {name: frozenset(tuple(row) for row in rows) for name, rows in (interps or {}).items()}
        self.interps: Dict[str, Relation] = {name: rows for name, rows in relations.items() if rows}
        self.vocabulary = vocabulary if vocabulary is not None else Vocabulary()
        self._sorted: Dict[int, Tuple[Element, ...]] = {n: tuple(sorted(d)) for n, d in self.domains.items()}
        self._hash: Optional[int] = None

    # -- access ---------------------------------------------------------

    def sorts(self) -> List[int]:
        return sorted(self.domains)

    def domain(self, sort: int) -> Tuple[Element, ...]:
        """The domain of `sort` in sorted order."""
        try:
            return self._sorted[sort]
        except KeyError:
            raise MissingDomain(f"no domain for sort {sort}") from None

    def interp(self, name: str) -> Relation:
        return self.interps.get(name, frozenset())

    def elements(self) -> List[Element]:
        return sorted(set().union(*self.domains.values())) if self.domains else []

    def size(self) -> int:
        return sum(len(d) for d in self.domains.values())

    def product(self, sorts: Sequence[int]) -> List[Row]:
        return list(itertools.product(*(self.domain(n) for n in sorts)))

    # -- derived structures ---------------------------------------------

    def expand(self, new_domains: Mapping[int, Iterable[Element]]) -> "Structure":
        """Attach `new_domains`, replacing any existing domain of those sorts.

        Interpretations of symbols that touch a replaced sort are dropped along
        with the symbols themselves.
        """
        replaced = set(new_domains)
        domains = {n: d for n, d in self.domains.items() if n not in replaced}
        domains.update({n: frozenset(d) for n, d in new_domains.items()})
        kept = tuple(s for s in self.vocabulary if not replaced.intersection(s.sorts))
        names = {s.name for s in kept}
        interps = {name: rows for name, rows in self.interps.items() if name in names}
        return Structure(domains, interps, Vocabulary(kept))

    # -- value semantics --------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Structure):
            return NotImplemented
        return self.domains == other.domains and self.interps == other.interps \
            and sorted(self.vocabulary.symbols) == sorted(other.vocabulary.symbols)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.domains.items()), frozenset(self.interps.items())))
        return self._hash

    def __repr__(self) -> str:
        doms = ", ".join(f"{n}: {{{', '.join(self._sorted[n])}}}" for n in self.sorts())
        return f"Structure({doms}; {', '.join(sorted(self.interps))})"


def validate_structure(voc: Vocabulary, structure: Structure) -> List[Violation]:
    violations: List[Violation] = []
    for sort in structure.sorts():
        if not structure.domains[sort]:
            violations.append(Violation("MissingDomain", f"domain of sort {sort} is empty", sort))
    for symbol in voc:
        missing = [n for n in symbol.sorts if n not in structure.domains]
        for sort in missing:
            violations.append(Violation("MissingDomain", f"{symbol.name} needs a domain for sort {sort}", symbol))
        if missing:
            continue
        for row in sorted(structure.interp(symbol.name)):
            if len(row) != symbol.arity:
                violations.append(Violation(
                    "TupleOutOfDomain", f"{symbol.name}{row} has {len(row)} components, expected {symbol.arity}", symbol))
                continue
            for position, (element, sort) in enumerate(zip(row, symbol.sorts)):
                if element not in structure.domains[sort]:
                    violations.append(Violation(
                        "TupleOutOfDomain",
                        f"{symbol.name}{row}: component {position + 1} ({element}) is not in domain {sort}", symbol))
    for name in sorted(set(structure.interps) - set(voc.names())):
        violations.append(Violation("UnknownSymbol", f"relation {name} is not in the vocabulary", name))
    return violations


# ---------------------------------------------------------------------------
# Assignments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Assignment:
    ind: Mapping[IndividualVar, Element] = field(default_factory=dict)
    rel: Mapping[RelationVar, Relation] = field(default_factory=dict)

    def __call__(self, var):
        if isinstance(var, IndividualVar):
            return self.ind[var]
        return self.rel[var]

    def covers(self, var) -> bool:
        return var in (self.ind if isinstance(var, IndividualVar) else self.rel)

    def modify(self, var, value, structure: Optional[Structure] = None) -> "Assignment":
        return modify(self, var, value, structure)


def modify(s: Assignment, var: Union[IndividualVar, RelationVar], value,
           structure: Optional[Structure] = None) -> Assignment:
    """s[a/x] or s[A/X]; with a structure, the value is checked against the variable's sorts."""
    if isinstance(var, IndividualVar):
        if structure is not None and value not in structure.domains.get(var.sort, ()):
            raise SortViolation(f"{value} is not an element of sort {var.sort}")
        ind = dict(s.ind)
        ind[var] = value
        return Assignment(ind, s.rel)
    rows = frozenset(tuple(row) for row in value)
    if structure is not None:
        for row in rows:
            if len(row) != var.arity or any(
                    e not in structure.domains.get(n, ()) for e, n in zip(row, var.sorts)):
                raise SortViolation(f"{row} is outside the product of sorts {var.sorts} for {var.name}")
    rel = dict(s.rel)
    rel[var] = rows
    return Assignment(s.ind, rel)


# ---------------------------------------------------------------------------
# Budgets and expansions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Budget:
    domain_bound: int = 3
    relation_cap: int = 65536
    step_cap: int = 10 ** 7

    def __post_init__(self):
        if self.domain_bound < 0:
            raise ValueError("domain_bound must be a natural number")
        if self.relation_cap < 1 or self.step_cap < 1:
            raise ValueError("relation_cap and step_cap must be positive")

    def as_dict(self) -> Dict[str, int]:
        return {"domain_bound": self.domain_bound, "relation_cap": self.relation_cap, "step_cap": self.step_cap}


@dataclass(frozen=True)
class ExpansionCandidate:
    """New domains for the sorts of a block; `interchangeable` lists fresh elements
    that lie in exactly the same new domains."""
    new_domains: Mapping[int, FrozenSet[Element]]
    interchangeable: Tuple[Tuple[Element, ...], ...] = ()

    def size(self) -> int:
        return sum(len(d) for d in self.new_domains.values())

    def max_size(self) -> int:
        return max((len(d) for d in self.new_domains.values()), default=0)

    def fresh(self) -> FrozenSet[Element]:
        return frozenset(e for d in self.new_domains.values() for e in d if e.startswith(FRESH_PREFIX))

    def as_dict(self) -> Dict[str, List[Element]]:
        return {str(n): sorted(d) for n, d in sorted(self.new_domains.items())}


def _subsets(pool: Sequence[Element], limit: int) -> List[Tuple[Element, ...]]:
    return [combo for r in range(min(limit, len(pool)) + 1) for combo in itertools.combinations(pool, r)]


def _fresh_names(count: int, taken: Iterable[Element]) -> List[Element]:
    taken = set(taken)
    names: List[Element] = []
    for index in itertools.count():
        if len(names) == count:
            break
        name = f"{FRESH_PREFIX}{index}"
        if name not in taken:
            names.append(name)
    return names


def enumerate_expansions(structure: Structure, block_sorts: Iterable[int],
                         budget: Budget) -> Iterator[ExpansionCandidate]:
    """Every choice of new domains for `block_sorts`, one per isomorphism type over
    the old elements, each domain of size 1..domain_bound.

    A candidate picks, per block sort, a subset of the elements of `structure`
    (all of them, including elements of a sort being replaced) plus fresh
    elements. Fresh elements are described only by which block sorts they belong
    to, so one count per nonempty subset of block sorts fixes a candidate up to
    isomorphism. Candidates come out by largest domain, then total size, then
    lexicographically, so raising the bound only appends.
    """
    sorts = sorted(set(block_sorts))
    if not sorts:
        raise ValueError("block must have at least one sort")
    pool = structure.elements()
    signatures = [combo for r in range(1, len(sorts) + 1) for combo in itertools.combinations(sorts, r)]
    produced = 0
    for level in range(1, budget.domain_bound + 1):
        batch = []
        for olds in itertools.product(*(_subsets(pool, level) for _ in sorts)):
            for counts in _signature_counts(sorts, signatures, olds, level):
                sizes = [len(old) + sum(c for sig, c in zip(signatures, counts) if n in sig)
                         for n, old in zip(sorts, olds)]
                if min(sizes) < 1 or max(sizes) != level:
                    continue
                key = (level, sum(sizes), tuple((size, len(old), old) for size, old in zip(sizes, olds)), counts)
                batch.append((key, olds, counts))
        batch.sort(key=lambda item: item[0])
        logger.debug("expansion level %d over sorts %s: %d candidates", level, sorts, len(batch))
        for _, olds, counts in batch:
            produced += 1
            if produced > budget.step_cap:
                raise BudgetExceeded(f"more than {budget.step_cap} expansion candidates")
            yield _build_candidate(sorts, signatures, olds, counts, pool)


def _signature_counts(sorts, signatures, olds, level) -> Iterator[Tuple[int, ...]]:
    room = {n: level - len(old) for n, old in zip(sorts, olds)}
    if min(room.values()) < 0:
        return

    def extend(index: int, acc: List[int]):
        if index == len(signatures):
            yield tuple(acc)
            return
        signature = signatures[index]
        top = min(room[n] for n in signature)
        for count in range(top + 1):
            for n in signature:
                room[n] -= count
            acc.append(count)
            yield from extend(index + 1, acc)
            acc.pop()
            for n in signature:
                room[n] += count

    yield from extend(0, [])


def _build_candidate(sorts, signatures, olds, counts, pool) -> ExpansionCandidate:
    fresh = iter(_fresh_names(sum(counts), pool))
    domains: Dict[int, set] = {n: set(old) for n, old in zip(sorts, olds)}
    classes = []
    for signature, count in zip(signatures, counts):
        group = tuple(next(fresh) for _ in range(count))
        for n in signature:
            domains[n].update(group)
        if count > 1:
            classes.append(group)
    return ExpansionCandidate({n: frozenset(d) for n, d in domains.items()}, tuple(classes))


def enumerate_relations(domains: Union[Structure, Mapping[int, Iterable[Element]]],
                        sort_tuple: Sequence[int], cap: int) -> Iterator[Relation]:
    """All subsets of the product of the sort domains, smallest first."""
    if isinstance(domains, Structure):
        columns = [domains.domain(n) for n in sort_tuple]
    else:
        missing = [n for n in sort_tuple if n not in domains]
        if missing:
            raise MissingDomain(f"no domain for sort {missing[0]}")
        columns = [tuple(sorted(domains[n])) for n in sort_tuple]
    product = list(itertools.product(*columns))
    if len(product) >= 64 or 2 ** len(product) > cap:
        raise BudgetExceeded(f"2^{len(product)} relations over sorts {tuple(sort_tuple)} exceed the cap of {cap}")
    for r in range(len(product) + 1):
        for combo in itertools.combinations(product, r):
            yield frozenset(combo)


# ---------------------------------------------------------------------------
# Isomorphism
# ---------------------------------------------------------------------------

def relation_graph(structure: Structure) -> nx.DiGraph:
    """Elements as nodes labelled with the sorts they belong to, plus one node per
    relation tuple labelled with the symbol and joined to its entries by edges
    labelled with their argument positions."""
    graph = nx.DiGraph()
    membership: Dict[Element, List[int]] = {}
    for sort in structure.sorts():
        for element in structure.domains[sort]:
            membership.setdefault(element, []).append(sort)
    for element, sorts in membership.items():
        graph.add_node(("element", element), label=("element", tuple(sorts)))
    for name, rows in structure.interps.items():
        for row in rows:
            node = ("tuple", name, row)
            graph.add_node(node, label=("tuple", name))
            positions: Dict[Element, List[int]] = {}
            for i, element in enumerate(row):
                positions.setdefault(element, []).append(i)
            for element, at in positions.items():
                graph.add_edge(node, ("element", element), positions=tuple(at))
    return graph


def isomorphic(left: Structure, right: Structure) -> bool:
    """A sort-respecting bijection preserving every relation, found by VF2 on the relation graphs."""
    if left.sorts() != right.sorts() or sorted(left.interps) != sorted(right.interps):
        return False
    if any(len(left.domains[n]) != len(right.domains[n]) for n in left.sorts()):
        return False
    matcher = isomorphism.DiGraphMatcher(
        relation_graph(left), relation_graph(right),
        node_match=lambda a, b: a["label"] == b["label"],
        edge_match=lambda a, b: a["positions"] == b["positions"])
    return matcher.is_isomorphic()


def empty_structure() -> Structure:
    return Structure({}, {}, Vocabulary())
