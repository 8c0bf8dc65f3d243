# core/sem_full.py
"""
Bounded evaluator for the full-semantics truth definition.

Verdicts are three-valued. True and False are always final; Unknown means
that some budget ran out before the answer was settled. New-sort blocks can
only ever be confirmed, so they evaluate to True or Unknown.

Relation quantifiers whose candidate set is too large to list, and the
relations of a new-sort block, are searched over partial interpretations:
undecided tuples evaluate to Unknown under Kleene's strong tables, a definite
False prunes the branch, a definite True is a witness, and otherwise the
search splits on the first undecided tuple the evaluation ran into. Past the
relation cap such a search can confirm a relation quantifier but never refute
it.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BudgetExceeded, MissingDomain, PreconditionViolation
from .model import Assignment, Budget, Row, Structure, enumerate_expansions, enumerate_relations
from .syntax import (Equation, ExistsInd, ExistsNewSorts, ExistsRel, Formula, IndividualVar, Not, Or, PredAtom,
                     RelationVar, VarAtom, free_individual_vars, free_relation_vars, free_sorts, quantifier_rank,
                     well_formed)

logger = logging.getLogger(__name__)

MEMO_LIMIT = 500_000


class Verdict(Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"

    @classmethod
    def of(cls, value: bool) -> "Verdict":
        return cls.TRUE if value else cls.FALSE

    @property
    def definite(self) -> bool:
        return self is not Verdict.UNKNOWN

    def negate(self) -> "Verdict":
        if self is Verdict.TRUE:
            return Verdict.FALSE
        if self is Verdict.FALSE:
            return Verdict.TRUE
        return Verdict.UNKNOWN

    def or_(self, other: "Verdict") -> "Verdict":
        if self is Verdict.TRUE or other is Verdict.TRUE:
            return Verdict.TRUE
        if self is Verdict.FALSE and other is Verdict.FALSE:
            return Verdict.FALSE
        return Verdict.UNKNOWN

    def and_(self, other: "Verdict") -> "Verdict":
        return self.negate().or_(other.negate()).negate()

    def __str__(self) -> str:
        return self.value


TRUE, FALSE, UNKNOWN = Verdict.TRUE, Verdict.FALSE, Verdict.UNKNOWN


@dataclass
class EvalStats:
    steps: int = 0
    expansions: int = 0
    search_nodes: int = 0
    relations: int = 0
    memo_hits: int = 0

    def as_dict(self) -> Dict[str, int]:
        return asdict(self)


class PartialRelation:
    """A relation variable's value under construction: decided rows map to their bit."""

    __slots__ = ("var", "rows", "bits")

    def __init__(self, var: RelationVar, rows: Sequence[Row]):
        self.var = var
        self.rows = list(rows)
        self.bits: Dict[Row, bool] = {}

    def total(self) -> frozenset:
        return frozenset(row for row, bit in self.bits.items() if bit)


class _StepCapReached(Exception):
    pass


class _NodeCapReached(Exception):
    pass


@dataclass(frozen=True)
class _NodeInfo:
    free_inds: Tuple[IndividualVar, ...]
    memo: bool


class Evaluator:
    """One evaluation context; `stats` accumulates over every call."""

    def __init__(self, budget: Optional[Budget] = None):
        self.budget = budget or Budget()
        self.stats = EvalStats()
        self._memo: Dict[tuple, Verdict] = {}
        self._info: Dict[int, Tuple[Formula, _NodeInfo]] = {}
        self._unknown: Dict[int, Tuple[int, Row]] = {}
        self._seq = 0

    # -- entry points ----------------------------------------------------

    def evaluate(self, structure: Structure, assignment: Assignment, phi: Formula) -> Verdict:
        check_preconditions(structure, assignment, phi)
        try:
            return self._eval(phi, structure, dict(assignment.ind), dict(assignment.rel))
        except _StepCapReached:
            logger.debug("step cap %d reached at top level", self.budget.step_cap)
            return UNKNOWN

    def evaluate_sentence(self, structure: Structure, phi: Formula) -> Verdict:
        if free_individual_vars(phi) or free_relation_vars(phi):
            raise PreconditionViolation("eval_sentence needs a formula without free variables")
        return self.evaluate(structure, Assignment(), phi)

    # -- bookkeeping ----------------------------------------------------

    def _tick(self) -> None:
        self.stats.steps += 1
        if self.stats.steps > self.budget.step_cap:
            raise _StepCapReached()

    def _node_info(self, node: Formula) -> _NodeInfo:
        # the node is kept alongside its info so its id stays unique
        entry = self._info.get(id(node))
        if entry is None:
            entry = (node, _NodeInfo(tuple(sorted(free_individual_vars(node))),
                                     quantifier_rank(node) > 0 and not free_relation_vars(node)))
            self._info[id(node)] = entry
        return entry[1]

    def _note_unknown(self, owner: PartialRelation, row: Row) -> None:
        key = id(owner)
        if key not in self._unknown:
            self._seq += 1
            self._unknown[key] = (self._seq, row)

    # -- recursion --------------------------------------------------------

    def _eval(self, node: Formula, structure: Structure, ind: Dict, rel: Dict) -> Verdict:
        kind = type(node)
        if kind is VarAtom:
            value = rel[node.var]
            row = tuple(ind[a] for a in node.args)
            if type(value) is PartialRelation:
                bit = value.bits.get(row)
                if bit is None:
                    self._note_unknown(value, row)
                    return UNKNOWN
                return TRUE if bit else FALSE
            return TRUE if row in value else FALSE
        if kind is Equation:
            return TRUE if ind[node.left] == ind[node.right] else FALSE
        if kind is PredAtom:
            return TRUE if tuple(ind[a] for a in node.args) in structure.interp(node.symbol.name) else FALSE
        if kind is Not:
            return self._eval(node.body, structure, ind, rel).negate()
        if kind is Or:
            left = self._eval(node.left, structure, ind, rel)
            if left is TRUE:
                return TRUE
            right = self._eval(node.right, structure, ind, rel)
            if right is TRUE:
                return TRUE
            return FALSE if left is FALSE and right is FALSE else UNKNOWN

        info = self._node_info(node)
        if not info.memo:
            return self._quantifier(node, structure, ind, rel)
        key = (structure, id(node), tuple(ind[v] for v in info.free_inds))
        hit = self._memo.get(key)
        if hit is not None:
            self.stats.memo_hits += 1
            return hit
        result = self._quantifier(node, structure, ind, rel)
        if len(self._memo) >= MEMO_LIMIT:
            self._memo.clear()
        self._memo[key] = result
        return result

    def _quantifier(self, node: Formula, structure: Structure, ind: Dict, rel: Dict) -> Verdict:
        if isinstance(node, ExistsInd):
            scope = dict(ind)
            unknown = False
            for element in structure.domain(node.var.sort):
                scope[node.var] = element
                verdict = self._eval(node.body, structure, scope, rel)
                if verdict is TRUE:
                    return TRUE
                unknown = unknown or verdict is UNKNOWN
            return UNKNOWN if unknown else FALSE
        if isinstance(node, ExistsRel):
            try:
                return self._exists_relation(node, structure, ind, rel)
            except _StepCapReached:
                return UNKNOWN
        if isinstance(node, ExistsNewSorts):
            try:
                return self._exists_new_sorts(node, structure, ind, rel)
            except _StepCapReached:
                return UNKNOWN
        raise TypeError(f"not a formula: {node!r}")

    def _exists_relation(self, node: ExistsRel, structure: Structure, ind: Dict, rel: Dict) -> Verdict:
        try:
            candidates = enumerate_relations(structure, node.var.sorts, self.budget.relation_cap)
            first = next(candidates)
        except BudgetExceeded:
            # past the relation cap only a witness is final
            logger.debug("relation quantifier over %s falls back to partial search", node.var)
            verdict = self._search(node.body, structure, ind, rel, [node.var], ())
            return TRUE if verdict is TRUE else UNKNOWN
        scope = dict(rel)
        unknown = False
        relation = first
        while True:
            self._tick()
            self.stats.relations += 1
            scope[node.var] = relation
            verdict = self._eval(node.body, structure, ind, scope)
            if verdict is TRUE:
                return TRUE
            unknown = unknown or verdict is UNKNOWN
            relation = next(candidates, None)
            if relation is None:
                return UNKNOWN if unknown else FALSE

    def _exists_new_sorts(self, node: ExistsNewSorts, structure: Structure, ind: Dict, rel: Dict) -> Verdict:
        if self.budget.domain_bound == 0:
            return UNKNOWN
        block = [var for _, var in sorted(enumerate(node.block), key=lambda item: (item[1].arity, item[0]))]
        try:
            for candidate in enumerate_expansions(structure, node.block_sorts, self.budget):
                self._tick()
                self.stats.expansions += 1
                expanded = structure.expand(candidate.new_domains)
                verdict = self._search(node.body, expanded, ind, rel, block, candidate.interchangeable)
                if verdict is TRUE:
                    logger.debug("new-sort witness over %s", candidate.as_dict())
                    return TRUE
        except BudgetExceeded as exc:
            logger.debug("expansion enumeration stopped: %s", exc)
        return UNKNOWN

    # -- partial-relation search -----------------------------------------

    def _search(self, body: Formula, structure: Structure, ind: Dict, rel: Dict,
                variables: List[RelationVar], interchangeable: Sequence[Sequence[str]]) -> Verdict:
        owners = [PartialRelation(var, structure.product(var.sorts)) for var in variables]
        order = [(k, row) for k, owner in enumerate(owners) for row in owner.rows]
        swaps = _swap_permutations(order, interchangeable)
        scope = dict(rel)
        scope.update({owner.var: owner for owner in owners})
        cap = self.budget.relation_cap
        nodes = 0

        def lex_leader() -> bool:
            for perm in swaps:
                for i, j in enumerate(perm):
                    a = owners[order[i][0]].bits.get(order[i][1])
                    b = owners[order[j][0]].bits.get(order[j][1])
                    if a is None or b is None:
                        break
                    if a != b:
                        if a and not b:
                            return False
                        break
            return True

        def pick() -> Optional[Tuple[int, Row]]:
            best = None
            for k, owner in enumerate(owners):
                seen = self._unknown.get(id(owner))
                if seen is not None and (best is None or seen[0] < best[0]):
                    best = (seen[0], k, seen[1])
            if best is not None:
                return best[1], best[2]
            for k, row in order:
                if row not in owners[k].bits:
                    return k, row
            return None

        def visit() -> Verdict:
            nonlocal nodes
            nodes += 1
            if nodes > cap:
                raise _NodeCapReached()
            self.stats.search_nodes += 1
            self._tick()
            for owner in owners:
                self._unknown.pop(id(owner), None)
            verdict = self._eval(body, structure, ind, scope)
            if verdict is not UNKNOWN:
                return verdict
            choice = pick()
            if choice is None:
                return UNKNOWN
            k, row = choice
            bits = owners[k].bits
            unknown = False
            for value in (False, True):
                bits[row] = value
                if lex_leader():
                    outcome = visit()
                    if outcome is TRUE:
                        return TRUE
                    unknown = unknown or outcome is UNKNOWN
            del bits[row]
            return UNKNOWN if unknown else FALSE

        try:
            return visit()
        except _NodeCapReached:
            logger.debug("search over %s stopped after %d nodes", ", ".join(map(str, variables)), cap)
            return UNKNOWN
        finally:
            for owner in owners:
                self._unknown.pop(id(owner), None)


def _swap_permutations(order: List[Tuple[int, Row]], interchangeable: Sequence[Sequence[str]]) -> List[List[int]]:
    """Index permutations of the bit order for each transposition of adjacent interchangeable elements."""
    if not interchangeable:
        return []
    position = {bit: i for i, bit in enumerate(order)}
    perms = []
    for group in interchangeable:
        for a, b in zip(group, group[1:]):
            swap = {a: b, b: a}
            perms.append([position[(k, tuple(swap.get(e, e) for e in row))] for k, row in order])
    return perms


def check_preconditions(structure: Structure, assignment: Assignment, phi: Formula) -> None:
    violations = well_formed(structure.vocabulary, phi)
    if violations:
        raise PreconditionViolation(f"formula is not well formed over the structure: {violations[0].message}")
    missing = sorted(free_sorts(phi) - set(structure.sorts()))
    if missing:
        raise PreconditionViolation(f"sort {missing[0]} is free in the formula but has no domain")
    for var in sorted(free_individual_vars(phi)):
        if var not in assignment.ind:
            raise PreconditionViolation(f"assignment does not cover {var}")
        if assignment.ind[var] not in structure.domains.get(var.sort, ()):
            raise PreconditionViolation(f"{var} is assigned {assignment.ind[var]}, which is not of sort {var.sort}")
    for var in sorted(free_relation_vars(phi)):
        if var not in assignment.rel:
            raise PreconditionViolation(f"assignment does not cover {var}")
        try:
            product = set(structure.product(var.sorts))
        except MissingDomain as exc:
            raise PreconditionViolation(str(exc)) from None
        if not set(assignment.rel[var]) <= product:
            raise PreconditionViolation(f"value of {var} leaves the product of its sorts")


def evaluate(structure: Structure, assignment: Assignment, phi: Formula,
             budget: Optional[Budget] = None) -> Verdict:
    return Evaluator(budget).evaluate(structure, assignment, phi)


def eval_sentence(structure: Structure, phi: Formula, budget: Optional[Budget] = None) -> Verdict:
    return Evaluator(budget).evaluate_sentence(structure, phi)
