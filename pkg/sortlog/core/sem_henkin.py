# core/sem_henkin.py
"""
Finite Henkin structures: a structure plus a set U of candidate new domains
and a set G of typed relations. Relation quantifiers range over G and new-sort
blocks over expansions whose domains come from U, which makes truth exactly
decidable on finite triples.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .axioms import first_comprehension, second_comprehension
from .errors import BudgetExceeded, NotFound, PreconditionViolation, Violation
from .model import Assignment, Budget, Row, Structure, enumerate_expansions, enumerate_relations, validate_structure
from .sem_full import check_preconditions
from .syntax import (Equation, ExistsInd, ExistsNewSorts, ExistsRel, ForallInd, ForallRel, Formula, IndividualVar, Not,
                     Or, PredAtom, RelationVar, VarAtom, Vocabulary, free_individual_vars, free_relation_vars,
                     free_sorts, fresh_name, is_sentence, subformulas, symbols_of, well_formed)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class GRelation:
    """A member of G: a sort tuple and a set of tuples."""
    sorts: Tuple[int, ...]
    tuples: FrozenSet[Row] = frozenset()

    def fits(self, structure: Structure, sorts: Sequence[int]) -> bool:
        if tuple(sorts) != self.sorts:
            return False
        domains = [structure.domains.get(n) for n in sorts]
        if any(d is None for d in domains):
            return False
        return all(len(row) == len(domains) and all(e in d for e, d in zip(row, domains)) for row in self.tuples)

    def sort_key(self):
        return (len(self.tuples), len(self.sorts), self.sorts, tuple(sorted(self.tuples)))


def _domain_key(domain: FrozenSet[str]):
    return (len(domain), tuple(sorted(domain)))


@dataclass(frozen=True)
class HenkinStructure:
    base: Structure
    U: Tuple[FrozenSet[str], ...] = ()
    G: Tuple[GRelation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "U", tuple(sorted({frozenset(d) for d in self.U}, key=_domain_key)))
        object.__setattr__(self, "G", tuple(sorted(set(self.G), key=GRelation.sort_key)))

    def size(self) -> int:
        return self.base.size()

    def relations_for(self, structure: Structure, sorts: Sequence[int]) -> List[FrozenSet[Row]]:
        return [g.tuples for g in self.G if g.fits(structure, sorts)]


def validate_henkin(voc: Vocabulary, henkin: HenkinStructure) -> List[Violation]:
    violations = validate_structure(voc, henkin.base)
    if any(not d for d in henkin.U):
        violations.append(Violation("EmptyCandidateDomain", "U contains the empty domain", henkin))
    known = set(henkin.base.elements()).union(*henkin.U) if henkin.U else set(henkin.base.elements())
    for g in henkin.G:
        for row in sorted(g.tuples):
            if len(row) != len(g.sorts):
                violations.append(Violation("TupleOutOfDomain", f"G member {g.sorts} holds {row} of wrong length", g))
            elif any(e not in known for e in row):
                violations.append(Violation("TupleOutOfDomain", f"G member {g.sorts} holds {row} with unknown elements", g))
    return violations


def full_henkin(structure: Structure, U: Iterable[Iterable[str]] = (), sort_tuples: Iterable[Sequence[int]] = (),
                new_sorts: Optional[Iterable[int]] = None, cap: int = 1 << 16) -> HenkinStructure:
    """G holds every relation over the given sort tuples, computed over the base domains
    and, for `new_sorts` (by default the sorts the base lacks), over every candidate domain."""
    U = tuple(frozenset(d) for d in U)
    records = set()
    for sorts in sort_tuples:
        replace = set(new_sorts) if new_sorts is not None else set(sorts) - set(structure.sorts())
        for columns in _column_choices(structure, U, sorts, replace):
            for relation in enumerate_relations(dict(enumerate(columns)), range(len(columns)), cap):
                records.add(GRelation(tuple(sorts), relation))
    return HenkinStructure(structure, U, tuple(records))


def _column_choices(structure: Structure, U: Sequence[FrozenSet[str]], sorts: Sequence[int],
                    replace: Iterable[int]) -> Iterator[Tuple[FrozenSet[str], ...]]:
    replace = set(replace)
    options = []
    for n in sorts:
        choices = []
        if n in structure.domains:
            choices.append(structure.domains[n])
        if n in replace:
            choices.extend(d for d in U if d not in choices)
        options.append(choices)
    seen = set()
    for combo in itertools.product(*options):
        if combo not in seen:
            seen.add(combo)
            yield combo


# ---------------------------------------------------------------------------
# Truth
# ---------------------------------------------------------------------------

class HenkinEvaluator:
    def __init__(self, henkin: HenkinStructure):
        self.henkin = henkin

    def holds(self, node: Formula, structure: Structure, ind: Dict, rel: Dict) -> bool:
        if isinstance(node, Equation):
            return ind[node.left] == ind[node.right]
        if isinstance(node, PredAtom):
            return tuple(ind[a] for a in node.args) in structure.interp(node.symbol.name)
        if isinstance(node, VarAtom):
            return tuple(ind[a] for a in node.args) in rel[node.var]
        if isinstance(node, Not):
            return not self.holds(node.body, structure, ind, rel)
        if isinstance(node, Or):
            return self.holds(node.left, structure, ind, rel) or self.holds(node.right, structure, ind, rel)
        if isinstance(node, ExistsInd):
            scope = dict(ind)
            for element in structure.domain(node.var.sort):
                scope[node.var] = element
                if self.holds(node.body, structure, scope, rel):
                    return True
            return False
        if isinstance(node, ExistsRel):
            scope = dict(rel)
            for relation in self.henkin.relations_for(structure, node.var.sorts):
                scope[node.var] = relation
                if self.holds(node.body, structure, ind, scope):
                    return True
            return False
        if isinstance(node, ExistsNewSorts):
            sorts = sorted(node.block_sorts)
            for domains in itertools.product(self.henkin.U, repeat=len(sorts)):
                expanded = structure.expand(dict(zip(sorts, domains)))
                options = [self.henkin.relations_for(expanded, var.sorts) for var in node.block]
                for relations in itertools.product(*options):
                    scope = dict(rel)
                    scope.update(zip(node.block, relations))
                    if self.holds(node.body, expanded, ind, scope):
                        return True
            return False
        raise TypeError(f"not a formula: {node!r}")


def eval_henkin(henkin: HenkinStructure, assignment: Assignment, phi: Formula) -> bool:
    check_preconditions(henkin.base, assignment, phi)
    return HenkinEvaluator(henkin).holds(phi, henkin.base, dict(assignment.ind), dict(assignment.rel))


def eval_henkin_sentence(henkin: HenkinStructure, phi: Formula) -> bool:
    if not is_sentence(phi):
        raise PreconditionViolation("a sentence is required")
    return eval_henkin(henkin, Assignment(), phi)


# ---------------------------------------------------------------------------
# Comprehension
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComprehensionFailure:
    schema: str
    instance: Formula
    status: str


@dataclass
class ComprehensionReport:
    checked_instances: int = 0
    failures: List[ComprehensionFailure] = field(default_factory=list)
    depth: int = 0
    size: int = 0
    max_arity: int = 1

    @property
    def passed(self) -> bool:
        return not self.failures

    def bounds(self) -> Dict[str, int]:
        return {"depth": self.depth, "size": self.size, "max_arity": self.max_arity}


def comprehension_sort(henkin: HenkinStructure) -> int:
    """The sort used for Second Comprehension instances: one above every sort in sight."""
    used = set(henkin.base.sorts()) | henkin.base.vocabulary.sorts()
    return max(used, default=-1) + 1


class DefinableFormulas:
    """Candidate ψ for comprehension instances over a fixed list of worlds.

    A formula's truth table is a bitmask over the points of its context: one point
    per world and assignment to the context variables, individual variables ranging
    over domains and relation variables over the fitting members of G. Formulas are
    built by increasing size from equations, predicate and relation-variable atoms,
    negation, disjunction, and individual and relation quantifiers over the given
    sorts, and only the first formula met with each table is kept. Since every
    connective acts on tables, this loses no definable relation.
    """

    def __init__(self, henkin: HenkinStructure, worlds: Sequence[Structure], sorts: Sequence[int],
                 relation_sorts: Sequence[Tuple[int, ...]] = (), taken: Iterable[str] = ()):
        self.henkin = henkin
        self.worlds = list(worlds)
        self.sorts = tuple(sorts)
        self.relation_sorts = tuple(relation_sorts)
        self.symbols = tuple(sorted(henkin.base.vocabulary.symbols))
        self.taken = set(taken) | {s.name for s in self.symbols}
        self._points: Dict[tuple, List[tuple]] = {}
        self._parents: Dict[tuple, List[int]] = {}
        self._levels: Dict[tuple, List[List[Tuple[int, Formula]]]] = {}
        self._seen: Dict[tuple, set] = {}

    def value_range(self, structure: Structure, var) -> Sequence:
        if isinstance(var, IndividualVar):
            return structure.domain(var.sort) if var.sort in structure.domains else ()
        return self.henkin.relations_for(structure, var.sorts)

    def points(self, context: tuple) -> List[tuple]:
        if context not in self._points:
            self._points[context] = [
                (w,) + values for w, world in enumerate(self.worlds)
                for values in itertools.product(*(self.value_range(world, v) for v in context))]
        return self._points[context]

    def representatives(self, context: tuple, depth: int, size: int) -> Iterator[Tuple[int, Formula]]:
        """(table, formula) pairs with pairwise distinct tables, smallest formulas first."""
        for n in range(1, size + 1):
            yield from self._level(context, depth, n)

    def _level(self, context: tuple, depth: int, n: int) -> List[Tuple[int, Formula]]:
        key = (context, depth)
        levels = self._levels.setdefault(key, [])
        seen = self._seen.setdefault(key, set())
        while len(levels) < n:
            found = []
            for table, formula in self._candidates(context, depth, len(levels) + 1):
                if table not in seen:
                    seen.add(table)
                    found.append((table, formula))
            levels.append(found)
        return levels[n - 1]

    def _candidates(self, context: tuple, depth: int, n: int) -> Iterator[Tuple[int, Formula]]:
        if n == 1:
            yield from self._atoms(context)
            return
        full = (1 << len(self.points(context))) - 1
        for table, formula in self._level(context, depth, n - 1):
            if not isinstance(formula, Not):
                yield full ^ table, Not(formula)
        for left_size in range(1, n - 1):
            right_size = n - 1 - left_size
            if left_size > right_size:
                break
            rights = self._level(context, depth, right_size)
            for i, (left_table, left) in enumerate(self._level(context, depth, left_size)):
                start = i + 1 if left_size == right_size else 0
                for right_table, right in rights[start:]:
                    yield left_table | right_table, Or(left, right)
        if depth > 0:
            for var in self._binders(context):
                inner = context + (var,)
                node = ExistsInd if isinstance(var, IndividualVar) else ExistsRel
                for table, body in self._level(inner, depth - 1, n - 1):
                    yield self._project(inner, table), node(var, body)

    def _binders(self, context: tuple) -> List:
        k = len(context)
        binders: List = [IndividualVar(f"z{k}", n) for n in self.sorts]
        name = fresh_name(f"Z{k}", self.taken)
        binders.extend(RelationVar(name, sorts) for sorts in self.relation_sorts)
        return binders

    def _project(self, inner: tuple, table: int) -> int:
        if inner not in self._parents:
            index = {point: i for i, point in enumerate(self.points(inner[:-1]))}
            self._parents[inner] = [index[point[:-1]] for point in self.points(inner)]
        projected = 0
        for i, parent in enumerate(self._parents[inner]):
            if table >> i & 1:
                projected |= 1 << parent
        return projected

    def _table(self, context: tuple, test) -> int:
        table = 0
        for i, point in enumerate(self.points(context)):
            if test(point):
                table |= 1 << i
        return table

    def _atoms(self, context: tuple) -> Iterator[Tuple[int, Formula]]:
        slot = {var: i + 1 for i, var in enumerate(context)}
        inds = [v for v in context if isinstance(v, IndividualVar)]
        for i, left in enumerate(inds):
            for right in inds[i:]:
                if left.sort == right.sort:
                    a, b = slot[left], slot[right]
                    yield self._table(context, lambda p: p[a] == p[b]), Equation(left, right)
        for symbol in self.symbols:
            for args in itertools.product(*([v for v in inds if v.sort == n] for n in symbol.sorts)):
                picks = [slot[a] for a in args]
                yield (self._table(context, lambda p: tuple(p[k] for k in picks) in self.worlds[p[0]].interp(symbol.name)),
                       PredAtom(symbol, args))
        for var in context:
            if isinstance(var, RelationVar):
                at = slot[var]
                for args in itertools.product(*([v for v in inds if v.sort == n] for n in var.sorts)):
                    picks = [slot[a] for a in args]
                    yield self._table(context, lambda p: tuple(p[k] for k in picks) in p[at]), VarAtom(var, args)

    def comprehended(self, context: tuple, split: int, table: int, allowed: Sequence[set]) -> bool:
        """Whether, for every value of the parameters context[:split], some world holds a
        member of `allowed` equal to the relation the table defines on context[split:]."""
        rows: Dict[tuple, set] = {}
        for i, point in enumerate(self.points(context)):
            group = rows.setdefault(point[:split + 1], set())
            if table >> i & 1:
                group.add(point[split + 1:])
        targets = context[split:]
        for values in itertools.product(*(self.value_range(self.henkin.base, v) for v in context[:split])):
            if not any(frozenset(rows.get((w,) + values, ())) in allowed[w]
                       or (allowed[w] and not all(self.value_range(world, v) for v in targets))
                       for w, world in enumerate(self.worlds)):
                return False
        return True


def _parameters(henkin: HenkinStructure, tuples: Sequence[Tuple[int, ...]], taken: Iterable[str]) -> tuple:
    """One individual parameter per inhabited base sort and one relation parameter per
    sort tuple with members in G."""
    base = henkin.base
    params: List = [IndividualVar(f"p{i + 1}", n) for i, n in enumerate(base.sorts()) if base.domains.get(n)]
    taken = set(taken)
    for i, sorts in enumerate(tuples):
        if henkin.relations_for(base, sorts):
            params.append(RelationVar(fresh_name(f"R{i + 1}", taken), sorts))
    return tuple(params)


def _close(params: Sequence, psi: Formula, body: Formula) -> Formula:
    used = free_individual_vars(psi) | free_relation_vars(psi)
    for var in reversed(params):
        if var in used:
            body = ForallInd(var, body) if isinstance(var, IndividualVar) else ForallRel(var, body)
    return body


def check_comprehension(henkin: HenkinStructure, depth: int, size: int, max_arity: int = 1,
                        stop_at_first: bool = False) -> ComprehensionReport:
    """Check the instances ∀params ∃X ∀ȳ (Xȳ ↔ ψ) of both schemas for every ψ up to the
    bounds. ψ may use one parameter per base sort and per base relation sort tuple, and
    quantifiers over individuals and relations count towards `depth`."""
    report = ComprehensionReport(depth=depth, size=size, max_arity=max_arity)
    base = henkin.base
    base_sorts = tuple(base.sorts())
    taken = set(base.vocabulary.names())
    X_name = fresh_name("X", taken)
    taken.add(X_name)
    fresh = comprehension_sort(henkin)

    def tuples_over(sorts):
        return [t for arity in range(1, max_arity + 1) for t in itertools.product(sorts, repeat=arity)]

    params = _parameters(henkin, tuples_over(base_sorts), taken)
    taken.update(p.name for p in params)
    plans = []
    for arity in range(1, max_arity + 1):
        for sorts in itertools.product(base_sorts, repeat=arity):
            plans.append(("First", sorts, [base], base_sorts))
        worlds = [base.expand({fresh: d}) for d in henkin.U]
        plans.append(("Second", (fresh,) * arity, worlds, base_sorts + (fresh,)))

    for schema, sorts, worlds, quantifiable in plans:
        ys = tuple(IndividualVar(f"y{i + 1}", n) for i, n in enumerate(sorts))
        X = RelationVar(X_name, sorts)
        definable = DefinableFormulas(henkin, worlds, quantifiable, tuples_over(quantifiable), taken)
        allowed = [set(henkin.relations_for(world, sorts)) for world in worlds]
        context = params + ys
        build = first_comprehension if schema == "First" else second_comprehension
        for table, psi in definable.representatives(context, depth, size):
            report.checked_instances += 1
            if definable.comprehended(context, len(params), table, allowed):
                continue
            status = "no matching relation in G" if schema == "First" or henkin.U else "U is empty"
            report.failures.append(ComprehensionFailure(schema, _close(params, psi, build(X, ys, psi)), status))
            if stop_at_first:
                return report
    logger.debug("comprehension: %d instances, %d failures", report.checked_instances, len(report.failures))
    return report


# ---------------------------------------------------------------------------
# Countermodel search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchBounds:
    domain_bound: int = 3
    u_bound: int = 1
    g_bound: int = 6
    comprehension_depth: int = 1
    comprehension_size: int = 6
    max_arity: int = 1
    step_cap: int = 10 ** 6

    def as_dict(self) -> Dict[str, int]:
        return asdict(self)


def countermodel_search(theory: Sequence[Formula], phi: Formula, bounds: Optional[SearchBounds] = None,
                        vocabulary: Optional[Vocabulary] = None) -> HenkinStructure:
    """The first Henkin structure, in search order, that satisfies `theory`, refutes `phi`
    and passes the comprehension check at the configured depth."""
    bounds = bounds or SearchBounds()
    sentences = list(theory) + [phi]
    if vocabulary is None:
        vocabulary = Vocabulary(tuple(sorted({s for f in sentences for s in symbols_of(f)}, key=lambda s: s.name)))
    for sentence in sentences:
        if not is_sentence(sentence):
            raise PreconditionViolation("countermodel search needs sentences")
        violations = well_formed(vocabulary, sentence)
        if violations:
            raise PreconditionViolation(str(violations[0]))

    base_sorts = sorted(set().union(*(free_sorts(f) for f in sentences)) | vocabulary.sorts())
    block_sorts = {n for f in sentences for node in subformulas(f) if isinstance(node, ExistsNewSorts) for n in node.block_sorts}
    rel_tuples = {var.sorts for f in sentences for node in subformulas(f)
                  for var in _bound_relation_vars(node)}
    first_order = not any(isinstance(node, (ExistsRel, ExistsNewSorts)) for f in sentences for node in subformulas(f))
    searched = 0
    for base in _base_structures(base_sorts, vocabulary, bounds):
        if first_order:
            # U and G cannot change the truth of first-order sentences
            plain = HenkinEvaluator(HenkinStructure(base))
            if plain.holds(phi, base, {}, {}) or not all(plain.holds(t, base, {}, {}) for t in theory):
                searched += 1
                continue
        fresh = max(set(base_sorts) | vocabulary.sorts(), default=-1) + 1
        tuples = set(rel_tuples)
        for arity in range(1, bounds.max_arity + 1):
            tuples.update(itertools.product(base_sorts, repeat=arity))
            tuples.add((fresh,) * arity)
        new_sorts = block_sorts | {fresh}
        for U in _u_choices(base, bounds):
            pool = _relation_pool(base, U, sorted(tuples), new_sorts)
            for size in range(bounds.g_bound + 1):
                for G in itertools.combinations(pool, size):
                    searched += 1
                    if searched > bounds.step_cap:
                        raise NotFound(bounds, searched - 1, complete=False)
                    henkin = HenkinStructure(base, U, G)
                    evaluator = HenkinEvaluator(henkin)
                    if evaluator.holds(phi, base, {}, {}):
                        continue
                    if not all(evaluator.holds(t, base, {}, {}) for t in theory):
                        continue
                    report = check_comprehension(henkin, bounds.comprehension_depth, bounds.comprehension_size,
                                                 bounds.max_arity, stop_at_first=True)
                    if report.passed:
                        logger.info("countermodel found after %d candidates", searched)
                        return henkin
    raise NotFound(bounds, searched)


def _bound_relation_vars(node: Formula) -> Tuple[RelationVar, ...]:
    if isinstance(node, ExistsRel):
        return (node.var,)
    if isinstance(node, ExistsNewSorts):
        return node.block
    if isinstance(node, VarAtom):
        return (node.var,)
    return ()


def _base_structures(sorts: Sequence[int], vocabulary: Vocabulary, bounds: SearchBounds) -> Iterator[Structure]:
    if not sorts:
        yield Structure({}, {}, vocabulary)
        return
    budget = Budget(domain_bound=bounds.domain_bound, step_cap=bounds.step_cap)
    for candidate in enumerate_expansions(Structure({}), sorts, budget):
        skeleton = Structure(candidate.new_domains, {}, vocabulary)
        symbols = list(vocabulary)
        try:
            options = [list(enumerate_relations(skeleton, s.sorts, budget.relation_cap)) for s in symbols]
        except BudgetExceeded:
            logger.debug("skipping base %s: too many interpretations", candidate.as_dict())
            continue
        for relations in itertools.product(*options):
            yield Structure(candidate.new_domains, {s.name: r for s, r in zip(symbols, relations)}, vocabulary)


def _u_choices(base: Structure, bounds: SearchBounds) -> Iterator[Tuple[FrozenSet[str], ...]]:
    elements = base.elements() + [fresh_name("_u0", set(base.elements()))]
    pool = [frozenset(c) for r in range(1, bounds.domain_bound + 1) for c in itertools.combinations(elements, r)]
    pool.sort(key=_domain_key)
    for size in range(bounds.u_bound + 1):
        yield from itertools.combinations(pool, size)


def _relation_pool(base: Structure, U: Sequence[FrozenSet[str]], tuples: Sequence[Tuple[int, ...]],
                   new_sorts: Iterable[int], cap: int = 1 << 12) -> List[GRelation]:
    records = set()
    for sorts in tuples:
        for columns in _column_choices(base, U, sorts, new_sorts):
            try:
                for relation in enumerate_relations(dict(enumerate(columns)), range(len(columns)), cap):
                    records.add(GRelation(tuple(sorts), relation))
            except BudgetExceeded:
                logger.debug("relation pool skips sorts %s over %s", sorts, columns)
    return sorted(records, key=GRelation.sort_key)
