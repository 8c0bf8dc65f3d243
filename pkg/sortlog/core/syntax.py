# core/syntax.py
"""
Vocabularies, sorted variables and the formula AST of sort logic.

Only the eight primitive formation rules are represented as node classes:
equations, predicate atoms, relation-variable atoms, negation, disjunction,
individual and relation existentials, and the block new-sort existential.
Conjunction, implication, equivalence and the universal forms are smart
constructors that expand into the primitives.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

from .errors import CaptureViolation, SortClash, Violation

logger = logging.getLogger(__name__)

SortId = int
SortSet = FrozenSet[int]


# ---------------------------------------------------------------------------
# Vocabulary and variables
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class PredicateSymbol:
    name: str
    sorts: Tuple[int, ...]
    declared_arity: Optional[int] = None

    @property
    def arity(self) -> int:
        return len(self.sorts)

    def __str__(self) -> str:
        return f"{self.name}:({','.join(map(str, self.sorts))})"


@dataclass(frozen=True)
class Vocabulary:
    """A finite set of predicate symbols, kept sorted by name; `validate_vocabulary` checks it."""
    symbols: Tuple[PredicateSymbol, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(sorted(self.symbols, key=lambda s: (s.name, s.sorts))))

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Sequence[int]]) -> "Vocabulary":
        return cls(tuple(PredicateSymbol(name, tuple(int(s) for s in sorts))
                         for name, sorts in sorted(mapping.items())))

    def get(self, name: str) -> Optional[PredicateSymbol]:
        for symbol in self.symbols:
            if symbol.name == name:
                return symbol
        return None

    def __contains__(self, name: object) -> bool:
        return self.get(name) is not None  # type: ignore[arg-type]

    def __iter__(self) -> Iterator[PredicateSymbol]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def names(self) -> List[str]:
        return [s.name for s in self.symbols]

    def sorts(self) -> Set[int]:
        return {n for s in self.symbols for n in s.sorts}

    def as_mapping(self) -> Dict[str, List[int]]:
        return {s.name: list(s.sorts) for s in sorted(self.symbols)}

    def extend(self, symbols: Iterable[PredicateSymbol]) -> "Vocabulary":
        known = {s.name: s for s in self.symbols}
        added = list(self.symbols)
        for symbol in symbols:
            if symbol.name in known and known[symbol.name] == symbol:
                continue
            added.append(symbol)
            known[symbol.name] = symbol
        return Vocabulary(tuple(added))


@dataclass(frozen=True, order=True)
class IndividualVar:
    name: str
    sort: int

    def __str__(self) -> str:
        return f"{self.name}:{self.sort}"


@dataclass(frozen=True, order=True)
class RelationVar:
    name: str
    sorts: Tuple[int, ...]

    def __post_init__(self):
        if not self.sorts:
            raise ValueError(f"relation variable {self.name} needs at least one sort")

    @property
    def arity(self) -> int:
        return len(self.sorts)

    def __str__(self) -> str:
        return f"{self.name}:({','.join(map(str, self.sorts))})"


Variable = Union[IndividualVar, RelationVar]


# ---------------------------------------------------------------------------
# Formula AST
# ---------------------------------------------------------------------------

class Formula:
    """Base class of the eight primitive formula nodes."""
    __slots__ = ()


@dataclass(frozen=True)
class Equation(Formula):
    left: IndividualVar
    right: IndividualVar


@dataclass(frozen=True)
class PredAtom(Formula):
    symbol: PredicateSymbol
    args: Tuple[IndividualVar, ...]


@dataclass(frozen=True)
class VarAtom(Formula):
    var: RelationVar
    args: Tuple[IndividualVar, ...]


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ExistsInd(Formula):
    var: IndividualVar
    body: Formula


@dataclass(frozen=True)
class ExistsRel(Formula):
    var: RelationVar
    body: Formula


@dataclass(frozen=True)
class ExistsNewSorts(Formula):
    block: Tuple[RelationVar, ...]
    body: Formula

    def __post_init__(self):
        if not self.block:
            raise ValueError("new-sort block must bind at least one relation variable")

    @property
    def block_sorts(self) -> FrozenSet[int]:
        return frozenset(n for var in self.block for n in var.sorts)


ATOMS = (Equation, PredAtom, VarAtom)
QUANTIFIERS = (ExistsInd, ExistsRel, ExistsNewSorts)


# Derived forms. They expand into primitives so every consumer only ever sees
# the eight node classes above.

def And(left: Formula, right: Formula) -> Formula:
    return Not(Or(Not(left), Not(right)))


def Implies(left: Formula, right: Formula) -> Formula:
    return Or(Not(left), right)


def Iff(left: Formula, right: Formula) -> Formula:
    return And(Implies(left, right), Implies(right, left))


def ForallInd(var: IndividualVar, body: Formula) -> Formula:
    return Not(ExistsInd(var, Not(body)))


def ForallRel(var: RelationVar, body: Formula) -> Formula:
    return Not(ExistsRel(var, Not(body)))


def ForallNewSorts(block: Sequence[RelationVar], body: Formula) -> Formula:
    return Not(ExistsNewSorts(tuple(block), Not(body)))


def conj(*parts: Formula) -> Formula:
    """Left-nested conjunction, matching how the parser folds `a & b & c`."""
    if not parts:
        raise ValueError("empty conjunction")
    return _fold(And, parts)


def disj(*parts: Formula) -> Formula:
    if not parts:
        raise ValueError("empty disjunction")
    return _fold(Or, parts)


def forall_inds(variables: Sequence[IndividualVar], body: Formula) -> Formula:
    for var in reversed(variables):
        body = ForallInd(var, body)
    return body


def exists_inds(variables: Sequence[IndividualVar], body: Formula) -> Formula:
    for var in reversed(variables):
        body = ExistsInd(var, body)
    return body


def _fold(op, parts: Sequence[Formula]) -> Formula:
    result = parts[0]
    for part in parts[1:]:
        result = op(result, part)
    return result


def match_and(phi: Formula) -> Optional[Tuple[Formula, Formula]]:
    if isinstance(phi, Not) and isinstance(phi.body, Or):
        left, right = phi.body.left, phi.body.right
        if isinstance(left, Not) and isinstance(right, Not):
            return left.body, right.body
    return None


def match_implies(phi: Formula) -> Optional[Tuple[Formula, Formula]]:
    if isinstance(phi, Or) and isinstance(phi.left, Not):
        return phi.left.body, phi.right
    return None


def match_iff(phi: Formula) -> Optional[Tuple[Formula, Formula]]:
    both = match_and(phi)
    if both is None:
        return None
    forward, backward = match_implies(both[0]), match_implies(both[1])
    if forward is None or backward is None:
        return None
    if forward[0] == backward[1] and forward[1] == backward[0]:
        return forward
    return None


def match_forall(phi: Formula) -> Optional[Tuple[object, Formula]]:
    """Return (binder, body) for ∀x, ∀X and ∀̃ shapes; the binder of ∀̃ is the block tuple."""
    if isinstance(phi, Not) and isinstance(phi.body, QUANTIFIERS) and isinstance(phi.body.body, Not):
        quantifier = phi.body
        binder = quantifier.block if isinstance(quantifier, ExistsNewSorts) else quantifier.var
        return binder, quantifier.body.body
    return None


def match_forall_ind(phi: Formula) -> Optional[Tuple[IndividualVar, Formula]]:
    found = match_forall(phi)
    if found is not None and isinstance(found[0], IndividualVar):
        return found  # type: ignore[return-value]
    return None


def conjuncts(phi: Formula) -> List[Formula]:
    both = match_and(phi)
    if both is None:
        return [phi]
    return conjuncts(both[0]) + conjuncts(both[1])


# ---------------------------------------------------------------------------
# Traversals
# ---------------------------------------------------------------------------

def children(phi: Formula) -> Tuple[Formula, ...]:
    if isinstance(phi, Not):
        return (phi.body,)
    if isinstance(phi, Or):
        return (phi.left, phi.right)
    if isinstance(phi, QUANTIFIERS):
        return (phi.body,)
    return ()


def subformulas(phi: Formula) -> Iterator[Formula]:
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def node_count(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))


def symbols_of(phi: Formula) -> Set[PredicateSymbol]:
    return {node.symbol for node in subformulas(phi) if isinstance(node, PredAtom)}


def free_individual_vars(phi: Formula) -> Set[IndividualVar]:
    if isinstance(phi, Equation):
        return {phi.left, phi.right}
    if isinstance(phi, (PredAtom, VarAtom)):
        return set(phi.args)
    if isinstance(phi, ExistsInd):
        return free_individual_vars(phi.body) - {phi.var}
    result: Set[IndividualVar] = set()
    for child in children(phi):
        result |= free_individual_vars(child)
    return result


def free_relation_vars(phi: Formula) -> Set[RelationVar]:
    if isinstance(phi, VarAtom):
        return {phi.var}
    if isinstance(phi, ExistsRel):
        return free_relation_vars(phi.body) - {phi.var}
    if isinstance(phi, ExistsNewSorts):
        return free_relation_vars(phi.body) - set(phi.block)
    result: Set[RelationVar] = set()
    for child in children(phi):
        result |= free_relation_vars(child)
    return result


def is_sentence(phi: Formula) -> bool:
    return not free_individual_vars(phi) and not free_relation_vars(phi)


def free_sorts(phi: Formula) -> SortSet:
    if isinstance(phi, Equation):
        return frozenset((phi.left.sort, phi.right.sort))
    if isinstance(phi, (PredAtom, VarAtom)):
        return frozenset(a.sort for a in phi.args)
    if isinstance(phi, Not):
        return free_sorts(phi.body)
    if isinstance(phi, Or):
        return free_sorts(phi.left) | free_sorts(phi.right)
    if isinstance(phi, ExistsInd):
        return free_sorts(phi.body) | {phi.var.sort}
    if isinstance(phi, ExistsRel):
        return free_sorts(phi.body) | frozenset(phi.var.sorts)
    if isinstance(phi, ExistsNewSorts):
        return free_sorts(phi.body) - phi.block_sorts
    raise TypeError(f"not a formula: {phi!r}")


def quantifier_rank(phi: Formula) -> int:
    """Nesting depth of quantifiers; a new-sort block counts as one quantifier."""
    if isinstance(phi, ATOMS):
        return 0
    if isinstance(phi, Not):
        return quantifier_rank(phi.body)
    if isinstance(phi, Or):
        return max(quantifier_rank(phi.left), quantifier_rank(phi.right))
    return 1 + quantifier_rank(phi.body)  # type: ignore[attr-defined]


# ---------------------------------------------------------------------------
# Well-formedness
# ---------------------------------------------------------------------------

def validate_vocabulary(voc: Vocabulary) -> List[Violation]:
    violations: List[Violation] = []
    seen: Set[str] = set()
    for symbol in voc.symbols:
        if symbol.name in seen:
            violations.append(Violation("DuplicateSymbol", f"predicate {symbol.name} declared twice", symbol))
        seen.add(symbol.name)
        if symbol.declared_arity is not None and symbol.declared_arity != len(symbol.sorts):
            violations.append(Violation(
                "ArityMismatch",
                f"{symbol.name} has arity {symbol.declared_arity} but {len(symbol.sorts)} sorts", symbol))
        if any(not isinstance(n, int) or n < 0 for n in symbol.sorts):
            violations.append(Violation("ArityMismatch", f"{symbol.name} has a sort that is not a natural number", symbol))
    return violations


def well_formed(voc: Vocabulary, phi: Formula) -> List[Violation]:
    violations: List[Violation] = []
    for node in subformulas(phi):
        if isinstance(node, PredAtom):
            declared = voc.get(node.symbol.name)
            if declared is None:
                violations.append(Violation("SortMismatchAtAtom", f"unknown predicate {node.symbol.name}", node))
            elif declared.sorts != node.symbol.sorts:
                violations.append(Violation(
                    "SortMismatchAtAtom", f"{node.symbol.name} used with sorts {node.symbol.sorts}, declared {declared.sorts}", node))
            _check_args(node.symbol.name, node.symbol.sorts, node.args, node, violations)
        elif isinstance(node, VarAtom):
            _check_args(node.var.name, node.var.sorts, node.args, node, violations)
        elif isinstance(node, ExistsNewSorts):
            violations.extend(new_sort_violations(node))
    return violations


def _check_args(name: str, sorts: Tuple[int, ...], args: Tuple[IndividualVar, ...],
                node: Formula, violations: List[Violation]) -> None:
    if len(sorts) != len(args):
        violations.append(Violation("SortMismatchAtAtom", f"{name} expects {len(sorts)} arguments, got {len(args)}", node))
        return
    for position, (expected, arg) in enumerate(zip(sorts, args)):
        if arg.sort != expected:
            violations.append(Violation(
                "SortMismatchAtAtom", f"argument {position + 1} of {name} is {arg} but sort {expected} is required", node))


def new_sort_violations(node: ExistsNewSorts) -> List[Violation]:
    """The New Sort Condition at one block node."""
    violations: List[Violation] = []
    if len(set(node.block)) != len(node.block):
        violations.append(Violation("NewSortViolation", "a block binds the same relation variable twice", node))
    new = node.block_sorts
    for var in sorted(free_individual_vars(node.body)):
        if var.sort in new:
            violations.append(Violation("NewSortViolation", f"free individual variable {var} has a new sort", node))
    for rel in sorted(free_relation_vars(node.body) - set(node.block)):
        if new.intersection(rel.sorts):
            violations.append(Violation("NewSortViolation", f"free relation variable {rel} touches a new sort", node))
    for symbol in sorted(symbols_of(node.body)):
        if new.intersection(symbol.sorts):
            violations.append(Violation("NewSortViolation", f"predicate {symbol} touches a new sort", node))
    return violations


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------

def substitute_individual(phi: Formula, x: IndividualVar, y: IndividualVar) -> Formula:
    if x.sort != y.sort:
        raise SortClash(f"cannot substitute {y} for {x}: sorts differ")
    return substitute_individuals(phi, {x: y})


def substitute_individuals(phi: Formula, mapping: Mapping[IndividualVar, IndividualVar]) -> Formula:
    """Simultaneous φ(ȳ/x̄) on free occurrences; raises CaptureViolation if some y is not free for its x."""
    for x, y in mapping.items():
        if x.sort != y.sort:
            raise SortClash(f"cannot substitute {y} for {x}: sorts differ")
    mapping = {x: y for x, y in mapping.items() if x != y}
    if not mapping:
        return phi
    return _subst_ind(phi, dict(mapping))


def _subst_ind(phi: Formula, mapping: Dict[IndividualVar, IndividualVar]) -> Formula:
    if not mapping:
        return phi
    if isinstance(phi, Equation):
        return Equation(mapping.get(phi.left, phi.left), mapping.get(phi.right, phi.right))
    if isinstance(phi, PredAtom):
        return PredAtom(phi.symbol, tuple(mapping.get(a, a) for a in phi.args))
    if isinstance(phi, VarAtom):
        return VarAtom(phi.var, tuple(mapping.get(a, a) for a in phi.args))
    if isinstance(phi, Not):
        return Not(_subst_ind(phi.body, mapping))
    if isinstance(phi, Or):
        return Or(_subst_ind(phi.left, mapping), _subst_ind(phi.right, mapping))
    if isinstance(phi, ExistsInd):
        inner = {x: y for x, y in mapping.items() if x != phi.var}
        free = free_individual_vars(phi.body)
        inner = {x: y for x, y in inner.items() if x in free}
        if any(y == phi.var for y in inner.values()):
            raise CaptureViolation(f"{phi.var} would capture a substituted variable")
        return ExistsInd(phi.var, _subst_ind(phi.body, inner))
    if isinstance(phi, ExistsRel):
        return ExistsRel(phi.var, _subst_ind(phi.body, mapping))
    if isinstance(phi, ExistsNewSorts):
        return ExistsNewSorts(phi.block, _subst_ind(phi.body, mapping))
    raise TypeError(f"not a formula: {phi!r}")


def substitute_relation(phi: Formula, x: RelationVar, y: RelationVar) -> Formula:
    if x.sorts != y.sorts:
        raise SortClash(f"cannot substitute {y} for {x}: sorts differ")
    return substitute_relations(phi, {x: y})


def substitute_relations(phi: Formula, mapping: Mapping[RelationVar, RelationVar]) -> Formula:
    """Simultaneous φ(Ȳ/X̄) on free occurrences of relation variables."""
    for x, y in mapping.items():
        if x.sorts != y.sorts:
            raise SortClash(f"cannot substitute {y} for {x}: sorts differ")
    mapping = {x: y for x, y in mapping.items() if x != y}
    return _subst_rel(phi, dict(mapping)) if mapping else phi


def _subst_rel(phi: Formula, mapping: Dict[RelationVar, RelationVar]) -> Formula:
    if not mapping or isinstance(phi, (Equation, PredAtom)):
        return phi
    if isinstance(phi, VarAtom):
        return VarAtom(mapping.get(phi.var, phi.var), phi.args)
    if isinstance(phi, Not):
        return Not(_subst_rel(phi.body, mapping))
    if isinstance(phi, Or):
        return Or(_subst_rel(phi.left, mapping), _subst_rel(phi.right, mapping))
    if isinstance(phi, ExistsInd):
        return ExistsInd(phi.var, _subst_rel(phi.body, mapping))
    bound = (phi.var,) if isinstance(phi, ExistsRel) else phi.block  # type: ignore[attr-defined]
    free = free_relation_vars(phi.body)  # type: ignore[attr-defined]
    inner = {x: y for x, y in mapping.items() if x not in bound and x in free}
    if any(y in bound for y in inner.values()):
        raise CaptureViolation(f"{', '.join(map(str, bound))} would capture a substituted relation variable")
    body = _subst_rel(phi.body, inner)  # type: ignore[attr-defined]
    if isinstance(phi, ExistsRel):
        return ExistsRel(phi.var, body)
    return ExistsNewSorts(phi.block, body)  # type: ignore[attr-defined]


def replace_symbols(phi: Formula, mapping: Mapping[str, RelationVar]) -> Formula:
    """Replace predicate symbols by relation variables, φ(X̄/P̄)."""
    if isinstance(phi, PredAtom):
        target = mapping.get(phi.symbol.name)
        return VarAtom(target, phi.args) if target is not None else phi
    if isinstance(phi, (Equation, VarAtom)):
        return phi
    if isinstance(phi, Not):
        return Not(replace_symbols(phi.body, mapping))
    if isinstance(phi, Or):
        return Or(replace_symbols(phi.left, mapping), replace_symbols(phi.right, mapping))
    if isinstance(phi, ExistsInd):
        return ExistsInd(phi.var, replace_symbols(phi.body, mapping))
    if isinstance(phi, ExistsRel):
        if phi.var in mapping.values():
            raise CaptureViolation(f"{phi.var} would capture a replaced symbol")
        return ExistsRel(phi.var, replace_symbols(phi.body, mapping))
    if isinstance(phi, ExistsNewSorts):
        if set(phi.block) & set(mapping.values()):
            raise CaptureViolation("a block would capture a replaced symbol")
        return ExistsNewSorts(phi.block, replace_symbols(phi.body, mapping))
    raise TypeError(f"not a formula: {phi!r}")


def fresh_name(hint: str, taken: Set[str]) -> str:
    if hint not in taken:
        return hint
    for index in itertools.count(1):
        candidate = f"{hint}{index}"
        if candidate not in taken:
            return candidate
    raise AssertionError("unreachable")


def variable_names(phi: Formula) -> Set[str]:
    names: Set[str] = set()
    for node in subformulas(phi):
        if isinstance(node, Equation):
            names.update((node.left.name, node.right.name))
        elif isinstance(node, (PredAtom, VarAtom)):
            names.update(a.name for a in node.args)
            if isinstance(node, VarAtom):
                names.add(node.var.name)
        elif isinstance(node, (ExistsInd, ExistsRel)):
            names.add(node.var.name)
        elif isinstance(node, ExistsNewSorts):
            names.update(v.name for v in node.block)
    return names


# ---------------------------------------------------------------------------
# Relativization and sort closure
# ---------------------------------------------------------------------------

def relativize(phi: Formula, predicate: Union[PredicateSymbol, RelationVar]) -> Formula:
    sorts = predicate.sorts
    if len(sorts) != 1:
        raise SortClash(f"relativization needs a unary predicate, {predicate} has arity {len(sorts)}")
    (sort,) = sorts

    def guard(var: IndividualVar) -> Formula:
        if isinstance(predicate, PredicateSymbol):
            return PredAtom(predicate, (var,))
        return VarAtom(predicate, (var,))

    def walk(node: Formula) -> Formula:
        if isinstance(node, ATOMS):
            return node
        if isinstance(node, Not):
            # ∀x ψ is ¬∃x¬ψ; relativizing it as ¬∃x(Px ∧ ¬ψ) gives ∀x(Px → ψ).
            return Not(walk(node.body))
        if isinstance(node, Or):
            return Or(walk(node.left), walk(node.right))
        if isinstance(node, ExistsInd):
            if node.var.sort != sort:
                raise SortClash(f"quantifier over {node.var} does not range over sort {sort}")
            return ExistsInd(node.var, And(guard(node.var), walk(node.body)))
        if isinstance(node, ExistsRel):
            return ExistsRel(node.var, walk(node.body))
        if isinstance(node, ExistsNewSorts):
            if sort in node.block_sorts:
                raise SortClash(f"block {', '.join(map(str, node.block))} rebinds sort {sort}")
            return ExistsNewSorts(node.block, walk(node.body))
        raise TypeError(f"not a formula: {node!r}")

    return walk(phi)


def closure_block(phi: Formula, voc: Vocabulary) -> Tuple[List[RelationVar], Formula]:
    """Fresh relation variables X₁…X_k for the symbols of φ and the body φ(X̄/P̄).

    Sorts that are free in φ without belonging to any of its symbols (for example the
    sort of a bare quantifier) get an unused unary block member, since the block's
    sorts must cover every free sort. Nullary symbols stay in place.
    """
    symbols = sorted((s for s in symbols_of(phi) if s.sorts), key=lambda s: s.name)
    taken = variable_names(phi) | set(voc.names())
    mapping: Dict[str, RelationVar] = {}
    block: List[RelationVar] = []
    for index, symbol in enumerate(symbols, start=1):
        name = fresh_name(f"X{index}", taken)
        taken.add(name)
        var = RelationVar(name, symbol.sorts)
        mapping[symbol.name] = var
        block.append(var)
    covered = {n for var in block for n in var.sorts}
    for sort in sorted(free_sorts(phi) - covered):
        name = fresh_name(f"S{sort}", taken)
        taken.add(name)
        block.append(RelationVar(name, (sort,)))
    return block, replace_symbols(phi, mapping)


def sort_closure(phi: Formula, voc: Vocabulary) -> Formula:
    """∀̃X₁…X_k φ(X̄/P̄); the result has no free sorts."""
    block, body = closure_block(phi, voc)
    return ForallNewSorts(block, body) if block else phi


# ---------------------------------------------------------------------------
# α-equivalence
# ---------------------------------------------------------------------------

def alpha_normalize(phi: Formula) -> Formula:
    """Rename bound variables to `_b0`, `_b1`, ... in binding order.

    Parsed names never start with an underscore, so the canonical names cannot
    collide with free variables.
    """
    counter = itertools.count()

    def walk(node: Formula, env: Dict[Variable, Variable]) -> Formula:
        if isinstance(node, Equation):
            return Equation(env.get(node.left, node.left), env.get(node.right, node.right))  # type: ignore[arg-type]
        if isinstance(node, PredAtom):
            return PredAtom(node.symbol, tuple(env.get(a, a) for a in node.args))  # type: ignore[misc]
        if isinstance(node, VarAtom):
            return VarAtom(env.get(node.var, node.var), tuple(env.get(a, a) for a in node.args))  # type: ignore[arg-type, misc]
        if isinstance(node, Not):
            return Not(walk(node.body, env))
        if isinstance(node, Or):
            return Or(walk(node.left, env), walk(node.right, env))
        if isinstance(node, ExistsInd):
            new_var = IndividualVar(f"_b{next(counter)}", node.var.sort)
            return ExistsInd(new_var, walk(node.body, {**env, node.var: new_var}))
        if isinstance(node, ExistsRel):
            new_rel = RelationVar(f"_b{next(counter)}", node.var.sorts)
            return ExistsRel(new_rel, walk(node.body, {**env, node.var: new_rel}))
        if isinstance(node, ExistsNewSorts):
            renamed = tuple(RelationVar(f"_b{next(counter)}", v.sorts) for v in node.block)
            return ExistsNewSorts(renamed, walk(node.body, {**env, **dict(zip(node.block, renamed))}))
        raise TypeError(f"not a formula: {node!r}")

    return walk(phi, {})


def alpha_equivalent(left: Formula, right: Formula) -> bool:
    return alpha_normalize(left) == alpha_normalize(right)
