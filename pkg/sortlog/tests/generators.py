# tests/generators.py
"""
Seeded generators for formulas, structures, Henkin structures and proofs, and
brute-force oracles that share no code with the evaluators they check.
"""
import itertools
import random
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from sortlog.core.axioms import infinite_sort_axiom, power_sort_axiom
from sortlog.core.model import Assignment, Structure
from sortlog.core.proof import Justification, Proof, ProofLine
from sortlog.core.sem_henkin import GRelation, HenkinStructure, full_henkin
from sortlog.core.syntax import (And, Equation, ExistsInd, ExistsNewSorts, ExistsRel, ForallInd, ForallRel, Formula,
                                 Iff, Implies, IndividualVar, Not, Or, PredAtom, PredicateSymbol, RelationVar,
                                 VarAtom, Vocabulary, free_individual_vars, free_relation_vars, free_sorts)

SYMBOLS = (
    PredicateSymbol("p", (0,)),
    PredicateSymbol("r", (0, 0)),
    PredicateSymbol("q", (1,)),
    PredicateSymbol("s", (0, 1)),
)
VOCABULARY = Vocabulary(SYMBOLS)
ONE_SORTED = Vocabulary((PredicateSymbol("p", (0,)), PredicateSymbol("r", (0, 0))))

BOUND_NAMES = "xyzuvw"
FREE_NAMES = "abc"
RELATION_NAMES = ("X", "Y", "W")


class FormulaGenerator:
    """Random well-formed formulas over a vocabulary.

    New-sort blocks bind unary variables of a sort above every base sort, one
    sort per nesting level, so the New Sort Condition always holds.
    """

    def __init__(self, seed: int, voc: Vocabulary = VOCABULARY, sorts: Sequence[int] = (0, 1),
                 allow_relations: bool = True, allow_new_sorts: bool = True, allow_free: bool = True):
        self.rng = random.Random(seed)
        self.voc = voc
        self.sorts = tuple(sorts)
        self.allow_relations = allow_relations
        self.allow_new_sorts = allow_new_sorts
        self.allow_free = allow_free
        self.first_new_sort = max(self.sorts) + 1

    # -- terms and atoms --------------------------------------------------

    def _var(self, sort: int, scope) -> Optional[IndividualVar]:
        bound = [v for v in scope if isinstance(v, IndividualVar) and v.sort == sort]
        free_ok = self.allow_free and sort in self.sorts
        if bound and (not free_ok or self.rng.random() < 0.85):
            return self.rng.choice(bound)
        if free_ok:
            return IndividualVar(self.rng.choice(FREE_NAMES), sort)
        return None

    def _available_sorts(self, scope) -> List[int]:
        bound = {v.sort for v in scope if isinstance(v, IndividualVar)}
        return sorted(bound | set(self.sorts)) if self.allow_free else sorted(bound)

    def atom(self, scope) -> Formula:
        options = []
        sorts = self._available_sorts(scope)
        if sorts:
            options.append("eq")
        usable = [s for s in self.voc if all(self._can_fill(n, scope) for n in s.sorts)]
        if usable:
            options.append("pred")
        rels = [v for v in scope if isinstance(v, RelationVar) and all(self._can_fill(n, scope) for n in v.sorts)]
        if rels:
            options.append("var")
        if not options:
            # no term available yet: a closed formula keeps the generator total
            var = IndividualVar(self.rng.choice(BOUND_NAMES), self.sorts[0])
            return ExistsInd(var, Equation(var, var))
        kind = self.rng.choice(options)
        if kind == "eq":
            sort = self.rng.choice(sorts)
            return Equation(self._var(sort, scope), self._var(sort, scope))
        if kind == "pred":
            symbol = self.rng.choice(usable)
            return PredAtom(symbol, tuple(self._var(n, scope) for n in symbol.sorts))
        var = self.rng.choice(rels)
        return VarAtom(var, tuple(self._var(n, scope) for n in var.sorts))

    def _can_fill(self, sort: int, scope) -> bool:
        if self.allow_free and sort in self.sorts:
            return True
        return any(isinstance(v, IndividualVar) and v.sort == sort for v in scope)

    # -- formulas ---------------------------------------------------------

    def formula(self, depth: int, scope=(), level: int = 0) -> Formula:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.2:
            return self.atom(scope)
        kinds = ["not", "or", "and", "implies", "iff", "exists", "forall"]
        if self.allow_relations:
            kinds += ["exists_rel", "forall_rel"]
        if self.allow_new_sorts:
            kinds += ["new_sort"]
        kind = rng.choice(kinds)
        sub = lambda extra=(): self.formula(depth - 1, tuple(scope) + tuple(extra), level)
        if kind == "not":
            return Not(sub())
        if kind in ("or", "and", "implies", "iff"):
            build = {"or": Or, "and": And, "implies": Implies, "iff": Iff}[kind]
            return build(sub(), sub())
        sorts = self._available_sorts(scope) or list(self.sorts)
        if kind in ("exists", "forall"):
            var = IndividualVar(rng.choice(BOUND_NAMES), rng.choice(sorts))
            body = sub((var,))
            return ExistsInd(var, body) if kind == "exists" else ForallInd(var, body)
        if kind in ("exists_rel", "forall_rel"):
            arity = rng.choice((1, 1, 2))
            var = RelationVar(rng.choice(RELATION_NAMES), tuple(rng.choice(sorts) for _ in range(arity)))
            body = sub((var,))
            return ExistsRel(var, body) if kind == "exists_rel" else ForallRel(var, body)
        new = self.first_new_sort + level
        var = RelationVar(rng.choice(RELATION_NAMES), (new,))
        element = IndividualVar(rng.choice(BOUND_NAMES), new)
        inner = tuple(v for v in scope if not _touches(v, new)) + (var,)
        body = self.formula(depth - 1, inner + (element,), level + 1)
        return ExistsNewSorts((var,), ExistsInd(element, And(VarAtom(var, (element,)), body)))

    def sentence(self, depth: int) -> Formula:
        return close(self.formula(depth), self.rng)


def _touches(var, sort: int) -> bool:
    if isinstance(var, IndividualVar):
        return var.sort == sort
    return sort in var.sorts


def close(phi: Formula, rng: Optional[random.Random] = None) -> Formula:
    """Bind every free variable, relation variables outermost."""
    rng = rng or random.Random(0)
    for var in sorted(free_individual_vars(phi)):
        phi = ExistsInd(var, phi) if rng.random() < 0.5 else ForallInd(var, phi)
    for var in sorted(free_relation_vars(phi)):
        phi = ExistsRel(var, phi) if rng.random() < 0.5 else ForallRel(var, phi)
    return phi


# ---------------------------------------------------------------------------
# Structures
# ---------------------------------------------------------------------------

def random_structure(rng: random.Random, voc: Vocabulary = VOCABULARY, sorts: Sequence[int] = (0, 1),
                     max_size: int = 2, density: float = 0.5) -> Structure:
    domains = {n: [f"e{n}{i}" for i in range(rng.randint(1, max_size))] for n in sorts}
    interps = {}
    for symbol in voc:
        rows = itertools.product(*(domains[n] for n in symbol.sorts))
        interps[symbol.name] = [row for row in rows if rng.random() < density]
    return Structure(domains, interps, voc)


def all_structures(voc: Vocabulary, sizes: Dict[int, int]) -> Iterable[Structure]:
    """Every interpretation of `voc` over fixed domains of the given sizes."""
    domains = {n: [f"e{n}{i}" for i in range(size)] for n, size in sizes.items()}
    products = [list(itertools.product(*(domains[n] for n in s.sorts))) for s in voc]
    for choice in itertools.product(*(itertools.product((False, True), repeat=len(p)) for p in products)):
        interps = {s.name: [row for row, bit in zip(rows, bits) if bit]
                   for s, rows, bits in zip(voc, products, choice)}
        yield Structure(domains, interps, voc)


def relabel(structure: Structure, suffix: str) -> Structure:
    """An isomorphic copy with every element renamed."""
    rename = {e: f"{e}{suffix}" for e in structure.elements()}
    domains = {n: [rename[e] for e in structure.domain(n)] for n in structure.sorts()}
    interps = {name: [tuple(rename[e] for e in row) for row in rows] for name, rows in structure.interps.items()}
    return Structure(domains, interps, structure.vocabulary)


def random_henkin(rng: random.Random, structure: Structure, new_sort: int, max_u: int = 2,
                  max_g: int = 6, tuples: Sequence[Tuple[int, ...]] = ((0,),),
                  base_relations: bool = False) -> HenkinStructure:
    """Random U and G; with `base_relations` G starts from every relation over the base tuples."""
    U = []
    for index in range(rng.randint(0, max_u)):
        U.append(frozenset(f"n{index}{i}" for i in range(rng.randint(1, 2))))
    known = {n: list(structure.domain(n)) for n in structure.sorts()}
    records = set(full_henkin(structure, (), tuples).G) if base_relations else set()
    for _ in range(rng.randint(0, max_g)):
        sorts = rng.choice(list(tuples) + [(new_sort,)])
        if sorts == (new_sort,):
            if not U:
                continue
            columns = [sorted(rng.choice(U))]
        else:
            columns = [known[n] for n in sorts]
        rows = [row for row in itertools.product(*columns) if rng.random() < 0.5]
        records.add(GRelation(tuple(sorts), frozenset(rows)))
    return HenkinStructure(structure, tuple(U), tuple(records))


def henkin_assignments(henkin: HenkinStructure, phi: Formula) -> Iterator[Assignment]:
    """Every assignment to the free variables of `phi`, relation variables ranging over G.
    Nothing when `phi` has a free sort the base lacks."""
    base = henkin.base
    if not free_sorts(phi) <= set(base.sorts()):
        return
    inds = sorted(free_individual_vars(phi))
    rels = sorted(free_relation_vars(phi))
    ranges = [base.domain(v.sort) for v in inds] + [henkin.relations_for(base, v.sorts) for v in rels]
    for values in itertools.product(*ranges):
        yield Assignment(dict(zip(inds, values[:len(inds)])), dict(zip(rels, values[len(inds):])))


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------

def brute_force_holds(structure: Structure, phi: Formula, ind: Optional[Dict] = None,
                      rel: Optional[Dict] = None) -> bool:
    """Second-order truth by exhaustive enumeration; new-sort blocks are not supported."""
    ind = ind or {}
    rel = rel or {}
    if isinstance(phi, Equation):
        return ind[phi.left] == ind[phi.right]
    if isinstance(phi, PredAtom):
        return tuple(ind[a] for a in phi.args) in structure.interps.get(phi.symbol.name, frozenset())
    if isinstance(phi, VarAtom):
        return tuple(ind[a] for a in phi.args) in rel[phi.var]
    if isinstance(phi, Not):
        return not brute_force_holds(structure, phi.body, ind, rel)
    if isinstance(phi, Or):
        return brute_force_holds(structure, phi.left, ind, rel) or brute_force_holds(structure, phi.right, ind, rel)
    if isinstance(phi, ExistsInd):
        return any(brute_force_holds(structure, phi.body, {**ind, phi.var: e}, rel)
                   for e in sorted(structure.domains[phi.var.sort]))
    if isinstance(phi, ExistsRel):
        rows = list(itertools.product(*(sorted(structure.domains[n]) for n in phi.var.sorts)))
        for bits in itertools.product((False, True), repeat=len(rows)):
            value = frozenset(row for row, bit in zip(rows, bits) if bit)
            if brute_force_holds(structure, phi.body, ind, {**rel, phi.var: value}):
                return True
        return False
    raise ValueError(f"the brute-force oracle does not handle {type(phi).__name__}")


def injection_missing_a_point(size: int) -> bool:
    """Whether some total injective function on a `size`-element set misses a point."""
    elements = set(range(size))
    for images in itertools.product(sorted(elements), repeat=size):
        injective = len(set(images)) == size
        if injective and set(images) != elements:
            return True
    return False


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def prime_field_witness(structure: Structure) -> Optional[Tuple[str, FrozenSet[Tuple[str, str, str]]]]:
    """For a group on sort 0 (`mul`, `one`) of order p - 1 with p prime: a zero name and
    an addition table making the group the units of GF(p), or None when the group is
    not cyclic or p is not prime."""
    elements = list(structure.domain(0))
    mul = {(a, b): c for a, b, c in structure.interp("mul")}
    (unit,) = [row[0] for row in structure.interp("one")]
    p = len(elements) + 1
    if not _is_prime(p):
        return None
    generator = None
    for g in elements:
        powers, x = [], unit
        for _ in range(len(elements)):
            powers.append(x)
            x = mul[(x, g)]
        if len(set(powers)) == len(elements):
            generator = g
            break
    if generator is None:
        return None
    root = next(r for r in range(1, p) if len({pow(r, k, p) for k in range(p - 1)}) == p - 1)
    name_of = {}
    x = unit
    for k in range(p - 1):
        name_of[pow(root, k, p)] = x
        x = mul[(x, generator)]
    zero = "z0"
    name_of[0] = zero
    table = frozenset((name_of[i], name_of[j], name_of[(i + j) % p]) for i in range(p) for j in range(p))
    return zero, table


# ---------------------------------------------------------------------------
# Proofs
# ---------------------------------------------------------------------------

X0, Y0 = IndividualVar("x", 0), IndividualVar("y", 0)
P = PredicateSymbol("p", (0,))


def proof_corpus() -> List[Proof]:
    """Small proofs the checker accepts; each is written out line by line."""
    x, y = X0, Y0
    eq = Equation(x, x)
    exists_eq = ExistsInd(x, eq)
    demo = Proof((), (
        ProofLine(eq, Justification("Identity")),
        ProofLine(Implies(eq, exists_eq), Justification("QuantAxiomInd")),
        ProofLine(exists_eq, Justification.mp(1, 2)),
    ))

    px, py = PredAtom(P, (x,)), PredAtom(P, (y,))
    voc = Vocabulary((P,))
    tautology = Implies(px, Or(px, py))
    premise_proof = Proof((ExistsInd(x, px),), (
        ProofLine(ExistsInd(x, px), Justification("Premise")),
        ProofLine(Implies(ExistsInd(x, px), Or(ExistsInd(x, px), py)), Justification("Tautology")),
        ProofLine(Or(ExistsInd(x, px), py), Justification.mp(1, 2)),
    ), voc)
    gen_proof = Proof((), (
        ProofLine(Implies(px, ExistsInd(x, px)), Justification("QuantAxiomInd")),
        ProofLine(Implies(ExistsInd(x, px), ExistsInd(x, px)), Justification.gen_ind(1, x)),
    ), voc)
    identity_proof = Proof((), (
        ProofLine(Implies(Equation(x, y), Equation(y, x)), Justification("Identity")),
        ProofLine(Implies(And(Equation(x, y), px), py), Justification("Identity")),
        ProofLine(tautology, Justification("Tautology")),
    ), voc)
    X = RelationVar("X", (0,))
    comprehension = Proof((), (
        ProofLine(ExistsRel(X, ForallInd(x, Iff(VarAtom(X, (x,)), px))), Justification("Comprehension1")),
    ), voc)

    u = IndividualVar("u", 1)
    X1, Y1 = RelationVar("X", (1,)), RelationVar("Y", (1,))
    second_comprehension = Proof((), (
        ProofLine(ExistsNewSorts((X1,), ForallInd(u, Iff(VarAtom(X1, (u,)), Equation(u, u)))),
                  Justification("Comprehension2")),
    ), voc)
    Y = RelationVar("Y", (0,))
    xx, yx = VarAtom(X, (x,)), VarAtom(Y, (x,))
    relation_proof = Proof((), (
        ProofLine(Implies(And(xx, px), px), Justification("Tautology")),
        ProofLine(Implies(ExistsRel(X, And(xx, px)), px), Justification.gen_rel(1, X)),
        ProofLine(Implies(yx, ExistsRel(X, xx)), Justification("QuantAxiomRel")),
        ProofLine(Implies(ExistsRel(Y, yx), ExistsRel(X, xx)), Justification.gen_rel(3, Y)),
    ), voc)
    some_x1 = ExistsNewSorts((X1,), ExistsInd(u, VarAtom(X1, (u,))))
    some_y1 = ExistsInd(u, VarAtom(Y1, (u,)))
    block_proof = Proof((), (
        ProofLine(Implies(some_y1, some_x1), Justification("QuantAxiomNewSort")),
        ProofLine(Implies(ExistsNewSorts((Y1,), some_y1), some_x1), Justification.gen_new_sort(1, [Y1])),
    ), voc)

    psa, isa = power_sort_axiom(), infinite_sort_axiom(1)
    power_sort = Proof((), (
        ProofLine(psa, Justification("PowerSort")),
        ProofLine(Implies(psa, Or(exists_eq, psa)), Justification("Tautology")),
        ProofLine(Or(exists_eq, psa), Justification.mp(1, 2)),
    ), voc)
    infinite_sort = Proof((), (
        ProofLine(isa, Justification("InfiniteSort")),
        ProofLine(Implies(isa, Or(exists_eq, isa)), Justification("Tautology")),
        ProofLine(Or(exists_eq, isa), Justification.mp(1, 2)),
    ), voc)
    return [demo, premise_proof, gen_proof, identity_proof, comprehension, second_comprehension, relation_proof,
            block_proof, power_sort, infinite_sort]
