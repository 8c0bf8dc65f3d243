# core/proof.py
"""
Hilbert-style proofs: recognizers for every axiom family and a line-by-line
checker for the rules of proof.

Each line is checked on its own against the lines it cites, so the verdicts do
not depend on the order lines are visited in. Schema matching works modulo
renaming of bound variables and nothing else.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .axioms import infinite_sort_axiom, power_sort_axiom
from .errors import AtomCapExceeded, CaptureViolation
from .syntax import (ATOMS, Equation, ExistsInd, ExistsNewSorts, ExistsRel, Formula, Implies, IndividualVar, Not, Or,
                     PredAtom, RelationVar, VarAtom, Vocabulary, alpha_equivalent, alpha_normalize, conj, conjuncts,
                     free_individual_vars, free_relation_vars, free_sorts, match_forall_ind, match_iff, match_implies,
                     new_sort_violations, substitute_individual, substitute_individuals, substitute_relations,
                     subformulas, well_formed)

logger = logging.getLogger(__name__)

DEFAULT_ATOM_CAP = 16

AXIOM_RULES = ("Premise", "Tautology", "Identity", "QuantAxiomInd", "QuantAxiomRel", "QuantAxiomNewSort",
               "Comprehension1", "Comprehension2", "PowerSort", "InfiniteSort")
INFERENCE_RULES = ("MP", "GenInd", "GenRel", "GenNewSort")
RULES = AXIOM_RULES + INFERENCE_RULES


@dataclass(frozen=True)
class Justification:
    """Why a line holds. `refs` are 1-based line numbers; `variables` is the generalized variable or block."""
    rule: str
    refs: Tuple[int, ...] = ()
    variables: Tuple[Union[IndividualVar, RelationVar], ...] = ()

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown justification {self.rule!r}")
        expected = {"MP": 2, "GenInd": 1, "GenRel": 1, "GenNewSort": 1}.get(self.rule, 0)
        if len(self.refs) != expected:
            raise ValueError(f"{self.rule} cites {expected} line(s), got {len(self.refs)}")
        if self.rule in ("GenInd", "GenRel") and len(self.variables) != 1:
            raise ValueError(f"{self.rule} generalizes exactly one variable")
        if self.rule == "GenInd" and not isinstance(self.variables[0], IndividualVar):
            raise ValueError("GenInd needs an individual variable")
        if self.rule in ("GenRel", "GenNewSort") and not all(isinstance(v, RelationVar) for v in self.variables):
            raise ValueError(f"{self.rule} needs relation variables")
        if self.rule == "GenNewSort" and not self.variables:
            raise ValueError("GenNewSort needs a nonempty block")

    @classmethod
    def mp(cls, i: int, j: int) -> "Justification":
        return cls("MP", (i, j))

    @classmethod
    def gen_ind(cls, line: int, var: IndividualVar) -> "Justification":
        return cls("GenInd", (line,), (var,))

    @classmethod
    def gen_rel(cls, line: int, var: RelationVar) -> "Justification":
        return cls("GenRel", (line,), (var,))

    @classmethod
    def gen_new_sort(cls, line: int, block: Sequence[RelationVar]) -> "Justification":
        return cls("GenNewSort", (line,), tuple(block))

    def __str__(self) -> str:
        if self.rule == "MP":
            return f"MP({self.refs[0]},{self.refs[1]})"
        if self.rule in INFERENCE_RULES:
            return f"{self.rule}({self.refs[0]}, {', '.join(map(str, self.variables))})"
        return self.rule


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    just: Justification


@dataclass(frozen=True)
class Proof:
    theory: Tuple[Formula, ...] = ()
    lines: Tuple[ProofLine, ...] = ()
    vocabulary: Vocabulary = field(default_factory=Vocabulary)

    def __len__(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class LineVerdict:
    index: int
    ok: bool
    diagnostic: str = ""
    budget_exceeded: bool = False

    def __post_init__(self):
        if not self.ok and not self.diagnostic:
            raise ValueError("a rejected line needs a diagnostic")

    def as_dict(self) -> Dict[str, object]:
        return {"line": self.index, "ok": self.ok, "diagnostic": self.diagnostic,
                "budget_exceeded": self.budget_exceeded}


# ---------------------------------------------------------------------------
# Tautologies
# ---------------------------------------------------------------------------

def propositional_atoms(phi: Formula) -> List[Formula]:
    """Maximal non-propositional subformulas, α-normalized, in first-occurrence order."""
    atoms: List[Formula] = []
    seen = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Not):
            stack.append(node.body)
        elif isinstance(node, Or):
            stack.extend((node.right, node.left))
        else:
            key = alpha_normalize(node)
            if key not in seen:
                seen.add(key)
                atoms.append(key)
    return atoms


def recognize_tautology(phi: Formula, atom_cap: int = DEFAULT_ATOM_CAP) -> bool:
    atoms = propositional_atoms(phi)
    if len(atoms) > atom_cap:
        raise AtomCapExceeded(f"{len(atoms)} propositional atoms exceed the cap of {atom_cap}")
    rows = np.arange(1 << len(atoms), dtype=np.int64)
    columns = {atom: ((rows >> bit) & 1).astype(bool) for bit, atom in enumerate(atoms)}

    def table(node: Formula) -> np.ndarray:
        if isinstance(node, Not):
            return ~table(node.body)
        if isinstance(node, Or):
            return table(node.left) | table(node.right)
        return columns[alpha_normalize(node)]

    return bool(table(phi).all())


# ---------------------------------------------------------------------------
# Identity axioms
# ---------------------------------------------------------------------------

def recognize_identity(phi: Formula) -> bool:
    """x=x, x=y→y=x, or (x₁=y₁∧…∧xₙ=yₙ∧φ)→φ(ȳ/x̄) for atomic φ."""
    if isinstance(phi, Equation):
        return phi.left == phi.right
    parts = match_implies(phi)
    if parts is None:
        return False
    antecedent, conclusion = parts
    if isinstance(antecedent, Equation) and isinstance(conclusion, Equation):
        if antecedent.left == conclusion.right and antecedent.right == conclusion.left:
            return True
    items = conjuncts(antecedent)
    if len(items) < 2 or conj(*items) != antecedent:
        return False
    *equations, atom = items
    if not isinstance(atom, ATOMS) or not all(isinstance(e, Equation) for e in equations):
        return False
    mapping: Dict[IndividualVar, IndividualVar] = {}
    for eq in equations:
        if eq.left.sort != eq.right.sort or eq.left in mapping:
            return False
        mapping[eq.left] = eq.right
    return substitute_individuals(atom, mapping) == conclusion


# ---------------------------------------------------------------------------
# Quantifier axioms
# ---------------------------------------------------------------------------

QUANT_KINDS = {ExistsInd: "QuantAxiomInd", ExistsRel: "QuantAxiomRel", ExistsNewSorts: "QuantAxiomNewSort"}


def explain_quant_axiom(phi: Formula) -> Tuple[Optional[str], str]:
    """The quantifier-axiom kind φ matches, or None with the reason it does not."""
    parts = match_implies(phi)
    if parts is None or not isinstance(parts[1], tuple(QUANT_KINDS)):
        return None, "not of the form φ(y/x) → ∃x φ"
    instance, conclusion = parts
    kind = QUANT_KINDS[type(conclusion)]
    captured = False
    for mapping in _quant_candidates(instance, conclusion):
        try:
            if isinstance(conclusion, ExistsInd):
                ((x, y),) = mapping.items()
                substituted = substitute_individual(conclusion.body, x, y)
            else:
                substituted = substitute_relations(conclusion.body, mapping)
        except CaptureViolation:
            captured = True
            continue
        if alpha_equivalent(substituted, instance):
            if isinstance(conclusion, ExistsNewSorts):
                violations = new_sort_violations(conclusion)
                if violations:
                    return None, f"the conclusion breaks the new sort condition: {violations[0].message}"
            return kind, ""
    if captured:
        return None, "the substituted variable is not free for the bound one (capture)"
    return None, "the antecedent is not an instance of the quantified formula"


def _quant_candidates(instance: Formula, conclusion: Formula):
    # bound variables of the instance are tried too, so that a capture is reported as one
    if isinstance(conclusion, ExistsInd):
        x = conclusion.var
        options = sorted({v for v in _individuals_in(instance) if v.sort == x.sort} | {x})
        for y in options:
            yield {x: y}
        return
    block = (conclusion.var,) if isinstance(conclusion, ExistsRel) else conclusion.block
    present = _relations_in(instance)
    choices = [sorted({v for v in present if v.sorts == X.sorts} | {X}) for X in block]
    for chosen in itertools.product(*choices):
        yield dict(zip(block, chosen))


def _individuals_in(phi: Formula) -> set:
    found = set()
    for node in subformulas(phi):
        if isinstance(node, Equation):
            found.update((node.left, node.right))
        elif isinstance(node, (PredAtom, VarAtom)):
            found.update(node.args)
        elif isinstance(node, ExistsInd):
            found.add(node.var)
    return found


def _relations_in(phi: Formula) -> set:
    found = set()
    for node in subformulas(phi):
        if isinstance(node, (VarAtom, ExistsRel)):
            found.add(node.var)
        elif isinstance(node, ExistsNewSorts):
            found.update(node.block)
    return found


def recognize_quant_axiom(phi: Formula) -> Optional[str]:
    return explain_quant_axiom(phi)[0]


# ---------------------------------------------------------------------------
# Comprehension, Power Sort and Infinite Sort
# ---------------------------------------------------------------------------

def recognize_comprehension(phi: Formula) -> Optional[str]:
    """"First" for ∃X∀ȳ(Xȳ↔ψ), "Second" for ∃̃X∀ȳ(Xȳ↔ψ), None otherwise."""
    if isinstance(phi, ExistsRel):
        X, schema = phi.var, "First"
    elif isinstance(phi, ExistsNewSorts) and len(phi.block) == 1:
        X, schema = phi.block[0], "Second"
    else:
        return None
    body = phi.body
    ys: List[IndividualVar] = []
    for _ in range(X.arity):
        found = match_forall_ind(body)
        if found is None:
            return None
        ys.append(found[0])
        body = found[1]
    if len(set(ys)) != len(ys) or tuple(y.sort for y in ys) != X.sorts:
        return None
    parts = match_iff(body)
    if parts is None or parts[0] != VarAtom(X, tuple(ys)):
        return None
    if X in free_relation_vars(parts[1]):
        return None
    if schema == "Second" and new_sort_violations(phi):
        return None
    return schema


def recognize_power_sort(phi: Formula) -> bool:
    if not isinstance(phi, ExistsNewSorts) or len(phi.block) != 1:
        return False
    Y = phi.block[0]
    if Y.arity < 2 or len(set(Y.sorts[1:])) != 1:
        return False
    first = conjuncts(phi.body)[0]
    found = match_forall_ind(first)
    if found is None:
        return False
    try:
        canonical = power_sort_axiom(Y.arity - 1, found[0].sort, Y.sorts[0], Y.sorts[1])
    except ValueError:
        return False
    return alpha_equivalent(phi, canonical)


def recognize_infinite_sort(phi: Formula) -> bool:
    if not isinstance(phi, ExistsNewSorts) or len(phi.block) != 1:
        return False
    X = phi.block[0]
    if X.arity != 2 or X.sorts[0] != X.sorts[1]:
        return False
    return alpha_equivalent(phi, infinite_sort_axiom(X.sorts[0]))


# ---------------------------------------------------------------------------
# Proof checking
# ---------------------------------------------------------------------------

def check_proof(proof: Proof, atom_cap: int = DEFAULT_ATOM_CAP) -> List[LineVerdict]:
    verdicts = []
    for index, line in enumerate(proof.lines, start=1):
        try:
            diagnostic = _check_line(proof, index, line, atom_cap)
            verdict = LineVerdict(index, not diagnostic, diagnostic)
        except AtomCapExceeded as exc:
            verdict = LineVerdict(index, False, str(exc), budget_exceeded=True)
        logger.debug("line %d (%s): %s", index, line.just, "ok" if verdict.ok else verdict.diagnostic)
        verdicts.append(verdict)
    return verdicts


def proof_ok(verdicts: Sequence[LineVerdict]) -> bool:
    return all(v.ok for v in verdicts)


def _check_line(proof: Proof, index: int, line: ProofLine, atom_cap: int) -> str:
    """Empty string when the line is justified, otherwise what is wrong with it."""
    phi, just = line.formula, line.just
    violations = well_formed(proof.vocabulary, phi)
    if violations:
        return f"not well-formed: {violations[0]}"
    for ref in just.refs:
        if not 1 <= ref < index:
            return f"{just.rule} cites line {ref}, which is not an earlier line"
    cited = [proof.lines[ref - 1].formula for ref in just.refs]

    rule = just.rule
    if rule == "Premise":
        if any(alpha_equivalent(phi, t) for t in proof.theory):
            return ""
        return "not a member of the theory"
    if rule == "Tautology":
        return "" if recognize_tautology(phi, atom_cap) else "the propositional skeleton is not a tautology"
    if rule == "Identity":
        if recognize_identity(phi):
            return ""
        if isinstance(phi, Equation):
            return "only reflexivity x=x is an identity axiom; x=y is not valid"
        return "not an instance of the identity axioms"
    if rule in QUANT_KINDS.values():
        kind, reason = explain_quant_axiom(phi)
        if kind == rule:
            return ""
        return reason or f"a quantifier axiom of kind {kind}, not {rule}"
    if rule in ("Comprehension1", "Comprehension2"):
        wanted = "First" if rule == "Comprehension1" else "Second"
        found = recognize_comprehension(phi)
        if found == wanted:
            return ""
        return f"not an instance of the {wanted} Comprehension schema"
    if rule == "PowerSort":
        return "" if recognize_power_sort(phi) else "not an instance of the Power Sort Axiom"
    if rule == "InfiniteSort":
        return "" if recognize_infinite_sort(phi) else "not the Infinite Sort Axiom"
    if rule == "MP":
        premise, conditional = cited
        if alpha_equivalent(conditional, Implies(premise, phi)):
            return ""
        return f"line {just.refs[1]} is not line {just.refs[0]} → this line"
    return _check_generalization(proof, phi, just, cited[0])


def _check_generalization(proof: Proof, phi: Formula, just: Justification, cited: Formula) -> str:
    parts = match_implies(cited)
    if parts is None:
        return f"line {just.refs[0]} is not an implication"
    antecedent, consequent = parts
    if just.rule == "GenInd":
        (x,) = just.variables
        expected = Implies(ExistsInd(x, antecedent), consequent)
        clash = [f for f in (consequent, *proof.theory) if x in free_individual_vars(f)]
        if clash:
            return f"{x} is free in {'ψ' if clash[0] is consequent else 'the theory'}"
    elif just.rule == "GenRel":
        (X,) = just.variables
        expected = Implies(ExistsRel(X, antecedent), consequent)
        clash = [f for f in (consequent, *proof.theory) if X in free_relation_vars(f)]
        if clash:
            return f"{X} is free in {'ψ' if clash[0] is consequent else 'the theory'}"
    else:
        block = tuple(just.variables)
        new = frozenset(n for var in block for n in var.sorts)
        shared = sorted(free_sorts(consequent) & new)
        if shared:
            return f"free sorts {shared} of ψ occur among the block sorts"
        shared = sorted(set().union(*(free_sorts(t) for t in proof.theory)) & new) if proof.theory else []
        if shared:
            return f"free sorts {shared} of the theory occur among the block sorts"
        for f in (consequent, *proof.theory):
            if free_relation_vars(f) & set(block):
                return f"a block variable is free in {'ψ' if f is consequent else 'the theory'}"
        quantified = ExistsNewSorts(block, antecedent)
        violations = new_sort_violations(quantified)
        if violations:
            return f"the new sort condition fails: {violations[0].message}"
        expected = Implies(quantified, consequent)
    if alpha_equivalent(phi, expected):
        return ""
    return f"this line is not the generalization of line {just.refs[0]}"
