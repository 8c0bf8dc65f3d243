# core/__init__.py
from .errors import NotFound, ParseError, SortLogError, ValidationError, Violation
from .syntax import Formula, IndividualVar, PredicateSymbol, RelationVar, Vocabulary, free_sorts, well_formed
from .model import Assignment, Budget, Structure
from .sem_full import Evaluator, Verdict, eval_sentence, evaluate
from .sem_henkin import (HenkinStructure, SearchBounds, check_comprehension, countermodel_search,
                         eval_henkin, eval_henkin_sentence)
from .proof import Justification, Proof, ProofLine, check_proof, proof_ok
from .parser import (parse_formula, parse_formula_file, parse_henkin, parse_proof, parse_structure,
                     parse_vocabulary, render_formula)

__all__ = [
    'NotFound', 'ParseError', 'SortLogError', 'ValidationError', 'Violation',
    'Formula', 'IndividualVar', 'PredicateSymbol', 'RelationVar', 'Vocabulary', 'free_sorts', 'well_formed',
    'Assignment', 'Budget', 'Structure',
    'Evaluator', 'Verdict', 'eval_sentence', 'evaluate',
    'HenkinStructure', 'SearchBounds', 'check_comprehension', 'countermodel_search',
    'eval_henkin', 'eval_henkin_sentence',
    'Justification', 'Proof', 'ProofLine', 'check_proof', 'proof_ok',
    'parse_formula', 'parse_formula_file', 'parse_henkin', 'parse_proof', 'parse_structure',
    'parse_vocabulary', 'render_formula',
]
