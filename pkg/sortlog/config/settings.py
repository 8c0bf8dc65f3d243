# config/settings.py
import os
from typing import Optional

from dotenv import load_dotenv

from ..core.model import Budget
from ..core.sem_henkin import SearchBounds

load_dotenv()


def _int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


class Config:
    # Full-semantics budget
    DOMAIN_BOUND = _int("SORTLOG_DOMAIN_BOUND", 3)
    RELATION_CAP = _int("SORTLOG_RELATION_CAP", 65536)
    STEP_CAP = _int("SORTLOG_STEP_CAP", 10 ** 7)

    # Proof checking
    TAUTOLOGY_ATOM_CAP = _int("SORTLOG_TAUTOLOGY_ATOM_CAP", 16)

    # Henkin comprehension check and countermodel search
    COMPREHENSION_DEPTH = _int("SORTLOG_COMPREHENSION_DEPTH", 1)
    COMPREHENSION_SIZE = _int("SORTLOG_COMPREHENSION_SIZE", 6)
    COMPREHENSION_ARITY = _int("SORTLOG_COMPREHENSION_ARITY", 1)
    SEARCH_U_BOUND = _int("SORTLOG_SEARCH_U_BOUND", 1)
    SEARCH_G_BOUND = _int("SORTLOG_SEARCH_G_BOUND", 6)

    # Run history; unset means runs are not recorded
    HISTORY_DB = os.getenv("SORTLOG_HISTORY_DB") or None

    LOG_LEVEL = os.getenv("SORTLOG_LOG_LEVEL", "WARNING")

    @classmethod
    def default_budget(cls) -> Budget:
        return Budget(domain_bound=cls.DOMAIN_BOUND, relation_cap=cls.RELATION_CAP, step_cap=cls.STEP_CAP)

    @classmethod
    def default_search_bounds(cls, domain_bound: Optional[int] = None) -> SearchBounds:
        return SearchBounds(
            domain_bound=cls.DOMAIN_BOUND if domain_bound is None else domain_bound,
            u_bound=cls.SEARCH_U_BOUND,
            g_bound=cls.SEARCH_G_BOUND,
            comprehension_depth=cls.COMPREHENSION_DEPTH,
            comprehension_size=cls.COMPREHENSION_SIZE,
            max_arity=cls.COMPREHENSION_ARITY,
        )

    @classmethod
    def validate(cls) -> dict:
        """Named checks over the current settings; every value is True when usable."""
        return {
            'domain_bound': cls.DOMAIN_BOUND >= 0,
            'relation_cap': cls.RELATION_CAP >= 1,
            'step_cap': cls.STEP_CAP >= 1,
            'tautology_atom_cap': 0 < cls.TAUTOLOGY_ATOM_CAP <= 24,
            'comprehension_bounds': cls.COMPREHENSION_DEPTH >= 0 and cls.COMPREHENSION_SIZE >= 1
                                    and cls.COMPREHENSION_ARITY >= 1,
            'search_bounds': cls.SEARCH_U_BOUND >= 0 and cls.SEARCH_G_BOUND >= 0,
            'log_level': cls.LOG_LEVEL.upper() in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'),
        }
