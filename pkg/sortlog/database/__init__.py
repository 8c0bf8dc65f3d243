# database/__init__.py
from .models import RunStore

__all__ = ['RunStore']
