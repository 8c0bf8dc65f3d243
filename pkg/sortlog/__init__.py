"""sortlog: a workbench for sort logic."""

__version__ = "0.1.0"
