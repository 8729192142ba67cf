"""Allow ``python -m pairdecomp``."""

from .cli import run

run()
