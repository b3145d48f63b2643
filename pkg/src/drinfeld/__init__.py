"""Divided-power actions, crystalline differential operators and finite-group
induction for local cohomology of projective space in characteristic p."""
from __future__ import annotations

__version__ = "0.1.0"
