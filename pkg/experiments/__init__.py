"""
experiments – small self-contained runs on top of the sullivan package.

    python -m experiments.growth     generator counts vs free graded Lie algebra
    python -m experiments.spheres    models of S², S³∨S³ and the wedge
"""

from __future__ import annotations
from typing import Tuple

from sullivan.bigraded import BigradedModel, VerifyReport, build, resolve_spec, verify


# ------------------------------------------------------------------ #
def run_spec(spec: str, cap: int) -> Tuple[BigradedModel, VerifyReport]:
    """Build the model of a built-in (or file) spec and verify it."""
    model = build(resolve_spec(spec), cap)
    return model, verify(model)
