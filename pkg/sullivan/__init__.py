from .algebra import AlgebraContext, Generator, Polynomial  # noqa: F401
from .cdga import CdgaModel, cohomology  # noqa: F401
from .bigraded import BUILTIN_SPECS, BigradedModel, CohomologySpec, build, verify  # noqa: F401
from .selfeq import CdgaMorphism, construct_phi  # noqa: F401
from .presentations import GroupPresentation, abelian_invariants  # noqa: F401

__all__ = [
    "AlgebraContext", "Generator", "Polynomial",
    "CdgaModel", "cohomology",
    "BUILTIN_SPECS", "BigradedModel", "CohomologySpec", "build", "verify",
    "CdgaMorphism", "construct_phi",
    "GroupPresentation", "abelian_invariants",
]
