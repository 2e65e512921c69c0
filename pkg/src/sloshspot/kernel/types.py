"""Value types for the harmonic kernel."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from ..errors import NonRemovableSingularity

# distance from (+-pi, 0) inside which evaluation is refused
SINGULAR_RADIUS = 1e-9
# |cos(nu pi)| / |sin(nu pi)| below this counts as an exact zero
_TRIG_ZERO = 1e-12


class Family(enum.Enum):
    """Integral family.

    SUM pairs ``cos k(x-pi) + cos k(x+pi)`` numerators (half-integer nu),
    DIFF pairs ``cos k(x-pi) - cos k(x+pi)`` numerators (integer nu).
    """

    SUM = "sum"
    DIFF = "diff"

    @classmethod
    def parse(cls, value: "Family | str") -> "Family":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown family {value!r}; expected 'sum' or 'diff'") from None

    @property
    def sign(self) -> int:
        return 1 if self is Family.SUM else -1


class Backend(enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"


class TraceMethod(enum.Enum):
    ROTATED = "rotated"
    REGULARIZED = "regularized"


class TailPolicy(enum.Enum):
    TRUNCATE = "truncate"
    FOURIER = "fourier"


@dataclass(frozen=True)
class Mode:
    nu: float
    family: Family

    def __post_init__(self) -> None:
        if not (self.nu > 0 and math.isfinite(self.nu)):
            raise ValueError(f"nu must be positive and finite, got {self.nu!r}")
        trig = math.cos(self.nu * math.pi) if self.family is Family.SUM else math.sin(self.nu * math.pi)
        if abs(trig) >= _TRIG_ZERO:
            raise NonRemovableSingularity(
                f"non-removable singularity: nu={self.nu} is not admissible for the "
                f"{self.family.value} family (numerator does not vanish at k = nu)"
            )

    @property
    def sign(self) -> int:
        return self.family.sign


def make_mode(nu: float, family: Family | str) -> Mode:
    """Validated (nu, family) pair; raises NonRemovableSingularity otherwise."""
    return Mode(float(nu), Family.parse(family))


class Point2(NamedTuple):
    x: float
    y: float


class Gradient2(NamedTuple):
    dx: float
    dy: float


@dataclass(frozen=True)
class QuadratureConfig:
    """Evaluation settings.

    ``backend`` selects the closed-form exponential-integral evaluator or
    direct quadrature of the defining integrals.  The remaining fields only
    affect the quadrature backend.
    """

    abs_tol: float = 1e-11
    rel_tol: float = 1e-11
    split_factor: float = 2.0
    tail_policy: TailPolicy = TailPolicy.TRUNCATE
    trace_method: TraceMethod = TraceMethod.ROTATED
    backend: Backend = Backend.CLOSED_FORM
    taylor_radius: float = 0.01
    taylor_degree: int = 6
    # Abel regularisation: first epsilon and number of halvings
    abel_eps: float = 0.005
    abel_levels: int = 5

    def __post_init__(self) -> None:
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.split_factor <= 1.0:
            raise ValueError("split point must exceed nu (split_factor > 1)")
        if self.taylor_radius <= 0 or self.taylor_degree < 1:
            raise ValueError("invalid Taylor model settings")
        if self.abel_levels < 2 or self.abel_eps <= 0:
            raise ValueError("invalid Abel regularisation settings")


DEFAULT_CONFIG = QuadratureConfig()
