"""Potential/stream pair evaluation with backend dispatch."""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from ..errors import OutOfRange, SingularPoint
from . import closed_form, quadrature
from .types import (
    DEFAULT_CONFIG,
    SINGULAR_RADIUS,
    Backend,
    Family,
    Gradient2,
    Mode,
    QuadratureConfig,
    TraceMethod,
)


def _check_point(x: float, y: float) -> None:
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite point ({x}, {y})")
    if y > 0:
        raise OutOfRange(f"point ({x}, {y}) is above the free surface")
    if math.hypot(abs(x) - math.pi, y) < SINGULAR_RADIUS:
        raise SingularPoint(f"point ({x}, {y}) is within {SINGULAR_RADIUS} of (+-pi, 0)")


def _check_trace(x: float) -> None:
    if not math.isfinite(x) or abs(x) >= math.pi:
        raise OutOfRange(f"trace representation requires |x| < pi, got x={x}")
    if math.pi - abs(x) < SINGULAR_RADIUS:
        raise SingularPoint(f"x={x} is within {SINGULAR_RADIUS} of +-pi")


class Potential:
    """The conjugate pair ``u + i v`` for one mode.

    Scalar methods validate their arguments; ``field``/``field_derivatives``
    are unchecked vectorised closed-form evaluators for grids.
    Subclasses may override ``u``/``v`` (test fixtures do this to build
    negative controls for the residual checks).
    """

    def __init__(self, mode: Mode, cfg: QuadratureConfig | None = None):
        self.mode = mode
        self.cfg = cfg or DEFAULT_CONFIG

    def __repr__(self) -> str:
        return f"Potential(nu={self.mode.nu}, family={self.mode.family.value})"

    # -- vectorised closed form -------------------------------------
    def field(self, x, y):
        """Complex ``u + i v`` on arrays (no validation)."""
        z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
        return closed_form.potential(z, self.mode.nu, self.mode.sign)

    def field_derivatives(self, x, y, order: int = 2):
        z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
        return closed_form.derivatives(z, self.mode.nu, self.mode.sign, order)

    # -- complex derivative of order m at a checked point ----------------
    def complex_derivative(self, x: float, y: float, order: int = 0) -> complex:
        """``d^order/dz^order (u + i v)`` at ``(x, y)``."""
        _check_point(x, y)
        if y == 0.0:
            return self.trace_complex(x, order)
        if self.cfg.backend is Backend.CLOSED_FORM:
            return closed_form.derivatives(complex(x, y), self.mode.nu, self.mode.sign, order)[order]
        return quadrature.potential_derivative(self.mode, x, y, order, self.cfg)

    def jet(self, x: float, y: float) -> tuple[complex, complex]:
        """``(F, F')`` at ``(x, y)``; one closed-form evaluation when possible."""
        _check_point(x, y)
        if self.cfg.backend is Backend.CLOSED_FORM:
            if y == 0.0:
                _check_trace(x)
            f, f1 = closed_form.derivatives(complex(x, y), self.mode.nu, self.mode.sign, 1)
            return f, f1
        return self.complex_derivative(x, y, 0), self.complex_derivative(x, y, 1)

    def trace_complex(self, x: float, order: int = 0) -> complex:
        """``d^order/dx^order (u + i v)`` on the free surface ``y = 0``."""
        _check_trace(x)
        if self.cfg.backend is Backend.CLOSED_FORM:
            return closed_form.derivatives(complex(x, 0.0), self.mode.nu, self.mode.sign, order)[order]
        if self.cfg.trace_method is TraceMethod.ROTATED:
            return quadrature.rotated_trace(self.mode, x, order, self.cfg)
        return quadrature.regularized_trace(self.mode, x, order, self.cfg)

    # -- real-valued views -------------------------------------------
    def u(self, x: float, y: float) -> float:
        return self.complex_derivative(x, y).real

    def v(self, x: float, y: float) -> float:
        return self.complex_derivative(x, y).imag

    def trace_u(self, x: float) -> float:
        return self.trace_complex(x).real

    def trace_v(self, x: float) -> float:
        return self.trace_complex(x).imag

    def trace_du(self, x: float) -> float:
        """``u_x(x, 0)``."""
        return self.trace_complex(x, 1).real

    def trace_d2u(self, x: float) -> float:
        """``u_xx(x, 0)``."""
        return self.trace_complex(x, 2).real

    def trace_dv(self, x: float) -> float:
        """``v_x(x, 0)``."""
        return self.trace_complex(x, 1).imag

    def trace_d2v(self, x: float) -> float:
        return self.trace_complex(x, 2).imag

    def grad_v(self, x: float, y: float) -> Gradient2:
        # F' = u_x + i v_x and v_y = u_x
        d = self.complex_derivative(x, y, 1)
        return Gradient2(d.imag, d.real)

    def grad_u(self, x: float, y: float) -> Gradient2:
        d = self.complex_derivative(x, y, 1)
        return Gradient2(d.real, -d.imag)

    def hessian_v(self, x: float, y: float) -> np.ndarray:
        d2 = self.complex_derivative(x, y, 2)
        vxx, vxy = d2.imag, d2.real
        return np.array([[vxx, vxy], [vxy, -vxx]])

    def hessian_u(self, x: float, y: float) -> np.ndarray:
        d2 = self.complex_derivative(x, y, 2)
        uxx, uxy = d2.real, -d2.imag
        return np.array([[uxx, uxy], [uxy, -uxx]])

    # -- alternative representation of v (SUM family only) ------------
    def v_split(self, x: float, y: float) -> float:
        """``v`` rebuilt from its trace by integrating ``v_y - nu v`` downward."""
        if self.mode.family is not Family.SUM:
            raise OutOfRange("the split representation is defined for the SUM family")
        _check_trace(x)
        if y > 0:
            raise OutOfRange("y must be non-positive")
        nu = self.mode.nu
        p2 = math.pi**2
        a2, b2 = (math.pi - x) ** 2, (math.pi + x) ** 2

        def g(k):
            return (k * k - (p2 - x * x)) / ((k * k + a2) * (k * k + b2)) * math.exp(-k * nu)

        inner = 0.0
        if y < 0:
            inner = quad(g, y, 0.0, epsabs=self.cfg.abs_tol, epsrel=self.cfg.rel_tol, limit=200)[0]
        return math.exp(nu * y) * (self.trace_v(x) + 2.0 * x * inner)


def as_potential(obj, cfg: QuadratureConfig | None = None) -> Potential:
    """Accept either a ``Mode`` or an existing ``Potential``."""
    if isinstance(obj, Potential):
        return obj
    if isinstance(obj, Mode):
        return Potential(obj, cfg)
    raise TypeError(f"expected Mode or Potential, got {type(obj).__name__}")
