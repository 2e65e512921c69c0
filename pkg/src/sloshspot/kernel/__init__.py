"""Evaluation of the conjugate potential/stream pairs.

For the SUM family (half-integer ``nu``)::

    u(x, y) = int_0^inf [cos k(x-pi) + cos k(x+pi)] / (k - nu) e^{ky} dk
    v(x, y) = int_0^inf [sin k(x-pi) + sin k(x+pi)] / (nu - k) e^{ky} dk

and for the DIFF family (integer ``nu``) the same with ``-`` between the two
numerator terms.  ``u + i v`` is analytic in the lower half-plane.
"""
from __future__ import annotations

import numpy as np

from .potential import Potential, as_potential
from .types import (
    DEFAULT_CONFIG,
    SINGULAR_RADIUS,
    Backend,
    Family,
    Gradient2,
    Mode,
    Point2,
    QuadratureConfig,
    TailPolicy,
    TraceMethod,
    make_mode,
)

__all__ = [
    "Backend", "DEFAULT_CONFIG", "Family", "Gradient2", "Mode", "Point2", "Potential",
    "QuadratureConfig", "SINGULAR_RADIUS", "TailPolicy", "TraceMethod", "eval_grad_u",
    "eval_grad_v", "eval_hessian_v", "eval_trace_du", "eval_trace_u", "eval_trace_v",
    "eval_u", "eval_v", "eval_v_split", "make_mode", "as_potential",
]


def _pot(mode: Mode, cfg: QuadratureConfig | None) -> Potential:
    return Potential(mode, cfg)


def eval_u(mode: Mode, p, cfg: QuadratureConfig | None = None) -> float:
    """Velocity potential at ``p = (x, y)``, ``y <= 0``."""
    x, y = p
    return _pot(mode, cfg).u(float(x), float(y))


def eval_v(mode: Mode, p, cfg: QuadratureConfig | None = None) -> float:
    """Stream function at ``p = (x, y)``, ``y <= 0``."""
    x, y = p
    return _pot(mode, cfg).v(float(x), float(y))


def eval_trace_u(mode: Mode, x: float, cfg: QuadratureConfig | None = None) -> float:
    return _pot(mode, cfg).trace_u(float(x))


def eval_trace_v(mode: Mode, x: float, cfg: QuadratureConfig | None = None) -> float:
    return _pot(mode, cfg).trace_v(float(x))


def eval_trace_du(mode: Mode, x: float, cfg: QuadratureConfig | None = None) -> float:
    """``d/dx u(x, 0)``."""
    return _pot(mode, cfg).trace_du(float(x))


def eval_v_split(mode: Mode, x: float, y: float, cfg: QuadratureConfig | None = None) -> float:
    return _pot(mode, cfg).v_split(float(x), float(y))


def eval_grad_v(mode: Mode, p, cfg: QuadratureConfig | None = None) -> Gradient2:
    x, y = p
    return _pot(mode, cfg).grad_v(float(x), float(y))


def eval_grad_u(mode: Mode, p, cfg: QuadratureConfig | None = None) -> Gradient2:
    x, y = p
    return _pot(mode, cfg).grad_u(float(x), float(y))


def eval_hessian_v(mode: Mode, p, cfg: QuadratureConfig | None = None) -> np.ndarray:
    x, y = p
    return _pot(mode, cfg).hessian_v(float(x), float(y))
