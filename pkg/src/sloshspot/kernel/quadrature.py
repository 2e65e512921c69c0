"""Direct quadrature of the defining integrals.

Both families can be written as

    F^(m)(z) = A_m * int_0^inf 2 q(k) k^m e^{ky} (cos kx - i sin kx) dk,

where ``q(k) = c(k pi) / (k - nu)``, ``c`` is ``cos`` (SUM) or ``sin`` (DIFF),
and ``A_m = (-i)^m`` for SUM and ``i (-i)^m`` for DIFF.  ``c(nu pi) = 0``, so
``q`` is analytic; near ``k = nu`` it is evaluated from its Taylor series to
avoid cancellation in the division.

The free-surface traces (``y = 0``) use the rotated-contour form

    PV int_0^inf e^{ika}/(k - nu) dk
        = i pi e^{i nu a} + int_0^inf e^{-a nu t} (t - i)/(1 + t^2) dt,   a > 0,

or Abel regularisation (``y = -eps``, Richardson-extrapolated to ``eps = 0``).
"""
from __future__ import annotations

import math
import warnings
from functools import lru_cache

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from ..errors import QuadratureFailure
from .types import Family, Mode, QuadratureConfig, TailPolicy


@lru_cache(maxsize=64)
def _taylor_coefficients(nu: float, family: Family, degree: int) -> tuple[float, ...]:
    # coefficient of (k - nu)^(n-1) in c(k pi)/(k - nu), n = 1..degree+1
    trig = math.cos if family is Family.SUM else math.sin
    return tuple(
        math.pi**n * trig(nu * math.pi + n * math.pi / 2) / math.factorial(n)
        for n in range(1, degree + 2)
    )


def regular_quotient(k: float, mode: Mode, cfg: QuadratureConfig) -> float:
    """``c(k pi) / (k - nu)`` with a Taylor model on ``|k - nu| < taylor_radius``."""
    d = k - mode.nu
    if abs(d) < cfg.taylor_radius:
        coeffs = _taylor_coefficients(mode.nu, mode.family, cfg.taylor_degree)
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * d + c
        return acc
    trig = math.cos if mode.family is Family.SUM else math.sin
    return trig(k * math.pi) / d


def _quad(f, a, b, cfg: QuadratureConfig, **kw) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            val, err = quad(f, a, b, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, **kw)
        except IntegrationWarning:
            warnings.simplefilter("ignore", IntegrationWarning)
            val, err = quad(f, a, b, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, **kw)
            if err > 1e3 * max(cfg.abs_tol, cfg.rel_tol * abs(val)):
                raise QuadratureFailure(
                    f"quadrature on [{a}, {b}] did not reach tolerance (err ~ {err:.2e})"
                ) from None
    return val


def _truncation_point(y: float, m: int, start: float, nu: float, tol: float) -> float:
    # bound on int_K^inf 2 k^m e^{ky}/(k - nu) dk
    t = -y
    k = start
    while True:
        bound = 2.0 * k**m * math.exp(-k * t) / ((k - nu) * t) * (1.0 + m / (k * t))
        if bound < tol:
            return k
        k *= 1.25


# 2 c(k pi) w(k x) as combinations of trig(k a), trig(k b) with a = pi - x, b = pi + x
# entries: (trig, coefficient on a, coefficient on b)
_PRODUCTS = {
    (Family.SUM, "cos"): ("cos", 1.0, 1.0),
    (Family.SUM, "sin"): ("sin", -1.0, 1.0),
    (Family.DIFF, "cos"): ("sin", 1.0, 1.0),
    (Family.DIFF, "sin"): ("cos", 1.0, -1.0),
}


def _fourier_tail(mode: Mode, x: float, y: float, m: int, kind: str, start: float,
                  cfg: QuadratureConfig) -> float:
    trig, ca, cb = _PRODUCTS[(mode.family, kind)]
    nu = mode.nu

    def amp(k):
        return k**m * math.exp(k * y) / (k - nu)

    total = 0.0
    for coef, freq in ((ca, math.pi - x), (cb, math.pi + x)):
        if freq == 0.0:
            if trig == "cos":
                total += coef * _quad(amp, start, np.inf, cfg, limit=500)
            continue
        sgn = 1.0
        if freq < 0:
            freq = -freq
            sgn = -1.0 if trig == "sin" else 1.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            val, err = quad(amp, start, np.inf, weight=trig, wvar=freq,
                            epsabs=cfg.abs_tol, limlst=200, limit=500)
        if err > 1e3 * max(cfg.abs_tol, cfg.rel_tol * abs(val)):
            raise QuadratureFailure(f"Fourier tail failed (err ~ {err:.2e})")
        total += coef * sgn * val
    return total


def _component(mode: Mode, x: float, y: float, m: int, kind: str,
               cfg: QuadratureConfig) -> float:
    """``int_0^inf 2 q(k) k^m e^{ky} w(kx) dk`` with ``w`` = cos or sin."""
    w = math.cos if kind == "cos" else math.sin
    nu = mode.nu

    def f(k):
        return 2.0 * regular_quotient(k, mode, cfg) * k**m * math.exp(k * y) * w(k * x)

    split = cfg.split_factor * nu
    head = _quad(f, 0.0, split, cfg, points=[nu], limit=400)
    if cfg.tail_policy is TailPolicy.FOURIER or y == 0.0:
        if y == 0.0 and m > 0:
            raise QuadratureFailure("derivative integrals diverge on y = 0")
        return head + _fourier_tail(mode, x, y, m, kind, split, cfg)
    cut = _truncation_point(y, m, split, nu, cfg.abs_tol)
    n_osc = (cut - split) * (abs(x) + math.pi) / math.pi
    tail = _quad(f, split, cut, cfg, limit=max(400, int(4 * n_osc)))
    return head + tail


def _phase(mode: Mode, m: int) -> complex:
    a = (-1j) ** m
    return a if mode.family is Family.SUM else 1j * a


def potential_derivative(mode: Mode, x: float, y: float, m: int,
                         cfg: QuadratureConfig) -> complex:
    """``F^(m)(x + iy)`` by direct quadrature (``y < 0``)."""
    ic = _component(mode, x, y, m, "cos", cfg)
    is_ = _component(mode, x, y, m, "sin", cfg)
    return _phase(mode, m) * complex(ic, -is_)


# ---------------------------------------------------------------- traces

def _rotated_pv(a: float, nu: float, order: int, cfg: QuadratureConfig) -> complex:
    """d^order/da^order of PV int_0^inf e^{ika}/(k-nu) dk, for a > 0."""
    def re(t):
        return math.exp(-a * nu * t) * t ** (order + 1) / (1.0 + t * t)

    def im(t):
        return -math.exp(-a * nu * t) * t**order / (1.0 + t * t)

    integral = complex(_quad(re, 0.0, np.inf, cfg, limit=400),
                       _quad(im, 0.0, np.inf, cfg, limit=400))
    pole = 1j * math.pi * (1j * nu) ** order * complex(math.cos(nu * a), math.sin(nu * a))
    return pole + (-nu) ** order * integral


def rotated_trace(mode: Mode, x: float, order: int, cfg: QuadratureConfig) -> complex:
    """``d^order/dx^order (u + i v)`` on ``y = 0`` via the rotated contour, |x| < pi."""
    a, b = math.pi - x, math.pi + x
    pa = _rotated_pv(a, mode.nu, order, cfg)
    pb = _rotated_pv(b, mode.nu, order, cfg)
    # d/dx = -d/da on the a-term and +d/db on the b-term
    sa = (-1.0) ** order
    if mode.family is Family.SUM:
        re = sa * pa.real + pb.real
        im = sa * pa.imag - pb.imag
    else:
        re = sa * pa.real - pb.real
        im = sa * pa.imag + pb.imag
    return complex(re, im)


def regularized_trace(mode: Mode, x: float, order: int, cfg: QuadratureConfig) -> complex:
    """Abel limit ``lim_{eps->0} F^(order)(x - i eps)`` with Richardson extrapolation."""
    fourier = QuadratureConfig(
        abs_tol=cfg.abs_tol, rel_tol=cfg.rel_tol, split_factor=cfg.split_factor,
        tail_policy=TailPolicy.FOURIER, taylor_radius=cfg.taylor_radius,
        taylor_degree=cfg.taylor_degree,
    )
    eps = [cfg.abel_eps / 2**j for j in range(cfg.abel_levels)]
    table = [potential_derivative(mode, x, -e, order, fourier) for e in eps]
    # F(-eps) = F0 + c1 eps + c2 eps^2 + ...
    for p in range(1, cfg.abel_levels):
        f = 2.0**p
        table = [(f * table[j + 1] - table[j]) / (f - 1.0) for j in range(len(table) - 1)]
    return table[0]
