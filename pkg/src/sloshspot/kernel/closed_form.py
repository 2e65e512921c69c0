"""Closed-form evaluation of the complex potential u + i v.

With ``s = i(z -+ pi)`` every term of the defining integrals is the Laplace
transform ``H(s) = PV int_0^inf exp(-s k) / (k - nu) dk``, which equals
``exp(-nu s) [Ein(-nu s) - gamma - Log(nu s)]``.  For ``Im(nu s) != 0`` this
is written with the principal ``E1``; on the real axis it reduces to
``-exp(-nu s) Ei(nu s)``.  The combination used by each family is regular
at ``k = nu``, so the principal values cancel.

Derivatives follow from ``H'(s) = -1/s - nu H(s)``.
All functions broadcast over numpy arrays.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.special import exp1, expi


def _laplace_pv_scalar(s: complex, nu: float) -> complex:
    zeta = nu * s
    if zeta.imag != 0.0:
        ez = cmath.exp(-zeta)
        return complex(ez * exp1(-zeta)) - 1j * math.copysign(math.pi, zeta.imag) * ez
    return complex(-math.exp(-zeta.real) * expi(zeta.real))


def laplace_pv(s, nu: float):
    """``PV int_0^inf e^{-s k}/(k - nu) dk`` for ``Re s >= 0``, ``s != 0``."""
    if np.ndim(s) == 0:
        return _laplace_pv_scalar(complex(s), nu)
    zeta = nu * np.asarray(s, dtype=complex)
    im = zeta.imag
    off_axis = im != 0.0
    out = np.empty_like(zeta)
    if np.any(off_axis):
        zo = zeta[off_axis]
        ez = np.exp(-zo)
        out[off_axis] = ez * exp1(-zo) - 1j * np.pi * np.sign(zo.imag) * ez
    if np.any(~off_axis):
        zr = zeta[~off_axis].real
        with np.errstate(divide="ignore", invalid="ignore"):
            out[~off_axis] = -np.exp(-zr) * expi(zr)
    return out


def _shifts(z):
    if np.ndim(z) == 0:
        z = complex(z)
    else:
        z = np.asarray(z, dtype=complex)
    return 1j * (z - math.pi), 1j * (z + math.pi)


def potential(z, nu: float, sign: int):
    """``F(z) = u + i v`` at ``z = x + i y`` (``y <= 0``)."""
    s1, s2 = _shifts(z)
    return laplace_pv(s1, nu) + sign * laplace_pv(s2, nu)


def _from_values(f, s1, s2, nu, sign):
    return -1j * nu * f - 1j * (1.0 / s1 + sign / s2)


def derivatives(z, nu: float, sign: int, order: int = 2):
    """Return ``(F, F', F'')`` (truncated to ``order + 1`` entries)."""
    s1, s2 = _shifts(z)
    f = laplace_pv(s1, nu) + sign * laplace_pv(s2, nu)
    out = [f]
    if order >= 1:
        f1 = _from_values(f, s1, s2, nu, sign)
        out.append(f1)
    if order >= 2:
        out.append(-1j * nu * f1 - (1.0 / s1**2 + sign / s2**2))
    return tuple(out)
