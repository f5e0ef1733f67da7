"""Projection calculus: move the range of ``R`` relative to ``Q`` by ``f``.

Given projections ``Q``, ``R`` and ``f: [0, 1] -> [0, 1]`` with ``f(0) = 0``
(and ``f(1) = 1`` when 1 lies in the spectrum of ``QR``), the partial
isometry

    U = Q R x_f(RQR) + Q' R y_f(RQR),
    x_f(s) = sqrt(f(s) / s),  y_f(s) = sqrt((1 - f(s)) / (1 - s)),

has initial projection ``R`` and its final projection ``P = UU*`` satisfies
``QPQ = f(QRQ)``.  Here ``Q' = 1 - Q``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import Inadmissible
from .numeric import (adjoint, as_matrix, hermitian_eig, hermitian_part,
                      identity, operator_norm, require_projection, resolve,
                      snapped_eigenvalues, spectral_points)
from .support import apply_function

_SHORTHANDS = ("id", "chi", "cap:c", "const:t")


@dataclass(frozen=True)
class ScalarFunction:
    """Piecewise-linear function on ``[0, 1]``.

    Parameters
    ----------
    breakpoints : sequence of (x, y)
        Strictly increasing ``x`` from 0 to 1, values in ``[0, 1]``.
    jump_at_zero : bool
        If true the function is 0 at ``x = 0`` and the first breakpoint only
        fixes the right limit there, so ``y`` may be nonzero.  Otherwise the
        first breakpoint must be ``(0, 0)``.
    """

    breakpoints: tuple
    jump_at_zero: bool = False
    domain: tuple = field(default=(0.0, 1.0), repr=False, compare=False)

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.breakpoints)
        if len(pts) < 2:
            raise ValueError("need at least two breakpoints")
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise ValueError("breakpoints must span [0, 1]")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("breakpoint x values must increase strictly")
        if np.any(ys < 0) or np.any(ys > 1):
            raise ValueError("breakpoint values must lie in [0, 1]")
        if not self.jump_at_zero and ys[0] != 0.0:
            raise ValueError("f(0) must be 0 unless jump_at_zero is set")
        object.__setattr__(self, "breakpoints", pts)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        xs = [p[0] for p in self.breakpoints]
        ys = [p[1] for p in self.breakpoints]
        out = np.interp(s, xs, ys)
        if self.jump_at_zero:
            out = np.where(s == 0.0, 0.0, out)
        return out

    @classmethod
    def identity(cls):
        return cls(((0, 0), (1, 1)))

    @classmethod
    def chi(cls):
        """Indicator of ``(0, 1]``."""
        return cls(((0, 1), (1, 1)), jump_at_zero=True)

    @classmethod
    def cap(cls, c):
        """``s -> min(s, c)``."""
        c = float(c)
        if not 0.0 <= c <= 1.0:
            raise ValueError("cap level must lie in [0, 1]")
        if c in (0.0, 1.0):
            return cls(((0, 0), (1, c)))
        return cls(((0, 0), (c, c), (1, c)))

    @classmethod
    def constant(cls, t):
        """``t`` times the indicator of ``(0, 1]``."""
        t = float(t)
        return cls(((0, t), (1, t)), jump_at_zero=True)

    @classmethod
    def parse(cls, text):
        """Build from a shorthand (``id``, ``chi``, ``cap:c``, ``const:t``)
        or a JSON object with ``breakpoints`` and ``jump_at_zero``."""
        text = text.strip()
        if text.startswith("{"):
            return cls.from_json(json.loads(text))
        name, _, arg = text.partition(":")
        if name == "id" and not arg:
            return cls.identity()
        if name == "chi" and not arg:
            return cls.chi()
        if name == "cap" and arg:
            return cls.cap(float(arg))
        if name == "const" and arg:
            return cls.constant(float(arg))
        raise ValueError(f"unknown function {text!r}; expected one of "
                         f"{', '.join(_SHORTHANDS)} or JSON")

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(map(tuple, obj["breakpoints"])),
                   bool(obj.get("jump_at_zero", False)))

    def to_json(self):
        return {"breakpoints": [list(p) for p in self.breakpoints],
                "jump_at_zero": self.jump_at_zero}


@dataclass(frozen=True)
class CalculusResult:
    U: np.ndarray
    P: np.ndarray
    used_spectrum: list


def _values(f, points):
    vals = np.asarray(f(np.asarray(points, dtype=float)), dtype=float)
    return np.broadcast_to(vals, np.shape(points)).astype(float)


def check_admissible(f, spectrum, tol=None):
    """Raise :class:`Inadmissible` unless ``f`` maps the spectrum into
    ``[0, 1]`` with ``f(0) = 0`` and ``f(1) = 1`` where those points occur."""
    tol = resolve(tol)
    spectrum = np.asarray(spectrum, dtype=float)
    vals = _values(f, spectrum)
    if np.any(vals < -tol.eq) or np.any(vals > 1 + tol.eq):
        raise Inadmissible("function leaves [0, 1] on the spectrum")
    if np.any((spectrum == 0.0) & (np.abs(vals) > tol.eq)):
        raise Inadmissible("f(0) must be 0")
    if np.any((spectrum == 1.0) & (np.abs(vals - 1) > tol.eq)):
        raise Inadmissible("f(1) must be 1 when 1 lies in the spectrum")
    return np.clip(vals, 0.0, 1.0)


def _xy(fvals, s):
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.where(s > 0, np.sqrt(fvals / np.where(s > 0, s, 1.0)), 0.0)
        y = np.where(s < 1, np.sqrt((1 - fvals) / np.where(s < 1, 1 - s, 1.0)),
                     0.0)
    return x, y


def xf_yf(f, spectrum, tol=None):
    """Values of ``x_f`` and ``y_f`` on a finite spectrum.

    Uses ``x_f(0) = 0`` and ``y_f(1) = 0``.
    """
    s = np.asarray(spectrum, dtype=float)
    fvals = check_admissible(f, s, tol)
    x, y = _xy(fvals, s)
    return x.tolist(), y.tolist()


def pair_spectrum(Q, R, tol=None):
    """Clustered spectrum of ``RQR`` on ``[0, 1]``, i.e. sigma(QR)."""
    tol = resolve(tol)
    if Q.shape[0] == 0:
        return []
    w = np.linalg.eigvalsh(hermitian_part(R @ Q @ R))
    return spectral_points(w, tol)


def pc_build(Q, R, f, tol=None):
    """Construct ``U_{Q,R,f}`` and ``P_{Q,R,f}``.

    ``f`` may be a :class:`ScalarFunction` or any vectorised callable on
    ``[0, 1]``.  It is evaluated once per eigenvalue cluster of ``RQR``.
    """
    tol = resolve(tol)
    Q, R = as_matrix(Q), as_matrix(R)
    require_projection(Q, R, tol=tol)
    d = hermitian_eig(R @ Q @ R, tol)
    s = snapped_eigenvalues(d, tol)
    if np.any(s < 0) or np.any(s > 1):
        raise Inadmissible("sigma(RQR) leaves [0, 1]")
    fvals = check_admissible(f, s, tol)
    x, y = _xy(fvals, s)
    QR = Q @ R
    U = QR @ d.apply(x) + (R - QR) @ d.apply(y)
    P = hermitian_part(U @ adjoint(U))
    return CalculusResult(U, P, sorted(set(s.tolist())))


def pc_constant(Q, R, t, tol=None):
    """``P_{Q,R,t chi}``: move every nonzero angle to ``cos^2 = t``."""
    tol = resolve(tol)
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise Inadmissible(f"constant {t} outside [0, 1]")
    return pc_build(Q, R, ScalarFunction.constant(t), tol)


def _distance_terms(Q, R, f, g, tol):
    tol = resolve(tol)
    Q, R = as_matrix(Q), as_matrix(R)
    require_projection(Q, R, tol=tol)
    s = np.asarray(pair_spectrum(Q, R, tol))
    return check_admissible(f, s, tol), check_admissible(g, s, tol)


def a_term(fv, gv):
    return np.maximum(
        0.0, 2 * (1 - np.sqrt(fv * gv) - np.sqrt((1 - fv) * (1 - gv))))


def b_term(fv, gv):
    return np.sqrt(fv * gv) + np.sqrt((1 - fv) * (1 - gv))


def c_term(fv, gv):
    return np.sqrt((1 - fv) * gv) - np.sqrt(fv * (1 - gv))


def pc_unitary_distance(Q, R, f, g, tol=None):
    """``||U_f - U_g||`` from the closed form ``max sqrt(a_{f,g})``."""
    fv, gv = _distance_terms(Q, R, f, g, tol)
    if fv.size == 0:
        return 0.0
    return float(np.sqrt(a_term(fv, gv)).max())


def pc_projection_distance(Q, R, f, g, tol=None):
    """``||P_f - P_g||`` from the closed form ``max |c_{f,g}|``."""
    fv, gv = _distance_terms(Q, R, f, g, tol)
    if fv.size == 0:
        return 0.0
    return float(np.abs(c_term(fv, gv)).max())


def b_residual(Q, R, f, g, tol=None):
    """``||U_f* U_g - b_{f,g}(RQR) R||``."""
    tol = resolve(tol)
    Uf = pc_build(Q, R, f, tol).U
    Ug = pc_build(Q, R, g, tol).U
    d = hermitian_eig(R @ Q @ R, tol)
    s = snapped_eigenvalues(d, tol)
    b = d.apply(b_term(_values(f, s).clip(0, 1), _values(g, s).clip(0, 1)))
    return operator_norm(adjoint(Uf) @ Ug - b @ R)


def qpq_residual(Q, R, P, f, tol=None):
    """``||QPQ - f(QRQ)||``."""
    tol = resolve(tol)
    fQRQ = apply_function(Q @ R @ Q, f, (0.0, 1.0), tol)
    return operator_norm(Q @ P @ Q - fQRQ)


def complement(P):
    return identity(P.shape[0]) - P
