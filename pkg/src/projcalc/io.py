"""JSON encodings shared by the command line tools.

Matrices are ``{"dim": n, "re": [[...]], "im": [[...]]}`` in row-major order.
Non-square matrices carry ``"shape": [rows, cols]`` as well.
"""
from __future__ import annotations

import json

import numpy as np

from .calculus import ScalarFunction
from .homotopy import HomotopyPath
from .lifting import BlockAlgebra, BlockElement, QuotientMap
from .states import MatrixUnitSystem, PureState


def _clean(x):
    """Floats with negative zero folded to zero, for stable output."""
    return (np.asarray(x, dtype=float) + 0.0).tolist()


def matrix_to_json(M):
    if isinstance(M, BlockElement):
        M = M.matrix
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ValueError("expected a 2-d array")
    out = {"dim": int(M.shape[0]), "re": _clean(M.real), "im": _clean(M.imag)}
    if M.shape[0] != M.shape[1]:
        out["shape"] = [int(M.shape[0]), int(M.shape[1])]
    return out


def matrix_from_json(obj):
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape:
        raise ValueError("real and imaginary parts differ in shape")
    n = int(obj["dim"])
    shape = tuple(obj.get("shape", (n, n)))
    if n == 0:
        return np.zeros((0, 0), complex)
    if re.shape != shape:
        raise ValueError(f"matrix entries have shape {re.shape}, "
                         f"expected {shape}")
    return re + 1j * im


def vector_to_json(v):
    v = np.asarray(v, dtype=complex).ravel()
    return {"re": _clean(v.real), "im": _clean(v.imag)}


def vector_from_json(obj):
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape:
        raise ValueError("real and imaginary parts differ in shape")
    return re + 1j * im


def state_to_json(state):
    return vector_to_json(state.vector)


def state_from_json(obj):
    return PureState(vector_from_json(obj))


def function_to_json(f):
    return f.to_json()


def function_from_json(obj):
    return ScalarFunction.from_json(obj)


def path_to_json(path):
    return {"parameters": _clean(path.parameters),
            "steps": [matrix_to_json(P) for P in path.steps]}


def path_from_json(obj):
    steps = [matrix_from_json(m) for m in obj["steps"]]
    if not steps:
        raise ValueError("a path needs at least one step")
    return HomotopyPath(steps, list(map(float, obj["parameters"])),
                        steps[0], steps[-1])


def algebra_to_json(algebra):
    return {"blocks": list(algebra.block_dims)}


def algebra_from_json(obj):
    return BlockAlgebra(tuple(int(n) for n in obj["blocks"]))


def quotient_to_json(pi):
    out = {"kept": list(pi.kept)}
    if pi.unitaries is not None:
        out["unitaries"] = [matrix_to_json(W) for W in pi.unitaries]
    return out


def quotient_from_json(obj, algebra):
    us = obj.get("unitaries")
    if us is not None:
        us = tuple(matrix_from_json(W) for W in us)
    return QuotientMap(algebra, tuple(obj["kept"]), us)


def units_to_json(system):
    return {"units": [matrix_to_json(U) for U in system.units],
            "basis": [vector_to_json(e) for e in system.basis],
            "Q": [matrix_to_json(X) for X in system.Q],
            "P": [matrix_to_json(X) for X in system.P]}


def units_from_json(obj):
    return MatrixUnitSystem([matrix_from_json(U) for U in obj["units"]],
                            [vector_from_json(e) for e in obj["basis"]],
                            [matrix_from_json(X) for X in obj.get("Q", [])],
                            [matrix_from_json(X) for X in obj.get("P", [])])


def dumps(obj):
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load(path):
    with open(path) as fh:
        return json.load(fh)


def load_matrix(path):
    return matrix_from_json(load(path))
