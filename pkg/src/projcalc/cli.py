"""Command line front end.

Every subcommand prints one JSON document (to stdout or ``--out``) holding
its result and the residuals of the operation's post-conditions, so other
tools can re-check them.  Exit status is 0 on success, 1 when ``verify``
finds a failing check, 2 on usage errors and the error's own code (3 and up)
for library failures.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

import numpy as np

from . import block_fixtures as bf
from .calculus import ScalarFunction, pc_build, qpq_residual
from .errors import ProjCalcError, UnknownSuite
from .geometry import pair_report
from .homotopy import homotopy_close, homotopy_mvn, homotopy_orthogonal_mvn
from .io import (algebra_from_json, algebra_to_json, dumps, load,
                 matrix_from_json, matrix_to_json, path_to_json,
                 quotient_from_json, quotient_to_json, units_to_json,
                 vector_from_json)
from .lifting import (lift_idempotent, lift_partial_isometry,
                      lift_partial_isometry_spectrum, lift_projection_norm,
                      lift_projection_spectrum)
from .numeric import (DEFAULT_TOL, adjoint, hausdorff, operator_norm,
                      pair_from_angles, rank_of_projection, spectral_points)
from .states import PureState, excise, transitivity_units
from .verify import SUITES, run_suite


class UsageError(Exception):
    pass


def _tolerances(args):
    tol = DEFAULT_TOL
    if getattr(args, "tol", None) is not None:
        tol = tol.with_eq(args.tol)
    if getattr(args, "tau_spec", None) is not None:
        tol = tol.with_spec(args.tau_spec)
    return tol


def _matrix_file(path, name):
    if path is None:
        raise UsageError(f"--{name} is required")
    return matrix_from_json(load(path))


def _fill_from_json(obj):
    return {int(k): matrix_from_json(v) for k, v in (obj or {}).items()}


def _fill_to_json(fill):
    return {str(k): matrix_to_json(v) for k, v in sorted(fill.items())}


def _residuals(**kw):
    return {k: float(v) for k, v in kw.items()}


def cmd_verify(args):
    report = run_suite(args.suite, args.seed, args.trials, args.dim_max,
                       _tolerances(args))
    return report, 0 if report["summary"]["failed"] == 0 else 1


def cmd_pc(args):
    tol = _tolerances(args)
    Q, R = _matrix_file(args.q, "q"), _matrix_file(args.r, "r")
    f = ScalarFunction.parse(args.fn)
    res = pc_build(Q, R, f, tol)
    U, P = res.U, res.P
    out = {"U": matrix_to_json(U), "P": matrix_to_json(P),
           "function": f.to_json(), "spectrum": list(res.used_spectrum),
           "residuals": _residuals(
               compression=qpq_residual(Q, R, P, f, tol),
               initial=operator_norm(adjoint(U) @ U - R),
               final=operator_norm(U @ adjoint(U) - P),
               projection=operator_norm(P @ P - P),
               rank=abs(rank_of_projection(P) - rank_of_projection(R)))}
    return out, 0


def cmd_homotopy(args):
    tol = _tolerances(args)
    if args.kind == "close":
        path = homotopy_close(_matrix_file(args.q, "q"),
                              _matrix_file(args.r, "r"), args.steps,
                              args.schedule, tol)
    elif args.kind == "orthogonal":
        path = homotopy_orthogonal_mvn(_matrix_file(args.u, "u"), args.steps,
                                       tol)
    else:
        path = homotopy_mvn(_matrix_file(args.u, "u"), args.steps,
                            args.schedule, tol)
    out = {"kind": args.kind, "path": path_to_json(path),
           "mesh": float(path.mesh),
           "residuals": _residuals(endpoints=path.endpoint_error(),
                                   projections=path.projection_error())}
    return out, 0


def _load_fixture(args):
    if args.fixture == "two-block":
        text = resources.files("projcalc").joinpath(
            "data/two_block.json").read_text()
        obj = json.loads(text)
    elif args.fixture is not None:
        obj = load(args.fixture)
    else:
        if args.algebra is None or args.map is None or args.input is None:
            raise UsageError("give --fixture, or all of --algebra, --map "
                             "and --input")
        obj = dict(load(args.input))
        obj["algebra"] = load(args.algebra)
        obj["map"] = load(args.map)
    A = algebra_from_json(obj["algebra"])
    return quotient_from_json(obj["map"], A), obj


def _field(obj, key):
    if key not in obj:
        raise UsageError(f"fixture has no {key!r} entry")
    return matrix_from_json(obj[key])


def cmd_lift(args):
    tol = _tolerances(args)
    pi, obj = _load_fixture(args)
    kind = args.kind
    out = {"kind": kind}
    if kind in ("norm", "spectrum"):
        R, Q = _field(obj, "R"), _field(obj, "Q")
        if kind == "norm":
            P = lift_projection_norm(pi, R, Q, tol).matrix
        else:
            res = lift_projection_spectrum(pi, R, Q, args.max_iters, tol)
            P = res.P.matrix
            out.update(iterations=res.iterations, distance=res.distance,
                       spectrum=list(res.spectrum),
                       target_spectrum=list(res.target_spectrum))
        PQ = P @ Q
        out.update(
            result=matrix_to_json(P),
            norm_pq_squared=operator_norm(PQ) ** 2,
            residuals=_residuals(
                quotient=operator_norm(pi.apply_matrix(P) - pi.apply_matrix(R)),
                projection=operator_norm(P @ P - P),
                norm=abs(operator_norm(PQ)
                         - operator_norm(pi.apply_matrix(PQ)))))
    elif kind == "idempotent":
        i = _field(obj, "i")
        X = lift_idempotent(pi, i, _fill_from_json(obj.get("fill_p")),
                            _fill_from_json(obj.get("fill_q")),
                            args.max_iters, tol).matrix
        a = spectral_points(np.linalg.eigvalsh(adjoint(X) @ X), tol, 0, np.inf)
        b = spectral_points(np.linalg.eigvalsh(adjoint(i) @ i), tol, 0, np.inf)
        out.update(result=matrix_to_json(X), residuals=_residuals(
            quotient=operator_norm(pi.apply_matrix(X) - i),
            idempotent=operator_norm(X @ X - X),
            spectrum=hausdorff(a, b)))
    else:
        u = _field(obj, "u")
        fill = _fill_from_json(obj.get("fill"))
        if kind == "isometry":
            U = lift_partial_isometry(pi, u, fill, tol).matrix
            extra = {"square_norm": abs(operator_norm(U @ U)
                                        - operator_norm(u @ u))}
        else:
            U = lift_partial_isometry_spectrum(pi, u, fill, args.seed,
                                               args.max_iters, tol).matrix
            extra = {"spectrum": hausdorff(np.linalg.eigvals(U),
                                           np.linalg.eigvals(u))}
        out.update(result=matrix_to_json(U), residuals=_residuals(
            quotient=operator_norm(pi.apply_matrix(U) - u),
            partial_isometry=operator_norm(U @ adjoint(U) @ U - U), **extra))
    return out, 0


def cmd_fixture(args):
    rng = np.random.default_rng(args.seed)
    if args.kind == "two-block":
        pi, R, Q = bf.two_block_fixture()
        data = {"R": matrix_to_json(R), "Q": matrix_to_json(Q)}
    elif args.kind == "block-pair":
        pi, R, Q = bf.random_block_pair(rng, args.dim_max, args.max_stray)
        data = {"R": matrix_to_json(R), "Q": matrix_to_json(Q)}
    elif args.kind == "block-idempotent":
        pi, i, fp, fq = bf.random_block_idempotent(rng, args.dim_max)
        data = {"i": matrix_to_json(i), "fill_p": _fill_to_json(fp),
                "fill_q": _fill_to_json(fq)}
    else:
        make = (bf.random_block_isometry if args.kind == "block-isometry"
                else bf.positive_isometry_fixture)
        pi, u, fill = make(rng, args.dim_max)
        data = {"u": matrix_to_json(u), "fill": _fill_to_json(fill)}
    data.update(algebra=algebra_to_json(pi.source), map=quotient_to_json(pi))
    return data, 0


def cmd_excise(args):
    tol = _tolerances(args)
    Q = _matrix_file(args.q, "q")
    if args.state is None:
        raise UsageError("--state is required")
    state = PureState.from_vector(vector_from_json(load(args.state)))
    P = excise(Q, state, args.rank, rng=args.seed, tol=tol)
    lam = state.evaluate(Q).real
    v = state.vector
    out = {"P": matrix_to_json(P), "state_value": float(lam),
           "residuals": _residuals(
               excision=operator_norm(P @ Q @ P - lam * P),
               fixes_state=np.linalg.norm(P @ v - v),
               projection=operator_norm(P @ P - P),
               rank=abs(rank_of_projection(P) - args.rank))}
    return out, 0


def cmd_transitivity(args):
    tol = _tolerances(args)
    if args.basis is not None:
        basis = [vector_from_json(v) for v in load(args.basis)]
    else:
        if args.n is None:
            raise UsageError("give --basis or --n")
        if args.n > args.N:
            raise UsageError("--n cannot exceed --N")
        basis = list(np.eye(args.N, dtype=complex)[:args.n])
    s = transitivity_units(args.N, basis, fat=args.fat, rank=args.rank,
                           rng=args.seed, tol=tol)
    out = units_to_json(s)
    out["residuals"] = _residuals(
        laws=s.law_residual(), initial=s.initial_residual(),
        action=s.action_residual(), excision=s.excision_residual(),
        faithfulness=abs(s.representation_rank(tol) - s.n ** 2))
    return out, 0


def cmd_pair(args):
    tol = _tolerances(args)
    try:
        angles = [float(a) for a in args.angles.split(",") if a.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --angles: {exc}") from None
    P, Q = pair_from_angles(angles, args.extra_p, args.extra_q,
                            args.extra_kernel, args.seed, args.extra_both)
    rep = pair_report(P, Q, tol)
    out = {"P": matrix_to_json(P), "Q": matrix_to_json(Q),
           "spectrum": list(rep.spectrum),
           "interior_spectrum": [x for x in rep.spectrum if 0 < x < 1],
           "norm_pq": rep.norm_pq, "norm_diff": rep.norm_diff,
           "norm_p_qperp": rep.norm_p_qperp,
           "norm_pperp_q": rep.norm_pperp_q}
    return out, 0


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return value


def _suite(text):
    if text not in SUITES + ("all",):
        raise UnknownSuite(f"unknown suite {text!r}; expected one of "
                           f"{', '.join(SUITES + ('all',))}")
    return text


def build_parser():
    parser = argparse.ArgumentParser(
        prog="projcalc",
        description="Projection calculus constructions and verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=fn)
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.add_argument("--tol", type=float, help="equality tolerance")
        p.add_argument("--tau-spec", type=float,
                       help="spectral distance tolerance")
        p.add_argument("--seed", type=int, default=0)
        return p

    p = add("verify", cmd_verify, "run randomised verification suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--dim-max", type=int, default=12)

    p = add("pc", cmd_pc, "projection calculus P_{Q,R,f}")
    p.add_argument("--q")
    p.add_argument("--r")
    p.add_argument("--fn", default="id",
                   help="id, chi, cap:c, const:t or a JSON function")

    p = add("homotopy", cmd_homotopy, "sampled projection homotopies")
    p.add_argument("--kind", choices=("close", "orthogonal", "mvn"),
                   default="close")
    p.add_argument("--q")
    p.add_argument("--r")
    p.add_argument("--u")
    p.add_argument("--steps", type=_positive_int, default=11)
    p.add_argument("--schedule", choices=("angle", "linear"), default="angle")

    p = add("lift", cmd_lift, "lift through a block quotient map")
    p.add_argument("--kind", default="norm",
                   choices=("norm", "spectrum", "idempotent", "isometry",
                            "isometry-spectrum"))
    p.add_argument("--fixture",
                   help="fixture file with algebra, map and inputs, "
                        "or 'two-block'")
    p.add_argument("--algebra")
    p.add_argument("--map")
    p.add_argument("--input")
    p.add_argument("--max-iters", type=_positive_int, default=200)

    p = add("fixture", cmd_fixture, "generate a lifting fixture")
    p.add_argument("--kind", default="block-pair",
                   choices=("two-block", "block-pair", "block-idempotent",
                            "block-isometry", "positive-isometry"))
    p.add_argument("--dim-max", type=int, default=12)
    p.add_argument("--max-stray", type=_nonneg_int)

    p = add("excise", cmd_excise, "excise a pure state on a projection")
    p.add_argument("--q")
    p.add_argument("--state", help="unit vector JSON")
    p.add_argument("--rank", type=_positive_int, default=1)

    p = add("transitivity", cmd_transitivity, "matrix units from a basis")
    p.add_argument("--N", type=_positive_int, required=True)
    p.add_argument("--n", type=_nonneg_int)
    p.add_argument("--basis", help="JSON list of vectors")
    p.add_argument("--fat", action="store_true")
    p.add_argument("--rank", type=_positive_int, default=2)

    p = add("pair", cmd_pair, "pair of projections with given angles")
    p.add_argument("--angles", required=True, help="comma separated radians")
    p.add_argument("--extra-p", type=_nonneg_int, default=0)
    p.add_argument("--extra-q", type=_nonneg_int, default=0)
    p.add_argument("--extra-kernel", type=_nonneg_int, default=0)
    p.add_argument("--extra-both", type=_nonneg_int, default=0)
    return parser


def _fail(code, exc):
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            _suite(args.suite)
            if args.dim_max < 4:
                raise UsageError("--dim-max must be at least 4")
        result, code = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ProjCalcError as exc:
        return _fail(exc.exit_code, exc)
    except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
        return _fail(2, exc)
    except ValueError as exc:
        return _fail(2, exc)
    text = dumps(result)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
