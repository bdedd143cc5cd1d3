"""Command-line interface.

Exit codes: 0 success, 1 invalid input or no finite fixed point, 2 I/O or
parse failure. Logarithms are natural unless ``--log2`` is given.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import io
from .channel import brute_force_single, f_opt, is_valid_channel, optimal_passive, ring_solution
from .dynamics import DEFAULT_QUAD_STEPS, channel_at_time
from .entanglement import entanglement_bound, optimal_squeezing
from .exceptions import DegenerateContraction, GSOError, NoFiniteFixedPoint, SingularNoise
from .general import is_valid_general
from .phasespace import EPS_PSD, is_passive, is_valid_cm, squeezing
from .protocols import iterate_fixed_k, iterate_optimal, sweep, write_sweep_csv
from .sampling import DEFAULT_SEED, default_rng


class DomainError(Exception):
    """Input parsed fine but is physically invalid (exit code 1)."""


def _default_tol():
    env = os.environ.get("GSO_TOLERANCE")
    if env is None:
        return EPS_PSD
    try:
        return float(env)
    except ValueError:
        raise SystemExit(f"GSO_TOLERANCE must be a number, got {env!r}")


def _emit(args, doc):
    text = io.dumps(doc)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_channel(path, tol):
    ch = io.parse_channel(io.load_json(path))
    ok, diag = is_valid_channel(ch.X, ch.Y, tol)
    if not ok:
        raise DomainError(f"{path}: channel is not completely positive: {diag}")
    return ch


def _load_state(path, n_modes, tol):
    doc = io.load_json(path)
    gamma = io.parse_matrix_doc(doc)
    if gamma.shape[0] != 2 * n_modes:
        raise DomainError(f"{path}: state has {gamma.shape[0] // 2} modes, channel has {n_modes}")
    ok, diag = is_valid_cm(gamma, tol)
    if not ok:
        raise DomainError(f"{path}: not a valid covariance matrix: {diag}")
    return (gamma + gamma.T) / 2


def cmd_validate(args):
    doc = io.load_json(args.file)
    kind = io.detect_kind(doc)
    if kind == "channel":
        ok, diag = is_valid_channel(*io.parse_channel_matrices(doc), args.tol)
    elif kind == "general_channel":
        ok, diag = is_valid_general(io.parse_general(doc), args.tol)
    elif kind == "model":
        io.parse_model(doc)
        ok, diag = True, {}
    elif args.passive:
        kind = "passive"
        ok = is_passive(io.parse_matrix_doc(doc), max(args.tol, 1e-10))
        diag = {}
    else:
        ok, diag = is_valid_cm(io.parse_matrix_doc(doc), args.tol)
    _emit(args, {"kind": kind, "valid": ok, "diagnostic": diag})
    return 0 if ok else 1


def cmd_single(args):
    ch = _load_channel(args.channel, args.tol)
    gamma = _load_state(args.state, ch.n_modes, args.tol)
    K, out, s_out = optimal_passive(ch, gamma)
    s_in = squeezing(gamma)
    doc = {"K": io.rows(K), "s_in": s_in, "s_out": s_out, "f_opt": f_opt(ch, s_in)}
    if args.check_budget:
        doc["s_brute_force"] = brute_force_single(
            ch, gamma, args.check_budget, rng=default_rng(args.seed)
        )
    doc["gamma_out"] = io.rows(out)
    _emit(args, doc)
    return 0


def cmd_iterate(args):
    ch = _load_channel(args.channel, args.tol)
    gamma = _load_state(args.state, ch.n_modes, args.tol)
    if args.k_file:
        K = io.parse_matrix_doc(io.load_json(args.k_file))
        if K.shape != ch.X.shape or not is_passive(K, 1e-10):
            raise DomainError(f"{args.k_file}: not a passive operation on {ch.n_modes} modes")
        traj = iterate_fixed_k(ch, gamma, K, args.steps)
    elif args.fixed_k:
        try:
            K = ring_solution(ch, args.tol).K
        except DegenerateContraction as exc:
            K = exc.K
        traj = iterate_fixed_k(ch, gamma, K, args.steps)
    else:
        traj = iterate_optimal(ch, gamma, args.steps)
    steps = [
        {
            "index": st.index,
            "s": st.s,
            "K": None if st.K is None else io.rows(st.K),
            "gamma": io.rows(st.gamma),
        }
        for st in traj.steps
    ]
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("index,s\n")
            for st in traj.steps:
                fh.write(f"{st.index},{st.s:.12g}\n")
    _emit(args, {"schedule": traj.schedule.value, "steps": steps})
    return 0


def cmd_fixed_point(args):
    ch = _load_channel(args.channel, args.tol)
    try:
        sol = ring_solution(ch, args.tol)
    except DegenerateContraction as exc:
        doc = {
            "s_inf": exc.s_inf,
            "alpha": exc.alpha,
            "K_inf": io.rows(exc.K),
            "psi_inf": io.rows(exc.psi),
            "status": "degenerate_contraction",
        }
    else:
        doc = {
            "s_inf": sol.s_inf,
            "alpha": sol.alpha,
            "K_inf": io.rows(sol.K),
            "psi_inf": io.rows(sol.psi),
            "status": "ok",
        }
    _emit(args, doc)
    return 0


def cmd_lindblad(args):
    model = io.parse_model(io.load_json(args.model))
    if args.time < 0:
        raise DomainError("--time must be nonnegative")
    ch = channel_at_time(model, args.time, args.quad_steps)
    _emit(args, io.channel_doc(ch))
    return 0


def cmd_sweep(args):
    model = io.parse_model(io.load_json(args.model))
    if args.tmax <= 0 or args.samples < 1:
        raise DomainError("--tmax must be positive and --samples at least 1")
    grid = args.tmax * np.arange(1, args.samples + 1) / args.samples
    rows = sweep(model, grid, args.quad_steps, workers=args.workers)
    if args.out:
        with open(args.out, "w") as fh:
            write_sweep_csv(rows, fh)
    else:
        write_sweep_csv(rows, sys.stdout)
    return 0


def cmd_entangle(args):
    ch = _load_channel(args.channel, args.tol)
    s_opt = optimal_squeezing(ch, args.steps)
    base = 2.0 if args.log2 else math.e
    doc = {
        "s_opt": s_opt,
        "E_N": entanglement_bound(ch, args.steps, log_base=base),
        "log_base": "2" if args.log2 else "e",
    }
    _emit(args, doc)
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="gso",
        description="Optimal squeezing and entanglement from a noisy Gaussian device "
        "plus noiseless passive optics.",
    )
    p.add_argument(
        "--tol",
        type=float,
        default=_default_tol(),
        help="positivity tolerance, relative to the matrix norm "
        "(default 1e-9, or $GSO_TOLERANCE)",
    )
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for any sampling")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    sp = add("validate", cmd_validate, "check a state, channel, general channel or model file")
    sp.add_argument("file")
    sp.add_argument("--passive", action="store_true", help="check a matrix file as a passive operation")

    sp = add("single", cmd_single, "optimal passive operation for one channel use")
    sp.add_argument("--channel", required=True)
    sp.add_argument("--state", required=True)
    sp.add_argument(
        "--check-budget", type=int, default=0, help="also report a brute-force minimum with this many samples"
    )

    sp = add("iterate", cmd_iterate, "iterate the channel with passive operations in between")
    sp.add_argument("--channel", required=True)
    sp.add_argument("--state", required=True)
    sp.add_argument("--steps", type=int, default=None, help="number of passes (default: until converged)")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--fixed-k", action="store_true", help="ring cavity with the optimal fixed K")
    group.add_argument("--k-file", help="ring cavity with the passive operation in this file")
    sp.add_argument("--csv", help="also write index,s to this CSV file")

    sp = add("fixed-point", cmd_fixed_point, "asymptotic optimal squeezing and ring-cavity K")
    sp.add_argument("--channel", required=True)

    sp = add("lindblad", cmd_lindblad, "channel from a Hamiltonian with photon loss")
    sp.add_argument("--model", required=True)
    sp.add_argument("--time", type=float, required=True)
    sp.add_argument("--quad-steps", type=int, default=DEFAULT_QUAD_STEPS)

    sp = add("sweep", cmd_sweep, "naive vs optimal squeezing over interaction times (CSV)")
    sp.add_argument("--model", required=True)
    sp.add_argument("--tmax", type=float, required=True)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--quad-steps", type=int, default=DEFAULT_QUAD_STEPS)
    sp.add_argument("--workers", type=int, default=None)

    sp = add("entangle", cmd_entangle, "maximal two-mode log-negativity (natural log by default)")
    sp.add_argument("--channel", required=True)
    sp.add_argument("--steps", type=int, default=None, help="use n optimal passes from vacuum")
    sp.add_argument("--log2", action="store_true", help="report E_N in base 2")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, io.SchemaError) as exc:
        print(f"gso: error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, NoFiniteFixedPoint, SingularNoise, GSOError) as exc:
        print(f"gso: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
