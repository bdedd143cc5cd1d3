"""Repeated use of a channel with passive operations in between.

Two schedules are supported: choosing the optimal passive operation anew
before every pass, and a ring cavity in which the same passive operation is
used on every round trip.
"""

import csv
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import apply, f_opt, optimal_passive_from, ring_solution
from .dynamics import DEFAULT_QUAD_STEPS, channel_at_time
from .exceptions import DegenerateContraction, NoFiniteFixedPoint, SingularNoise
from .phasespace import angle_of, canonical_sign, squeezing

N_MAX = 100_000
STOP_RTOL = 1e-12
CONVERGED_ATOL = 1e-13
FIT_FLOOR = 1e-9


class Schedule(str, enum.Enum):
    PER_STEP_OPTIMAL = "per_step_optimal"
    FIXED_K = "fixed_k"


@dataclass(frozen=True, eq=False)
class Step:
    """State after ``index`` passes; ``K`` is the passive operation used before that pass.

    ``s`` is computed from a factor ``F`` with ``gamma = F F.T`` and stays
    accurate when ``gamma`` is so anti-squeezed that ``squeezing(gamma)``
    would not be.
    """

    index: int
    K: Optional[np.ndarray]
    gamma: np.ndarray
    s: float
    factor: Optional[np.ndarray] = None

    def eigenvalues(self):
        """Ascending eigenvalues of ``gamma``, each to high relative accuracy."""
        if self.factor is None:
            return np.linalg.eigvalsh(self.gamma)
        return np.sort(np.linalg.svd(self.factor, compute_uv=False) ** 2)


@dataclass(frozen=True, eq=False)
class Trajectory:
    steps: tuple
    schedule: Schedule
    channel_id: Optional[str] = None

    @property
    def squeezings(self):
        return np.array([st.s for st in self.steps])

    @property
    def final(self):
        return self.steps[-1]

    def __len__(self):
        return len(self.steps)


def _factor(gamma):
    w, V = np.linalg.eigh((gamma + gamma.T) / 2)
    return V * np.sqrt(np.clip(w, 0.0, None))


def _min_direction(F):
    U, S, _ = np.linalg.svd(F)
    return float(S[-1] ** 2), canonical_sign(U[:, -1])


def _run(ch, gamma0, n, choose_k, schedule, channel_id):
    # States are carried as factors F with gamma = F F.T. Repeated passes
    # anti-squeeze some quadratures without bound, and forming gamma directly
    # would bury the smallest eigenvalue under roundoff of order eps ||gamma||.
    # Products with F only perturb each column relatively, and a QR with
    # columns sorted by norm keeps that, so the squeezing stays accurate.
    gamma = np.array(gamma0, dtype=float)
    F = _factor(gamma)
    Y_half = _factor(ch.Y)
    s, nu = _min_direction(F)
    steps = [Step(0, None, gamma, s, F)]
    limit = N_MAX if n is None else n
    for i in range(1, limit + 1):
        K = choose_k(s, nu)
        F = np.hstack([ch.X.T @ K.T @ F, Y_half])
        F = F[:, np.argsort(-np.linalg.norm(F, axis=0), kind="stable")]
        F = np.linalg.qr(F.T, mode="r").T
        prev = s
        s, nu = _min_direction(F)
        gamma = F @ F.T
        steps.append(Step(i, K, (gamma + gamma.T) / 2, s, F))
        if n is None and abs(s - prev) < STOP_RTOL * max(1.0, prev):
            break
    return Trajectory(tuple(steps), schedule, channel_id)


def iterate_optimal(ch, gamma0, n=None, channel_id=None):
    """Apply the channel ``n`` times, each time after its optimal passive operation.

    Because the optimum of one pass depends only on the input squeezing, this
    greedy schedule is globally optimal and the squeezing follows the iterates
    of :func:`gso.channel.f_opt`. With ``n=None`` the run stops once the
    squeezing changes by less than ``1e-12`` (relative), or after ``N_MAX`` passes.
    """
    if n is not None and n < 1:
        raise ValueError("n must be at least 1")
    return _run(
        ch, gamma0, n, lambda s, nu: optimal_passive_from(ch, s, nu), Schedule.PER_STEP_OPTIMAL, channel_id
    )


def iterate_fixed_k(ch, gamma0, K, n=None, channel_id=None):
    """Ring-cavity schedule: the same ``K`` before every pass."""
    if n is not None and n < 1:
        raise ValueError("n must be at least 1")
    K = np.asarray(K, dtype=float)
    return _run(ch, gamma0, n, lambda s, nu: K, Schedule.FIXED_K, channel_id)


def fixed_k_envelope(sol, gamma0, n):
    """Upper envelope ``s_inf + alpha^k <psi|gamma0 - s_inf|psi>`` for ``k = 0..n``.

    ``sol`` is a :class:`gso.channel.RingSolution`. Returns ``(envelope,
    applicable)``; the guarantee is only claimed when ``s(gamma0) >= s_inf``.
    """
    gamma0 = np.asarray(gamma0, dtype=float)
    excess = float(sol.psi @ gamma0 @ sol.psi) - sol.s_inf
    k = np.arange(n + 1)
    env = sol.s_inf + sol.alpha**k * excess
    return env, squeezing(gamma0) >= sol.s_inf


@dataclass(frozen=True)
class ConvergenceReport:
    ratios: np.ndarray
    fitted_rate: Optional[float]
    slope_at_fixed_point: Optional[float]
    chord_slope: Optional[float]
    converged_at: Optional[int]
    immediately_converged: bool

    def rate_bounds(self):
        """Interval spanned by the chord slope and the tangent slope at ``s_inf``."""
        if self.slope_at_fixed_point is None or self.chord_slope is None:
            return None
        return tuple(sorted((self.chord_slope, self.slope_at_fixed_point)))


def convergence_report(traj, s_inf, ch=None):
    """Per-step contraction ratios and a fitted asymptotic rate.

    Ratios ``(s_{n+1} - s_inf) / (s_n - s_inf)`` are reported until the
    distance to ``s_inf`` falls below ``1e-13`` (relative to ``max(1, s_inf)``),
    at which point the trajectory counts as converged. The rate is the
    least-squares slope of ``log|s_n - s_inf|`` over the second half of the
    usable steps, leaving out distances below ``1e-9`` where roundoff would
    dominate the logarithm. If the channel ``ch`` is given, the tangent slope of
    ``f_opt`` at ``s_inf`` and the chord slope from the starting point are
    added; for the per-step optimal schedule every ratio lies between them.
    """
    s = traj.squeezings
    if len(s) < 3:
        raise ValueError("need a trajectory with at least 3 entries")
    floor = CONVERGED_ATOL * max(1.0, abs(s_inf))
    dist = s - s_inf
    small = np.flatnonzero(np.abs(dist) <= floor)
    converged_at = int(small[0]) if len(small) else None
    usable = len(s) if converged_at is None else converged_at
    ratios = dist[1:usable] / dist[: usable - 1] if usable >= 2 else np.empty(0)

    fitted = None
    clean = usable
    while clean > 0 and abs(dist[clean - 1]) < FIT_FLOOR * max(1.0, abs(s_inf)):
        clean -= 1
    if clean < 3:
        clean = usable
    if clean >= 3:
        lo = clean // 2 if clean >= 6 else 0
        idx = np.arange(lo, clean)
        slope = np.polyfit(idx, np.log(np.abs(dist[idx])), 1)[0]
        fitted = float(math.exp(slope))

    tangent = chord = None
    if ch is not None:
        h = 1e-6 * max(1.0, s_inf)
        tangent = (f_opt(ch, s_inf + h) - f_opt(ch, max(s_inf - h, 0.0))) / (
            s_inf + h - max(s_inf - h, 0.0)
        )
        if abs(dist[0]) > floor:
            chord = (f_opt(ch, s[0]) - s_inf) / dist[0]
    return ConvergenceReport(
        ratios=ratios,
        fitted_rate=fitted,
        slope_at_fixed_point=tangent,
        chord_slope=chord,
        converged_at=converged_at,
        immediately_converged=converged_at == 0,
    )


class SweepStatus(str, enum.Enum):
    OK = "ok"
    NO_FIXED_POINT = "no_fixed_point"
    SINGULAR_NOISE = "singular_noise"
    DEGENERATE_CONTRACTION = "degenerate_contraction"


@dataclass(frozen=True)
class SweepRow:
    t: float
    s_naive: float
    s_inf: Optional[float]
    alpha: Optional[float]
    theta_opt: Optional[float]
    status: SweepStatus


def sweep_row(model, t, quad_steps=DEFAULT_QUAD_STEPS):
    """Naive and optimal squeezing for the channel generated in time ``t``.

    ``s_naive`` comes from sending the vacuum through the channel once, with
    no passive operations; ``s_inf`` is the asymptotic optimum, and for one
    mode ``theta_opt`` is the angle of the fixed ring-cavity rotation.
    """
    ch = channel_at_time(model, t, quad_steps)
    d = ch.X.shape[0]
    s_naive = squeezing(apply(ch, np.eye(d)))
    single = ch.n_modes == 1
    try:
        sol = ring_solution(ch)
    except NoFiniteFixedPoint:
        return SweepRow(t, s_naive, None, None, None, SweepStatus.NO_FIXED_POINT)
    except SingularNoise:
        return SweepRow(t, s_naive, None, None, None, SweepStatus.SINGULAR_NOISE)
    except DegenerateContraction as exc:
        theta = angle_of(exc.K) if single else None
        return SweepRow(
            t, s_naive, exc.s_inf, exc.alpha, theta, SweepStatus.DEGENERATE_CONTRACTION
        )
    theta = angle_of(sol.K) if single else None
    return SweepRow(t, s_naive, sol.s_inf, sol.alpha, theta, SweepStatus.OK)


def sweep(model, t_grid, quad_steps=DEFAULT_QUAD_STEPS, workers=None):
    """One :class:`SweepRow` per time in ``t_grid``, in grid order."""
    t_grid = [float(t) for t in t_grid]
    if any(t <= 0 for t in t_grid):
        raise ValueError("sweep times must be positive")

    def row(t):
        return sweep_row(model, t, quad_steps)

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(row, t_grid))
    return [row(t) for t in t_grid]


SWEEP_HEADER = ["t", "s_naive", "s_inf", "alpha", "theta_opt", "status"]
MISSING = "NA"


def _fmt(x):
    return MISSING if x is None else f"{x:.12g}"


def write_sweep_csv(rows, fh):
    """Write sweep rows as CSV; absent values are written as ``NA``."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for r in rows:
        writer.writerow(
            [_fmt(r.t), _fmt(r.s_naive), _fmt(r.s_inf), _fmt(r.alpha), _fmt(r.theta_opt), r.status.value]
        )

