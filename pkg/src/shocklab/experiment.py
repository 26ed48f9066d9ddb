"""Contraction experiments: perturb a profile, march the coupled system, record.

A run builds (gas, end states, profile, weight, grid), applies a perturbation,
then advances (v, h, X) together — the shift ODE right-hand side is evaluated
inside every RK4 stage from the current stage values, not lagged.  At a fixed
cadence the full functional breakdown is recorded into a ContractionTrace.

The identity audit re-runs a configuration on a resolution ladder and checks
that the centered time-difference of the recorded weighted entropy matches
Xdot*Y + B - G at the recorded instants, at a relative error that shrinks
like dx^2 (the record cadence is scaled with dx so both error sources do).
"""

import json
import time
from dataclasses import asdict, dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .functionals import FrameCache, compute_breakdown, quick_yb
from .gas import GasModel
from .profile import solve_profile
from .shift import overshoot, r_residual, saturated, shift_rhs
from .solver import FieldState, Grid, semi_discrete_rhs, stable_dt, steady_state
from .weight import build_weight

__all__ = [
    "ExperimentConfig",
    "ContractionTrace",
    "LabSetup",
    "build_setup",
    "initial_state",
    "phase_aligned_steady",
    "run_experiment",
    "identity_audit",
    "sweep",
    "write_trace_csv",
    "write_summary_json",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat, file-mappable configuration of a contraction run."""

    gamma: float = 2.0
    v_minus: float = 1.0
    u_minus: float = 0.0
    eps: float = 0.1
    lam: float = 0.5            # weight slope; desk-scale default 5*eps
    span_over_eps: float = 40.0  # grid half-width L = span_over_eps/eps
    profile_margin_over_eps: float = 10.0
    cells_per_layer: int = 50    # dx = (1/eps)/cells_per_layer
    t_end_sigma: float = 2.0     # t_end = t_end_sigma/|sigma|
    record_sigma: float = 0.01   # record_dt = record_sigma/|sigma|
    cfl_safety: float = 0.4
    v_floor_frac: float = 0.1    # guard floor = frac * v_plus
    margin_coeff: float = 0.1    # margin in R = -Y^2/eps^4 + (1+margin)|B| - G
    steady_relax: bool = False   # Newton-relax to the discrete steady state first
    perturb_kind: str = "bump"   # none | bump | random-fourier | large-amplitude
    amplitude: float = 0.01      # v-amplitude
    amplitude_h: float = 0.01    # h (or u) amplitude
    center: float = 0.0
    width: float = 20.0
    modes: int = 6               # random-fourier mode count
    stretch: float = 1.6         # large-amplitude profile stretch factor
    seed: int = 1234
    h_mode: str = "direct"       # direct | from-velocity

    def validate(self):
        if self.perturb_kind not in ("none", "bump", "random-fourier", "large-amplitude"):
            raise ValueError(f"unknown perturbation kind {self.perturb_kind!r}")
        if self.h_mode not in ("direct", "from-velocity"):
            raise ValueError(f"unknown h_mode {self.h_mode!r}")
        L = self.span_over_eps / self.eps
        if abs(self.center) + self.width > 0.8 * L:
            raise ValueError("perturbation support must stay within 80% of the domain")
        return self


@dataclass
class LabSetup:
    """Everything a run needs, built once from a config."""

    config: ExperimentConfig
    gas: GasModel
    profile: object
    weight: object
    grid: Grid

    @property
    def sigma(self):
        return self.profile.sigma

    @property
    def eps(self):
        return self.profile.eps


def build_setup(config):
    config.validate()
    gas = GasModel(gamma=config.gamma, v_minus=config.v_minus, u_minus=config.u_minus)
    profile = solve_profile(
        gas, config.eps,
        span_over_eps=config.span_over_eps + config.profile_margin_over_eps,
    )
    weight = build_weight(profile, config.lam)
    L = config.span_over_eps / config.eps
    dx = 1.0 / (config.eps * config.cells_per_layer)
    n = int(np.ceil(2.0 * L / dx))
    grid = Grid(lo=-L, hi=L, n=n)
    return LabSetup(config=config, gas=gas, profile=profile, weight=weight, grid=grid)


# ---------------------------------------------------------------------------
# initial data
# ---------------------------------------------------------------------------


def c2_bump(s):
    """(1-s^2)^3 on |s|<1, zero outside — twice continuously differentiable."""
    s = np.asarray(s, dtype=float)
    core = np.clip(1.0 - s * s, 0.0, None)
    return core ** 3


def _fourier_noise(x, center, width, modes, rng):
    """Seeded random Fourier sum under a C^2 window, sup-normalized to 1."""
    s = (x - center) / width
    mask = c2_bump(s)
    out = np.zeros_like(x)
    for k in range(1, modes + 1):
        a_k, b_k = rng.standard_normal(2) / k
        out += a_k * np.cos(np.pi * k * s) + b_k * np.sin(np.pi * k * s)
    out *= mask
    sup = np.max(np.abs(out))
    return out / sup if sup > 0 else out


def phase_aligned_steady(setup, ytol=1e-15, maxiter=60):
    """Discrete steady state whose shift functional Y vanishes.

    The Dirichlet pin values select the phase of the discrete steady state;
    at fixed pins that phase sits O(dx^2) off the continuum profile, and the
    controller (gain 1/eps^4) would faithfully walk X to that offset.  Sliding
    the pins along the profile tails by beta slides the phase, so a 1-D
    root-find on beta -> Y(steady(beta)) produces a state that is both
    machine-steady (it never moves) and functionally aligned (Y = 0), which
    is the discrete analogue of "the wave itself never drifts".
    """
    gas, pr, grid = setup.gas, setup.profile, setup.grid
    x = grid.x
    C = setup.sigma * gas.u_minus - gas.p_minus

    def solve(beta):
        v0 = pr.v_profile(x + beta)
        h0 = (gas.pressure(v0) + C) / setup.sigma
        return steady_state(gas, setup.sigma, grid, v0, h0)

    def ymis(beta):
        v_s, h_s = solve(beta)
        Y, _ = quick_yb(x, v_s, h_s, pr, setup.weight, 0.0)
        return Y, v_s, h_s

    y0, v_s, h_s = ymis(0.0)
    if abs(y0) <= ytol:
        return FieldState(t=0.0, v=v_s, h=h_s)
    # expand a bracket along the direction that reduces |Y|
    db = 1e-4
    y1, _, _ = ymis(db)
    slope = (y1 - y0) / db
    beta = -y0 / slope if slope != 0.0 else db
    lo, hi = (0.0, beta) if beta > 0.0 else (beta, 0.0)
    flo, _, _ = ymis(lo)
    fhi, _, _ = ymis(hi)
    tries = 0
    while flo * fhi > 0.0:
        lo, hi = lo - abs(beta), hi + abs(beta)
        flo, _, _ = ymis(lo)
        fhi, _, _ = ymis(hi)
        tries += 1
        if tries > 8:
            raise RuntimeError("could not bracket the phase-aligned steady state")
    beta_star = brentq(lambda b: ymis(b)[0], lo, hi, xtol=1e-13, maxiter=maxiter)
    y_star, v_s, h_s = ymis(beta_star)
    return FieldState(t=0.0, v=v_s, h=h_s)


def initial_state(setup):
    """Profile + configured perturbation, with the positivity precondition checked."""
    cfg = setup.config
    x = setup.grid.x
    pr = setup.profile
    v = pr.v_profile(x)
    h = pr.h_profile(x)
    if cfg.steady_relax:
        state = phase_aligned_steady(setup)
        v, h = state.v, state.h

    s = (x - cfg.center) / cfg.width
    if cfg.perturb_kind == "none":
        dv = np.zeros_like(x)
        dh = np.zeros_like(x)
    elif cfg.perturb_kind == "bump":
        dv = cfg.amplitude * c2_bump(s)
        dh = cfg.amplitude_h * c2_bump(s)
    elif cfg.perturb_kind == "random-fourier":
        rng = np.random.default_rng(cfg.seed)
        dv = cfg.amplitude * _fourier_noise(x, cfg.center, cfg.width, cfg.modes, rng)
        dh = cfg.amplitude_h * _fourier_noise(x, cfg.center, cfg.width, cfg.modes, rng)
    else:  # large-amplitude: stretch the layer and add an O(1) bump
        v = pr.v_profile(cfg.stretch * x)
        h = pr.h_profile(cfg.stretch * x)
        dv = cfg.amplitude * c2_bump(s)
        dh = cfg.amplitude_h * c2_bump(s)

    v = v + dv
    states = pr.states
    if np.min(v) < 0.5 * states.v_plus:
        raise ValueError("perturbation drives v below v_plus/2; reduce amplitude")

    if cfg.h_mode == "direct":
        h = h + dh
    else:
        # prescribe velocity u = u_tilde + dh, then h = u + d_xi p(v)
        dx = setup.grid.dx
        p = setup.gas.pressure(v)
        d1p = np.empty_like(p)
        d1p[1:-1] = (p[2:] - p[:-2]) / (2.0 * dx)
        d1p[0] = (p[1] - p[0]) / dx
        d1p[-1] = (p[-1] - p[-2]) / dx
        u_tilde = h - pr.dpressure_profile(x)  # u of the (possibly stretched) reference
        h = u_tilde + dh + d1p

    # pin the ends exactly to the initial reference values (Dirichlet data)
    return FieldState(t=0.0, v=v, h=h)


# ---------------------------------------------------------------------------
# coupled march
# ---------------------------------------------------------------------------


@dataclass
class ContractionTrace:
    t: np.ndarray
    X: np.ndarray
    Xdot: np.ndarray
    weighted_entropy: np.ndarray
    Y: np.ndarray
    Y_g: np.ndarray
    Y_b: np.ndarray
    Y_l: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    B: np.ndarray
    G1: np.ndarray
    G2: np.ndarray
    D: np.ndarray
    G: np.ndarray
    R: np.ndarray
    branch_saturated: np.ndarray
    overshoot: np.ndarray
    sup_w: np.ndarray

    COLUMNS = ("t", "X", "Xdot", "weighted_entropy", "Y", "Y_g", "Y_b", "Y_l",
               "B1", "B2", "B", "G1", "G2", "D", "G", "R",
               "branch_saturated", "overshoot", "sup_w")

    def as_matrix(self):
        return np.column_stack([getattr(self, c) for c in self.COLUMNS])


def _coupled_rhs(setup, v, h, X, cache=None):
    dv, dh = semi_discrete_rhs(setup.gas, setup.sigma, setup.grid, v, h)
    Y, B = quick_yb(setup.grid.x, v, h, setup.profile, setup.weight, X, cache=cache)
    dX = shift_rhs(Y, B, setup.eps)
    return dv, dh, dX


def coupled_rk4_step(setup, v, h, X, dt, cache=None):
    k1v, k1h, k1x = _coupled_rhs(setup, v, h, X, cache)
    k2v, k2h, k2x = _coupled_rhs(setup, v + 0.5 * dt * k1v, h + 0.5 * dt * k1h, X + 0.5 * dt * k1x, cache)
    k3v, k3h, k3x = _coupled_rhs(setup, v + 0.5 * dt * k2v, h + 0.5 * dt * k2h, X + 0.5 * dt * k2x, cache)
    k4v, k4h, k4x = _coupled_rhs(setup, v + dt * k3v, h + dt * k3h, X + dt * k3x, cache)
    vn = v + (dt / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
    hn = h + (dt / 6.0) * (k1h + 2 * k2h + 2 * k3h + k4h)
    Xn = X + (dt / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
    return vn, hn, Xn


def run_experiment(setup_or_config, snapshots=None):
    """March the coupled system to t_end, recording the breakdown at the cadence.

    Returns (trace, final FieldState with shift, summary dict).  `snapshots`,
    if given, is a list that receives (t, v, h) copies at each record.
    """
    setup = setup_or_config
    if isinstance(setup, ExperimentConfig):
        setup = build_setup(setup)
    cfg = setup.config
    sig = setup.sigma
    eps = setup.eps
    t_end = cfg.t_end_sigma / abs(sig)
    rec_dt = cfg.record_sigma / abs(sig)
    v_floor = cfg.v_floor_frac * setup.profile.states.v_plus

    state = initial_state(setup)
    v, h, X = state.v, state.h, 0.0
    t = 0.0
    rows = {c: [] for c in ContractionTrace.COLUMNS}
    t_wall = time.perf_counter()

    def record(t, v, h, X):
        bd = compute_breakdown(setup.grid.x, v, h, setup.profile, setup.weight, X)
        xdot = shift_rhs(bd.Y, bd.B, eps)
        w_sup = float(np.max(np.abs(
            setup.gas.pressure(v) - setup.profile.pressure_profile(setup.grid.x - X))))
        rows["t"].append(t)
        rows["X"].append(X)
        rows["Xdot"].append(xdot)
        rows["weighted_entropy"].append(bd.weighted_entropy)
        for name in ("Y", "Y_g", "Y_b", "Y_l", "B1", "B2", "B", "G1", "G2", "D", "G"):
            rows[name].append(getattr(bd, name))
        rows["R"].append(r_residual(bd, eps, cfg.lam, cfg.margin_coeff))
        rows["branch_saturated"].append(1.0 if saturated(bd.Y, eps) else 0.0)
        rows["overshoot"].append(overshoot(xdot, eps))
        rows["sup_w"].append(w_sup)
        if snapshots is not None:
            snapshots.append((t, v.copy(), h.copy()))

    record(t, v, h, X)
    cache = FrameCache()
    next_rec = rec_dt
    while t < t_end - 1e-12:
        dt = min(stable_dt(setup.gas, sig, setup.grid, v, cfg.cfl_safety),
                 next_rec - t, t_end - t)
        tries = 0
        while True:
            vn, hn, Xn = coupled_rk4_step(setup, v, h, X, dt, cache)
            if np.min(vn) > v_floor:
                break
            tries += 1
            if tries > 5:
                raise RuntimeError("positivity guard tripped repeatedly")
            dt *= 0.5
        v, h, X = vn, hn, Xn
        t += dt
        if t >= next_rec - 1e-12:
            record(t, v, h, X)
            next_rec += rec_dt

    trace = ContractionTrace(**{c: np.array(rows[c]) for c in ContractionTrace.COLUMNS})
    summary = summarize_trace(trace, setup, wall_time=time.perf_counter() - t_wall)
    final = FieldState(t=t, v=v, h=h)
    return trace, (final, X), summary


def summarize_trace(trace, setup, wall_time=None):
    cfg = setup.config
    E = trace.weighted_entropy
    increments = np.diff(E)
    lin = trace.branch_saturated < 0.5
    worst_R_linear = float(np.max(trace.R[lin])) if np.any(lin) else float("nan")
    shift_ratio = np.abs(trace.Xdot) * setup.eps ** 2 / (1.0 + 2.0 * np.abs(trace.B))
    summary = {
        "config": asdict(cfg),
        "sigma": setup.sigma,
        "dx": setup.grid.dx,
        "records": int(trace.t.size),
        "entropy_initial": float(E[0]),
        "entropy_final": float(E[-1]),
        "max_record_increment": float(np.max(increments)) if increments.size else 0.0,
        "worst_R_linear_branch": worst_R_linear,
        "max_shift_bound_ratio": float(np.max(shift_ratio)),
        "max_abs_X": float(np.max(np.abs(trace.X))),
        "max_overshoot": float(np.max(trace.overshoot)),
        "saturated_fraction": float(np.mean(trace.branch_saturated)),
    }
    if wall_time is not None:
        summary["wall_time_s"] = wall_time
    return summary


# ---------------------------------------------------------------------------
# identity audit and sweeps
# ---------------------------------------------------------------------------


def audit_trace(trace, floor=1e-14):
    """Relative error series of d/dt int a*eta vs Xdot*Y + B - G at interior records."""
    t, E = trace.t, trace.weighted_entropy
    dEdt = (E[2:] - E[:-2]) / (t[2:] - t[:-2])
    rhs = (trace.Xdot * trace.Y + trace.B - trace.G)[1:-1]
    scale = np.maximum(np.abs(trace.B) + trace.G, floor)[1:-1]
    return np.abs(dEdt - rhs) / scale


def identity_audit(config, refinements=(1, 2), floor=1e-14):
    """Run the config on a resolution ladder and audit the entropy identity.

    Each refinement r multiplies cells_per_layer by r and divides the record
    cadence by r, so the audit error should scale ~ dx^2.  Returns a dict with
    per-level max/median relative errors and the coarse/fine ratios.
    """
    levels = []
    for r in refinements:
        cfg = replace(config,
                      cells_per_layer=config.cells_per_layer * r,
                      record_sigma=config.record_sigma / r)
        setup = build_setup(cfg)
        trace, _, _ = run_experiment(setup)
        rel = audit_trace(trace, floor=floor)
        levels.append({
            "refine": r,
            "dx": setup.grid.dx,
            "max_rel": float(np.max(rel)),
            "median_rel": float(np.median(rel)),
        })
    out = {"levels": levels}
    if len(levels) >= 2:
        out["ratio_max"] = levels[0]["max_rel"] / levels[-1]["max_rel"]
        out["ratio_median"] = levels[0]["median_rel"] / levels[-1]["median_rel"]
    return out


def sweep(base_config, overrides_list):
    """Run a family of configs (dicts of field overrides); returns summaries."""
    out = []
    for overrides in overrides_list:
        cfg = replace(base_config, **overrides)
        _, _, summary = run_experiment(build_setup(cfg))
        out.append(summary)
    return out


# ---------------------------------------------------------------------------
# output files
# ---------------------------------------------------------------------------


def write_trace_csv(trace, path):
    np.savetxt(path, trace.as_matrix(), delimiter=",",
               header=",".join(ContractionTrace.COLUMNS), comments="")


def write_summary_json(summary, path):
    with open(path, "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")
