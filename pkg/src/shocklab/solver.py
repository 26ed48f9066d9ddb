"""Method-of-lines solver for the shock-frame effective-velocity system.

In the frame moving with speed sigma the unknowns (v, h) obey

    v_t = sigma*v_xi + h_xi - (p(v))_xixi
    h_t = sigma*h_xi - (p(v))_xi

(the diffusion acts exactly on p(v); since p' < 0 the v-equation is
parabolic with diffusivity |p'(v)|).  Discretization: second-order central
differences on a uniform grid, Dirichlet-pinned end values, classic RK4 in
time with dt = safety*min(dx/c_max, dx^2/(2*max|p'(v)|)).

Also here: a damped-Newton solver for the *discrete* steady state (a run
started from it stays put to machine precision, which the shift-coupled
steady tests need), a conservation diagnostic, and binary checkpoint IO.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csc_matrix, diags
from scipy.sparse.linalg import splu

__all__ = [
    "Grid",
    "FieldState",
    "semi_discrete_rhs",
    "stable_dt",
    "rk4_step",
    "simulate",
    "steady_state",
    "effective_velocity",
    "conservation_balance",
    "write_checkpoint",
    "read_checkpoint",
    "write_snapshot_csv",
]

CHECKPOINT_MAGIC = b"SHCKPT01"


@dataclass(frozen=True)
class Grid:
    """Uniform grid with n cells (n+1 points) on [lo, hi]."""

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not (self.hi > self.lo and self.n >= 8):
            raise ValueError("need hi > lo and at least 8 cells")

    @property
    def dx(self):
        return (self.hi - self.lo) / self.n

    @property
    def x(self):
        return np.linspace(self.lo, self.hi, self.n + 1)


@dataclass
class FieldState:
    t: float
    v: np.ndarray
    h: np.ndarray

    def copy(self):
        return FieldState(self.t, self.v.copy(), self.h.copy())


def _d1(f, dx):
    """Central first derivative, one-sided at the ends (diagnostics only)."""
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * dx)
    out[0] = (f[1] - f[0]) / dx
    out[-1] = (f[-1] - f[-2]) / dx
    return out


def _d2(f, dx):
    """Central second derivative; end entries zero (interior use only)."""
    out = np.zeros_like(f)
    out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / (dx * dx)
    return out


def effective_velocity(gas, grid, v, u):
    """h = u + (p(v))_xi with the solver's central first derivative."""
    return u + _d1(gas.pressure(v), grid.dx)


def semi_discrete_rhs(gas, sigma, grid, v, h):
    """Right-hand side arrays (dv, dh); boundary rows are zero (pinned)."""
    dx = grid.dx
    p = gas.pressure(v)
    dv = np.zeros_like(v)
    dh = np.zeros_like(h)
    d1v = (v[2:] - v[:-2]) / (2.0 * dx)
    d1h = (h[2:] - h[:-2]) / (2.0 * dx)
    d1p = (p[2:] - p[:-2]) / (2.0 * dx)
    d2p = (p[2:] - 2.0 * p[1:-1] + p[:-2]) / (dx * dx)
    dv[1:-1] = sigma * d1v + d1h - d2p
    dh[1:-1] = sigma * d1h - d1p
    return dv, dh


def stable_dt(gas, sigma, grid, v, safety=0.4):
    """safety * min(advective, parabolic) step for the current state."""
    vmin = float(np.min(v))
    if vmin <= 0.0:
        raise ValueError("non-positive v in stable_dt")
    c_ac = float(np.sqrt(-gas.dpressure(vmin)))  # |p'| is largest at min v
    c_max = abs(sigma) + c_ac
    dp_max = float(-gas.dpressure(vmin))
    return safety * min(grid.dx / c_max, grid.dx ** 2 / (2.0 * dp_max))


def rk4_step(gas, sigma, grid, state, dt):
    """One classic RK4 step (no guard); returns a new FieldState."""
    v, h = state.v, state.h
    k1v, k1h = semi_discrete_rhs(gas, sigma, grid, v, h)
    k2v, k2h = semi_discrete_rhs(gas, sigma, grid, v + 0.5 * dt * k1v, h + 0.5 * dt * k1h)
    k3v, k3h = semi_discrete_rhs(gas, sigma, grid, v + 0.5 * dt * k2v, h + 0.5 * dt * k2h)
    k4v, k4h = semi_discrete_rhs(gas, sigma, grid, v + dt * k3v, h + dt * k3h)
    vn = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    hn = h + (dt / 6.0) * (k1h + 2.0 * k2h + 2.0 * k3h + k4h)
    return FieldState(state.t + dt, vn, hn)


def simulate(gas, sigma, grid, state, t_end, v_floor, safety=0.4, on_record=None,
             record_dt=None, max_retries=5):
    """March the PDE to t_end with the positivity guard.

    If v drops to v_floor after a step the step is retried with halved dt, up
    to max_retries times; persistent failure raises.  When record_dt is set,
    dt is clipped so records land exactly on the cadence and on_record(state)
    fires at each record time (including t = 0).
    """
    state = state.copy()
    if on_record is not None:
        on_record(state)
    next_rec = state.t + record_dt if record_dt is not None else np.inf
    while state.t < t_end - 1e-12:
        dt = min(stable_dt(gas, sigma, grid, state.v, safety), t_end - state.t)
        if record_dt is not None:
            dt = min(dt, next_rec - state.t)
        tries = 0
        while True:
            cand = rk4_step(gas, sigma, grid, state, dt)
            if np.min(cand.v) > v_floor:
                break
            tries += 1
            if tries > max_retries:
                raise RuntimeError(
                    f"positivity guard: v <= {v_floor} persists after {max_retries} dt halvings"
                )
            dt *= 0.5
        state = cand
        if record_dt is not None and state.t >= next_rec - 1e-12:
            if on_record is not None:
                on_record(state)
            next_rec += record_dt
    return state


def steady_state(gas, sigma, grid, v0, h0, tol=1e-13, maxiter=40):
    """Damped Newton for the discrete steady state, boundary values pinned.

    The steady h-equation integrates exactly: sigma*h - p(v) must equal a
    constant C, which eliminates h (and with it the checkerboard null mode
    of the central first difference, which makes the naive 2n x 2n Newton
    system numerically singular).  C is read off the supplied boundary data,
    which must satisfy the relation at both ends; Newton then runs on the
    scalar v-system

        sigma*D1 v + D1[(p(v)+C)/sigma] - D2 p(v) = 0

    with a tridiagonal Jacobian, and h = (p(v)+C)/sigma is reconstructed.
    Both components of the full right-hand side vanish for the result.
    """
    v = v0.copy()
    dx = grid.dx
    m = v.size - 2  # interior count
    C = sigma * h0[0] - gas.pressure(v0[0])
    C_right = sigma * h0[-1] - gas.pressure(v0[-1])
    if abs(C_right - C) > 1e-11 * max(1.0, abs(C)):
        raise ValueError(
            "boundary data inconsistent with a steady state: sigma*h - p(v) "
            f"differs across ends by {C_right - C:.3e}; build h from v"
        )

    def resid(v):
        p = gas.pressure(v)
        h = (p + C) / sigma
        dv = sigma * _d1(v, dx) + _d1(h, dx) - _d2(p, dx)
        return dv[1:-1]

    F = resid(v)
    for _ in range(maxiter):
        nrm = float(np.max(np.abs(F)))
        if nrm <= tol:
            h = (gas.pressure(v) + C) / sigma
            return v, h
        pv = gas.dpressure(v)
        c1 = 1.0 / (2.0 * dx)
        c2 = 1.0 / (dx * dx)
        # J = sigma*D1 + D1 diag(p'/sigma) - D2 diag(p')
        lo = (-sigma - pv[:-2] / sigma) * c1 - pv[:-2] * c2
        di = 2.0 * pv[1:-1] * c2
        up = (sigma + pv[2:] / sigma) * c1 - pv[2:] * c2
        J = csc_matrix(diags([lo[1:], di, up[:-1]], [-1, 0, 1], shape=(m, m)))
        delta = splu(J).solve(-F)
        step = 1.0
        for _bt in range(12):
            v_try = v.copy()
            v_try[1:-1] += step * delta
            if np.min(v_try) > 0.0:
                F_try = resid(v_try)
                if float(np.max(np.abs(F_try))) < nrm:
                    v, F = v_try, F_try
                    break
            step *= 0.5
        else:
            raise RuntimeError("steady-state Newton stalled (no descent step)")
    raise RuntimeError(f"steady-state Newton did not reach tol={tol}")


def conservation_balance(gas, sigma, grid, state):
    """(d/dt trapz(v), boundary flux difference) for the v-equation.

    The continuum law is d/dt int v = [sigma*v + h - (p(v))_xi] at the ends;
    both numbers are returned so callers can compare at their own tolerance.
    """
    dv, _ = semi_discrete_rhs(gas, sigma, grid, state.v, state.h)
    growth = float(np.trapezoid(dv, dx=grid.dx))
    p = gas.pressure(state.v)
    flux = sigma * state.v + state.h - _d1(p, grid.dx)
    return growth, float(flux[-1] - flux[0])


# ---------------------------------------------------------------------------
# binary restart checkpoints
#
# Layout (all little-endian): 8-byte magic b"SHCKPT01", int64 n_points,
# float64 t, float64 shift X, then v[n_points] and h[n_points] as float64.
# ---------------------------------------------------------------------------


def write_checkpoint(path, t, shift, v, h):
    v = np.asarray(v, dtype="<f8")
    h = np.asarray(h, dtype="<f8")
    if v.shape != h.shape or v.ndim != 1:
        raise ValueError("v and h must be 1-d arrays of equal length")
    with open(path, "wb") as f:
        f.write(CHECKPOINT_MAGIC)
        np.array([v.size], dtype="<i8").tofile(f)
        np.array([t, shift], dtype="<f8").tofile(f)
        v.tofile(f)
        h.tofile(f)


def read_checkpoint(path):
    """Returns (t, shift, v, h); raises on bad magic or truncation."""
    with open(path, "rb") as f:
        magic = f.read(8)
        if magic != CHECKPOINT_MAGIC:
            raise ValueError("not a shocklab checkpoint (bad magic)")
        n = int(np.fromfile(f, dtype="<i8", count=1)[0])
        head = np.fromfile(f, dtype="<f8", count=2)
        v = np.fromfile(f, dtype="<f8", count=n)
        h = np.fromfile(f, dtype="<f8", count=n)
    if v.size != n or h.size != n:
        raise ValueError("truncated checkpoint")
    return float(head[0]), float(head[1]), v, h


def write_snapshot_csv(path, x, v, h):
    np.savetxt(path, np.column_stack([x, v, h]), delimiter=",",
               header="xi,v,h", comments="")
