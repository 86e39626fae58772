"""Explicit time integration with the five-stage fourth-order SSP Runge-Kutta.

The stepper is the five-stage strong-stability-preserving RK(5,4) scheme in
Shu-Osher (convex combination) form with fixed step size.  Coefficients are
embedded as literals and validated against the eight fourth-order order
conditions by validate_tableau().
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiniteState

__all__ = ["TimeLoopConfig", "IntegrationResult", "ssprk54_step",
           "integrate", "validate_tableau", "stability_polynomial"]

# Shu-Osher coefficients of SSPRK(5,4)
_B10 = 0.391752226571890
_A20, _A21, _B21 = 0.444370493651235, 0.555629506348765, 0.368410593050371
_A30, _A32, _B32 = 0.620101851488403, 0.379898148511597, 0.251891774271694
_A40, _A43, _B43 = 0.178079954393132, 0.821920045606868, 0.544974750228521
_C2, _C3, _D3 = 0.517231671970585, 0.096059710526147, 0.063692468666290
_C4, _D4 = 0.386708617503269, 0.226007483236906


def ssprk54_step(rhs, u, t, dt):
    """Advance one SSPRK(5,4) step from (t, u); returns the new state.

    Raises NonFiniteState (carrying the failing time) if any stage or the
    step output contains NaN/Inf.
    """
    c = _butcher()["c"]
    u1 = u + _B10 * dt * rhs(u, t)
    u2 = _A20 * u + _A21 * u1 + _B21 * dt * rhs(u1, t + c[1] * dt)
    u3 = _A30 * u + _A32 * u2 + _B32 * dt * rhs(u2, t + c[2] * dt)
    f3 = rhs(u3, t + c[3] * dt)
    u4 = _A40 * u + _A43 * u3 + _B43 * dt * f3
    out = (_C2 * u2 + _C3 * u3 + _D3 * dt * f3
           + _C4 * u4 + _D4 * dt * rhs(u4, t + c[4] * dt))
    if not np.all(np.isfinite(out)):
        raise NonFiniteState("non-finite state after step", time=t + dt)
    return out


_butcher_cache = {}


def _butcher():
    """Butcher arrays (A, b, c) equivalent to the Shu-Osher form."""
    if _butcher_cache:
        return _butcher_cache
    r0 = np.zeros(5)
    r1 = r0.copy(); r1[0] = _B10
    r2 = _A21 * r1; r2[1] = _B21
    r3 = _A32 * r2; r3[2] = _B32
    r4 = _A43 * r3; r4[3] = _B43
    b = _C2 * r2 + _C3 * r3 + _C4 * r4
    b[3] += _D3
    b[4] += _D4
    A = np.vstack([r0, r1, r2, r3, r4])
    c = A.sum(axis=1)
    _butcher_cache.update({"A": A, "b": b, "c": c})
    return _butcher_cache


def validate_tableau():
    """Residuals of the eight order conditions for fourth order.

    Also checks the SSP convex-combination structure (weights sum to one,
    all coefficients nonnegative).  Returns a dict of named residuals; the
    largest magnitude is under 1e-13 for the embedded coefficients.
    """
    tb = _butcher()
    A, b, c = tb["A"], tb["b"], tb["c"]
    res = {
        "order1": float(b.sum() - 1.0),
        "order2": float(b @ c - 0.5),
        "order3_c2": float(b @ c ** 2 - 1.0 / 3.0),
        "order3_Ac": float(b @ (A @ c) - 1.0 / 6.0),
        "order4_c3": float(b @ c ** 3 - 0.25),
        "order4_cAc": float(b @ (c * (A @ c)) - 0.125),
        "order4_Ac2": float(b @ (A @ c ** 2) - 1.0 / 12.0),
        "order4_AAc": float(b @ (A @ (A @ c)) - 1.0 / 24.0),
    }
    convex = [(_A20, _A21), (_A30, _A32), (_A40, _A43), (_C2, _C3, _C4)]
    res["convex_sums"] = float(max(abs(sum(g) - 1.0) for g in convex))
    allc = [_B10, _A20, _A21, _B21, _A30, _A32, _B32, _A40, _A43, _B43,
            _C2, _C3, _D3, _C4, _D4]
    res["nonnegative"] = 0.0 if min(allc) >= 0 else float(min(allc))
    return res


def stability_polynomial():
    """Coefficients [c0..c5] of the linear stability polynomial R(z).

    R matches the exponential through z^4 (c_k = 1/k!) with a method-specific
    z^5 coefficient; |R(i theta)| < 1 for small positive theta, so neutral
    modes are slightly damped rather than amplified.
    """
    def poly_mul_z(pc):
        return np.concatenate([[0.0], pc])

    def step_poly():
        u0 = np.array([1.0])
        def pad(x, n):
            return np.concatenate([x, np.zeros(n - len(x))])
        u1 = pad(u0, 2) + _B10 * poly_mul_z(u0)
        u2 = _A20 * pad(u0, 3) + _A21 * pad(u1, 3) + _B21 * pad(poly_mul_z(u1), 3)
        u3 = _A30 * pad(u0, 4) + _A32 * pad(u2, 4) + _B32 * pad(poly_mul_z(u2), 4)
        f3 = poly_mul_z(u3)
        u4 = _A40 * pad(u0, 5) + _A43 * pad(u3, 5) + _B43 * pad(f3, 5)
        return (_C2 * pad(u2, 6) + _C3 * pad(u3, 6) + _D3 * pad(f3, 6)
                + _C4 * pad(u4, 6) + _D4 * pad(poly_mul_z(u4), 6))

    return step_poly()


@dataclass
class TimeLoopConfig:
    """Fixed-step time loop settings."""
    dt: float
    t_final: float
    checkpoint_stride: int = 1

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_final < 0:
            raise ValueError("t_final must be nonnegative")
        if self.checkpoint_stride < 1:
            raise ValueError("checkpoint_stride must be >= 1")

    @property
    def n_steps(self):
        return int(round(self.t_final / self.dt))


@dataclass
class IntegrationResult:
    """Final state plus checkpoint logs from integrate()."""
    state: np.ndarray
    t_final: float
    n_steps: int
    times: list = field(default_factory=list)
    logs: dict = field(default_factory=dict)


def integrate(rhs, u0, config, observers=None):
    """Fixed-step SSPRK(5,4) trajectory with checkpoint observers.

    Parameters
    ----------
    rhs : callable(u, t) -> tendency
    u0 : array
    config : TimeLoopConfig
    observers : dict name -> callable(t, u), optional
        Invoked at t = 0 and after every checkpoint_stride steps; their
        returns are appended to the result logs under the observer name.

    Raises NonFiniteState with the failing time if the state blows up.
    """
    observers = observers or {}
    u = np.array(u0, copy=True)
    steps = config.n_steps
    times = []
    logs = {name: [] for name in observers}

    def record(step):
        t = step * config.dt
        times.append(t)
        for name, fn in observers.items():
            logs[name].append(fn(t, u))

    record(0)
    for s in range(steps):
        u = ssprk54_step(rhs, u, s * config.dt, config.dt)
        if (s + 1) % config.checkpoint_stride == 0:
            record(s + 1)
    return IntegrationResult(state=u, t_final=steps * config.dt,
                             n_steps=steps, times=times, logs=logs)
