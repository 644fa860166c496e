"""Constant-velocity Kalman filtering for planar point targets.

One filter instance tracks one target. The state is [px, py, vx, vy]
(pixels and pixels/frame); the measurement is the observed point position.
Time advances in whole frames (dt = 1), so the transition matrix moves each
position by its velocity and leaves the velocity unchanged, perturbed only
by process noise.

Numerical conventions, chosen for long-run stability:

* covariance updates use the Joseph form (I-KH) P (I-KH)' + K R K',
* every new covariance is explicitly symmetrized,
* the 2x2 innovation covariance is inverted in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParamError

STATE_DIM = 4
MEAS_DIM = 2


@dataclass(frozen=True)
class MotionModel:
    """Linear dynamics and observation model shared by all targets.

    F advances the state one frame, H projects the state onto the measured
    position, Q and R are the process and measurement noise covariances.
    """

    F: np.ndarray
    Q: np.ndarray
    H: np.ndarray
    R: np.ndarray
    dt: float = 1.0


@dataclass(frozen=True)
class KalmanState:
    """Gaussian belief over one target: mean x = [px, py, vx, vy] and covariance P."""

    x: np.ndarray
    P: np.ndarray


def make_cv_model(sigma_a: float = 1.0, sigma_z: float = 2.0) -> MotionModel:
    """Build the constant-velocity model with dt = 1 frame.

    Process noise follows the discrete white-noise acceleration form: per
    axis, Q = sigma_a^2 * g g' with g = [dt^2/2, dt]', coupling position and
    velocity of the same axis only. Measurement noise is isotropic,
    R = sigma_z^2 * I.

    Args:
        sigma_a: acceleration noise scale, pixels/frame^2.
        sigma_z: measurement noise scale, pixels.

    Raises:
        ParamError: on nonpositive sigma_a or sigma_z.
    """
    if sigma_a <= 0:
        raise ParamError(f"sigma_a must be positive, got {sigma_a}")
    if sigma_z <= 0:
        raise ParamError(f"sigma_z must be positive, got {sigma_z}")

    dt = 1.0
    F = np.array(
        [
            [1.0, 0.0, dt, 0.0],
            [0.0, 1.0, 0.0, dt],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    H = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ]
    )
    g = np.array([dt * dt / 2.0, dt])
    q_block = (sigma_a * sigma_a) * np.outer(g, g)
    Q = np.zeros((STATE_DIM, STATE_DIM))
    for pos_i, vel_i in ((0, 2), (1, 3)):
        Q[np.ix_([pos_i, vel_i], [pos_i, vel_i])] = q_block
    R = (sigma_z * sigma_z) * np.eye(MEAS_DIM)
    return MotionModel(F=F, Q=Q, H=H, R=R, dt=dt)


def init_state(x: float, y: float, p0_pos: float = 10.0, p0_vel: float = 100.0) -> KalmanState:
    """Belief for a newly detected target: measured position, zero velocity.

    Velocity is unobserved at birth, hence the large default velocity
    variance relative to the position variance.

    Raises:
        ParamError: on nonpositive initial variances.
    """
    if p0_pos <= 0 or p0_vel <= 0:
        raise ParamError("initial variances must be positive")
    mean = np.array([float(x), float(y), 0.0, 0.0])
    cov = np.diag([p0_pos, p0_pos, p0_vel, p0_vel]).astype(float)
    return KalmanState(x=mean, P=cov)


def _symmetrize(P: np.ndarray) -> np.ndarray:
    return (P + P.T) / 2.0


def predict(state: KalmanState, model: MotionModel) -> KalmanState:
    """Advance the belief one frame: x' = F x, P' = F P F' + Q."""
    x = model.F @ state.x
    P = _symmetrize(model.F @ state.P @ model.F.T + model.Q)
    return KalmanState(x=x, P=P)


def _invert_2x2(S: np.ndarray) -> np.ndarray:
    a, b = S[0, 0], S[0, 1]
    c, d = S[1, 0], S[1, 1]
    det = a * d - b * c
    if not np.isfinite(det) or abs(det) < 1e-12:
        raise NumericalError(
            "innovation covariance is singular; check the measurement noise R"
        )
    return np.array([[d, -b], [-c, a]]) / det


def update(
    state: KalmanState, z: np.ndarray, model: MotionModel
) -> tuple[KalmanState, np.ndarray]:
    """Correct the belief with a position measurement.

    Computes the innovation y = z - H x, gain K = P H' S^-1 with
    S = H P H' + R, then the Joseph-form covariance update. Returns the
    corrected state and the innovation.

    Raises:
        NumericalError: when S is singular beyond tolerance (R misconfigured).
    """
    z = np.asarray(z, dtype=float).reshape(MEAS_DIM)
    x, P = state.x, state.P
    H, R = model.H, model.R

    innovation = z - H @ x
    S = H @ P @ H.T + R
    K = P @ H.T @ _invert_2x2(S)

    x_new = x + K @ innovation
    I_KH = np.eye(STATE_DIM) - K @ H
    P_new = _symmetrize(I_KH @ P @ I_KH.T + K @ R @ K.T)
    return KalmanState(x=x_new, P=P_new), innovation
