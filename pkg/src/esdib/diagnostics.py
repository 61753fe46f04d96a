"""Scalar diagnostics recorded along a run and their post-processing.

A :class:`DiagnosticsSeries` collects one :class:`DiagnosticsSample` per
sampled step: surface area, eta increment norms between consecutive samples
(plain and mass-weighted), the discrete mass of theta, field ranges, the
spatial standard deviation of eta, and the worst mesh quality metrics.  The
series exports to CSV with one row per sample and fixed columns.

Fixed-surface runs additionally keep the sampled eta history, from which the
deposit thickness (the time integral of eta per node) is computed; on a
moving surface nodes do not keep their identity as material points, so the
thickness request is rejected.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DataError, ModeError

CSV_COLUMNS = (
    "t",
    "area",
    "inc_eta_l2",
    "inc_eta_Ml2",
    "mass_theta",
    "eta_min",
    "eta_max",
    "theta_min",
    "theta_max",
    "eta_std",
    "min_angle_deg",
    "min_area",
)


def increment_norm(prev: np.ndarray, curr: np.ndarray) -> float:
    """Euclidean norm of the nodal difference between two snapshots."""
    prev = np.asarray(prev)
    curr = np.asarray(curr)
    if prev.shape != curr.shape:
        raise DataError(
            f"cannot compare snapshots of shapes {prev.shape} and {curr.shape}"
        )
    return float(np.linalg.norm(curr - prev))


def mass_weighted_increment_norm(mass, prev: np.ndarray, curr: np.ndarray) -> float:
    """Increment norm weighted by the current lumped mass (discrete L2)."""
    prev = np.asarray(prev)
    curr = np.asarray(curr)
    if prev.shape != curr.shape:
        raise DataError(
            f"cannot compare snapshots of shapes {prev.shape} and {curr.shape}"
        )
    diff = curr - prev
    return float(np.sqrt(np.dot(mass.diag, diff * diff)))


def mass_integral(mass, values: np.ndarray) -> float:
    """Discrete surface integral: lumped mass diagonal dotted with nodal values."""
    return float(np.dot(mass.diag, values))


@dataclass
class DiagnosticsSample:
    t: float
    area: float
    inc_eta_l2: float
    inc_eta_Ml2: float
    mass_theta: float
    eta_min: float
    eta_max: float
    theta_min: float
    theta_max: float
    eta_std: float
    min_angle_deg: float
    min_area: float


class DiagnosticsSeries:
    """Time series of run diagnostics, one sample per recorded step.

    Parameters
    ----------
    evolving : bool
        Whether the surface moves during the run.  Fixed-surface series
        keep the sampled eta history so the deposit thickness can be
        integrated afterwards.
    """

    def __init__(self, evolving: bool):
        self.evolving = evolving
        self.samples: list[DiagnosticsSample] = []
        self.eta_history: list[np.ndarray] = []
        self.stopped = False
        self.stop_reason: str | None = None
        self._last_eta: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.samples)

    def record(self, state, mass, quality) -> None:
        """Append one sample computed from a solver state."""
        eta = state.eta
        theta = state.theta
        if self._last_eta is None:
            inc = float("nan")
            inc_m = float("nan")
        else:
            inc = increment_norm(self._last_eta, eta)
            inc_m = mass_weighted_increment_norm(mass, self._last_eta, eta)
        self.samples.append(
            DiagnosticsSample(
                t=float(state.t),
                area=float(mass.diag.sum()),
                inc_eta_l2=inc,
                inc_eta_Ml2=inc_m,
                mass_theta=mass_integral(mass, theta),
                eta_min=float(eta.min()),
                eta_max=float(eta.max()),
                theta_min=float(theta.min()),
                theta_max=float(theta.max()),
                eta_std=float(eta.std()),
                min_angle_deg=float(quality.min_angle_deg),
                min_area=float(quality.min_area),
            )
        )
        self._last_eta = eta.copy()
        if not self.evolving:
            self.eta_history.append(eta.copy())

    def mark_stopped(self, reason: str) -> None:
        self.stopped = True
        self.stop_reason = reason

    def column(self, name: str) -> np.ndarray:
        """One diagnostic as an array over samples."""
        if name not in CSV_COLUMNS:
            raise KeyError(f"unknown diagnostic column {name!r}")
        return np.array([getattr(s, name) for s in self.samples])

    @property
    def times(self) -> np.ndarray:
        return self.column("t")

    @property
    def areas(self) -> np.ndarray:
        return self.column("area")

    def thickness(self) -> np.ndarray:
        """Per-node deposit thickness integrated over the sampled history."""
        if self.evolving:
            raise ModeError("thickness is only defined on a fixed surface")
        return thickness_function(np.asarray(self.eta_history), self.times)

    def to_csv(self, path) -> None:
        """Write the series as CSV, one row per sample.

        Floats are rendered with ``repr`` (shortest round-trip form), so
        identical runs produce byte-identical files.
        """
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for s in self.samples:
                writer.writerow([repr(getattr(s, c)) for c in CSV_COLUMNS])


def thickness_function(eta_series, times, evolving: bool = False) -> np.ndarray:
    """Cumulative trapezoidal integral of eta over time, per node.

    Parameters
    ----------
    eta_series : array_like of shape (n_samples, n_nodes)
        Nodal eta snapshots.
    times : scalar or array_like of shape (n_samples,)
        Constant sampling interval, or the sample times themselves.
    evolving : bool
        Must be False: on a moving surface the integral has no material
        meaning and a :class:`ModeError` is raised.
    """
    if evolving:
        raise ModeError("thickness is only defined on a fixed surface")
    series = np.atleast_2d(np.asarray(eta_series, dtype=np.float64))
    if np.isscalar(times) or np.ndim(times) == 0:
        return np.trapezoid(series, dx=float(times), axis=0)
    return np.trapezoid(series, x=np.asarray(times, dtype=np.float64), axis=0)


@dataclass(frozen=True)
class AreaGrowthFit:
    """Least-squares exponential fit area ~ exp(rate * t).

    ``degenerate`` flags a constant series, where the log-linear fit has no
    variance to explain and r_squared is undefined.
    """

    rate: float
    r_squared: float
    degenerate: bool


def area_growth_fit(times, areas) -> AreaGrowthFit:
    """Fit log(area) against time and report rate and goodness of fit.

    Raises
    ------
    DataError
        Fewer than 10 samples, or a non-positive area value.
    """
    t = np.asarray(times, dtype=np.float64)
    a = np.asarray(areas, dtype=np.float64)
    if t.shape != a.shape or t.ndim != 1:
        raise DataError("times and areas must be 1-d arrays of equal length")
    if t.size < 10:
        raise DataError(f"need at least 10 samples for a growth fit, got {t.size}")
    if a.min() <= 0.0:
        raise DataError("areas must be positive for an exponential fit")
    log_a = np.log(a)
    slope, intercept = np.polyfit(t, log_a, 1)
    fitted = slope * t + intercept
    ss_res = float(np.sum((log_a - fitted) ** 2))
    ss_tot = float(np.sum((log_a - log_a.mean()) ** 2))
    # a constant series leaves only rounding noise in ss_tot
    noise = t.size * (1e-15 * (1.0 + float(np.max(np.abs(log_a))))) ** 2
    if ss_tot <= noise:
        return AreaGrowthFit(rate=0.0, r_squared=float("nan"), degenerate=True)
    return AreaGrowthFit(
        rate=float(slope), r_squared=1.0 - ss_res / ss_tot, degenerate=False
    )
