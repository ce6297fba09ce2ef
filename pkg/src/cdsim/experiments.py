"""Concurrence sweeps over time and parameter grids, plus peak detection."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .dynamics import DensityMatrixError, Propagator, initial_state, reduce_amplitudes
from .entanglement import concurrence_many
from .model import SystemParams, build_basis, build_hamiltonian

__all__ = [
    "TimeGrid",
    "SweepResult",
    "Peak",
    "SweepError",
    "uniform_axis",
    "concurrence_trace",
    "sweep_time",
    "sweep_grid",
    "stack_results",
    "find_peaks",
    "figure_scenarios",
    "FIGURE_ASSUMPTIONS",
]


class SweepError(RuntimeError):
    """A sample of a sweep failed; ``t`` and ``point`` locate it."""

    def __init__(self, message, t=None, point=None):
        super().__init__(message)
        self.t = t
        self.point = point


def uniform_axis(start: float, stop: float, count: int) -> np.ndarray:
    """``count`` points from ``start`` to ``stop`` as ``start + i * step``.

    Unlike ``np.linspace`` the i-th point depends only on ``i`` and ``step``;
    refining ``count - 1`` intervals by a power of two reproduces the coarse
    points bit for bit.
    """
    if count == 1:
        return np.array([float(start)])
    step = (stop - start) / (count - 1)
    return start + np.arange(count) * step


@dataclass(frozen=True)
class TimeGrid:
    t_start: float = 0.0
    t_end: float = 20.0
    samples: int = 2001

    def __post_init__(self):
        if not (math.isfinite(self.t_start) and math.isfinite(self.t_end)):
            raise ValueError("time grid bounds must be finite")
        if not self.t_end > self.t_start:
            raise ValueError(f"t_end ({self.t_end}) must exceed t_start ({self.t_start})")
        if isinstance(self.samples, bool) or not isinstance(self.samples, (int, np.integer)) or self.samples < 2:
            raise ValueError(f"samples must be an integer >= 2, got {self.samples!r}")

    @property
    def times(self) -> np.ndarray:
        return uniform_axis(self.t_start, self.t_end, int(self.samples))

    def refined(self, factor: int = 2) -> "TimeGrid":
        """Same span with every interval split into ``factor`` pieces."""
        return TimeGrid(self.t_start, self.t_end, (self.samples - 1) * factor + 1)


@dataclass(frozen=True)
class SweepResult:
    """Concurrence samples on a rectangular grid.

    ``axes`` maps axis names to coordinate arrays in order; ``values`` has shape
    ``tuple(len(a) for a in axes.values())`` (row-major over the axes).
    """

    axes: dict
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        shape = tuple(len(a) for a in self.axes.values())
        values = np.asarray(self.values, dtype=float)
        if values.shape != shape:
            raise ValueError(f"values shape {values.shape} does not match axes {shape}")
        if values.size and (np.any(values < 0) or np.any(values > 1)):
            raise ValueError("concurrence values must lie in [0, 1]")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def axis_names(self) -> list[str]:
        return list(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def slice(self, **fixed) -> "SweepResult":
        """Fix some axes at given coordinates (exact match) and drop them."""
        index = []
        axes = {}
        for name, coords in self.axes.items():
            if name in fixed:
                hits = np.flatnonzero(np.asarray(coords) == fixed[name])
                if not hits.size:
                    raise KeyError(f"{name}={fixed[name]!r} is not on the grid")
                index.append(int(hits[0]))
            else:
                index.append(slice(None))
                axes[name] = coords
        meta = dict(self.meta)
        meta.update({f"fixed_{k}": v for k, v in fixed.items()})
        return SweepResult(axes, self.values[tuple(index)], meta)


@dataclass(frozen=True)
class Peak:
    location: float
    height: float
    width: float
    index: int


def _base_meta(scenario: str, **extra) -> dict:
    meta = {"scenario": scenario, "version": __version__}
    meta.update(extra)
    return meta


def concurrence_trace(params: SystemParams, times) -> np.ndarray:
    """Concurrence of the reduced atom state at each time, starting from ``|g, g, n0>``."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    basis = build_basis(params)
    prop = Propagator(build_hamiltonian(params))
    amps = prop.amplitudes(initial_state(params), times)
    norms = np.abs(np.sum(np.abs(amps) ** 2, axis=-1) - 1.0)
    bad = np.flatnonzero(norms > 1e-12)
    if bad.size:
        t = float(times[bad[0]])
        raise SweepError(f"norm drifted by {norms[bad[0]]:.3e} at t={t}", t=t)
    try:
        return concurrence_many(reduce_amplitudes(basis, amps))
    except DensityMatrixError as exc:
        t = float(times[exc.index]) if exc.index is not None else None
        raise SweepError(f"{exc} at t={t}", t=t) from exc


def sweep_time(params: SystemParams, grid: TimeGrid | None = None) -> SweepResult:
    """Concurrence versus time for one parameter set."""
    grid = grid or TimeGrid()
    times = grid.times
    values = concurrence_trace(params, times)
    meta = _base_meta("sweep_time", **params.as_dict(), t_start=grid.t_start, t_end=grid.t_end, samples=grid.samples)
    return SweepResult({"t": times}, values, meta)


def _default_workers() -> int:
    raw = os.environ.get("CDS_THREADS", "").strip()
    if not raw:
        return 1
    n = int(raw)
    if n < 0:
        raise ValueError(f"CDS_THREADS must be >= 0, got {n}")
    return n or 1


def sweep_grid(n0_axis, gamma_axis, g: float = 1.0, omega: float = 1.0, t: float = 4.0, workers: int | None = None) -> SweepResult:
    """Concurrence at a single time over an ``(n0, gamma)`` grid.

    ``workers`` (default from ``CDS_THREADS``, else 1) evaluates rows of the
    grid in parallel; the result is independent of it.
    """
    n0_axis = np.asarray([int(n) for n in n0_axis], dtype=int)
    gamma_axis = np.asarray(gamma_axis, dtype=float)
    if n0_axis.ndim != 1 or gamma_axis.ndim != 1 or not n0_axis.size or not gamma_axis.size:
        raise ValueError("grid axes must be non-empty one-dimensional sequences")
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t}")
    params = [[SystemParams(omega=omega, g=g, gamma=float(G), n0=int(n)) for G in gamma_axis] for n in n0_axis]

    def row(i):
        out = np.empty(len(gamma_axis))
        for j, p in enumerate(params[i]):
            try:
                out[j] = concurrence_trace(p, [t])[0]
            except SweepError as exc:
                raise SweepError(f"{exc} (n0={p.n0}, gamma={p.gamma})", t=t, point=(p.n0, p.gamma)) from exc
        return out

    workers = _default_workers() if workers is None else max(1, int(workers))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, range(len(n0_axis))))
    else:
        rows = [row(i) for i in range(len(n0_axis))]
    meta = _base_meta("sweep_grid", omega=float(omega), g=float(g), t=float(t))
    return SweepResult({"n0": n0_axis, "gamma": gamma_axis}, np.array(rows), meta)


def stack_results(results, name: str, coords) -> SweepResult:
    """Stack same-shaped results along a new leading axis ``name``."""
    results = list(results)
    if len(results) != len(coords):
        raise ValueError("need one coordinate per result")
    first = results[0]
    for r in results[1:]:
        if r.axis_names != first.axis_names or r.shape != first.shape:
            raise ValueError("results must share axes to be stacked")
    axes = {name: np.asarray(coords)}
    axes.update(first.axes)
    meta = {"series": [r.meta for r in results], "version": __version__}
    return SweepResult(axes, np.stack([r.values for r in results]), meta)


def _crossing(x0, y0, x1, y1, level):
    if y1 == y0:
        return x0
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def find_peaks(series, coords=None, floor: float = 1e-3) -> list[Peak]:
    """Strict local maxima of a 1-D series.

    Parameters
    ----------
    series : SweepResult or array_like
        One-dimensional data; a one-axis :class:`SweepResult` supplies its own
        coordinates.
    coords : array_like, optional
        Sample coordinates, defaulting to the sample index.
    floor : float
        Maxima at or below this height are ignored.

    Returns
    -------
    list of Peak
        In order of location.  A flat top reports the midpoint of the plateau.
        ``width`` is the full width at half the peak's own height, found by
        linear interpolation; if the series ends before dropping to half
        height, the end point is used.
    """
    if isinstance(series, SweepResult):
        if len(series.axes) != 1:
            raise ValueError("find_peaks needs a one-dimensional sweep")
        if coords is None:
            coords = next(iter(series.axes.values()))
        y = series.values
    else:
        y = np.asarray(series, dtype=float)
    if y.ndim != 1:
        raise ValueError("find_peaks needs a one-dimensional series")
    if y.size < 3:
        raise ValueError(f"find_peaks needs at least 3 samples, got {y.size}")
    x = np.arange(y.size, dtype=float) if coords is None else np.asarray(coords, dtype=float)
    if x.shape != y.shape:
        raise ValueError("coords and series lengths differ")

    peaks = []
    n = y.size
    i = 1
    while i < n - 1:
        if y[i] > y[i - 1]:
            j = i
            while j + 1 < n and y[j + 1] == y[i]:
                j += 1
            if j + 1 < n and y[j + 1] < y[i] and y[i] > floor:
                peaks.append(_describe_peak(x, y, i, j))
            i = j + 1
        else:
            i += 1
    return peaks


def _describe_peak(x, y, i, j) -> Peak:
    height = float(y[i])
    half = height / 2
    left = i
    while left > 0 and y[left - 1] > half:
        left -= 1
    x_left = x[0] if left == 0 else _crossing(x[left - 1], y[left - 1], x[left], y[left], half)
    right = j
    while right < y.size - 1 and y[right + 1] > half:
        right += 1
    x_right = x[-1] if right == y.size - 1 else _crossing(x[right], y[right], x[right + 1], y[right + 1], half)
    mid = (i + j) // 2
    return Peak(location=float((x[i] + x[j]) / 2), height=height, width=float(x_right - x_left), index=mid)


# Parameters the figure captions leave out are filled in here.  Caption "n" is
# read as the sector label, so n0 = n + 2 for the time traces.
FIGURE_ASSUMPTIONS = {
    "fig2": {"n0": 3, "g": 5.0, "gamma": (0.5, 0.1)},
    "fig3": {"n0": 3, "gamma": 0.5, "g": (1.0, 0.5)},
    "fig4": {"g": 5.0, "gamma": 0.5, "n0": (7, 8)},
    "fig5": {"g": 1.0, "t": 4.0, "n0": (0, 30), "gamma": (0.0, 1.0, 101)},
}


def figure_scenarios(omega: float = 1.0, grid: TimeGrid | None = None, fig5_g: float | None = None, workers: int | None = None) -> dict:
    """Run the four built-in figure scenarios; returns ``{name: SweepResult}``."""
    grid = grid or TimeGrid()
    a = FIGURE_ASSUMPTIONS
    out = {}
    f = a["fig2"]
    out["fig2"] = stack_results(
        [sweep_time(SystemParams(omega, f["g"], G, f["n0"]), grid) for G in f["gamma"]], "gamma", f["gamma"]
    )
    f = a["fig3"]
    out["fig3"] = stack_results(
        [sweep_time(SystemParams(omega, g, f["gamma"], f["n0"]), grid) for g in f["g"]], "g", f["g"]
    )
    f = a["fig4"]
    out["fig4"] = stack_results(
        [sweep_time(SystemParams(omega, f["g"], f["gamma"], n0), grid) for n0 in f["n0"]], "n0", f["n0"]
    )
    f = a["fig5"]
    lo, hi = f["n0"]
    out["fig5"] = sweep_grid(
        range(lo, hi + 1),
        uniform_axis(*f["gamma"]),
        g=f["g"] if fig5_g is None else fig5_g,
        omega=omega,
        t=f["t"],
        workers=workers,
    )
    return out
