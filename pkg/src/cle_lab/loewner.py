"""Driving functions to traces and back: zipper, capacities, domain maps.

The forward solver composes vertical-slit maps (exact for piecewise-constant
drive); the inverse zipper recovers a driving function from a polyline.
Steps where the drive moves faster than `substep_threshold * sqrt(dt)` are
refined by linear interpolation to control tip error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cle_lab import _kernels

__all__ = [
    "Trace",
    "trace_from_driving",
    "recover_driving",
    "swallow_time",
    "halfplane_to_disk",
    "disk_to_halfplane",
    "map_trace",
    "hcap",
]

IM_TOL_FACTOR = 1e-9
SWALLOW_FLOOR_FACTOR = 1e-8


@dataclass
class Trace:
    """Polyline of a chordal Loewner trace with capacity bookkeeping."""

    points: np.ndarray          # complex
    times: np.ndarray           # hcap at each point
    domain_tag: str = "half-plane"

    @property
    def tip_index(self) -> int:
        return len(self.points) - 1

    @property
    def tip(self) -> complex:
        return self.points[-1]

    def scale(self) -> float:
        span = np.ptp(self.points.real) + np.ptp(self.points.imag)
        return float(span) if span > 0 else 1.0


def _refine_steps(w: np.ndarray, times: np.ndarray, threshold: float, cap: int):
    """Split steps with |dW| > threshold*sqrt(dt) into linear sub-steps."""
    dw = np.diff(w)
    dt = np.diff(times)
    ratio = np.abs(dw) / np.sqrt(np.maximum(dt, 1e-300))
    nsub = np.ones(len(dw), dtype=np.int64)
    fast = ratio > threshold
    nsub[fast] = np.minimum(np.ceil((ratio[fast] / threshold) ** 2), cap).astype(np.int64)
    total = int(nsub.sum())
    U = np.empty(total)
    dts = np.empty(total)
    tref = np.empty(total)
    orig_end = np.empty(len(dw), dtype=np.int64)  # refined index ending step j
    pos = 0
    for j in range(len(dw)):
        m = nsub[j]
        if m == 1:
            U[pos] = w[j + 1]
            dts[pos] = dt[j]
            tref[pos] = times[j + 1]
            pos += 1
        else:
            frac = np.arange(1, m + 1) / m
            U[pos:pos + m] = w[j] + frac * dw[j]
            dts[pos:pos + m] = dt[j] / m
            tref[pos:pos + m] = times[j] + frac * dt[j]
            pos += m
        orig_end[j] = pos - 1
    return U, dts, tref, orig_end


def trace_from_driving(
    w: np.ndarray,
    times: np.ndarray,
    tip_stride: int = 1,
    substep_threshold: float = 2.0,
    max_substeps: int = 16,
) -> Trace:
    """Trace of the Loewner chain driven by w, by backward slit composition.

    With tip_stride=1 tips are evaluated at every composed (refined) step, so
    trace_from_driving and recover_driving are exact inverses for this slit
    family; tip_stride=s evaluates only every s-th input time (all maps are
    still composed), which is enough for set statistics such as box counting.
    """
    w = np.asarray(w, dtype=float)
    times = np.asarray(times, dtype=float)
    if len(w) != len(times):
        raise ValueError("w and times must have equal length")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    U, dts, tref, orig_end = _refine_steps(w, times, substep_threshold, max_substeps)
    if tip_stride == 1:
        eval_idx = np.arange(len(U), dtype=np.int64)
        tvals = tref
    else:
        keep = np.arange(0, len(orig_end), tip_stride)
        if keep[-1] != len(orig_end) - 1:
            keep = np.append(keep, len(orig_end) - 1)
        eval_idx = orig_end[keep]
        tvals = times[1:][keep]
    tips = _kernels.tips_from_driving(U, dts, eval_idx)
    pts = np.concatenate(([complex(w[0], 0.0)], tips))
    tvals = np.concatenate(([times[0]], tvals))
    return Trace(points=pts, times=tvals)


def recover_driving(trace: Trace):
    """Inverse zipper: (w, times) of the chain that grows the trace polyline.

    Round-trip error against the original driving decreases with step count;
    it is quantified in tests rather than assumed.
    """
    if trace.domain_tag != "half-plane":
        raise ValueError("unzipping expects half-plane coordinates")
    pts = trace.points
    tol = IM_TOL_FACTOR * trace.scale()
    if np.any(pts.imag < -tol):
        raise ValueError("trace leaves the closed half-plane")
    re = pts.real.copy()
    im = np.maximum(pts.imag, 0.0)
    U, dts = _kernels.unzip_polyline(re, im)
    w = np.concatenate(([pts[0].real], U))
    times = np.concatenate(([0.0], np.cumsum(dts)))
    return w, times


def hcap(trace: Trace) -> float:
    """Half-plane capacity of the trace hull (via the inverse zipper)."""
    _, times = recover_driving(trace)
    return float(times[-1])


def swallow_time(w, o, times=None, floor: float | None = None):
    """First grid time at which |W - O| falls below the floor, or None."""
    w = np.asarray(w, dtype=float)
    o = np.asarray(o, dtype=float)
    gap = np.abs(w - o)
    if floor is None:
        scale = gap.max() if gap.max() > 0 else 1.0
        floor = SWALLOW_FLOOR_FACTOR * scale
    hit = np.flatnonzero(gap < floor)
    # ignore a collision at t=0 when both points start together
    hit = hit[hit > 0] if gap[0] < floor else hit
    if len(hit) == 0:
        return None
    if times is None:
        return int(hit[0])
    return float(np.asarray(times)[hit[0]])


def halfplane_to_disk(z):
    """Moebius map H -> D with 0 -> -i and infinity -> i."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == -1j):
        raise ValueError("pole of the half-plane-to-disk map")
    return 1j * (z - 1j) / (z + 1j)


def disk_to_halfplane(z):
    """Inverse of halfplane_to_disk: -i -> 0, i -> infinity."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 1j):
        raise ValueError("pole of the disk-to-half-plane map")
    return (1.0 - 1j * z) / (z - 1j)


def map_trace(trace: Trace, direction: str = "h2d") -> Trace:
    """Map a trace between the half-plane and the unit disk."""
    if direction == "h2d":
        if trace.domain_tag != "half-plane":
            raise ValueError("trace is not in half-plane coordinates")
        return Trace(halfplane_to_disk(trace.points), trace.times.copy(), "disk")
    if direction == "d2h":
        if trace.domain_tag != "disk":
            raise ValueError("trace is not in disk coordinates")
        return Trace(disk_to_halfplane(trace.points), trace.times.copy(), "half-plane")
    raise ValueError(f"unknown direction {direction!r}")
