"""Measurable plane regions used as symbol pieces.

Two shapes cover every experiment: discs (anywhere in the plane) and annular
sectors centered at the origin. Disjointness between a disc and a sector is
decided conservatively through the disc's polar bounding box, so a True
answer is trustworthy while a False may only mean "could not certify".
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

TWO_PI = 2.0 * math.pi
_TOL = 1e-12


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float

    def __post_init__(self):
        c = complex(self.center)
        object.__setattr__(self, "center", c)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError("disc center must be finite")
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError(f"disc radius must be positive and finite, got {self.radius}")

    @property
    def area(self) -> float:
        return math.pi * self.radius**2


@dataclass(frozen=True)
class AnnularSector:
    """{r e^{i theta} : r_inner <= r <= r_outer, theta_start <= theta <= theta_end}.

    The angular span must be positive and at most 2pi; a full span makes the
    region an annulus (or a disc when r_inner = 0).
    """

    r_inner: float
    r_outer: float
    theta_start: float
    theta_end: float

    def __post_init__(self):
        if not (math.isfinite(self.r_inner) and math.isfinite(self.r_outer)):
            raise ValueError("sector radii must be finite")
        if not (0.0 <= self.r_inner < self.r_outer):
            raise ValueError(
                f"need 0 <= r_inner < r_outer, got [{self.r_inner}, {self.r_outer}]"
            )
        if not (math.isfinite(self.theta_start) and math.isfinite(self.theta_end)):
            raise ValueError("sector angles must be finite")
        span = self.theta_end - self.theta_start
        if not (0.0 < span <= TWO_PI + _TOL):
            raise ValueError(f"angular span must lie in (0, 2pi], got {span}")

    @property
    def span(self) -> float:
        return min(self.theta_end - self.theta_start, TWO_PI)

    @property
    def full_span(self) -> bool:
        return self.theta_end - self.theta_start >= TWO_PI - _TOL

    @property
    def area(self) -> float:
        return 0.5 * self.span * (self.r_outer**2 - self.r_inner**2)


Region = Union[Disc, AnnularSector]


def area(region: Region) -> float:
    """Lebesgue area of a region."""
    if isinstance(region, (Disc, AnnularSector)):
        return region.area
    raise TypeError(f"unsupported region type: {type(region).__name__}")


def _intervals_disjoint(a1: float, b1: float, a2: float, b2: float) -> bool:
    # Measure-zero touching counts as disjoint.
    return min(b1, b2) - max(a1, a2) <= _TOL


def _arc_overlap(start1: float, span1: float, start2: float, span2: float) -> float:
    """Overlap length of two arcs on the circle (spans in (0, 2pi])."""
    if span1 >= TWO_PI - _TOL or span2 >= TWO_PI - _TOL:
        return min(span1, span2)
    s = (start2 - start1) % TWO_PI
    overlap = 0.0
    for shift in (s, s - TWO_PI):
        lo = max(0.0, shift)
        hi = min(span1, shift + span2)
        if hi > lo:
            overlap += hi - lo
    return overlap


def _radial_band(region: Region) -> tuple[float, float]:
    if isinstance(region, AnnularSector):
        return region.r_inner, region.r_outer
    dist = abs(region.center)
    return max(0.0, dist - region.radius), dist + region.radius


def _angular_arc(region: Region) -> tuple[float, float] | None:
    """(start, span) of an arc covering the region, or None for all angles."""
    if isinstance(region, AnnularSector):
        if region.full_span:
            return None
        return region.theta_start % TWO_PI, region.span
    dist = abs(region.center)
    if dist <= region.radius + _TOL:
        return None  # contains (or touches) the origin: every angle occurs
    half = math.asin(min(1.0, region.radius / dist))
    return (cmath.phase(region.center) - half) % TWO_PI, 2.0 * half


def _pair_disjoint(r1: Region, r2: Region) -> bool:
    if isinstance(r1, Disc) and isinstance(r2, Disc):
        return abs(r1.center - r2.center) >= r1.radius + r2.radius - _TOL

    # Sector/sector and the conservative disc/sector test share one skeleton:
    # certified disjoint if the radial bands or the angular arcs are.
    lo1, hi1 = _radial_band(r1)
    lo2, hi2 = _radial_band(r2)
    if _intervals_disjoint(lo1, hi1, lo2, hi2):
        return True
    arc1 = _angular_arc(r1)
    arc2 = _angular_arc(r2)
    if arc1 is None or arc2 is None:
        return False
    return _arc_overlap(*arc1, *arc2) <= _TOL


def _sectors_disjoint_vec(sectors) -> bool:
    """Vectorized all-pairs check for sector-only families (same decisions as
    _pair_disjoint), chunked so discretization lattices with thousands of
    cells validate in milliseconds."""
    lo = np.array([s.r_inner for s in sectors])
    hi = np.array([s.r_outer for s in sectors])
    start = np.array([s.theta_start % TWO_PI for s in sectors])
    span = np.array([s.span for s in sectors])
    full = np.array([s.full_span for s in sectors])
    p = lo.size
    chunk = 256
    for i0 in range(0, p, chunk):
        i1 = min(i0 + chunk, p)
        rad = (
            np.minimum(hi[i0:i1, None], hi[None, :])
            - np.maximum(lo[i0:i1, None], lo[None, :])
        ) <= _TOL
        s = (start[None, :] - start[i0:i1, None]) % TWO_PI
        overlap = np.zeros_like(s)
        for shift in (s, s - TWO_PI):
            seg = np.minimum(span[i0:i1, None], shift + span[None, :]) - np.maximum(0.0, shift)
            overlap += np.maximum(0.0, seg)
        ang = ~full[i0:i1, None] & ~full[None, :] & (overlap <= _TOL)
        ok = rad | ang
        ok[np.arange(i1 - i0), np.arange(i0, i1)] = True  # exempt self-pairs
        if not np.all(ok):
            return False
    return True


def disjoint(regions) -> bool:
    """True iff all pairwise intersections have measure zero (certified).

    Disc against sector is decided through the disc's polar bounding box, so
    the test is conservative: geometrically disjoint pairs may come back
    False, but True is always safe.
    """
    regions = list(regions)
    if len(regions) >= 32 and all(isinstance(r, AnnularSector) for r in regions):
        return _sectors_disjoint_vec(regions)
    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            if not _pair_disjoint(regions[i], regions[j]):
                return False
    return True
