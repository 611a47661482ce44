"""Laurent symbols of band tails and the spectral data they carry.

The band tails of a structured operator form a Laurent polynomial a(z); the
prefix deviations and rank terms are finite rank and therefore invisible to
Fredholm theory.  The curve a(T), T the unit circle, is the essential
spectrum, and -winding(a - lambda) is the Fredholm index off the curve.  This
identification is classical Toeplitz theory, used here as an external
correctness dependency and cross-validated against truncation null-space
counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .core import StructuredOperator
from .errors import EssentialPoint, PointOnCurve

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class LaurentSymbol:
    """Finite Laurent polynomial a(z) = sum coeffs[k] z^k on |z| = 1."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {int(k): complex(c) for k, c in sorted(self.coeffs.items())
                   if complex(c) != 0}
        object.__setattr__(self, "coeffs", cleaned)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for k, c in self.coeffs.items():
            out = out + c * z ** k
        return out

    def on_circle(self, m: int) -> np.ndarray:
        theta = np.arange(m) * (_TWO_PI / m)
        return self.evaluate(np.exp(1j * theta))

    def conjugated(self) -> "LaurentSymbol":
        return LaurentSymbol({-k: c.conjugate() for k, c in self.coeffs.items()})

    def product(self, other: "LaurentSymbol") -> "LaurentSymbol":
        out: dict = {}
        for k1 in sorted(self.coeffs):
            for k2 in sorted(other.coeffs):
                out[k1 + k2] = out.get(k1 + k2, 0j) + self.coeffs[k1] * other.coeffs[k2]
        return LaurentSymbol(out)

    def magnitude(self) -> float:
        return sum(abs(c) for c in self.coeffs.values())

    def is_real(self, tol: float = 1e-12) -> bool:
        """Whether a is real-valued on the circle (Hermitian coefficients)."""
        scale = max(1.0, self.magnitude())
        return all(abs(self.coeffs.get(-k, 0j) - c.conjugate()) <= tol * scale
                   for k, c in self.coeffs.items())


def symbol(t: StructuredOperator) -> LaurentSymbol:
    """Tail coefficients per band offset; prefixes and rank terms are finite
    rank and do not contribute."""
    return LaurentSymbol({k: d.tail for k, d in sorted(t.bands.items())})


def symbol_curve(s: LaurentSymbol, m: int) -> np.ndarray:
    """Samples a(e^{2 pi i j / m}) for j = 0 .. m-1."""
    if m < 16:
        raise ValueError("need at least 16 samples")
    return s.on_circle(m)


# -- winding numbers ---------------------------------------------------------

def winding(s: LaurentSymbol, lam, samples: int = 256, cap: int = 2 ** 20) -> int:
    """Winding number of a - lam around 0 by accumulated argument.

    Sampling is doubled until consecutive argument steps stay below pi/2,
    guaranteed to terminate for points off the curve since Laurent
    polynomials have bounded derivative on the circle.
    """
    lam = complex(lam)
    scale = max(1.0, s.magnitude(), abs(lam))
    m = max(16, samples)
    while True:
        pts = s.on_circle(m) - lam
        if np.min(np.abs(pts)) <= 1e-14 * scale:
            raise PointOnCurve(f"{lam} lies on the symbol curve")
        steps = np.angle(np.roll(pts, -1) / pts)
        if np.max(np.abs(steps)) < math.pi / 2:
            total = float(np.sum(steps))
            w = round(total / _TWO_PI)
            return int(w)
        if m >= cap:
            raise PointOnCurve(
                f"{lam} is numerically indistinguishable from the symbol curve")
        m *= 2


def polygon_winding(points: np.ndarray, q: complex) -> int:
    """Exact winding of the closed sampled polygon around q (crossing count)."""
    x = points.real - q.real
    y = points.imag - q.imag
    x2 = np.roll(x, -1)
    y2 = np.roll(y, -1)
    cross = x * y2 - x2 * y
    up = (y <= 0) & (y2 > 0) & (cross > 0)
    down = (y > 0) & (y2 <= 0) & (cross < 0)
    return int(np.count_nonzero(up)) - int(np.count_nonzero(down))


def fredholm_index(t: StructuredOperator, lam, validate: bool = False,
                   n: int = 512) -> int:
    """ind(T - lam) = dim N(T - lam) - dim N((T - lam)*) = -winding(a, lam).

    With validate=True the result is cross-checked against null-space counts
    of tall truncations; a mismatch raises ConvergenceFailure.
    """
    try:
        index = -winding(symbol(t), lam)
    except PointOnCurve as exc:
        raise EssentialPoint(str(exc)) from exc
    if validate:
        oracle = index_by_truncation(t, lam, n)
        if oracle != index:
            from .errors import ConvergenceFailure
            raise ConvergenceFailure(
                f"winding index {index} disagrees with truncation count {oracle}")
    return index


def kernel_count_by_truncation(t: StructuredOperator, n: int = 512,
                               rel_threshold: float = 1e-6) -> int:
    """Numerical dim N(T) from the tall rectangular section.

    The (n + bandwidth) x n section captures every row that the first n
    columns can touch, so its near-kernel counts decaying kernel vectors.
    """
    k = t.bandwidth
    tall = t.truncate(n + k)[:, :n] if k else t.truncate(n)
    svals = np.linalg.svd(tall, compute_uv=False)
    if svals.size == 0 or svals[0] == 0:
        return n
    return int(np.count_nonzero(svals <= rel_threshold * max(1.0, svals[0])))


def index_by_truncation(t: StructuredOperator, lam, n: int = 512) -> int:
    """Independent index estimate: null-space counts of tall sections."""
    from .core import constant_diagonal
    shifted = t - constant_diagonal(lam)
    return (kernel_count_by_truncation(shifted, n)
            - kernel_count_by_truncation(shifted.adjoint(), n))


# -- essential spectrum ------------------------------------------------------

CIRCLE_RTOL = 1e-9          # relative modulus deviation on 1024 samples
CIRCLE_SAMPLES = 1024


def modulus_constant(s: LaurentSymbol, samples: int = CIRCLE_SAMPLES,
                     rtol: float = CIRCLE_RTOL) -> float | None:
    """Radius alpha when |a| is constant on the circle within rtol, else None."""
    if not s.coeffs:
        return 0.0
    if len(s.coeffs) == 1:
        return abs(next(iter(s.coeffs.values())))
    mods = np.abs(s.on_circle(samples))
    alpha = float(np.mean(mods))
    if np.max(np.abs(mods - alpha)) <= rtol * max(alpha, 1.0):
        return alpha
    return None


def constant_value(s: LaurentSymbol, samples: int = CIRCLE_SAMPLES,
                   rtol: float = CIRCLE_RTOL) -> complex | None:
    """The constant c when a(z) = c on the circle within rtol, else None."""
    if not s.coeffs:
        return 0j
    if set(s.coeffs) == {0}:
        return s.coeffs[0]
    vals = s.on_circle(samples)
    c = complex(np.mean(vals))
    if np.max(np.abs(vals - c)) <= rtol * max(abs(c), 1.0):
        return c
    return None


@dataclass(frozen=True)
class EssentialCurve:
    """Sampled essential spectrum a(T) with circle detection."""

    theta: np.ndarray
    points: np.ndarray
    is_circle: float | None

    def __iter__(self):
        return iter(self.points)


def essential_spectrum(t: StructuredOperator, samples: int = CIRCLE_SAMPLES) -> EssentialCurve:
    s = symbol(t)
    theta = np.arange(samples) * (_TWO_PI / samples)
    return EssentialCurve(theta, s.evaluate(np.exp(1j * theta)),
                          modulus_constant(s, samples))


def _golden_min(f, a: float, b: float, iters: int = 80) -> float:
    """Plain golden-section minimum of f on [a, b]; returns the best value."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    best = min(fc, fd)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        best = min(best, fc, fd)
    return best


def _refined_extremum(s: LaurentSymbol, want_max: bool, samples: int = 1024) -> float:
    if not s.coeffs:
        return 0.0
    if len(s.coeffs) == 1:
        return abs(next(iter(s.coeffs.values())))  # |c z^k| is exactly constant
    theta = np.arange(samples) * (_TWO_PI / samples)
    mods = np.abs(s.evaluate(np.exp(1j * theta)))
    g = -mods if want_max else mods

    def f(t):
        v = abs(complex(s.evaluate(np.exp(1j * t))))
        return -v if want_max else v

    local = np.nonzero((g <= np.roll(g, 1)) & (g <= np.roll(g, -1)))[0]
    best = float(np.min(g))
    h = _TWO_PI / samples
    for i in local:
        best = min(best, _golden_min(f, theta[i] - h, theta[i] + h))
    return -best if want_max else best


def symbol_min_modulus(s: LaurentSymbol) -> float:
    return _refined_extremum(s, want_max=False)


def symbol_max_modulus(s: LaurentSymbol) -> float:
    return _refined_extremum(s, want_max=True)


def ess_min_modulus(t: StructuredOperator) -> float:
    """Essential minimum modulus: min of |a| on the circle.

    |T| = sqrt(T*T) has essential spectrum [min |a|, max |a|]; rank terms and
    prefixes cannot move it.
    """
    return symbol_min_modulus(symbol(t))


# -- spectral area by winding raster ----------------------------------------

@dataclass(frozen=True)
class RegionComponent:
    """One bounded complementary component of the symbol curve."""

    winding: int
    area: float
    representative: complex
    cells: int


@dataclass(frozen=True)
class AreaEstimate:
    """Raster estimate of the area of {winding != 0} together with the curve."""

    value: float
    error: float
    components: tuple
    curve_cells: int
    cell_diagonal: float
    resolution: int


def winding_regions(s: LaurentSymbol, resolution: int = 512,
                    max_curve_samples: int = 2 ** 20) -> AreaEstimate:
    """Rasterize the bounding box, flood-fill off-curve components, and
    winding-test one representative per component (winding is locally
    constant off the curve).  Error bound: curve length x cell diagonal."""
    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    pts = s.on_circle(4096)
    scale = max(1.0, s.magnitude())
    extent = max(np.ptp(pts.real), np.ptp(pts.imag))
    if extent <= 1e-13 * scale:
        return AreaEstimate(0.0, 0.0, (), 0, 0.0, resolution)

    pad = extent / resolution
    xmin, xmax = float(np.min(pts.real)) - pad, float(np.max(pts.real)) + pad
    ymin, ymax = float(np.min(pts.imag)) - pad, float(np.max(pts.imag)) + pad
    cw = (xmax - xmin) / resolution
    ch = (ymax - ymin) / resolution
    cell_area = cw * ch
    cell_diag = math.hypot(cw, ch)

    m = 4096
    while True:
        gaps = np.abs(np.diff(np.append(pts, pts[0])))
        if float(np.max(gaps)) < 0.5 * min(cw, ch) or m >= max_curve_samples:
            break
        m *= 2
        pts = s.on_circle(m)
    curve_len = float(np.sum(np.abs(np.diff(np.append(pts, pts[0])))))

    ix = np.clip(((pts.real - xmin) / cw).astype(int), 0, resolution - 1)
    iy = np.clip(((pts.imag - ymin) / ch).astype(int), 0, resolution - 1)
    curve_mask = np.zeros((resolution, resolution), dtype=bool)
    curve_mask[iy, ix] = True
    curve_cells = int(np.count_nonzero(curve_mask))

    four = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    labels, n_labels = ndimage.label(~curve_mask, structure=four)
    border = np.unique(np.concatenate([labels[0, :], labels[-1, :],
                                       labels[:, 0], labels[:, -1]]))
    unbounded = set(int(b) for b in border if b != 0)
    bounded = [lab for lab in range(1, n_labels + 1) if lab not in unbounded]

    components = []
    inside_cells = 0
    if bounded:
        dist = ndimage.distance_transform_edt(~curve_mask)
        reps = ndimage.maximum_position(dist, labels=labels, index=bounded)
        counts = ndimage.sum_labels(np.ones_like(labels), labels=labels,
                                    index=bounded)
        for (ry, rx), cells in zip(np.atleast_2d(reps), np.atleast_1d(counts)):
            q = complex(xmin + (rx + 0.5) * cw, ymin + (ry + 0.5) * ch)
            w = polygon_winding(pts, q)
            cells = int(cells)
            if w != 0:
                inside_cells += cells
            components.append(RegionComponent(w, cells * cell_area, q, cells))

    value = (inside_cells + curve_cells) * cell_area
    error = (curve_len + 4 * cell_diag) * cell_diag
    return AreaEstimate(value, error, tuple(components), curve_cells,
                        cell_diag, resolution)


def spectral_area(t: StructuredOperator, resolution: int = 512) -> AreaEstimate:
    """Planar measure of the spectrum's filled-in part.

    For hyponormal operators this is the area entering Putnam's inequality;
    isolated eigenvalues contribute nothing.
    """
    return winding_regions(symbol(t), resolution)


# -- summary container -------------------------------------------------------

@dataclass(frozen=True)
class SpectralSummary:
    """Bundle of spectral data for reporting.

    eigenvalues holds only isolated eigenvalues of finite multiplicity
    (stabilized truncation clusters off the curve with winding zero).
    Invariants: 0 <= min_modulus <= ess_min_modulus <= norm_upper, area >= 0.
    """

    ess_curve: EssentialCurve
    ess_is_circle: float | None
    weyl_extra: tuple
    eigenvalues: tuple
    min_modulus: float
    ess_min_modulus: float
    norm_upper: float
    area: float
    area_error: float
