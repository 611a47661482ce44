"""Membership tests and implication checks, each returning a verdict plus
witnesses.

Numerical positivity tests can fail to stabilize, so every verdict is
tri-state; "undetermined" is a first-class outcome and is never silently
coerced to yes or no.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .core import (StructuredOperator, constant_diagonal, gram,
                   is_selfadjoint, self_commutator)
from .errors import NotHyponormal, NotStabilized
from .numerics import (_auto_trunc, cluster_values, discrete_eigs_below,
                       min_modulus, operator_norm, positivity_verdict)
from .symbols import (SpectralSummary, constant_value, essential_spectrum,
                      modulus_constant, spectral_area, symbol, winding_regions)


class Verdict(enum.Enum):
    NO = "no"
    UNDETERMINED = "undetermined"
    YES = "yes"

    @property
    def rank(self) -> int:
        return ("no", "undetermined", "yes").index(self.value)

    def __str__(self):  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class CheckResult:
    verdict: Verdict
    witness: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ANResult:
    verdict: Verdict
    alpha: float | None
    witness: dict = field(default_factory=dict)


# -- elementary membership tests ---------------------------------------------

def check_selfadjoint(t: StructuredOperator, tol: float = 1e-10) -> CheckResult:
    defect = (t - t.adjoint()).magnitude()
    return CheckResult(Verdict.YES if defect <= tol else Verdict.NO,
                       {"selfadjoint_defect": defect})


def check_normal(t: StructuredOperator, tol: float = 1e-8) -> CheckResult:
    """Normal iff the self-commutator vanishes entrywise within tol."""
    d = self_commutator(t)
    mag = d.magnitude()
    return CheckResult(Verdict.YES if d.is_zero(tol) else Verdict.NO,
                       {"commutator_magnitude": mag})


def check_hyponormal(t: StructuredOperator, tol: float = 1e-10,
                     trunc: int | None = None) -> CheckResult:
    """Hyponormal iff T*T - TT* is positive."""
    verdict, witness = positivity_verdict(self_commutator(t), tol, trunc)
    return CheckResult(Verdict(verdict), witness)


def default_paranormal_grid(t: StructuredOperator, count: int = 32):
    """Log-spaced positive shifts covering [m(T)^2/10, 10 ||T||^2]."""
    norm = operator_norm(t)
    if norm == 0.0:
        return ()
    try:
        m = min_modulus(t)
    except NotStabilized:
        m = 0.0
    lo = max(m * m / 10.0, 1e-6 * max(norm * norm, 1.0))
    hi = 10.0 * norm * norm
    return tuple(np.geomspace(lo, hi, count))


def check_paranormal(t: StructuredOperator, grid=None, tol: float = 1e-10,
                     trunc: int | None = None) -> CheckResult:
    """Grid test of the shifted-square positivity characterization.

    The operator T*^2 T^2 - 2 s T*T + s^2 I must be positive for every s > 0;
    a finite grid is a sound falsifier but only a heuristic verifier, so the
    witness records exactly which shifts were tested.
    """
    if grid is None:
        grid = default_paranormal_grid(t)
    elif any(float(s) <= 0 for s in grid):
        raise ValueError("grid shifts must be positive")
    if not grid:
        return CheckResult(Verdict.YES, {"grid": (), "note": "zero operator"})
    t2 = t.compose(t)
    quartic = gram(t2)
    quad = gram(t)
    outcome = Verdict.YES
    failed_at = None
    for s in grid:
        s = float(s)
        q = quartic + quad.scaled(-2.0 * s) + constant_diagonal(s * s)
        verdict, _ = positivity_verdict(q, tol, trunc)
        if verdict == "no":
            outcome, failed_at = Verdict.NO, s
            break
        if verdict == "undetermined":
            outcome = Verdict.UNDETERMINED
    return CheckResult(outcome, {"grid": tuple(float(s) for s in grid),
                                 "failed_at": failed_at})


# -- absolutely norm attaining -----------------------------------------------

def check_an_positive(p: StructuredOperator, tol: float = 1e-8,
                      trunc: int | None = None) -> ANResult:
    """Positive operator test: singleton essential spectrum plus finitely
    many (stabilized) eigenvalues below it."""
    if not is_selfadjoint(p, 1e-10 * max(1.0, p.magnitude())):
        raise ValueError("input must be self-adjoint (positive)")
    c = constant_value(symbol(p))
    if c is None:
        pts = symbol(p).on_circle(1024)
        dev = float(np.max(np.abs(pts - np.mean(pts))))
        return ANResult(Verdict.NO, None, {"symbol_deviation": dev})
    level = float(c.real)
    report = discrete_eigs_below(p, bound=level, tol=tol, n=trunc)
    witness = {"level": level,
               "eigenvalues_below": tuple((float(np.real(v)), m)
                                          for v, m in report.eigenvalues),
               "near_boundary": report.near_boundary,
               "sizes_used": report.sizes_used}
    if not report.stabilized:
        return ANResult(Verdict.UNDETERMINED, None, witness)
    return ANResult(Verdict.YES, level, witness)


def check_an(t: StructuredOperator, tol: float = 1e-8,
             trunc: int | None = None) -> ANResult:
    """Absolutely norm attaining via the positivity transfer T in AN iff T*T in AN.

    alpha is the essential level of |T| (square root of the T*T level).
    """
    res = check_an_positive(gram(t), tol, trunc)
    if res.verdict is Verdict.YES:
        return ANResult(Verdict.YES, math.sqrt(max(0.0, res.alpha)), res.witness)
    return res


# -- truncation eigenvalue counting for normal operators ----------------------

def _region_clusters(t: StructuredOperator, keep, trunc: int | None,
                     tol: float, hermitian: bool):
    """Stabilized clusters of truncation eigenvalues selected by ``keep``.

    Eigenvalues are filtered before the n / 2n comparison so that essential
    clusters (whose multiplicity grows with n) do not block stabilization.
    """
    n = trunc if trunc is not None else _auto_trunc(t)

    def at(size):
        m = t.truncate(size)
        vals = np.linalg.eigvalsh(m) if hermitian else np.linalg.eigvals(m)
        kept = [complex(v) for v in vals if keep(complex(v))]
        return cluster_values(kept, 100.0 * tol)

    a = at(n)
    b = at(2 * n)
    stable = len(a) == len(b) and all(
        abs(x[0] - y[0]) <= max(tol, 1e-12) * max(1.0, abs(x[0])) and x[1] == y[1]
        for x, y in zip(a, b))
    return b, stable


@dataclass(frozen=True)
class EquivalenceRecord:
    """Independent evaluations of the three normal-AN conditions."""

    applicable: bool
    an: Verdict | None = None
    spectral: Verdict | None = None
    circles: Verdict | None = None
    alpha: float | None = None
    interior_points: tuple = ()
    radii: tuple = ()
    agree: bool | None = None
    reason: str = ""


def check_an_normal_equivalence(t: StructuredOperator, tol: float = 1e-8,
                                trunc: int | None = None) -> EquivalenceRecord:
    """For normal T, evaluate the three equivalent characterizations
    independently and report whether they agree; refuses non-normal input."""
    if check_normal(t, max(tol, 1e-10)).verdict is not Verdict.YES:
        return EquivalenceRecord(applicable=False,
                                 reason="equivalence applies to normal operators only")
    an = check_an(t, tol, trunc)

    alpha = modulus_constant(symbol(t))
    if alpha is None:
        spectral = circles = Verdict.NO
        interior, radii = (), ()
    else:
        clusters, stable = _region_clusters(
            t, lambda z: abs(z) < alpha - tol, trunc, tol, hermitian=False)
        interior = clusters
        spectral = Verdict.YES if stable else Verdict.UNDETERMINED
        radii = cluster_values([abs(c) for c, _ in clusters], 100.0 * tol) \
            if stable else ()
        circles = spectral
    verdicts = (an.verdict, spectral, circles)
    return EquivalenceRecord(True, an.verdict, spectral, circles,
                             alpha if alpha is not None else None,
                             tuple(interior), tuple(radii),
                             agree=len(set(v.value for v in verdicts)) == 1)


@dataclass(frozen=True)
class SelfadjointANRecord:
    applicable: bool
    verdict: Verdict | None = None
    alpha: float | None = None
    interior_points: tuple = ()
    boundary_points: tuple = ()
    reason: str = ""


def check_an_selfadjoint(t: StructuredOperator, tol: float = 1e-8,
                         trunc: int | None = None) -> SelfadjointANRecord:
    """Self-adjoint specialization: essential spectrum inside {-alpha, alpha}
    and finitely many spectrum points in the open interval between them."""
    if check_selfadjoint(t, max(tol, 1e-10)).verdict is not Verdict.YES:
        return SelfadjointANRecord(applicable=False,
                                   reason="input is not self-adjoint")
    c = constant_value(symbol(t))
    if c is None:
        return SelfadjointANRecord(True, Verdict.NO, None, (), (),
                                   reason="essential spectrum is a nondegenerate interval")
    alpha = abs(c)
    clusters, stable = _region_clusters(
        t, lambda z: abs(z) < alpha - tol, trunc, tol, hermitian=True)
    verdict = Verdict.YES if stable else Verdict.UNDETERMINED
    # points on {-alpha, alpha} belong to the essential set; list the distinct
    # values seen there without (meaningless) multiplicities
    n = trunc if trunc is not None else _auto_trunc(t)
    vals = np.linalg.eigvalsh(t.truncate(n))
    boundary = cluster_values(
        [float(v) for v in vals if abs(abs(v) - alpha) <= tol], 100.0 * tol)
    return SelfadjointANRecord(
        True, verdict, alpha,
        tuple((float(v.real), m) for v, m in clusters),
        tuple(float(np.real(v)) for v, _ in boundary))


@dataclass(frozen=True)
class AMRecord:
    applicable: bool
    verdict: Verdict | None = None
    beta: float | None = None
    annulus_points: tuple = ()
    reason: str = ""


def check_am_normal(t: StructuredOperator, tol: float = 1e-8,
                    trunc: int | None = None) -> AMRecord:
    """Normal absolutely-minimum-attaining test: essential spectrum on a
    circle of radius beta and finitely many spectrum points outside it."""
    if check_normal(t, max(tol, 1e-10)).verdict is not Verdict.YES:
        return AMRecord(applicable=False,
                        reason="classifier covers normal operators only")
    beta = modulus_constant(symbol(t))
    if beta is None:
        return AMRecord(True, Verdict.NO, None, (),
                        reason="essential spectrum is not a circle")
    clusters, stable = _region_clusters(
        t, lambda z: abs(z) > beta + tol, trunc, tol, hermitian=False)
    verdict = Verdict.YES if stable else Verdict.UNDETERMINED
    return AMRecord(True, verdict, beta, tuple(clusters))


# -- inequality and implication records ---------------------------------------

@dataclass(frozen=True)
class PutnamRecord:
    commutator_norm: float
    area_over_pi: float
    grid_error_over_pi: float
    holds: bool


def putnam_check(t: StructuredOperator, resolution: int = 512,
                 tol: float = 1e-6, assume_hyponormal: bool = False) -> PutnamRecord:
    """Commutator norm against spectral area / pi for hyponormal input."""
    if not assume_hyponormal:
        if check_hyponormal(t).verdict is not Verdict.YES:
            raise NotHyponormal("Putnam check requires a hyponormal operator")
    lhs = operator_norm(self_commutator(t))
    est = spectral_area(t, resolution)
    rhs = est.value / math.pi
    slack = est.error / math.pi + tol
    return PutnamRecord(lhs, rhs, est.error / math.pi, bool(lhs <= rhs + slack))


@dataclass(frozen=True)
class WeylRecord:
    premises_ok: bool
    weyl_equals_essential: bool | None = None
    component_windings: tuple = ()
    normal: Verdict | None = None
    holds: bool | None = None
    reason: str = ""


def weyl_normality_criterion(t: StructuredOperator, tol: float = 1e-8,
                             resolution: int = 256) -> WeylRecord:
    """If no off-curve point has nonzero index, a hyponormal AN operator must
    be normal; one winding test per bounded complementary component suffices
    because the winding is locally constant off the curve."""
    if check_hyponormal(t).verdict is not Verdict.YES:
        return WeylRecord(False, reason="not (verifiably) hyponormal")
    if check_an(t).verdict is not Verdict.YES:
        return WeylRecord(False, reason="not (verifiably) absolutely norm attaining")
    regions = winding_regions(symbol(t), resolution)
    windings = tuple(c.winding for c in regions.components)
    equal = all(w == 0 for w in windings)
    if not equal:
        return WeylRecord(True, False, windings, None, None,
                          reason="criterion inapplicable: Weyl spectrum exceeds "
                                 "the essential spectrum")
    normal = check_normal(t, tol).verdict
    return WeylRecord(True, True, windings, normal, normal is Verdict.YES)


@dataclass(frozen=True)
class PairNormalityRecord:
    paranormal: Verdict
    adjoint_paranormal: Verdict
    an: Verdict
    premises_hold: bool
    normal: Verdict | None
    holds: bool | None
    null_spaces_equal: bool
    null_variant_premises: bool
    null_variant_holds: bool | None


def _null_projection(matrix, rel_cutoff: float = 1e-8):
    u, s, wh = np.linalg.svd(matrix)
    cutoff = max(1e-12, (s[0] if s.size else 0.0) * rel_cutoff)
    basis = wh.conj().T[:, s < cutoff] if s.size else wh.conj().T
    return basis @ basis.conj().T


def paranormal_pair_normality(t: StructuredOperator, tol: float = 1e-8,
                              trunc: int | None = None) -> PairNormalityRecord:
    """Both implication tests: (T, T* paranormal, T in AN) forces normality,
    and (T paranormal, T in AN, N(T) = N(T*)) forces normality.

    Null spaces are compared through truncation null projections, a proxy
    that can only strengthen the premises on shift-like operators.
    """
    p1 = check_paranormal(t, tol=max(tol, 1e-10), trunc=trunc).verdict
    p2 = check_paranormal(t.adjoint(), tol=max(tol, 1e-10), trunc=trunc).verdict
    an = check_an(t, trunc=trunc).verdict
    premises = all(v is Verdict.YES for v in (p1, p2, an))
    normal = check_normal(t, tol).verdict if premises else None
    holds = (normal is Verdict.YES) if premises else None

    n = trunc if trunc is not None else _auto_trunc(t)
    pn = _null_projection(t.truncate(n))
    pn_adj = _null_projection(t.adjoint().truncate(n))
    null_equal = bool(np.linalg.norm(pn - pn_adj, 2) <= max(tol, 1e-8))
    variant = (p1 is Verdict.YES) and (an is Verdict.YES) and null_equal
    variant_normal = check_normal(t, tol).verdict if variant else None
    return PairNormalityRecord(
        p1, p2, an, premises, normal, holds,
        null_equal, variant, (variant_normal is Verdict.YES) if variant else None)


# -- full report ---------------------------------------------------------------

@dataclass(frozen=True)
class ClassificationReport:
    """Verdict bundle; the normal => hyponormal => paranormal chain is
    enforced during assembly, and alpha is present exactly when AN holds."""

    is_self_adjoint: Verdict
    is_normal: Verdict
    is_hyponormal: Verdict
    is_paranormal: Verdict
    is_AN: Verdict
    is_AM_normal: Verdict
    alpha: float | None
    witnesses: tuple
    tolerances: dict

    @property
    def any_undetermined(self) -> bool:
        return Verdict.UNDETERMINED in (self.is_self_adjoint, self.is_normal,
                                        self.is_hyponormal, self.is_paranormal,
                                        self.is_AN, self.is_AM_normal)


def classify(t: StructuredOperator, trunc: int | None = None,
             tol_normal: float = 1e-8, tol_hyponormal: float = 1e-10,
             tol_paranormal: float = 1e-10, tol_an: float = 1e-8) -> ClassificationReport:
    """Run every membership test, reusing implications to stay consistent."""
    witnesses = []

    sa = check_selfadjoint(t, max(tol_normal, 1e-10))
    witnesses.append(("self_adjoint", sa.witness))

    nr = check_normal(t, tol_normal)
    witnesses.append(("normal", nr.witness))

    if nr.verdict is Verdict.YES:
        hy = CheckResult(Verdict.YES, {"implied_by": "normal"})
    else:
        hy = check_hyponormal(t, tol_hyponormal, trunc)
    witnesses.append(("hyponormal", hy.witness))

    if hy.verdict is Verdict.YES:
        pa = CheckResult(Verdict.YES, {"implied_by": "hyponormal"})
    else:
        pa = check_paranormal(t, tol=tol_paranormal, trunc=trunc)
    witnesses.append(("paranormal", pa.witness))

    an = check_an(t, tol_an, trunc)
    witnesses.append(("absolutely_norm_attaining", an.witness))

    am = check_am_normal(t, tol_an, trunc)
    # is_AM_normal asks for membership in the *normal* AM class, so a
    # non-normal operator is a definite no, not an undetermined one
    am_verdict = am.verdict if am.applicable else Verdict.NO
    witnesses.append(("am_normal", {"applicable": am.applicable,
                                    "beta": am.beta,
                                    "annulus_points": am.annulus_points,
                                    "reason": am.reason}))

    return ClassificationReport(
        sa.verdict, nr.verdict, hy.verdict, pa.verdict, an.verdict, am_verdict,
        an.alpha if an.verdict is Verdict.YES else None,
        tuple(witnesses),
        {"normal": tol_normal, "hyponormal": tol_hyponormal,
         "paranormal": tol_paranormal, "an": tol_an})


def spectral_summary(t: StructuredOperator, samples: int = 1024,
                     resolution: int = 512, trunc: int | None = None,
                     tol: float = 1e-8) -> SpectralSummary:
    """Assemble the full spectral report for an operator."""
    curve = essential_spectrum(t, samples)
    regions = winding_regions(symbol(t), resolution)
    norm_upper = operator_norm(t)
    m_modulus = min_modulus(t)
    from .symbols import ess_min_modulus
    me = ess_min_modulus(t)
    m_modulus = min(m_modulus, me)  # guard float rounding on the invariant

    sym = symbol(t)
    curve_pts = sym.on_circle(4096)
    scale = max(1.0, norm_upper)

    def isolated(z):
        if float(np.min(np.abs(curve_pts - z))) <= 1e-6 * scale:
            return False
        from .symbols import polygon_winding
        return polygon_winding(curve_pts, z) == 0

    clusters, stable = _region_clusters(t, isolated, trunc, tol, hermitian=False)
    eigenvalues = tuple(clusters) if stable else ()
    weyl = tuple(c for c in regions.components if c.winding != 0)
    return SpectralSummary(curve, curve.is_circle, weyl, eigenvalues,
                           float(m_modulus), float(me), float(norm_upper),
                           float(regions.value), float(regions.error))


def discrete_singular_levels(t: StructuredOperator, tol: float = 1e-8,
                             trunc: int | None = None):
    """Moduli levels of |T| strictly below the essential level, via T*T."""
    from .symbols import symbol_min_modulus
    g = gram(t)
    level = symbol_min_modulus(symbol(t)) ** 2
    report = discrete_eigs_below(g, bound=level, tol=tol, n=trunc)
    levels = tuple((float(np.sqrt(max(0.0, np.real(v)))), m)
                   for v, m in report.eigenvalues)
    return levels, report.stabilized
