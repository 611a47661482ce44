import numpy as np
import pytest

from opspectra import (NotHyponormal, Verdict, check_am_normal, check_an,
                       check_an_normal_equivalence, check_an_positive,
                       check_an_selfadjoint, check_hyponormal, check_normal,
                       check_paranormal, check_selfadjoint, classify, compose,
                       constant_diagonal, diagonal, from_dense_corner, gram,
                       identity, paranormal_pair_normality, putnam_check,
                       right_shift, spectral_summary, toeplitz,
                       weyl_normality_criterion, zero)
from opspectra.specfiles import load_bundled
from opspectra.suites import (random_finite_rank, random_hyponormal,
                              random_normal_corner)

SELF_ADJOINT_BAND = toeplitz({1: 1.0, -1: 1.0})


def defect_shift():
    return load_bundled("defect_shift").operator


# -- normal / hyponormal / paranormal -----------------------------------------

def test_check_normal():
    assert check_normal(diagonal((2.0, 1j), 0.5)).verdict is Verdict.YES
    res = check_normal(right_shift())
    assert res.verdict is Verdict.NO
    assert res.witness["commutator_magnitude"] == pytest.approx(1.0)
    assert check_normal(from_dense_corner(np.diag([1.0, 2.0]))).verdict is Verdict.YES


def test_check_hyponormal():
    assert check_hyponormal(right_shift()).verdict is Verdict.YES
    assert check_hyponormal(defect_shift()).verdict is Verdict.YES
    assert check_hyponormal(right_shift().adjoint()).verdict is Verdict.NO


def test_check_paranormal_isometry():
    assert check_paranormal(right_shift()).verdict is Verdict.YES


def test_check_paranormal_consistent_with_hyponormal():
    for op in (defect_shift(), load_bundled("nilpotent_head_shift").operator):
        assert check_paranormal(op, trunc=64).verdict is Verdict.YES


def test_check_paranormal_rejects_nilpotent():
    nil = from_dense_corner(np.array([[0.0, 0.0], [1.0, 0.0]]))
    res = check_paranormal(nil)
    assert res.verdict is Verdict.NO
    assert res.witness["failed_at"] is not None
    assert res.witness["grid"], "tested shifts must be recorded"


def test_check_paranormal_zero_operator():
    assert check_paranormal(zero()).verdict is Verdict.YES


def test_check_paranormal_rejects_nonpositive_grid():
    with pytest.raises(ValueError):
        check_paranormal(right_shift(), grid=(1.0, -0.5))


def test_check_selfadjoint():
    assert check_selfadjoint(SELF_ADJOINT_BAND).verdict is Verdict.YES
    assert check_selfadjoint(right_shift()).verdict is Verdict.NO


# -- absolutely norm attaining --------------------------------------------------

def test_check_an_positive_examples():
    res = check_an_positive(gram(defect_shift()))
    assert res.verdict is Verdict.YES and res.alpha == 1.0
    res = check_an_positive(diagonal((0.0,), 1.0))
    assert res.verdict is Verdict.YES and res.alpha == 1.0
    spread = toeplitz({0: 2.0, 1: 1.0, -1: 1.0})  # symbol 2 + 2cos, not constant
    res = check_an_positive(spread)
    assert res.verdict is Verdict.NO and res.alpha is None


def test_check_an_examples():
    res = check_an(right_shift())
    assert res.verdict is Verdict.YES and res.alpha == 1.0
    res = check_an(defect_shift())
    assert res.verdict is Verdict.YES and res.alpha == 1.0
    assert check_an(SELF_ADJOINT_BAND).verdict is Verdict.NO


def test_isometries_are_norm_attaining():
    r = right_shift()
    for op in (r, compose(r, r), diagonal((1j,), 1.0)):
        assert gram(op) == identity()
        res = check_an(op)
        assert res.verdict is Verdict.YES and res.alpha == 1.0


def test_equivalence_on_diagonal():
    op = diagonal((0.5j, -0.5), 1.0)
    rec = check_an_normal_equivalence(op, trunc=64)
    assert rec.applicable and rec.agree
    assert rec.an is Verdict.YES
    assert rec.alpha == pytest.approx(1.0, abs=1e-12)
    points = sorted((complex(v) for v, _ in rec.interior_points),
                    key=lambda z: (z.real, z.imag))
    np.testing.assert_allclose(points, [-0.5, 0.5j], atol=1e-9)


def test_equivalence_on_identity():
    rec = check_an_normal_equivalence(identity(), trunc=64)
    assert rec.applicable and rec.agree and rec.interior_points == ()
    assert rec.alpha == pytest.approx(1.0, abs=1e-12)


def test_equivalence_refuses_non_normal():
    rec = check_an_normal_equivalence(right_shift())
    assert not rec.applicable
    # the shift is AN even though the disc condition fails for it; the
    # equivalence is only claimed for normal operators
    assert check_an(right_shift()).verdict is Verdict.YES


def test_selfadjoint_an_examples():
    rec = check_an_selfadjoint(diagonal((0.0,), 1.0), trunc=64)
    assert rec.applicable and rec.verdict is Verdict.YES
    assert rec.alpha == pytest.approx(1.0, abs=1e-12)
    assert [(v, m) for v, m in rec.interior_points] == [(0.0, 1)]

    rec = check_an_selfadjoint(SELF_ADJOINT_BAND)
    assert rec.applicable and rec.verdict is Verdict.NO

    rec = check_an_selfadjoint(diagonal((-1.0,), 1.0), trunc=64)
    assert rec.verdict is Verdict.YES
    assert rec.interior_points == ()          # |-1| sits on the boundary
    assert any(abs(v + 1.0) <= 1e-8 for v in rec.boundary_points)


def test_am_normal_examples():
    rec = check_am_normal(identity(), trunc=64)
    assert rec.applicable and rec.verdict is Verdict.YES
    assert rec.beta == pytest.approx(1.0, abs=1e-12)
    assert rec.annulus_points == ()

    rec = check_am_normal(diagonal((2.0,), 1.0), trunc=64)
    assert rec.verdict is Verdict.YES
    assert [(complex(v), m) for v, m in rec.annulus_points] == [(2.0 + 0j, 1)]

    assert check_am_normal(SELF_ADJOINT_BAND).verdict is Verdict.NO


# -- Putnam inequality -----------------------------------------------------------

def test_putnam_near_equality_for_shift():
    rec = putnam_check(right_shift(), resolution=256, assume_hyponormal=True)
    assert rec.holds
    assert rec.commutator_norm == pytest.approx(1.0, abs=1e-12)
    assert rec.area_over_pi == pytest.approx(1.0, abs=0.05)


def test_putnam_trivial_for_normal():
    rec = putnam_check(diagonal((0.5,), 1.0), resolution=128,
                       assume_hyponormal=True)
    assert rec.holds and rec.commutator_norm <= 1e-14


def test_putnam_scaled_shift_block():
    rec = putnam_check(load_bundled("nilpotent_head_shift").operator,
                       resolution=256, assume_hyponormal=True)
    assert rec.holds
    assert rec.commutator_norm <= 4.0 + 1e-9


def test_putnam_requires_hyponormal():
    with pytest.raises(NotHyponormal):
        putnam_check(right_shift().adjoint())


# -- Weyl criterion ----------------------------------------------------------------

def test_weyl_criterion_normal_diagonal():
    rec = weyl_normality_criterion(diagonal((0.5,), 1.0))
    assert rec.premises_ok and rec.weyl_equals_essential and rec.holds


def test_weyl_criterion_inapplicable_for_shift():
    rec = weyl_normality_criterion(right_shift())
    assert rec.premises_ok
    assert rec.weyl_equals_essential is False
    assert rec.holds is None
    assert 1 in rec.component_windings


def test_weyl_criterion_inapplicable_for_defect_shift():
    rec = weyl_normality_criterion(defect_shift())
    assert rec.premises_ok and rec.weyl_equals_essential is False


# -- paranormal pair implication -----------------------------------------------------

def test_paranormal_pair_on_normal_diagonal():
    rec = paranormal_pair_normality(diagonal((0.5,), 1.0), trunc=64)
    assert rec.premises_hold and rec.holds
    assert rec.null_spaces_equal and rec.null_variant_holds


def test_paranormal_pair_vacuous_for_shift():
    rec = paranormal_pair_normality(right_shift(), trunc=64)
    assert rec.adjoint_paranormal is Verdict.NO
    assert not rec.premises_hold and rec.holds is None
    assert not rec.null_spaces_equal


def test_paranormal_pair_unitary_diagonal():
    rec = paranormal_pair_normality(load_bundled("unitary_diag").operator,
                                    trunc=64)
    assert rec.premises_hold and rec.holds


# -- implication chain over generated operators ---------------------------------------

def test_verdict_chain_never_reversed():
    rng = np.random.default_rng(23)
    ops = [right_shift(), right_shift().adjoint(), defect_shift(),
           SELF_ADJOINT_BAND, zero(), identity()]
    ops += [random_hyponormal(rng) for _ in range(5)]
    ops += [random_finite_rank(rng) for _ in range(5)]
    rank = {Verdict.NO: 0, Verdict.UNDETERMINED: 1, Verdict.YES: 2}
    for op in ops:
        nr = check_normal(op).verdict
        hy = check_hyponormal(op, trunc=64).verdict
        pa = check_paranormal(op, trunc=64).verdict
        assert not (rank[nr] == 2 and rank[hy] == 0)
        assert not (rank[hy] == 2 and rank[pa] == 0)


def test_compact_hyponormal_implies_normal_small_sample():
    rng = np.random.default_rng(7)
    for _ in range(20):
        op = random_normal_corner(rng)
        if check_hyponormal(op, tol=1e-10, trunc=64).verdict is Verdict.YES:
            assert check_normal(op, tol=1e-8).verdict is Verdict.YES


def test_classify_report_consistency():
    report = classify(right_shift())
    assert report.is_normal is Verdict.NO
    assert report.is_hyponormal is Verdict.YES
    assert report.is_paranormal is Verdict.YES
    assert report.is_AN is Verdict.YES
    assert report.alpha == 1.0
    assert report.is_AM_normal is Verdict.NO  # not in the *normal* AM class
    assert not report.any_undetermined
    assert dict(report.witnesses)["hyponormal"] is not None
    assert report.tolerances["hyponormal"] == 1e-10


def test_classify_alpha_present_iff_an():
    yes = classify(diagonal((0.5,), 1.0), trunc=64)
    assert yes.is_AN is Verdict.YES and yes.alpha is not None
    no = classify(SELF_ADJOINT_BAND, trunc=64)
    assert no.is_AN is Verdict.NO and no.alpha is None


def test_classify_zero_operator():
    report = classify(zero())
    assert report.is_normal is Verdict.YES
    assert report.is_AN is Verdict.YES and report.alpha == 0.0
    assert report.is_AM_normal is Verdict.YES


# -- spectral summary -----------------------------------------------------------------

def test_spectral_summary_invariants():
    for op in (right_shift(), defect_shift(), diagonal((0.5j,), 1.0)):
        summary = spectral_summary(op, samples=256, resolution=128, trunc=64)
        assert 0 <= summary.min_modulus <= summary.ess_min_modulus
        assert summary.ess_min_modulus <= summary.norm_upper + 1e-12
        assert summary.area >= 0


def test_spectral_summary_isolated_eigenvalues():
    summary = spectral_summary(diagonal((0.5j,), 1.0), samples=256,
                               resolution=128, trunc=64)
    assert len(summary.eigenvalues) == 1
    value, mult = summary.eigenvalues[0]
    assert mult == 1 and abs(value - 0.5j) < 1e-9


def test_spectral_summary_shift_has_no_isolated_points():
    summary = spectral_summary(right_shift(), samples=256, resolution=128,
                               trunc=64)
    assert summary.eigenvalues == ()
    assert summary.weyl_extra and summary.weyl_extra[0].winding == 1


def test_shifting_by_scalar_preserves_hyponormality():
    rng = np.random.default_rng(1)
    op = random_hyponormal(rng)
    shifted = op + constant_diagonal(0.3 - 0.7j)
    assert check_hyponormal(shifted, trunc=64).verdict is Verdict.YES
