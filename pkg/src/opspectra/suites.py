"""Seeded random operator generators and the property suites built on them.

Each suite returns a list of (name, passed, detail) triples so both the test
harness and the command line can run them; generation is deterministic for a
fixed seed.
"""

from __future__ import annotations

import numpy as np

from .classify import (Verdict, check_am_normal, check_an,
                       check_an_normal_equivalence, check_hyponormal,
                       check_normal, classify, paranormal_pair_normality,
                       putnam_check, weyl_normality_criterion)
from .core import (StructuredOperator, constant_diagonal, diagonal, embed_at,
                   from_dense_corner, right_shift, toeplitz, weighted_shift)
from .specfiles import BUNDLED, load_bundled
from .symbols import fredholm_index, index_by_truncation, symbol


def _complex(rng, scale=1.0):
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def random_diagonal(rng, max_prefix: int = 8) -> StructuredOperator:
    """Diagonal with a short prefix and a nonzero tail, moduli kept away from
    the tail modulus so oracle comparisons are never borderline."""
    tail = _complex(rng)
    while abs(tail) < 0.3:
        tail = _complex(rng)
    prefix = []
    for _ in range(rng.integers(0, max_prefix + 1)):
        if rng.random() < 0.15:
            prefix.append(tail * np.exp(1j * rng.uniform(0, 2 * np.pi)))
        else:
            r = abs(tail) * (rng.uniform(0.1, 0.8) if rng.random() < 0.5
                             else rng.uniform(1.2, 2.0))
            prefix.append(r * np.exp(1j * rng.uniform(0, 2 * np.pi)))
    return diagonal(tuple(prefix), tail)


def random_weighted_shift(rng, max_prefix: int = 6) -> StructuredOperator:
    """Weighted shift with nondecreasing nonnegative weights (hyponormal)."""
    tail = rng.uniform(0.5, 2.0)
    k = int(rng.integers(0, max_prefix + 1))
    weights = np.sort(rng.uniform(0.0, tail, size=k))
    return weighted_shift(tuple(weights), tail)


def random_hyponormal(rng) -> StructuredOperator:
    """Hyponormal by construction: shifted weighted shifts, normal corners,
    and block direct sums of the two."""
    kind = rng.integers(0, 3)
    shift_part = random_weighted_shift(rng) + constant_diagonal(_complex(rng, 0.8))
    if kind == 0:
        return shift_part
    corner = random_normal_corner(rng, max_size=4)
    if kind == 1:
        return corner + embed_at(shift_part, corner.corner_size)
    return random_diagonal(rng, max_prefix=4)


def random_finite_rank(rng, max_rank: int = 3, support: int = 5) -> StructuredOperator:
    terms = []
    for _ in range(rng.integers(1, max_rank + 1)):
        n1 = int(rng.integers(1, support + 1))
        n2 = int(rng.integers(1, support + 1))
        terms.append((tuple(_complex(rng) for _ in range(n1)),
                      tuple(_complex(rng) for _ in range(n2))))
    return StructuredOperator({}, tuple(terms))


def random_normal_corner(rng, max_size: int = 5) -> StructuredOperator:
    """Finite normal matrix in the corner: unitary conjugate of a diagonal."""
    n = int(rng.integers(1, max_size + 1))
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, _ = np.linalg.qr(z)
    lam = np.array([_complex(rng, 1.5) for _ in range(n)])
    return from_dense_corner((q * lam) @ q.conj().T)


def random_an_hyponormal(rng) -> StructuredOperator:
    """Hyponormal and absolutely norm attaining by construction: a normal
    corner (zero tails keep the symbol untouched) direct-summed with a
    nondecreasing weighted shift whose symbol has constant modulus."""
    tail = rng.uniform(0.8, 2.0)
    k = int(rng.integers(0, 5))
    weights = np.sort(rng.uniform(0.0, tail, size=k))
    shift_block = weighted_shift(tuple(weights), tail)
    n = int(rng.integers(0, 4))
    if n == 0:
        return shift_block
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, _ = np.linalg.qr(z)
    moduli = np.where(rng.random(n) < 0.5,
                      rng.uniform(0.1, 0.8, n), rng.uniform(1.2, 2.5, n)) * tail
    lam = moduli * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
    corner = from_dense_corner((q * lam) @ q.conj().T)
    return corner + embed_at(shift_block, n)


def random_banded_symbol(rng, max_bandwidth: int = 2) -> StructuredOperator:
    coeffs = {}
    k = int(rng.integers(1, max_bandwidth + 1))
    for off in range(-k, k + 1):
        if rng.random() < 0.7:
            coeffs[off] = _complex(rng, 1.2)
    if not coeffs:
        coeffs[1] = 1.0 + 0j
    return toeplitz(coeffs)


# -- exact oracle for diagonal operators --------------------------------------

def diagonal_oracle(t: StructuredOperator, tol: float = 1e-8):
    """Brute-force classification of a purely diagonal operator.

    The spectrum is the prefix values plus the tail; the essential spectrum is
    the tail alone, so membership reduces to counting prefix moduli on either
    side of |tail|.
    """
    if set(t.bands) - {0} or t.rank_terms:
        raise ValueError("oracle only covers purely diagonal operators")
    desc = t.bands.get(0)
    prefix = desc.prefix if desc else ()
    tail = desc.tail if desc else 0j
    alpha = abs(tail)
    interior = [p for p in prefix if abs(p) < alpha - tol]
    annulus = [p for p in prefix if abs(p) > alpha + tol]
    return {
        "alpha": alpha,
        "an": "yes",          # finitely many prefix values below the tail level
        "am": "yes",          # and finitely many above
        "interior": sorted(interior, key=lambda z: (z.real, z.imag)),
        "annulus": sorted(annulus, key=lambda z: (z.real, z.imag)),
    }


def _points_match(points, expected, tol=1e-7):
    values = []
    for center, mult in points:
        values.extend([complex(center)] * int(mult))
    values.sort(key=lambda z: (z.real, z.imag))
    expected = sorted(expected, key=lambda z: (z.real, z.imag))
    return (len(values) == len(expected)
            and all(abs(a - b) <= tol for a, b in zip(values, expected)))


# -- suites -------------------------------------------------------------------

def suite_golden(trunc: int = 96):
    """Expected classifications of the bundled operators."""
    expected = {
        "right_shift": ("no", "yes", 1.0),
        "defect_shift": ("no", "yes", 1.0),
        "nilpotent_head_shift": ("no", "yes", 2.0),
        "diagonal_head_shift": ("no", "yes", 3.0),
        "unitary_diag": ("yes", "yes", 1.0),
        "selfadjoint_band": ("yes", "no", None),
    }
    results = []
    for name in BUNDLED:
        spec = load_bundled(name)
        report = classify(spec.operator, trunc=trunc)
        normal, an, alpha = expected[name]
        ok = (report.is_normal.value == normal and report.is_AN.value == an)
        if alpha is not None:
            ok = ok and report.alpha is not None and abs(report.alpha - alpha) < 1e-9
        ok = ok and report.is_hyponormal is not Verdict.NO
        results.append((f"golden:{name}", ok,
                        f"normal={report.is_normal} an={report.is_AN} "
                        f"alpha={report.alpha}"))
    return results


def suite_compact_hyponormal(seed: int = 0, count: int = 200, trunc: int = 64):
    """Finite-rank operators that pass the hyponormality test must be normal."""
    rng = np.random.default_rng(seed)
    results = []
    hyponormal_seen = 0
    for i in range(count):
        if i % 2 == 0:
            op = random_normal_corner(rng)
        else:
            op = random_finite_rank(rng)
        hy = check_hyponormal(op, tol=1e-10, trunc=trunc)
        if hy.verdict is not Verdict.YES:
            continue
        hyponormal_seen += 1
        nr = check_normal(op, tol=1e-8)
        if nr.verdict is not Verdict.YES:
            results.append((f"compact_hyponormal:{i}", False,
                            f"hyponormal finite-rank operator not normal: "
                            f"{nr.witness}"))
    results.append(("compact_hyponormal:summary", True,
                    f"{hyponormal_seen} hyponormal instances, 0 violations"))
    return results


def suite_putnam(seed: int = 0, count: int = 50, resolution: int = 512):
    """Commutator norm never exceeds spectral area / pi (plus raster slack)."""
    rng = np.random.default_rng(seed)
    results = []
    for name in BUNDLED:
        op = load_bundled(name).operator
        rec = putnam_check(op, resolution=resolution, assume_hyponormal=True)
        results.append((f"putnam:{name}", rec.holds,
                        f"lhs={rec.commutator_norm:.6f} rhs={rec.area_over_pi:.6f}"))
    for i in range(count):
        op = random_hyponormal(rng)
        rec = putnam_check(op, resolution=resolution, assume_hyponormal=True)
        results.append((f"putnam:random_{i}", rec.holds,
                        f"lhs={rec.commutator_norm:.6f} rhs={rec.area_over_pi:.6f}"))
    return results


def suite_diagonal_oracle(seed: int = 0, count: int = 500, trunc: int = 64):
    """Classifier verdicts on random diagonals match the exact oracle."""
    rng = np.random.default_rng(seed)
    results = []
    failures = 0
    for i in range(count):
        op = random_diagonal(rng)
        oracle = diagonal_oracle(op)
        ok = True
        detail = ""
        an = check_an(op, trunc=trunc)
        if an.verdict.value != oracle["an"] or \
                abs((an.alpha or np.inf) - oracle["alpha"]) > 1e-7:
            ok, detail = False, f"an={an.verdict} alpha={an.alpha}"
        eq = check_an_normal_equivalence(op, trunc=trunc)
        if not (eq.applicable and eq.agree and eq.an.value == oracle["an"]
                and _points_match(eq.interior_points, oracle["interior"])):
            ok, detail = False, detail + f" equivalence={eq}"
        am = check_am_normal(op, trunc=trunc)
        if not (am.applicable and am.verdict.value == oracle["am"]
                and _points_match(am.annulus_points, oracle["annulus"])):
            ok, detail = False, detail + f" am={am.verdict}"
        if not ok:
            failures += 1
            results.append((f"diagonal_oracle:{i}", False, detail))
    results.append(("diagonal_oracle:summary", failures == 0,
                    f"{count - failures}/{count} oracle matches"))
    return results


def suite_index_crossval(seed: int = 0, symbols_count: int = 20,
                         points_per_symbol: int = 5, n: int = 512):
    """Winding-based index equals truncation null-space counting."""
    rng = np.random.default_rng(seed)
    results = []
    shift = right_shift()
    cases = [("R", shift, 0j), ("R2", shift.compose(shift), 0j),
             ("R_adj", shift.adjoint(), 0j)]
    for name, op, lam in cases:
        got = fredholm_index(op, lam)
        oracle = index_by_truncation(op, lam, n)
        results.append((f"index:{name}", got == oracle,
                        f"winding-based {got}, truncation {oracle}"))
    for i in range(symbols_count):
        op = random_banded_symbol(rng)
        sym = symbol(op)
        pts = sym.on_circle(2048)
        scale = max(1.0, float(np.max(np.abs(pts))))
        found = 0
        attempts = 0
        while found < points_per_symbol and attempts < 400:
            attempts += 1
            lam = complex(rng.uniform(-1.6, 1.6), rng.uniform(-1.6, 1.6)) * scale
            if float(np.min(np.abs(pts - lam))) < 0.25 * scale:
                continue
            found += 1
            got = fredholm_index(op, lam)
            oracle = index_by_truncation(op, lam, n)
            if got != oracle:
                results.append((f"index:random_{i}", False,
                                f"lam={lam:.3f} winding {got} truncation {oracle}"))
        results.append((f"index:random_{i}", True, f"{found} points agreed"))
    return results


def suite_paranormal_pair(seed: int = 0, count: int = 20, trunc: int = 64):
    """Paranormal pairs with the AN property must be normal (both variants)."""
    rng = np.random.default_rng(seed)
    ops = [load_bundled(name).operator for name in BUNDLED]
    for _ in range(count):
        ops.append(random_diagonal(rng, max_prefix=3))
    results = []
    for i, op in enumerate(ops):
        rec = paranormal_pair_normality(op, trunc=trunc)
        ok = (rec.holds is not False) and (rec.null_variant_holds is not False)
        results.append((f"paranormal_pair:{i}", ok,
                        f"premises={rec.premises_hold} holds={rec.holds} "
                        f"null_variant={rec.null_variant_holds}"))
    return results


def suite_weyl(seed: int = 0, count: int = 10, trunc: int = 64):
    """Zero winding everywhere plus hyponormal AN forces normality."""
    rng = np.random.default_rng(seed)
    ops = [load_bundled(name).operator for name in BUNDLED]
    for _ in range(count):
        ops.append(random_diagonal(rng, max_prefix=3))
    results = []
    for i, op in enumerate(ops):
        rec = weyl_normality_criterion(op)
        ok = rec.holds is not False
        results.append((f"weyl:{i}", ok,
                        f"premises={rec.premises_ok} "
                        f"equal={rec.weyl_equals_essential} holds={rec.holds}"))
    return results


def run_all(seed: int = 0, quick: bool = True):
    """Every suite with sizes suitable for a command-line run."""
    scale = 1 if quick else 4
    out = []
    out += suite_golden()
    out += suite_compact_hyponormal(seed, count=50 * scale)
    out += suite_putnam(seed, count=5 * scale, resolution=256 if quick else 512)
    out += suite_diagonal_oracle(seed, count=60 * scale)
    out += suite_index_crossval(seed, symbols_count=4 * scale, n=256 if quick else 512)
    out += suite_paranormal_pair(seed, count=5 * scale)
    out += suite_weyl(seed, count=5 * scale)
    return out
