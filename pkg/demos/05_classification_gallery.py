"""Classification gallery: membership tests over a spread of operators,
including the exact diagonal oracle and the paranormal-pair implication.

Run:  python demos/05_classification_gallery.py
"""

import numpy as np

import opspectra as osp
from opspectra.specfiles import BUNDLED, load_bundled
from opspectra.suites import diagonal_oracle, random_diagonal

print(f"{'operator':<22s} {'normal':>8s} {'hypo':>8s} {'para':>8s} "
      f"{'AN':>8s} {'alpha':>8s}")
gallery = {name: load_bundled(name).operator for name in BUNDLED}
gallery["adjoint shift"] = osp.right_shift().adjoint()
gallery["nilpotent corner"] = osp.from_dense_corner(
    np.array([[0.0, 0.0], [1.0, 0.0]]))

for name, op in gallery.items():
    r = osp.classify(op, trunc=64)
    alpha = f"{r.alpha:.3f}" if r.alpha is not None else "-"
    print(f"{name:<22s} {r.is_normal.value:>8s} {r.is_hyponormal.value:>8s} "
          f"{r.is_paranormal.value:>8s} {r.is_AN.value:>8s} {alpha:>8s}")

# Diagonals admit an exact oracle: the spectrum is the prefix plus the tail,
# so interior/annulus point counts are pure bookkeeping.
print("\ndiagonal oracle spot check (seeded):")
rng = np.random.default_rng(0)
for i in range(4):
    op = random_diagonal(rng, max_prefix=4)
    oracle = diagonal_oracle(op)
    eq = osp.check_an_normal_equivalence(op, trunc=64)
    print(f"  sample {i}: alpha={oracle['alpha']:.3f} "
          f"interior oracle={len(oracle['interior'])} "
          f"checker={sum(m for _, m in eq.interior_points)} "
          f"agree={eq.agree}")

# If T and its adjoint are both paranormal and T is AN, normality follows.
print("\nparanormal-pair implication:")
for name in ("unitary_diag", "right_shift"):
    rec = osp.paranormal_pair_normality(gallery[name], trunc=64)
    status = ("premises hold, normality confirmed" if rec.holds
              else "vacuous (premises fail)")
    print(f"  {name}: {status}")
