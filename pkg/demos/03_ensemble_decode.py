"""Fuse the two classifier heads and decode a per-frame stream into text.

The landmark forest scores 28 classes (A-Z, SPACE, DELETE) and the
silhouette CNN scores 27 (A-Z, BLANK). Both are projected onto the shared
29-class space, mixed as w*rfc + (1-w)*cnn, and the winning weight is found
by grid search. The second half runs the k-stability decoder on a frame
stream with deliberate jitter, a DELETE, and a BLANK gap.
"""
import numpy as np

from signpipe import ensemble
from signpipe.labels import SHARED_CLASSES
from signpipe.rng import substream

SEED = 17
rng = substream(SEED, "demo")


def one_hot(n, idx, smear, rng):
    """Peaked distribution with `smear` probability spread at random."""
    p = rng.uniform(0, 1, n)
    p = smear * p / p.sum()
    p[idx] += 1.0 - smear
    return p


# ---- 1. synthetic validation pairs with complementary error patterns ------
# the forest errs weakly on the first 5 letters while the CNN is confidently
# right there, and vice versa for the last 5, so a mixed weight should beat
# both endpoints
n, n_letters = 400, 26
y = rng.integers(0, n_letters, n)
p_rfc = np.zeros((n, 28))
p_cnn = np.zeros((n, 27))
for i, cls in enumerate(y):
    cls = int(cls)
    wrong = int((cls + 1 + rng.integers(0, n_letters - 1)) % n_letters)
    if cls < 5:
        p_rfc[i] = one_hot(28, wrong, 0.45, rng)   # weakly wrong
        p_cnn[i] = one_hot(27, cls, 0.10, rng)     # confidently right
    elif cls >= 21:
        p_rfc[i] = one_hot(28, cls, 0.10, rng)
        p_cnn[i] = one_hot(27, wrong, 0.45, rng)
    else:
        p_rfc[i] = one_hot(28, cls, 0.10, rng)
        p_cnn[i] = one_hot(27, cls, 0.10, rng)

weights, grid_accs = ensemble.optimize_weights(p_rfc, p_cnn, y)
print("accuracy across the weight grid (w_rfc from 0.0 to 1.0):")
for w, acc in zip(ensemble.WEIGHT_GRID, grid_accs):
    bar = "#" * int(acc * 40)
    print(f"  w_rfc={w:.2f} acc={acc:.3f} {bar}")
print(f"chosen w_rfc={weights.w_rfc:.2f}, "
      f"beats rfc-only {grid_accs[-1]:.3f} and cnn-only {grid_accs[0]:.3f}")

# ---- 2. fuse one frame by hand to show the arithmetic ---------------------
combined = ensemble.combine(
    ensemble.project_rfc(p_rfc[:1]), ensemble.project_cnn(p_cnn[:1]), weights
)
top = np.argsort(combined[0])[::-1][:3]
print("one fused frame:",
      ", ".join(f"{SHARED_CLASSES[i]}={combined[0][i]:.2f}" for i in top))

# ---- 3. decode a frame stream with the k-stability rule -------------------
# H I SPACE, a wrong letter removed by DELETE, then a BLANK gap and H I again
def frames(label, count):
    return [label] * count


stream = (
    frames("H", 4) + frames("I", 5) + frames("J", 2)   # J never stabilizes
    + frames("SPACE", 4)
    + frames("Q", 4) + frames("DELETE", 4)             # typo erased
    + frames("BLANK", 6)
    + frames("H", 4) + frames("I", 4)                  # repeat after reset
)
decoded = ensemble.decode_stream(stream, ensemble.StreamDecodeConfig(k=3))
print(f"stream of {len(stream)} frames decodes to {decoded!r}")
assert decoded == "HI HI"
