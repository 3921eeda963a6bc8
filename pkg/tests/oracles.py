"""Reference computations that share no code with the package."""
import numpy as np


def count_below(c, lam):
    """Eigenvalues of symmetric ``c`` below ``lam``, by sign changes of leading minors of c - lam*I."""
    a = np.asarray(c, dtype=float) - lam * np.eye(3)
    minors = [1.0, a[0, 0], a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0], np.linalg.det(a)]
    return sum(1 for x, y in zip(minors, minors[1:]) if x * y < 0)


def largest_root_bisection(c, rel=1e-15):
    """Largest root of det(c - lam*I) = 0: smallest lam with all three eigenvalues below it."""
    c = np.asarray(c, dtype=float)
    radius = np.abs(c).sum(axis=1)
    hi = float(np.max(np.diag(c) + radius - np.abs(np.diag(c)))) + 1.0
    lo = float(np.min(np.diag(c) - radius + np.abs(np.diag(c)))) - 1.0
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if count_below(c, mid) == 3:
            hi = mid
        else:
            lo = mid
        if hi - lo <= rel * max(abs(hi), 1e-300):
            break
    return 0.5 * (lo + hi)


def random_psd(rng, dim):
    b = rng.normal(size=(dim, dim))
    return b @ b.T


def rel_close_nan(a, b, rel):
    """NaN-for-NaN equality, otherwise |a-b| <= rel*max(|a|,|b|)."""
    a, b = np.asarray(a), np.asarray(b)
    nan_a, nan_b = np.isnan(a), np.isnan(b)
    if not np.array_equal(nan_a, nan_b):
        return False
    fa, fb = a[~nan_a], b[~nan_b]
    return bool(np.all(np.abs(fa - fb) <= rel * np.maximum(np.abs(fa), np.abs(fb))))
