"""Count the floating-point operations of the shipped per-point kernel.

The kernel stages are run on object arrays of :class:`CountingFloat`, so the
tally reflects exactly the arithmetic the FTLE pass executes. Both sides of
every ``np.where`` are evaluated, as in a branch-free pipeline. Comparisons,
``abs`` and per-field constants (``2|T|``) are not counted.
"""
from __future__ import annotations

import math
from collections import Counter

import numpy as np

from . import kernel
from .perfmodel import FLOPS_PER_POINT, FLOPS_SOURCE


class CountingFloat:
    __slots__ = ("v", "tally")

    def __init__(self, v, tally: Counter):
        self.v = float(v)
        self.tally = tally

    def _op(self, name, value):
        self.tally[name] += 1
        return CountingFloat(value, self.tally)

    @staticmethod
    def _val(x):
        return x.v if isinstance(x, CountingFloat) else float(x)

    def __add__(self, o): return self._op("add", self.v + self._val(o))
    def __radd__(self, o): return self._op("add", self._val(o) + self.v)
    def __sub__(self, o): return self._op("sub", self.v - self._val(o))
    def __rsub__(self, o): return self._op("sub", self._val(o) - self.v)
    def __mul__(self, o): return self._op("mul", self.v * self._val(o))
    def __rmul__(self, o): return self._op("mul", self._val(o) * self.v)
    def __truediv__(self, o): return self._op("div", self.v / self._val(o))
    def __rtruediv__(self, o): return self._op("div", self._val(o) / self.v)

    def __neg__(self): return CountingFloat(-self.v, self.tally)
    def __abs__(self): return CountingFloat(abs(self.v), self.tally)

    def __lt__(self, o): return self.v < self._val(o)
    def __le__(self, o): return self.v <= self._val(o)
    def __gt__(self, o): return self.v > self._val(o)
    def __ge__(self, o): return self.v >= self._val(o)
    def __eq__(self, o): return self.v == self._val(o)
    def __ne__(self, o): return self.v != self._val(o)
    __hash__ = None

    def __float__(self): return self.v

    # numpy dispatches ufuncs on object arrays to these methods
    def sqrt(self): return self._op("sqrt", math.sqrt(self.v))
    def log(self): return self._op("log", math.log(self.v))
    def arccos(self): return self._op("acos", math.acos(self.v))
    def cos(self): return self._op("cos", math.cos(self.v))


def _probe_record(dim: int, tally: Counter) -> kernel.PointRecord:
    # Generic nondegenerate stencil: every axis has two distinct neighbors.
    rng = np.random.default_rng(dim)
    wrap = np.vectorize(lambda x: CountingFloat(x, tally), otypes=[object])
    cm = -1.0 - rng.random(dim)
    cp = 1.0 + rng.random(dim)
    return kernel.PointRecord(
        wrap(cm), wrap(cp),
        wrap(rng.normal(size=(dim, dim))), wrap(rng.normal(size=(dim, dim))),
    )


def audit_breakdown(dim: int) -> dict[str, Counter]:
    """Per-stage operation counts for one point."""
    if dim not in (2, 3):
        raise ValueError(f"dim must be 2 or 3, got {dim}")
    stages = {}
    tally = Counter()
    rec = _probe_record(dim, tally)
    jac = kernel.gradient(rec)
    stages["gradient"], tally = tally, Counter()
    jac = _rebind(jac, tally)
    cg = kernel.cauchy_green(jac)
    stages["cauchy_green"], tally = tally, Counter()
    cg = _rebind(cg, tally)
    lam = kernel.max_eigen_sym(cg)
    stages["max_eigen"], tally = tally, Counter()
    lam = _rebind(np.asarray(lam, dtype=object), tally)
    kernel.ftle_from_lambda(lam, 1.0)
    stages["ftle"] = tally
    return stages


def _rebind(arr, tally):
    arr = np.asarray(arr, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = CountingFloat(float(x), tally)
    return out


def audit_flops(dim: int) -> int:
    """Total counted operations per point (transcendentals count 1 each)."""
    return sum(sum(c.values()) for c in audit_breakdown(dim).values())


def audit_report(dim: int) -> dict:
    stages = audit_breakdown(dim)
    return {
        "dim": dim,
        "counted_flops_per_point": sum(sum(c.values()) for c in stages.values()),
        "by_stage": {k: dict(sorted(v.items())) for k, v in stages.items()},
        "reference_flops_per_point": FLOPS_PER_POINT[dim],
        "reference_source": FLOPS_SOURCE,
    }
