"""Analytic throughput of the bank-limited naive design and the II=1 pipeline.

The naive design issues one memory read per bank per cycle, so a point that
needs ``v`` values and ``i`` indexes occupies ``ceil((v + i) / banks)``
cycles. The pipelined design accepts a point every ``ii`` cycles unless the
memory system cannot deliver ``(data_bits + index_bits) / 8`` bytes that
fast.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

COMPUTE = "compute"
MEMORY = "memory"

BANK_NOTE = ("naive model: one memory read per bank per cycle; "
             "cycles/point = ceil((values + indexes) / banks)")


@dataclass(frozen=True)
class AcceleratorConfig:
    dim: int
    freq_hz: float
    ii: int = 1
    latency_cycles: int = 0
    data_bits_per_point: int = 768
    index_bits_per_point: int = 128

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {self.dim}")
        if not self.freq_hz > 0:
            raise ValueError("freq_hz must be positive")
        if self.ii < 1:
            raise ValueError("ii must be >= 1")
        for bits in (self.data_bits_per_point, self.index_bits_per_point):
            if bits <= 0 or bits % 8:
                raise ValueError(f"bit count {bits} must be a positive multiple of 8")

    @classmethod
    def default(cls, dim: int, freq_hz: float | None = None) -> "AcceleratorConfig":
        """Synthesis-reported defaults (max frequency, II 1, latency, input widths)."""
        if dim == 2:
            return cls(2, freq_hz or 500e6, 1, 264, 768, 128)
        if dim == 3:
            return cls(3, freq_hz or 357e6, 1, 421, 1152, 192)
        raise ValueError(f"dim must be 2 or 3, got {dim}")

    @property
    def bytes_per_point(self) -> float:
        return (self.data_bits_per_point + self.index_bits_per_point) / 8


@dataclass(frozen=True)
class MemorySystem:
    name: str
    peak_bytes_per_sec: float
    banks: int = 1
    pattern_efficiency: float = 1.0
    reads_per_bank_per_cycle: int = 1

    def __post_init__(self):
        if not self.peak_bytes_per_sec > 0:
            raise ValueError("peak bandwidth must be positive")
        if self.banks < 1:
            raise ValueError("banks must be >= 1")
        if not 0 < self.pattern_efficiency <= 1:
            raise ValueError("pattern_efficiency must lie in (0, 1]")

    @property
    def effective_bytes_per_sec(self) -> float:
        return self.peak_bytes_per_sec * self.pattern_efficiency


def naive_cycles_per_point(values_per_point: int, indexes_per_point: int, banks: int) -> int:
    if banks <= 0:
        raise ValueError("banks must be positive")
    if values_per_point < 0 or indexes_per_point < 0 or values_per_point + indexes_per_point == 0:
        raise ValueError("reads per point must be positive")
    return math.ceil((values_per_point + indexes_per_point) / banks)


def naive_throughput(values_per_point, indexes_per_point, banks, freq_hz):
    """Return ``(points_per_cycle, points_per_sec)`` for the bank-limited design."""
    if freq_hz <= 0:
        raise ValueError("freq_hz must be positive")
    cycles = naive_cycles_per_point(values_per_point, indexes_per_point, banks)
    return 1 / cycles, freq_hz / cycles


def pipelined_throughput(cfg: AcceleratorConfig, mem: MemorySystem) -> tuple[float, str]:
    """Return ``(points_per_sec, bound)``; ties count as compute-bound."""
    compute_rate = cfg.freq_hz / cfg.ii
    memory_rate = mem.effective_bytes_per_sec / cfg.bytes_per_point
    if compute_rate <= memory_rate:
        return compute_rate, COMPUTE
    return memory_rate, MEMORY


def estimate_runtime(n_points, rate_points_per_sec, latency_cycles, freq_hz) -> float:
    """Pipeline fill latency plus streaming time, in seconds."""
    if rate_points_per_sec <= 0 or freq_hz <= 0:
        raise ValueError("rate and frequency must be positive")
    return latency_cycles / freq_hz + n_points / rate_points_per_sec


def simulate(cfg: AcceleratorConfig, mem: MemorySystem) -> dict:
    """JSON-ready throughput record for both architectures on ``mem``."""
    rate, bound = pipelined_throughput(cfg, mem)
    values = cfg.data_bits_per_point // 64
    indexes = cfg.index_bits_per_point // 32
    naive_ppc, naive_rate = naive_throughput(values, indexes, mem.banks, cfg.freq_hz)
    return {
        "dim": cfg.dim,
        "freq_hz": cfg.freq_hz,
        "memory": mem.name,
        "efficiency": mem.pattern_efficiency,
        "rate": rate,
        "bound": bound,
        "cycles_per_point": cfg.freq_hz / rate,
        "bytes_per_point": cfg.bytes_per_point,
        "naive": {
            "rate": naive_rate,
            "points_per_cycle": naive_ppc,
            "cycles_per_point": naive_cycles_per_point(values, indexes, mem.banks),
            "banks": mem.banks,
        },
        "notes": [BANK_NOTE],
    }
