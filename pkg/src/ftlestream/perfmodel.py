"""Bandwidth, feasibility and GFLOPS figures for the HLS FTLE kernels.

Bandwidth rows and feasibility percentages are recomputed from first
principles; resource and power figures are stored as reported, never derived.
GB means 1e9 bytes throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType

from .pipeline import AcceleratorConfig, MemorySystem


@dataclass(frozen=True)
class MemoryTech:
    name: str
    label: str
    peak_gbps: float
    banks: int

    def system(self, efficiency: float = 1.0) -> MemorySystem:
        return MemorySystem(self.name, self.peak_gbps * 1e9, self.banks, efficiency)


CATALOG = MappingProxyType({
    t.name: t
    for t in (
        MemoryTech("1ch-ddr4-2400", "1 channel DDR4-2400", 19.2, 1),
        MemoryTech("1ch-ddr4-2666", "1 channel DDR4-2666", 21.3, 1),
        MemoryTech("2ch-ddr4-2400", "2 channel DDR4-2400", 38.4, 2),
        MemoryTech("2ch-ddr4-2666", "2 channel DDR4-2666", 42.6, 2),
        MemoryTech("4ch-ddr4-2400", "4 channel DDR4-2400", 76.8, 4),
        MemoryTech("hbm-1stack", "1 stack HBM", 230.0, 1),
        MemoryTech("hbm-2stack", "2 stack HBM", 460.0, 2),
    )
})


def get_tech(name: str) -> MemoryTech:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown memory technology {name!r}; choose from {sorted(CATALOG)}") from None


@dataclass(frozen=True)
class SynthesisReference:
    max_freq_mhz: float
    latency: int
    data_bits: int
    index_bits: int
    lut: int
    lutram: int
    ff: int
    dsp: int
    bram: int
    power_w: float


# Reported synthesis results (xcvu11p); reproduced verbatim, not computed.
SYNTHESIS = MappingProxyType({
    2: SynthesisReference(500, 264, 768, 128, 29323, 1797, 49677, 250, 0, 8.1),
    3: SynthesisReference(357, 421, 1152, 192, 134519, 5679, 139912, 1012, 1, 21.17),
})

# Bandwidth cells as printed, for side-by-side comparison.
REPORTED_BANDWIDTH = MappingProxyType({
    (2, "max"): (48.0, 8.0), (3, "max"): (51.4, 8.6),
    (2, 300): (28.8, 4.8), (3, 300): (43.2, 7.2),
})

SCENARIOS = ((2, "max"), (3, "max"), (2, 300), (3, 300))
SCENARIO_LABELS = ("2D max freq", "3D max freq", "2D 300 MHz", "3D 300 MHz")

REPORTED_DESIRED = (56.0, 60.0, 33.6, 50.4)
REPORTED_FEASIBILITY = MappingProxyType({
    "1ch-ddr4-2400": (34, 32, 57, 38),
    "1ch-ddr4-2666": (38, 36, 63, 59),
    "2ch-ddr4-2400": (69, 64, 114, 76),
    "2ch-ddr4-2666": (76, 71, 127, 85),
    "4ch-ddr4-2400": (137, 128, 229, 152),
    "hbm-1stack": (410, 383, 685, 456),
    "hbm-2stack": (820, 767, 1369, 912),
})
# Printed 59%; 21.3 / 50.4 is 42%.
ERRATA = MappingProxyType({
    ("1ch-ddr4-2666", "3D 300 MHz"):
        "reported 59% but 21.3/50.4 GB/s = 42%; the reported value is a typo",
})

# Per-point FLOPs backed out of the reported GFLOPS totals at II=1.
FLOPS_PER_POINT = MappingProxyType({2: 49.2, 3: 173.1})
FLOPS_SOURCE = "derived from reported totals (reported GFLOPS / max frequency)"
REPORTED_GFLOPS = MappingProxyType({2: 24.6, 3: 61.8})


def scenario_config(dim: int, freq) -> AcceleratorConfig:
    ref = SYNTHESIS[dim]
    hz = ref.max_freq_mhz * 1e6 if freq == "max" else freq * 1e6
    return AcceleratorConfig(dim, hz, 1, ref.latency, ref.data_bits, ref.index_bits)


def required_bandwidth(data_bits, index_bits, freq_hz, ndigits: int | None = 1):
    """``(data_gbps, index_gbps)`` needed to feed one point per cycle."""
    if data_bits <= 0 or index_bits <= 0 or freq_hz <= 0:
        raise ValueError("inputs must be positive")
    data = data_bits * freq_hz / 8 / 1e9
    index = index_bits * freq_hz / 8 / 1e9
    if ndigits is None:
        return data, index
    return round(data, ndigits), round(index, ndigits)


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def percent(absolute: float, desired: float) -> int:
    return round_half_up(100 * absolute / desired)


def desired_bandwidths() -> tuple[float, ...]:
    """Per-scenario total input bandwidth (GB/s), as the sum of the rounded rows."""
    out = []
    for dim, freq in SCENARIOS:
        cfg = scenario_config(dim, freq)
        d, i = required_bandwidth(cfg.data_bits_per_point, cfg.index_bits_per_point, cfg.freq_hz)
        out.append(round(d + i, 1))
    return tuple(out)


def feasibility_table(catalog=CATALOG, desired=None) -> dict[str, tuple[int, ...]]:
    """Percentage of each scenario's desired bandwidth that each technology provides."""
    desired = desired_bandwidths() if desired is None else tuple(desired)
    if any(d <= 0 for d in desired):
        raise ValueError("desired bandwidths must be positive")
    return {name: tuple(percent(t.peak_gbps, d) for d in desired) for name, t in catalog.items()}


def gflops(flops_per_point: float, freq_hz: float) -> float:
    if flops_per_point <= 0 or freq_hz <= 0:
        raise ValueError("inputs must be positive")
    return flops_per_point * freq_hz / 1e9


def table1() -> dict:
    """Rows of the synthesis table; bandwidth recomputed, the rest reported."""
    cols = {}
    for dim in (2, 3):
        ref = SYNTHESIS[dim]
        cfg_max = scenario_config(dim, "max")
        cols[f"{dim}D"] = {
            "max_freq_mhz": ref.max_freq_mhz,
            "latency_cycles": ref.latency,
            "input_bits_per_cycle": [ref.data_bits, ref.index_bits],
            "bandwidth_max_freq_gbps": list(required_bandwidth(ref.data_bits, ref.index_bits, cfg_max.freq_hz)),
            "bandwidth_300mhz_gbps": list(required_bandwidth(ref.data_bits, ref.index_bits, 300e6)),
            "gflops": round(gflops(FLOPS_PER_POINT[dim], cfg_max.freq_hz), 2),
            "flops_per_point": FLOPS_PER_POINT[dim],
            "reported": {
                "lut": ref.lut, "lutram": ref.lutram, "ff": ref.ff,
                "dsp": ref.dsp, "bram": ref.bram, "power_w": ref.power_w,
            },
        }
    return {
        "columns": cols,
        "notes": [
            "bandwidth rows computed as bits * freq / 8 / 1e9 (GB = 1e9 bytes)",
            "LUT/LUTRAM/FF/DSP/BRAM/power: reported, not computed",
            f"flops_per_point: {FLOPS_SOURCE}",
        ],
    }


def table2() -> dict:
    desired = desired_bandwidths()
    grid = feasibility_table(CATALOG, desired)
    rows = []
    for name, cells in grid.items():
        flags = {}
        for label, cell, reported in zip(SCENARIO_LABELS, cells, REPORTED_FEASIBILITY[name]):
            if (name, label) in ERRATA:
                flags[label] = ERRATA[(name, label)]
            elif abs(cell - reported) > 1:
                flags[label] = f"differs from reported {reported}%"
        rows.append({
            "name": name,
            "label": CATALOG[name].label,
            "absolute_gbps": CATALOG[name].peak_gbps,
            "percent": dict(zip(SCENARIO_LABELS, cells)),
            "reported_percent": dict(zip(SCENARIO_LABELS, REPORTED_FEASIBILITY[name])),
            "flags": flags,
        })
    return {"desired_gbps": dict(zip(SCENARIO_LABELS, desired)), "rows": rows,
            "notes": ["cell = round(100 * absolute / desired), half up"]}
