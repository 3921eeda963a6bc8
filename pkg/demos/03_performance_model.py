# %% [markdown]
# # How fast could the FTLE pipeline run?
#
# The per-point core is a fully pipelined circuit with initiation interval 1,
# so its throughput is the clock rate unless memory cannot supply
# 112 bytes (2D) or 168 bytes (3D) per point. This script rebuilds the
# bandwidth and feasibility tables and shows where each memory system lands.

# %%
from ftlestream import flops, perfmodel, pipeline
from ftlestream.cli import _table1_text, _table2_text

print(_table1_text(perfmodel.table1()))
print()
print(_table2_text(perfmodel.table2()))

# %% Naive, bank-limited design: one read per bank per cycle
for dim, (values, indexes, freq) in {2: (12, 4, 500e6), 3: (18, 6, 357e6)}.items():
    ppc, pps = pipeline.naive_throughput(values, indexes, 4, freq)
    print(f"{dim}D naive on 4 banks: {ppc:.4f} points/cycle, {pps / 1e6:.1f} M points/s")

# %% Pipelined design against every catalogued memory system
for dim in (2, 3):
    cfg = pipeline.AcceleratorConfig.default(dim)
    for name, tech in perfmodel.CATALOG.items():
        rate, bound = pipeline.pipelined_throughput(cfg, tech.system())
        print(f"{dim}D {name:>14}: {rate / 1e6:7.1f} M points/s ({bound})")

# %% Random access rarely reaches peak; sweep the pattern efficiency
cfg = pipeline.AcceleratorConfig.default(2, 300e6)
tech = perfmodel.get_tech("4ch-ddr4-2400")
for eff in (1.0, 0.75, 0.5, 0.25):
    rate, bound = pipeline.pipelined_throughput(cfg, tech.system(eff))
    print(f"efficiency {eff:4.2f}: {rate / 1e6:6.1f} M points/s ({bound})")

# %% GFLOPS and the counted operations of the shipped kernel
for dim, freq in ((2, 500e6), (3, 357e6)):
    print(f"{dim}D: {perfmodel.gflops(perfmodel.FLOPS_PER_POINT[dim], freq):.1f} GFLOPS "
          f"at {perfmodel.FLOPS_PER_POINT[dim]} flops/point ({perfmodel.FLOPS_SOURCE}); "
          f"counted in this kernel: {flops.audit_flops(dim)}")
