"""Command-line entry point: ``ftlestream {gen,neighbors,ftle,model,simulate}``.

Exit codes: 0 success, 1 validation failure, 2 I/O or format failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import flops, io, kernel, mesh as meshmod, perfmodel, pipeline
from .errors import FormatError, ValidationError
from .generate import grid_mesh, grid_side, identity_flow, linear_flow, random_flow, random_mesh
from .manifest import RunManifest

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2


def warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _threads(args) -> int:
    if args.threads is not None:
        n = args.threads
    else:
        n = int(os.environ.get("FTLE_THREADS", "1"))
    if n < 1:
        raise ValidationError("--threads must be >= 1")
    return n


def _emit(obj, fmt: str, text: str | None = None, csv: str | None = None) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2))
    elif fmt == "csv" and csv is not None:
        print(csv, end="")
    else:
        print(text if text is not None else json.dumps(obj, indent=2))


def _manifest_path(out) -> Path:
    out = Path(out)
    return out.with_name(out.name + ".manifest.json")


# -- gen ----------------------------------------------------------------------

def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.kind == "grid":
        m = grid_mesh(args.dim, grid_side(args.n, args.dim), spacing=args.spacing)
    else:
        m = random_mesh(args.dim, args.n, rng)
    if args.flow == "identity":
        fm = identity_flow(m)
    elif args.flow == "linear":
        if args.matrix is None:
            raise ValidationError("--flow linear requires --matrix")
        vals = [float(v) for v in args.matrix.split(",")]
        if len(vals) != m.dim * m.dim:
            raise ValidationError(f"--matrix needs {m.dim * m.dim} values, got {len(vals)}")
        fm = linear_flow(m, np.reshape(vals, (m.dim, m.dim)))
    else:
        fm = random_flow(m, rng)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ext = ".csv" if args.format == "csv" else ".ftle"
    man = RunManifest("gen", {k: v for k, v in vars(args).items() if k != "func"})
    with man.timed():
        mesh_path, fm_path = out / f"mesh{ext}", out / f"flowmap{ext}"
        io.save_mesh(mesh_path, m)
        io.save_flowmap(fm_path, fm)
    man.add_output(mesh_path)
    man.add_output(fm_path)
    man.write(out / "manifest.json")
    print(json.dumps({"mesh": str(mesh_path), "flowmap": str(fm_path),
                      "n_points": m.n_points, "n_faces": m.n_faces}))
    return EXIT_OK


# -- neighbors ------------------------------------------------------------------

def cmd_neighbors(args) -> int:
    man = RunManifest("neighbors", {"threads": _threads(args)})
    man.add_input(args.mesh)
    with man.timed():
        m = io.load_mesh(args.mesh)
        if m.n_faces == 0:
            warn("mesh has no faces; every neighbor entry will be -1")
        nl = meshmod.precompute_neighbors(m, threads=_threads(args))
        io.save_neighbors(args.out, nl)
    man.add_output(args.out)
    man.write(_manifest_path(args.out))
    print(json.dumps({"out": str(args.out), "n_points": nl.n_points,
                      "missing_per_slot": nl.missing_counts()}))
    return EXIT_OK


# -- ftle -------------------------------------------------------------------------

def cmd_ftle(args) -> int:
    threads = _threads(args)
    man = RunManifest("ftle", {"mode": args.mode, "t_horizon": args.t_horizon, "threads": threads})
    for p in (args.mesh, args.flowmap, args.neighbors):
        if p is not None:
            man.add_input(p)
    with man.timed():
        m = io.load_mesh(args.mesh)
        fm = io.load_flowmap(args.flowmap, args.t_horizon)
        fm.check_matches(m)
        if args.mode == "naive":
            if args.neighbors:
                warn("naive mode ignores --neighbors")
            field = kernel.compute_ftle_naive(m, fm)
        else:
            if args.neighbors:
                nl = io.load_neighbors(args.neighbors)
                violations = meshmod.validate_neighbor_list(m, nl)
                if violations:
                    raise ValidationError(
                        f"{args.neighbors}: {len(violations)} invalid neighbor entries, "
                        f"first: point {violations[0].point}: {violations[0].message}"
                    )
            else:
                warn("no --neighbors given; precomputing them now")
                nl = meshmod.precompute_neighbors(m, threads=threads)
            field = kernel.compute_ftle_decoupled(m, fm, nl, threads=threads)
        io.save_field(args.out, field, dim=m.dim)
    man.add_output(args.out)
    man.write(_manifest_path(args.out))
    finite = field[np.isfinite(field)]
    stats = {"out": str(args.out), "n_points": int(field.size), "n_nan": int(field.size - finite.size)}
    if finite.size:
        stats.update(min=float(finite.min()), max=float(finite.max()), mean=float(finite.mean()))
    print(json.dumps(stats))
    return EXIT_OK


# -- model / simulate ---------------------------------------------------------------

def _table1_text(t) -> str:
    c2, c3 = t["columns"]["2D"], t["columns"]["3D"]
    rows = [
        ("Max Freq (MHz)", c2["max_freq_mhz"], c3["max_freq_mhz"]),
        ("Latency / cycles", c2["latency_cycles"], c3["latency_cycles"]),
        ("Input bandwidth (bits/cycle)", "%d+%d" % tuple(c2["input_bits_per_cycle"]),
         "%d+%d" % tuple(c3["input_bits_per_cycle"])),
        ("Input bandwidth for max freq (GB/s)", "%g+%g" % tuple(c2["bandwidth_max_freq_gbps"]),
         "%g+%g" % tuple(c3["bandwidth_max_freq_gbps"])),
        ("Input bandwidth for 300 MHz (GB/s)", "%g+%g" % tuple(c2["bandwidth_300mhz_gbps"]),
         "%g+%g" % tuple(c3["bandwidth_300mhz_gbps"])),
        ("GFLOPS (II=1, max freq)", c2["gflops"], c3["gflops"]),
    ]
    for key, label in (("lut", "LUT"), ("lutram", "LUTRAM"), ("ff", "FF"), ("dsp", "DSP"),
                       ("bram", "BRAM"), ("power_w", "Power consumption (W)")):
        rows.append((label + " [reported, not computed]", c2["reported"][key], c3["reported"][key]))
    lines = [f"{'':46}{'2D':>14}{'3D':>14}"]
    lines += [f"{name:46}{str(a):>14}{str(b):>14}" for name, a, b in rows]
    lines += [f"# {n}" for n in t["notes"]]
    return "\n".join(lines)


def _table1_csv(t) -> str:
    out = ["row,2D,3D"]
    c2, c3 = t["columns"]["2D"], t["columns"]["3D"]
    for key in ("max_freq_mhz", "latency_cycles", "gflops", "flops_per_point"):
        out.append(f"{key},{c2[key]},{c3[key]}")
    for key in ("input_bits_per_cycle", "bandwidth_max_freq_gbps", "bandwidth_300mhz_gbps"):
        out.append(f"{key}_data,{c2[key][0]},{c3[key][0]}")
        out.append(f"{key}_index,{c2[key][1]},{c3[key][1]}")
    for key in c2["reported"]:
        out.append(f"reported_{key},{c2['reported'][key]},{c3['reported'][key]}")
    return "\n".join(out) + "\n"


def _table2_text(t) -> str:
    labels = list(t["desired_gbps"])
    head = f"{'':24}{'Absolute BW':>12}" + "".join(f"{lab:>14}" for lab in labels)
    lines = [head, f"{'Desired bandwidth':24}{'':>12}" + "".join(
        f"{t['desired_gbps'][lab]:>7g} (100%)" for lab in labels)]
    for row in t["rows"]:
        cells = "".join(
            f"{str(row['percent'][lab]) + '%' + ('*' if lab in row['flags'] else ''):>14}"
            for lab in labels)
        lines.append(f"{row['label']:24}{row['absolute_gbps']:>12g}{cells}")
    for row in t["rows"]:
        for lab, msg in row["flags"].items():
            lines.append(f"* {row['label']}, {lab}: {msg}")
    lines += [f"# {n}" for n in t["notes"]]
    return "\n".join(lines)


def _table2_csv(t) -> str:
    labels = list(t["desired_gbps"])
    out = ["name,absolute_gbps," + ",".join(labels) + ",flags"]
    for row in t["rows"]:
        flags = "; ".join(f"{k}: {v}" for k, v in row["flags"].items())
        out.append(f"{row['name']},{row['absolute_gbps']},"
                   + ",".join(str(row["percent"][lab]) for lab in labels) + f",\"{flags}\"")
    return "\n".join(out) + "\n"


def cmd_model(args) -> int:
    if args.table == "1":
        t = perfmodel.table1()
        t["flop_audit"] = {f"{d}D": flops.audit_report(d) for d in (2, 3)}
        _emit(t, args.format, _table1_text(t), _table1_csv(t))
    else:
        t = perfmodel.table2()
        _emit(t, args.format, _table2_text(t), _table2_csv(t))
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        tech = perfmodel.get_tech(args.mem)
    except KeyError as exc:
        raise ValidationError(exc.args[0]) from None
    cfg = pipeline.AcceleratorConfig.default(args.dim, args.freq)
    mem = tech.system(args.efficiency)
    if args.banks is not None:
        mem = pipeline.MemorySystem(mem.name, mem.peak_bytes_per_sec, args.banks, mem.pattern_efficiency)
    rec = pipeline.simulate(cfg, mem)
    if args.points is not None:
        rec["runtime_s"] = pipeline.estimate_runtime(args.points, rec["rate"], cfg.latency_cycles, cfg.freq_hz)
    text = (f"dim={cfg.dim} freq={cfg.freq_hz:g} Hz mem={mem.name} eff={mem.pattern_efficiency:g}\n"
            f"pipelined: {rec['rate']:.6g} points/s ({rec['bound']}-bound), "
            f"{rec['cycles_per_point']:.4g} cycles/point\n"
            f"naive ({mem.banks} banks): {rec['naive']['rate']:.6g} points/s, "
            f"{rec['naive']['points_per_cycle']:.4g} points/cycle\n# {pipeline.BANK_NOTE}")
    csv = ("rate,bound,cycles_per_point\n"
           f"{rec['rate']!r},{rec['bound']},{rec['cycles_per_point']!r}\n")
    _emit(rec, args.format, text, csv)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

def _unit_interval(s: str) -> float:
    v = float(s)
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError("efficiency must lie in (0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ftlestream", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a synthetic mesh and flow map")
    g.add_argument("--kind", choices=["grid", "random"], default="grid")
    g.add_argument("--dim", type=int, choices=[2, 3], default=2)
    g.add_argument("--n", type=int, required=True, help="number of points")
    g.add_argument("--flow", choices=["identity", "linear", "random"], default="identity")
    g.add_argument("--matrix", help="row-major comma-separated matrix for --flow linear")
    g.add_argument("--spacing", type=float, default=1.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=["binary", "csv"], default="binary")
    g.add_argument("--out", required=True, help="output directory")
    g.set_defaults(func=cmd_gen)

    n = sub.add_parser("neighbors", help="precompute the neighbor index list")
    n.add_argument("mesh")
    n.add_argument("--out", required=True)
    n.add_argument("--threads", type=int)
    n.set_defaults(func=cmd_neighbors)

    f = sub.add_parser("ftle", help="compute the FTLE field")
    f.add_argument("mesh")
    f.add_argument("flowmap")
    f.add_argument("--neighbors")
    f.add_argument("--t-horizon", type=float, default=1.0)
    f.add_argument("--mode", choices=["decoupled", "naive"], default="decoupled")
    f.add_argument("--out", required=True)
    f.add_argument("--threads", type=int)
    f.set_defaults(func=cmd_ftle)

    m = sub.add_parser("model", help="reconstruct the synthesis and bandwidth tables")
    m.add_argument("table", choices=["table1", "table2", "1", "2"])
    m.add_argument("--format", choices=["text", "csv", "json"], default="json")
    m.set_defaults(func=cmd_model)

    s = sub.add_parser("simulate", help="throughput of the naive and pipelined designs")
    s.add_argument("--dim", type=int, choices=[2, 3], default=2)
    s.add_argument("--freq", type=float, help="clock in Hz (default: reported max)")
    s.add_argument("--mem", default="4ch-ddr4-2400", help=f"one of {', '.join(perfmodel.CATALOG)}")
    s.add_argument("--efficiency", type=_unit_interval, default=1.0)
    s.add_argument("--banks", type=int, help="override bank count of --mem for the naive model")
    s.add_argument("--points", type=int, help="also estimate runtime for this many points")
    s.add_argument("--format", choices=["text", "csv", "json"], default="json")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "table", None) in ("table1", "table2"):
        args.table = args.table[-1]
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
