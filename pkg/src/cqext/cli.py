"""Command-line driver: every capability as a subcommand with JSON/CSV output.

Subcommands: discord | scatter | curve | extend | bound | table1 | search |
mdss | genuine.  Each invocation writes its outputs plus a manifest
(`<primary>.manifest.json`) recording the command, full configuration, seed,
input hashes and output paths.  Exit codes: 0 success, 2 validation error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import replace
import hashlib
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .linalg import save_matrix
from .states import (
    FAMILY_NAMES,
    ProductEnsemble,
    family_state,
    haar_two_qubit,
    load_ensemble,
    load_state,
    save_state,
    state_to_json,
    w_set,
    z_set,
)
from .correlations import (
    DEFAULT_OPT,
    FAST_OPT,
    MeasurementOptConfig,
    discord_alpha_analytic,
    eof,
    profile,
)
from .extension import (
    ancilla_diagnostics,
    bound_cc,
    bound_range,
    bound_report,
    liluo_extend,
    reduction,
    table1,
    verify_cq,
)
from .search import AnnealConfig, anneal, assemble
from .mdss import check_mub, check_sic, mub_family, rho_max_d, rho_tilde_max_d, sic_from_fiducial, sic_tetrahedron
from .states import ket_from_json
from .genuine import correlation_matrix, is_genuinely_quantum


def _sig(x: float) -> float:
    """Round to 12 significant digits for stable, readable output."""
    return float(f"{float(x):.12g}")


def _sig_tree(obj):
    if isinstance(obj, float):
        return _sig(obj)
    if isinstance(obj, dict):
        return {k: _sig_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sig_tree(v) for v in obj]
    return obj


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def _write_manifest(primary: Path, command: str, config: dict, seed, inputs, outputs) -> None:
    manifest = {
        "command": command,
        "config": _sig_tree(config),
        "seed": seed,
        "inputs": {str(p): _sha256(Path(p)) for p in inputs},
        "outputs": [str(p) for p in outputs],
    }
    Path(str(primary) + ".manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(_sig_tree(obj), indent=1) + "\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])
    path.write_text(buf.getvalue())


def _opt_cfg(args) -> MeasurementOptConfig:
    return MeasurementOptConfig(
        coarse_grid=args.coarse_grid,
        refine_iters=args.refine_iters,
        refine_shrink=args.refine_shrink,
        restarts=args.restarts,
        seed=args.seed,
    )


def _add_opt_flags(p: argparse.ArgumentParser, coarse=48, refine=25, restarts=3) -> None:
    p.add_argument("--coarse-grid", type=int, default=coarse)
    p.add_argument("--refine-iters", type=int, default=refine)
    p.add_argument("--refine-shrink", type=float, default=0.5)
    p.add_argument("--restarts", type=int, default=restarts)
    p.add_argument("--seed", type=int, default=0)


def _load_input_state(args):
    if args.file is not None:
        return load_state(args.file), [args.file]
    if args.family is None:
        raise ValueError("provide either --file or --family")
    return family_state(args.family, args.param), []


# --- subcommands -----------------------------------------------------------------

def cmd_discord(args) -> int:
    rho, inputs = _load_input_state(args)
    prof = profile(rho, args.side, _opt_cfg(args))
    out = Path(args.out)
    _write_json(out, prof.as_dict())
    _write_manifest(out, "discord", _config(args), args.seed, inputs, [out])
    print(json.dumps(_sig_tree(prof.as_dict())))
    return 0


def cmd_scatter(args) -> int:
    ranks = [int(r) for r in args.ranks.split(",")]
    if args.per_rank < 1 or any(r < 1 or r > 4 for r in ranks):
        raise ValueError("per-rank must be >= 1 and ranks within 1..4")
    cfg = _opt_cfg(args)
    rows = []
    for rank in ranks:
        rng = np.random.default_rng((args.seed, rank))
        for _ in range(args.per_rank):
            rho = haar_two_qubit(rank, rng)
            prof = profile(rho, "a", cfg)
            rows.append((rank, _sig(prof.eof), _sig(prof.discord)))
    out = Path(args.out)
    _write_csv(out, ["rank", "eof", "discord"], rows)
    _write_manifest(out, "scatter", _config(args), args.seed, [], [out])
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def cmd_curve(args) -> int:
    grid = np.linspace(args.start, args.stop, args.points)
    cfg = _opt_cfg(args)
    rows = []
    for p in grid:
        rho = family_state(args.family, float(p))
        prof = profile(rho, "a", cfg)
        row = [_sig(float(p)), _sig(prof.discord), _sig(prof.eof)]
        if args.family == "alpha":
            row.append(_sig(discord_alpha_analytic(float(p))))
        rows.append(row)
    header = ["param", "discord", "eof"] + (["discord_analytic"] if args.family == "alpha" else [])
    out = Path(args.out)
    _write_csv(out, header, rows)
    _write_manifest(out, "curve", _config(args), args.seed, [], [out])
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def cmd_extend(args) -> int:
    inputs = []
    if args.file is not None:
        ensemble = load_ensemble(args.file)
        inputs.append(args.file)
    elif args.builtin == "z":
        ensemble = z_set()
    elif args.builtin == "w":
        ensemble = w_set()
    else:
        raise ValueError("provide --file or --builtin {z,w}")
    ext = liluo_extend(ensemble)
    red = reduction(ext)
    ok, residual = verify_cq(ext.state, ext.dephasing_basis, cut=2)
    diag = ancilla_diagnostics(ext)
    out_state = Path(args.out)
    save_state(out_state, ext.state)
    diag_path = Path(str(out_state) + ".diagnostics.json")
    report = {
        "ancilla_dim": ext.ancilla_dim,
        "cq_residual": residual,
        "cq_ok": ok,
        "mutual_info_ancilla_a": diag.with_a,
        "mutual_info_ancilla_b": diag.with_b,
        "mutual_info_ancilla_ab": diag.with_ab,
        "reduction": state_to_json(red),
    }
    _write_json(diag_path, report)
    _write_manifest(out_state, "extend", _config(args), None, inputs, [out_state, diag_path])
    print(json.dumps({k: _sig_tree(v) for k, v in report.items() if k != "reduction"}))
    return 0


def cmd_bound(args) -> int:
    out = Path(args.out)
    if args.rank is not None:
        low, high = bound_range(args.d_a, args.d_b, args.rank)
        report = {"d_a": args.d_a, "d_b": args.d_b, "rank": args.rank, "min_low": low, "min_high": high}
    else:
        if args.length is None:
            raise ValueError("provide --length or --rank")
        report = bound_report(args.d_a, args.d_b, args.length).as_dict()
        if args.cc:
            cc = bound_cc(args.d_a, args.d_b, args.length)
            report["cc_pairs"] = [list(p) for p in cc.pairs]
            report["cc_min_product"] = cc.min_product
    _write_json(out, report)
    _write_manifest(out, "bound", _config(args), None, [], [out])
    print(json.dumps(_sig_tree(report)))
    return 0


def cmd_table1(args) -> int:
    rows = [
        (r.d, r.min_low, r.min_high, r.luo_low, r.luo_high)
        for r in table1()
    ]
    out = Path(args.out)
    _write_csv(out, ["d", "min_low", "min_high", "luo_low", "luo_high"], rows)
    _write_manifest(out, "table1", _config(args), None, [], [out])
    for row in rows:
        print(",".join(str(v) for v in row))
    return 0


def cmd_search(args) -> int:
    if args.preset == "paper":
        cfg = AnnealConfig(d_ancilla=args.d_ancilla, seed=args.seed)
    elif args.preset == "quick":
        cfg = AnnealConfig(
            d_ancilla=args.d_ancilla,
            temperatures=tuple(np.geomspace(1e-1, 1e-3, 3)),
            steps_per_temp=150,
            chains=1,
            seed=args.seed,
        )
    else:
        raise ValueError(f"unknown preset {args.preset!r}")
    overrides = {}
    if args.steps is not None:
        overrides["steps_per_temp"] = args.steps
    if args.chains is not None:
        overrides["chains"] = args.chains
    if overrides:
        cfg = replace(cfg, **overrides)
    result = anneal(cfg)
    out = Path(args.out)
    _write_json(out, {"best_discord": result.best_discord, "config": cfg.as_dict()})
    u_path = Path(str(out) + ".best_u.json")
    save_matrix(u_path, result.best_u)
    trace_path = Path(str(out) + ".trace.csv")
    _write_csv(
        trace_path,
        ["chain", "step", "temperature", "current", "best"],
        [(r.chain, r.step, _sig(r.temperature), _sig(r.current), _sig(r.best)) for r in result.trace],
    )
    _write_manifest(out, "search", cfg.as_dict(), cfg.seed, [], [out, u_path, trace_path])
    print(json.dumps({"best_discord": _sig(result.best_discord)}))
    return 0


def cmd_mdss(args) -> int:
    out = Path(args.out)
    inputs = []
    if args.construction == "mub":
        fam = mub_family(args.d)
        within, cross = check_mub(fam.bases)
        rho = rho_max_d(args.d)
        report = {
            "construction": "mub",
            "d": args.d,
            "bases": len(fam.bases),
            "within_dev": within,
            "cross_dev": cross,
        }
    elif args.construction == "sic":
        if args.d == 2 and args.fiducial is None:
            sic = sic_tetrahedron()
        elif args.fiducial is not None:
            with open(args.fiducial, "r", encoding="utf-8") as fh:
                fid = ket_from_json(json.load(fh))
            sic = sic_from_fiducial(args.d, fid)
            inputs.append(args.fiducial)
        else:
            raise ValueError("SIC construction for d != 2 needs --fiducial")
        res, overlap = check_sic(args.d, sic.projectors)
        rho = rho_tilde_max_d(args.d, sic)
        report = {
            "construction": "sic",
            "d": args.d,
            "identity_dev": res,
            "overlap_dev": overlap,
        }
    else:
        raise ValueError(f"unknown construction {args.construction!r}")
    cm = correlation_matrix(rho)
    report["correlation_rank"] = cm.rank
    if args.d == 2:
        prof = profile(rho, "a", _opt_cfg(args))
        report["discord"] = prof.discord
    state_path = Path(str(out) + ".state.json")
    save_state(state_path, rho)
    _write_json(out, report)
    _write_manifest(out, "mdss", _config(args), args.seed, inputs, [out, state_path])
    print(json.dumps(_sig_tree(report)))
    return 0


def cmd_genuine(args) -> int:
    rho, inputs = _load_input_state(args)
    rep = is_genuinely_quantum(rho)
    cm = correlation_matrix(rho)
    report = {
        "genuinely_quantum": rep.genuine,
        "correlation_rank": rep.rank,
        "d_min": rep.d_min,
        "singular_values": [float(s) for s in cm.singular_values],
    }
    out = Path(args.out)
    _write_json(out, report)
    _write_manifest(out, "genuine", _config(args), None, inputs, [out])
    print(json.dumps(_sig_tree(report)))
    return 0


# --- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cqext", description=__doc__)
    parser.add_argument("--version", action="version", version=f"cqext {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discord", help="correlation profile of a state")
    p.add_argument("--file", help="state JSON file")
    p.add_argument("--family", choices=FAMILY_NAMES)
    p.add_argument("--param", type=float, default=None)
    p.add_argument("--side", choices=["a", "b"], default="a")
    p.add_argument("--out", default="discord.json")
    _add_opt_flags(p)
    p.set_defaults(func=cmd_discord)

    p = sub.add_parser("scatter", help="random-state discord/EoF scatter CSV")
    p.add_argument("--per-rank", type=int, default=5000)
    p.add_argument("--ranks", default="2,3,4")
    p.add_argument("--out", default="scatter.csv")
    _add_opt_flags(p, coarse=24, refine=15, restarts=2)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("curve", help="family parameter sweep CSV")
    p.add_argument("--family", choices=["alpha", "beta", "werner"], default="alpha")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, default=1.0)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out", default="curve.csv")
    _add_opt_flags(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("extend", help="classical-quantum extension of an ensemble")
    p.add_argument("--file", help="ensemble JSON file")
    p.add_argument("--builtin", choices=["z", "w"])
    p.add_argument("--out", default="extension.json")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("bound", help="ancilla-dimension lower bound")
    p.add_argument("--d-a", type=int, required=True)
    p.add_argument("--d-b", type=int, required=True)
    p.add_argument("--length", type=int)
    p.add_argument("--rank", type=int, help="report the bound range for length in [rank, rank^2]")
    p.add_argument("--cc", action="store_true", help="include the classical-classical variant")
    p.add_argument("--out", default="bound.json")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("table1", help="ancilla-dimension table for d = 1..4")
    p.add_argument("--out", default="table1.csv")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("search", help="anneal the ansatz unitary for maximum discord")
    p.add_argument("--d-ancilla", type=int, required=True)
    p.add_argument("--preset", choices=["paper", "quick"], default="paper")
    p.add_argument("--steps", type=int, default=None, help="override steps per temperature")
    p.add_argument("--chains", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="search.json")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("mdss", help="MUB/SIC discordant-state constructions")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--construction", choices=["mub", "sic"], required=True)
    p.add_argument("--fiducial", help="fiducial ket JSON file (SIC, d > 2)")
    p.add_argument("--out", default="mdss.json")
    _add_opt_flags(p)
    p.set_defaults(func=cmd_mdss)

    p = sub.add_parser("genuine", help="correlation-rank genuineness criterion")
    p.add_argument("--file", help="state JSON file")
    p.add_argument("--family", choices=FAMILY_NAMES)
    p.add_argument("--param", type=float, default=None)
    p.add_argument("--out", default="genuine.json")
    p.set_defaults(func=cmd_genuine)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
