"""Command line interface: ``gtloc map ...``, ``gtloc localize``, ``gtloc bench ...``, ``gtloc votemap``.

Exit codes: 0 success, 1 usage error, 2 data or format error, 3 localization failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from gtloc.errors import GtlocError, LocalizationError
from gtloc.features import DetectorConfig
from gtloc.geometry import Pose2D, RansacConfig, origin_to_center
from gtloc.image import read_pgm, write_pgm
from gtloc.localizer import Prior, localize
from gtloc.mapstore import TextureMap, build_from_csv
from gtloc.voting import dump_votes

from .experiment import TABLE_LEVELS, ExperimentConfig, Report, run_experiment
from .texture import render_view

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_LOCALIZATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _pose_dict(p: Pose2D) -> dict:
    return {"x": p.x, "y": p.y, "theta": p.theta}


def _prior(args) -> Prior | None:
    given = [args.prior_x is not None, args.prior_y is not None, args.prior_err is not None]
    if not any(given):
        return None
    if not all(given):
        raise UsageError("--prior-x, --prior-y and --prior-err must be given together")
    return Prior((args.prior_x, args.prior_y), args.prior_err)


def _parse_levels(text: str) -> tuple:
    if text == "table":
        return TABLE_LEVELS
    levels = []
    for part in text.split(","):
        part = part.strip().lower()
        if part in ("none", "global"):
            levels.append(None)
        else:
            try:
                levels.append(float(part))
            except ValueError:
                raise UsageError(f"bad prior level {part!r}") from None
    return tuple(levels)


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        cols, rows = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"grid must look like 10x10, got {text!r}") from None
    return cols, rows


# -- commands


def cmd_map_build(args) -> int:
    m = TextureMap(DetectorConfig(max_keypoints=args.max_kp), descriptor_bits=args.bits, layout_seed=args.layout_seed)
    build_from_csv(args.poses, m, args.image_dir)
    m.save(args.map)
    print(f"built {args.map}: {len(m)} records")
    return EXIT_OK


def cmd_map_add(args) -> int:
    m = TextureMap.load(args.map)
    if args.poses:
        added_before = m.next_id
        build_from_csv(args.poses, m, args.image_dir)
        ids = list(range(added_before, m.next_id))
    elif args.image and args.pose:
        ids = [m.add_reference(read_pgm(args.image), Pose2D(*args.pose))]
    else:
        raise UsageError("map add needs --poses, or --image together with --pose X Y THETA")
    m.save(args.map)
    print(json.dumps({"added": ids}))
    return EXIT_OK


def cmd_map_rm(args) -> int:
    m = TextureMap.load(args.map)
    for rid in args.id:
        m.remove_reference(rid)
    m.save(args.map)
    print(json.dumps({"removed": args.id}))
    return EXIT_OK


def cmd_map_info(args) -> int:
    m = TextureMap.load(args.map)
    extent = m.extent
    det = m.detector_config
    _emit({
        "records": len(m),
        "next_id": m.next_id,
        "descriptor_bits": m.descriptor_bits,
        "features": sum(len(r.features) for r in m.records.values()),
        "extent": None if extent is None else list(extent),
        "detector": {"max_keypoints": det.max_keypoints, "base_sigma": det.base_sigma,
                     "layers_per_octave": det.layers_per_octave},
    }, args.out)
    return EXIT_OK


def _localize(args, keep_votes=False):
    m = TextureMap.load(args.map)
    query = read_pgm(args.image)
    return m, query, localize(m, query, _prior(args), ransac_cfg=RansacConfig(seed=args.seed),
                              cell_size=args.cells, keep_votes=keep_votes)


def cmd_localize(args) -> int:
    try:
        _, query, res = _localize(args)
    except LocalizationError as exc:
        _emit({"status": "failed", "reason": exc.reason, "message": str(exc),
               "considered_images": getattr(exc, "considered_images", None)}, args.out)
        return EXIT_LOCALIZATION
    _emit({
        "status": "ok",
        "pose": _pose_dict(res.pose),
        "center_pose": _pose_dict(origin_to_center(res.pose, query.width, query.height)),
        "inlier_count": res.inlier_count,
        "votes_in_winning_cell": res.votes_in_winning_cell,
        "considered_images": res.considered_images,
        "total_matches": res.total_matches,
        "timings_ms": {k: v * 1e3 for k, v in res.timings.items()},
    }, args.out)
    return EXIT_OK


def cmd_votemap(args) -> int:
    try:
        _, _, res = _localize(args, keep_votes=True)
        vm, status = res.voting_map, EXIT_OK
        cell = res.winning_cell
    except LocalizationError as exc:
        vm, status, cell = getattr(exc, "voting_map", None), EXIT_LOCALIZATION, None
        if vm is None:
            print(f"no voting map: {exc}", file=sys.stderr)
            return status
    write_pgm(args.out, dump_votes(vm))
    info = {"rows": vm.rows, "cols": vm.cols, "origin": list(vm.origin), "cell_size": vm.cell_size,
            "total_votes": vm.total_votes, "winning_cell": None if cell is None else list(cell)}
    print(json.dumps(info))
    return status


def _bench_config(args) -> ExperimentConfig:
    base = {}
    if args.config:
        base = json.loads(Path(args.config).read_text())
        base = ExperimentConfig.from_dict(base).to_dict()
    overrides = {
        "profile": args.texture, "queries": args.queries, "cell_size": args.cells,
        "descriptor_bits": args.bits, "max_keypoints": args.max_kp, "texture_seed": args.texture_seed,
    }
    if args.seed is not None:
        overrides["query_seed"] = args.seed
        overrides["ransac_seed"] = args.seed
    if args.grid is not None:
        overrides["grid_cols"], overrides["grid_rows"] = _parse_grid(args.grid)
    if args.levels is not None:
        overrides["prior_levels"] = _parse_levels(args.levels)
    base.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict(base)


def cmd_bench_run(args) -> int:
    cfg = _bench_config(args)
    report = run_experiment(cfg, workers=args.workers, timing=not args.no_timing)
    text = report.to_jsonl()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        for s in report.summary():
            level = "none" if s.prior_mm is None else f"{s.prior_mm:g} mm"
            print(f"prior {level:>9}: {s.successes}/{s.queries} = {s.success_rate:.3f}, "
                  f"mean inliers {s.mean_inliers:.1f}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench_summary(args) -> int:
    report = Report.read(args.report)
    _emit([vars(s) for s in report.summary()], args.out)
    return EXIT_OK


def cmd_bench_render(args) -> int:
    """Write reference views, a poses CSV and query views with ground truth for a bench world."""
    cfg = _bench_config(args)
    out = Path(args.out)
    (out / "refs").mkdir(parents=True, exist_ok=True)
    (out / "queries").mkdir(parents=True, exist_ok=True)
    tex = cfg.texture()
    w, h = cfg.image_width, cfg.image_height
    with open(out / "refs" / "poses.csv", "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["filename", "x", "y", "theta"])
        for i, p in enumerate(cfg.reference_poses()):
            name = f"ref_{i:04d}.pgm"
            write_pgm(out / "refs" / name, render_view(tex, p, w, h))
            wr.writerow([name, repr(p.x), repr(p.y), repr(p.theta)])
    with open(out / "queries" / "truth.csv", "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["filename", "x", "y", "theta"])
        for q in range(cfg.queries):
            p, _ = cfg.query(q)
            name = f"query_{q:04d}.pgm"
            write_pgm(out / "queries" / name, render_view(tex, p, w, h))
            wr.writerow([name, repr(p.x), repr(p.y), repr(p.theta)])
    print(f"wrote {len(cfg.reference_poses())} references and {cfg.queries} queries to {out}")
    return EXIT_OK


# -- parser


def _add_prior(p) -> None:
    p.add_argument("--prior-x", type=float, help="prior image-center x (px)")
    p.add_argument("--prior-y", type=float, help="prior image-center y (px)")
    p.add_argument("--prior-err", type=float, help="expected prior error (mm)")


def _add_bench_options(p) -> None:
    p.add_argument("--config", help="JSON file with experiment config fields")
    p.add_argument("--texture", choices=["rich", "smooth"])
    p.add_argument("--grid", help="reference grid as COLSxROWS (default 10x10)")
    p.add_argument("--queries", type=int)
    p.add_argument("--levels", help="comma separated prior errors in mm, 'none' for no prior, or 'table'")
    p.add_argument("--seed", type=int, help="query and RANSAC seed")
    p.add_argument("--texture-seed", type=int)
    p.add_argument("--cells", type=float, help="voting cell size in px (default 75)")
    p.add_argument("--bits", type=int, help="descriptor bits (default 15)")
    p.add_argument("--max-kp", type=int, help="max keypoints per image (default 850)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gtloc", description="Ground-texture localization toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    mp = sub.add_parser("map", help="build and edit texture maps")
    msub = mp.add_subparsers(dest="map_command", required=True, parser_class=_Parser)

    p = msub.add_parser("build", help="build a map from a poses CSV of PGM images")
    p.add_argument("--poses", required=True)
    p.add_argument("--map", required=True, help="output map file")
    p.add_argument("--image-dir", help="directory of the images (default: the CSV's)")
    p.add_argument("--bits", type=int, default=15)
    p.add_argument("--max-kp", type=int, default=850)
    p.add_argument("--layout-seed", type=int, default=0)
    p.set_defaults(func=cmd_map_build)

    p = msub.add_parser("add", help="add reference images to a map")
    p.add_argument("--map", required=True)
    p.add_argument("--poses")
    p.add_argument("--image-dir")
    p.add_argument("--image")
    p.add_argument("--pose", type=float, nargs=3, metavar=("X", "Y", "THETA"))
    p.set_defaults(func=cmd_map_add)

    p = msub.add_parser("rm", help="remove records by id")
    p.add_argument("--map", required=True)
    p.add_argument("--id", type=int, action="append", required=True)
    p.set_defaults(func=cmd_map_rm)

    p = msub.add_parser("info", help="summarize a map")
    p.add_argument("--map", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_map_info)

    for name, func, help_ in (("localize", cmd_localize, "localize a query image"),
                              ("votemap", cmd_votemap, "write the voting map of a localization as PGM")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--map", required=True)
        p.add_argument("--image", required=True)
        _add_prior(p)
        p.add_argument("--seed", type=int, default=0, help="RANSAC seed")
        p.add_argument("--cells", type=float, default=75.0, help="voting cell size in px")
        p.add_argument("--out", required=name == "votemap")
        p.set_defaults(func=func)

    bp = sub.add_parser("bench", help="synthetic benchmark")
    bsub = bp.add_subparsers(dest="bench_command", required=True, parser_class=_Parser)
    p = bsub.add_parser("run", help="run a success-rate / prior sweep and write a JSON Lines report")
    _add_bench_options(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="null all timings (byte-reproducible report)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench_run)

    p = bsub.add_parser("render", help="write a bench world as PGM files and pose CSVs")
    _add_bench_options(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_bench_render)

    p = bsub.add_parser("summary", help="per-level summary of a report")
    p.add_argument("report")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench_summary)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gtloc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LocalizationError as exc:
        print(f"gtloc: localization failed: {exc}", file=sys.stderr)
        return EXIT_LOCALIZATION
    except (GtlocError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"gtloc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
