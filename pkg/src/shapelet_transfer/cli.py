"""Command line interface.

Subcommands: shapelets, distance, rank, build-super, leep, mp, resample.
Successful runs exit 0; data or I/O errors print one machine-parseable JSON
line to stderr and exit 1; unknown subcommands or flags exit 2 with usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import pipeline
from .dataset_io import (
    LabeledDataset,
    dataset_name_from_path,
    load_ucr_tsv,
    resample_dataset,
    resample_spec_for,
    save_metadata,
    save_tsv,
)
from .matrix_profile import ConcatenatedClassSeries, ab_join, concatenate_rest
from .shapelets import discover, shapelet_set_to_json_dict
from .transferability import leep_report, load_prediction_csv

_MEASURE_BY_FLAG = {
    "avg-shapelet": "avg_shapelet",
    "min-shapelet": "min_shapelet",
    "dba-dtw": "dba_dtw",
    "nce": "nce",
    "logme": "logme",
    "transrate": "transrate",
    "h-score": "h_score",
}


def _add_io_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--whitespace",
        action="store_true",
        help="accept any whitespace separation instead of tabs",
    )
    parser.add_argument("--out", help="write output JSON here instead of stdout")


def _add_shapelet_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--window", type=int, default=pipeline.DEFAULT_WINDOW, help="shapelet length"
    )
    parser.add_argument(
        "--top-k",
        type=int,
        default=pipeline.DEFAULT_TOP_K,
        help="shapelet candidates per class",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shapelet-transfer",
        description="Rank source time series datasets for transfer learning "
        "and build balanced multi-source super datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shapelets", help="discover shapelets and dump them as JSON")
    p.add_argument("--input", required=True, help="dataset TSV")
    _add_shapelet_flags(p)
    _add_io_flags(p)

    p = sub.add_parser("distance", help="distance between source and target datasets")
    p.add_argument("--source", required=True, nargs="+", help="source TSV file(s)")
    p.add_argument("--target", required=True, help="target TSV")
    p.add_argument("--measure", required=True, choices=sorted(_MEASURE_BY_FLAG))
    _add_shapelet_flags(p)
    _add_io_flags(p)

    p = sub.add_parser("rank", help="rank candidate sources by distance to the target")
    p.add_argument("--target", required=True, help="target TSV")
    p.add_argument(
        "--candidates",
        required=True,
        nargs="+",
        help="candidate TSV files and/or directories of *.tsv",
    )
    p.add_argument("--measure", required=True, choices=sorted(_MEASURE_BY_FLAG))
    _add_shapelet_flags(p)
    _add_io_flags(p)

    p = sub.add_parser(
        "build-super", help="assemble selected sources into a super dataset"
    )
    p.add_argument("--target", required=True, help="target TSV")
    p.add_argument("--sources", nargs="+", help="explicit source TSV files")
    p.add_argument(
        "--candidates",
        nargs="+",
        help="candidate files/dirs to rank and select from (needs --measure)",
    )
    p.add_argument("--measure", choices=sorted(_MEASURE_BY_FLAG))
    p.add_argument(
        "--num-sources",
        type=int,
        default=pipeline.DEFAULT_NUM_SOURCES,
        help="how many ranked candidates to select",
    )
    p.add_argument("--seed", type=int, default=0, help="oversampling seed (recorded)")
    p.add_argument("--out", required=True, help="output directory")
    _add_shapelet_flags(p)
    p.add_argument(
        "--whitespace",
        action="store_true",
        help="accept any whitespace separation instead of tabs",
    )

    p = sub.add_parser("leep", help="LEEP score from a prediction matrix CSV")
    p.add_argument("--predictions", required=True, help="CSV with header label,p0,...")
    p.add_argument("--out", help="write output JSON here instead of stdout")

    p = sub.add_parser("mp", help="dump a matrix profile for debugging")
    p.add_argument("--input", required=True, help="dataset TSV")
    p.add_argument("--window", type=int, default=pipeline.DEFAULT_WINDOW)
    p.add_argument("--query-class", type=int, required=True, help="internal class id")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument(
        "--self", dest="self_join", action="store_true", help="self-join (default)"
    )
    mode.add_argument(
        "--reference-class", type=int, help="AB-join against this class"
    )
    mode.add_argument(
        "--rest", action="store_true", help="AB-join against all other classes"
    )
    _add_io_flags(p)

    p = sub.add_parser("resample", help="resample a dataset to a new length")
    p.add_argument("--input", required=True, help="dataset TSV")
    p.add_argument("--length", type=int, required=True, help="target length")
    p.add_argument("--out", required=True, help="output TSV path")
    p.add_argument(
        "--whitespace",
        action="store_true",
        help="accept any whitespace separation instead of tabs",
    )

    return parser


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _expand_dir(path: Path) -> list[Path]:
    """All *.tsv in a directory; when a dataset has both splits, keep _TRAIN."""
    files = sorted(path.glob("*.tsv"))
    train_names = {
        dataset_name_from_path(f) for f in files if f.stem.endswith("_TRAIN")
    }
    return [
        f
        for f in files
        if not (f.stem.endswith("_TEST") and dataset_name_from_path(f) in train_names)
    ]


def _load_candidates(
    paths: list[str], target_name: str, whitespace: bool
) -> list[LabeledDataset]:
    files: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            files.extend(_expand_dir(path))
        else:
            files.append(path)
    candidates = []
    for path in files:
        if dataset_name_from_path(path) == target_name:
            continue
        candidates.append(load_ucr_tsv(path, whitespace=whitespace))
    if not candidates:
        raise ValueError("no candidate datasets found")
    return candidates


def _cmd_shapelets(args) -> int:
    ds = load_ucr_tsv(args.input, whitespace=args.whitespace)
    ss = discover(ds, args.window, args.top_k)
    _emit(shapelet_set_to_json_dict(ss), args.out)
    return 0


def _cmd_distance(args) -> int:
    measure = _MEASURE_BY_FLAG[args.measure]
    target = load_ucr_tsv(args.target, whitespace=args.whitespace)
    results = [
        pipeline.pairwise_distance(
            load_ucr_tsv(path, whitespace=args.whitespace),
            target,
            measure,
            window=args.window,
            k=args.top_k,
        )
        for path in args.source
    ]
    if len(results) == 1:
        _emit(results[0].to_json_dict(), args.out)
    else:
        results.sort(key=lambda d: (d.value, d.source))
        _emit(
            {
                "target": target.name,
                "measure": measure,
                "results": [{"source": d.source, "value": d.value} for d in results],
            },
            args.out,
        )
    return 0


def _cmd_rank(args) -> int:
    measure = _MEASURE_BY_FLAG[args.measure]
    target = load_ucr_tsv(args.target, whitespace=args.whitespace)
    candidates = _load_candidates(args.candidates, target.name, args.whitespace)
    ranking = pipeline.rank_sources(
        target, candidates, measure, window=args.window, k=args.top_k
    )
    _emit(ranking.to_json_dict(), args.out)
    return 0


def _cmd_build_super(args) -> int:
    target = load_ucr_tsv(args.target, whitespace=args.whitespace)
    if bool(args.sources) == bool(args.candidates):
        raise ValueError("pass exactly one of --sources or --candidates")
    if args.sources:
        selected = [load_ucr_tsv(p, whitespace=args.whitespace) for p in args.sources]
    else:
        if not args.measure:
            raise ValueError("--candidates requires --measure")
        measure = _MEASURE_BY_FLAG[args.measure]
        candidates = _load_candidates(args.candidates, target.name, args.whitespace)
        ranking = pipeline.rank_sources(
            target, candidates, measure, window=args.window, k=args.top_k
        )
        chosen = [e.source for e in ranking.entries[: args.num_sources]]
        if not chosen:
            raise ValueError("ranking produced no usable sources")
        by_name = {c.name: c for c in candidates}
        selected = [by_name[name] for name in chosen]
    manifest, merged = pipeline.build_super_dataset(target, selected, seed=args.seed)
    pipeline.write_super_dataset(manifest, merged, args.out)
    print(json.dumps(manifest.to_json_dict(), indent=2))
    return 0


def _cmd_leep(args) -> int:
    preds = load_prediction_csv(args.predictions)
    _emit(leep_report(preds), args.out)
    return 0


def _cmd_mp(args) -> int:
    ds = load_ucr_tsv(args.input, whitespace=args.whitespace)
    if args.query_class not in ds.classes:
        raise ValueError(f"class {args.query_class} not present in {ds.name}")
    query = ConcatenatedClassSeries.from_dataset(ds, args.query_class, args.window)
    if args.reference_class is not None:
        if args.reference_class not in ds.classes:
            raise ValueError(f"class {args.reference_class} not present in {ds.name}")
        reference = ConcatenatedClassSeries.from_dataset(
            ds, args.reference_class, args.window
        )
        profile = ab_join(query, reference)
    elif args.rest:
        per_class = {
            c: ConcatenatedClassSeries.from_dataset(ds, c, args.window)
            for c in ds.classes
        }
        profile = ab_join(query, concatenate_rest(per_class, exclude=args.query_class))
    else:
        profile = ab_join(query, query, self_join=True)
    _emit(profile.to_json_dict(), args.out)
    return 0


def _cmd_resample(args) -> int:
    ds = load_ucr_tsv(args.input, whitespace=args.whitespace)
    spec = resample_spec_for(ds.length, args.length)
    resampled = resample_dataset(ds, args.length)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_tsv(resampled, out)
    save_metadata(resampled, Path(str(out) + ".meta.json"), resample=spec)
    return 0


_COMMANDS = {
    "shapelets": _cmd_shapelets,
    "distance": _cmd_distance,
    "rank": _cmd_rank,
    "build-super": _cmd_build_super,
    "leep": _cmd_leep,
    "mp": _cmd_mp,
    "resample": _cmd_resample,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(
            json.dumps({"error": str(exc), "type": type(exc).__name__}),
            file=sys.stderr,
        )
        return 1


def entry() -> None:
    sys.exit(main())
