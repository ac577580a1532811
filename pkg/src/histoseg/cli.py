"""Batch command line front door.

Exit codes: 0 success, 1 I/O failure, 2 validation failure, 3 internal
error.  Errors print a single machine-parsable line on stderr.  All
artifacts land under the configured output directory and identical
invocations produce byte-identical files.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from .analysis import canny_edges, compare_methods, comparison_csv
from .errors import DecodeError, DomainError
from .extraction import Fill, SegmentSelection, run_pipeline
from .histogram_stats import build_histogram
from .image_core import decode_image, encode_png
from .reports import save_comparison_figure, save_histogram_figure
from .thresholding import Methodology

EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_INTERNAL = 3

SEGMENT_EMITS = ("thresholds-json", "segmented-png", "histogram-csv", "figures")
EXTRACT_EMITS = ("mask-png", "extracted-png", "edges-png")
COMPARE_EMITS = ("mssim-csv", "figures")


def _fail(category: str, message: str, code: int) -> None:
    click.echo(f"histoseg: error: {category}: {message}", err=True)
    sys.exit(code)


def handle_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DomainError as exc:
            _fail("validation", str(exc), EXIT_VALIDATION)
        except DecodeError as exc:
            _fail("decode", str(exc), EXIT_IO)
        except OSError as exc:
            _fail("io", str(exc), EXIT_IO)
        except click.exceptions.Exit:
            raise
        except Exception as exc:  # pragma: no cover - defensive
            _fail("internal", f"{type(exc).__name__}: {exc}", EXIT_INTERNAL)

    return wrapper


def _load_image(path: str):
    p = Path(path)
    if not p.is_file():
        raise OSError(f"no such file: {path}")
    return decode_image(p.read_bytes())


def _parse_emit(emit: str | None, default: tuple[str, ...]) -> set[str]:
    if emit is None:
        return set(default)
    tokens = {tok.strip() for tok in emit.split(",") if tok.strip()}
    known = set(SEGMENT_EMITS) | set(EXTRACT_EMITS) | set(COMPARE_EMITS)
    unknown = tokens - known
    if unknown:
        raise DomainError(f"unknown emit tokens: {', '.join(sorted(unknown))}")
    return tokens


def _parse_segments(spec: str) -> frozenset[int]:
    try:
        ids = frozenset(int(tok) for tok in spec.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise DomainError(f"bad segment list {spec!r}") from exc
    if not ids:
        raise DomainError("segment list must be nonempty")
    return ids


method_option = click.option(
    "--method",
    type=click.Choice([m.value for m in Methodology]),
    default=Methodology.M1.value,
    show_default=True,
)
common_params = [
    click.option("-i", "--input", "input_path", required=True, help="input image file"),
    click.option("-n", "n", type=int, default=1, show_default=True, help="number of thresholds"),
    click.option("--kappa1", type=float, default=1.0, show_default=True),
    click.option("--kappa2", type=float, default=1.0, show_default=True),
    click.option("--out", "out_dir", default=".", show_default=True, help="output directory"),
    click.option("--emit", default=None, help="comma-separated artifact list"),
]


def with_params(func):
    for param in reversed(common_params):
        func = param(func)
    return func


@click.group()
def main():
    """Histogram-statistics segmentation and object extraction."""


@main.command("segment")
@with_params
@method_option
@handle_errors
def cmd_segment(input_path, n, kappa1, kappa2, out_dir, emit, method):
    """Threshold the Y plane and write segmentation artifacts."""
    emits = _parse_emit(emit, SEGMENT_EMITS)
    img = _load_image(input_path)
    sel = SegmentSelection(selected=frozenset({0}))  # placeholder; not extracted
    res = run_pipeline(img, Methodology(method), n, kappa1, kappa2, sel)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    seg_hist = build_histogram(res.segmented.mapped)
    if "thresholds-json" in emits:
        (out / "thresholds.json").write_text(
            json.dumps(res.threshold_set.to_dict(), indent=2) + "\n"
        )
    if "segmented-png" in emits:
        (out / "segmented.png").write_bytes(encode_png(res.segmented.mapped))
    if "histogram-csv" in emits:
        (out / "histogram_original.csv").write_text(res.histogram.to_csv())
        (out / "histogram_segmented.csv").write_text(seg_hist.to_csv())
    if "figures" in emits:
        save_histogram_figure(res.histogram, seg_hist, res.threshold_set, out / "histograms.png")
    click.echo(json.dumps({"thresholds": list(res.threshold_set.thresholds)}))


@main.command("extract")
@with_params
@method_option
@click.option("--segments", required=True, help="comma-separated segment indices (zeta)")
@click.option(
    "--fill",
    type=click.Choice([f.value for f in Fill]),
    default=Fill.BLACK.value,
    show_default=True,
)
@handle_errors
def cmd_extract(input_path, n, kappa1, kappa2, out_dir, emit, method, segments, fill):
    """Extract the selected segments as an RGB object image."""
    emits = _parse_emit(emit, EXTRACT_EMITS)
    sel = SegmentSelection(selected=_parse_segments(segments), fill=Fill(fill))
    img = _load_image(input_path)
    res = run_pipeline(img, Methodology(method), n, kappa1, kappa2, sel)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if "mask-png" in emits:
        (out / "mask.png").write_bytes(encode_png(res.extraction.mask.to_gray()))
    if "extracted-png" in emits:
        (out / "extracted.png").write_bytes(encode_png(res.extraction.extracted_rgb))
    if "edges-png" in emits:
        edges = canny_edges(res.extraction.extracted_y)
        (out / "edges.png").write_bytes(encode_png(edges.to_gray()))
    click.echo(json.dumps({"selected": sorted(sel.selected), "fill": sel.fill.value}))


@main.command("compare")
@with_params
@click.option("--n-list", "n_list", default="1,3,5,7", show_default=True)
@handle_errors
def cmd_compare(input_path, n, kappa1, kappa2, out_dir, emit, n_list):
    """MSSIM comparison table of all methods over a threshold-count sweep."""
    emits = _parse_emit(emit, COMPARE_EMITS)
    try:
        ns = [int(tok) for tok in n_list.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise DomainError(f"bad n list {n_list!r}") from exc
    if not ns:
        raise DomainError("n list must be nonempty")
    img = _load_image(input_path)
    rows = compare_methods(img, ns, kappa1, kappa2)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = Path(input_path).stem
    if "mssim-csv" in emits:
        (out / "compare.csv").write_text(comparison_csv(rows, name))
    if "figures" in emits:
        save_comparison_figure(rows, out / "compare.png")
    click.echo(comparison_csv(rows, name), nl=False)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8321, show_default=True)
@handle_errors
def cmd_serve(host, port):
    """Run the interactive session service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
