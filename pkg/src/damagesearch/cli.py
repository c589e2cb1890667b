"""Operator command line: ingest, images, detect, estimate, serve, eval,
rank, demo, export.

Exit codes: 0 ok, 2 validation, 3 not-found, 4 backend unavailable,
5 internal. Failures also emit one machine-readable JSON line on stderr.
"""

from __future__ import annotations

import functools
import json
import sys
import threading
import time
from pathlib import Path

import click

from . import demo as demo_module
from .annotations import parse_vgg
from .config import AppContext, load_config
from .errors import AnnotationError
from .detector import parse_detections
from .errors import (
    BackendUnavailableError,
    DamageSearchError,
    NotFoundError,
    NotInResultsError,
    QueryValidationError,
    UnknownCriterionError,
)
from .imaging import read_image_meta
from .metrics import report_csv, report_table, summary
from .scheduler import PRIORITY_BACKGROUND, PRIORITY_OPERATOR
from .search import DamageFilter, SearchQuery
from .server import _parse_level, create_app
from .store import utcnow_iso

EXIT_VALIDATION = 2
EXIT_NOT_FOUND = 3
EXIT_BACKEND = 4
EXIT_INTERNAL = 5


def _fail(code: int, error: str, exc: Exception):
    sys.stderr.write(json.dumps({"error": error, "detail": str(exc)}) + "\n")
    sys.exit(code)


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (QueryValidationError, UnknownCriterionError, AnnotationError) as exc:
            _fail(EXIT_VALIDATION, "validation", exc)
        except (NotFoundError, NotInResultsError) as exc:
            _fail(EXIT_NOT_FOUND, "not-found", exc)
        except BackendUnavailableError as exc:
            _fail(EXIT_BACKEND, "backend-unavailable", exc)
        except (FileNotFoundError, ValueError) as exc:
            _fail(EXIT_VALIDATION, "validation", exc)
        except DamageSearchError as exc:
            _fail(EXIT_INTERNAL, "internal", exc)

    return wrapper


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None, help="key=value config file")
@click.option("--store", default=None, help="store database path")
@click.option("--fixtures", default=None, help="mock detector sidecar directory")
@click.option("--damage-endpoint", default=None, help="damage detector endpoint URL")
@click.option("--object-endpoint", default=None, help="object detector endpoint URL")
@click.option("--min-conf", "min_confidence", type=float, default=None, help="confidence gate (default 0.85)")
@click.option("--weights", default=None, help="weight-table JSON file")
@click.option("--rules", default=None, help="section-rule JSON file")
@click.option("--flip-probability", type=float, default=None, help="mock class-flip noise probability")
@click.option("--seed", type=int, default=None, help="mock noise seed")
@click.pass_context
def main(ctx, config_path, **overrides):
    """Damage-level estimation and damage-filtered listing search."""
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    ctx.obj["overrides"] = {k: v for k, v in overrides.items() if v is not None}


def _context(ctx) -> AppContext:
    config = load_config(ctx.obj["config_path"], ctx.obj["overrides"])
    return AppContext(config)


@main.command()
@click.argument("ndjson_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@handle_errors
def ingest(ctx, ndjson_file):
    """Import an NDJSON entity stream into the store."""
    app = _context(ctx)
    with open(ndjson_file, encoding="utf-8") as fp:
        counts = app.store.import_ndjson(fp)
    click.echo(" ".join(f"{kind}={n}" for kind, n in sorted(counts.items()) if n))


@main.group()
def images():
    """Image registration commands."""


@images.command("add")
@click.argument("property_id")
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@handle_errors
def images_add(ctx, property_id, files):
    """Register image files (dimensions and PPI read from the file)."""
    app = _context(ctx)
    for path in files:
        meta = read_image_meta(Path(path).stem, property_id, path, uploaded_at=utcnow_iso())
        app.store.add_image(meta)
        click.echo(f"{meta.image_id} {meta.width}x{meta.height} ppi={meta.ppi}")


@main.command()
@click.option("--property", "property_id", default=None, help="detect one property only")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--priority", type=int, default=None, help="queue priority override")
@click.pass_context
@handle_errors
def detect(ctx, property_id, workers, priority):
    """Queue undetected images and drain the queue with a worker pool."""
    app = _context(ctx)
    if app.processor is None:
        raise BackendUnavailableError("no detector configured (set --fixtures or endpoints)")
    if property_id is not None:
        targets = [property_id]
        level = priority if priority is not None else PRIORITY_OPERATOR
    else:
        targets = sorted({meta.property_id for meta in app.store.list_undetected_images()})
        level = priority if priority is not None else PRIORITY_BACKGROUND
    queued = 0
    for pid in targets:
        queued += len(app.scheduler.enqueue_property(pid, level))
    report = app.scheduler.run(worker_count=workers)
    click.echo(
        f"queued={queued} done={report.done} failed={report.failed} "
        f"rejected={report.rejected_images} assessed={len(report.assessed_properties)} "
        f"partial={len(report.partial_properties)}"
    )
    for pid, message in sorted(report.estimate_errors.items()):
        click.echo(f"estimate-error {pid}: {message}", err=True)
    if report.failed:
        sys.exit(EXIT_BACKEND)


@main.command()
@click.argument("property_id")
@click.pass_context
@handle_errors
def estimate(ctx, property_id):
    """Estimate (or reuse) the property damage level and print it."""
    app = _context(ctx)
    assessment = app.estimator.estimate_property(property_id)
    click.echo(
        f"{property_id} score={assessment.score:.4f} "
        f"bucket={assessment.bucket.label} (class {assessment.bucket.class_id})"
    )
    for section in assessment.sections:
        click.echo(f"  {section.section_kind}: score={section.score:.4f} significance={section.significance:g}")


@main.command()
@click.option("--bind", default=None, help="host:port to serve on")
@click.option("--drain-workers", type=int, default=0, help="background detection workers")
@click.option("--ui", "ui_dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="static web client directory to serve at /ui")
@click.pass_context
@handle_errors
def serve(ctx, bind, drain_workers, ui_dir):
    """Serve the HTTP search API (and optionally the web client)."""
    import uvicorn

    app = _context(ctx)
    host, _, port = (bind or app.config.bind).partition(":")
    if drain_workers > 0 and app.processor is not None:
        def drain_loop():
            while True:
                if app.scheduler.pending_count():
                    app.scheduler.run(worker_count=drain_workers)
                time.sleep(0.2)

        threading.Thread(target=drain_loop, daemon=True).start()
    uvicorn.run(create_app(app, ui_dir=ui_dir), host=host or "127.0.0.1", port=int(port or 8000))


@main.command("eval")
@click.option("--pred", "pred_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--truth", "truth_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--iou", type=float, default=0.5, show_default=True)
@click.option("--min-conf", type=float, default=0.85, show_default=True)
@click.option("--csv", "csv_path", default=None, help="also write the report as CSV ('-' for stdout)")
@handle_errors
def eval_command(pred_dir, truth_file, iou, min_conf, csv_path):
    """Score prediction dumps against a VGG ground-truth file.

    PRED holds one <image_id>.json wire-format response per image; truth
    regions match predictions through their filename stem.
    """
    truth = parse_vgg(Path(truth_file).read_text(encoding="utf-8"))
    predictions = []
    for path in sorted(Path(pred_dir).glob("*.json")):
        payload = json.loads(path.read_text(encoding="utf-8"))
        predictions.extend(parse_detections(path.stem, payload))
    report = summary(predictions, truth, min_confidence=min_conf, iou_threshold=iou)
    click.echo(report_table(report))
    if csv_path == "-":
        click.echo(report_csv(report), nl=False)
    elif csv_path:
        Path(csv_path).write_text(report_csv(report), encoding="utf-8")


@main.command()
@click.argument("property_id")
@click.option("--price-min", type=float, default=None)
@click.option("--price-max", type=float, default=None)
@click.option("--rooms-min", type=float, default=None)
@click.option("--location", default=None)
@click.option("--damage", default=None, help="MODE:LEVEL (e.g. exact:severe) or LEVEL alone")
@click.option("--sort", default="price_asc", show_default=True)
@click.pass_context
@handle_errors
def rank(ctx, property_id, price_min, price_max, rooms_min, location, damage, sort):
    """1-based rank of a property in the search ordering."""
    app = _context(ctx)
    damage_filter = None
    if damage:
        mode, sep, level = damage.partition(":")
        if not sep:
            mode, level = "exact", damage
        damage_filter = DamageFilter(mode=mode, level=_parse_level(level))
    query = SearchQuery(
        price_min=price_min,
        price_max=price_max,
        rooms_min=rooms_min,
        location=location,
        damage_filter=damage_filter,
        sort=sort,
    )
    click.echo(app.search.rank_of(property_id, query))


@main.command()
@click.argument("directory", type=click.Path(file_okay=False))
@handle_errors
def demo(directory):
    """Write the bundled 20-listing demo corpus."""
    info = demo_module.build_demo_corpus(directory)
    click.echo(json.dumps(info, indent=2))


@main.command()
@click.argument("ndjson_file", type=click.Path(dir_okay=False))
@click.pass_context
@handle_errors
def export(ctx, ndjson_file):
    """Export the store as an NDJSON entity stream."""
    app = _context(ctx)
    with open(ndjson_file, "w", encoding="utf-8") as fp:
        app.store.export_ndjson(fp)
    click.echo(ndjson_file)


if __name__ == "__main__":
    main()
