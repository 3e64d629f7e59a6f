"""Command-line interface: generate, sweep, metrics, rasterize, draft, serve.

Exit codes: 0 success, 1 validation/domain error, 2 I/O or parse error,
3 loom capacity exceeded.  With --json-errors the error goes to stderr as a
single JSON object instead of prose.
"""

from __future__ import annotations

import json
import sys

import click

from . import __version__
from .automata import (
    Boundary,
    EvolutionConfig,
    InitSpec,
    RuleSpec,
    evolve,
    rule_from_wolfram_number,
)
from .draft import drawdown_from_grid, factorize, render
from .errors import CapacityError, DomainError, ParseError, ValidationError
from .formats import write_pbm, write_png
from .jsondoc import (
    PatternDocument,
    decode_pattern_json,
    encode_pattern_json,
    metrics_to_json,
    sweep_to_csv,
    sweep_to_json,
)
from .metrics import DEFAULT_BLOCK_LEN, WeavabilityConfig, compute_metrics, sweep_elementary
from .raster import RasterConfig, load_image, weavable_rasterize
from .wif import export_wif

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_CAPACITY = 3


@click.group()
@click.version_option(__version__)
@click.option("--json-errors", is_flag=True, help="Emit machine-readable JSON errors on stderr.")
@click.pass_context
def cli(ctx, json_errors):
    """Generative weaving-design workbench."""
    ctx.ensure_object(dict)
    ctx.obj["json_errors"] = json_errors


def _weav_config(h_max, h_min, max_float) -> WeavabilityConfig:
    if h_min is None:
        h_min = 1.0 / h_max
    return WeavabilityConfig(h_min=h_min, h_max=h_max, max_float=max_float)


def _parse_rule(rule, table, k, r, w) -> RuleSpec:
    if (rule is None) == (table is None):
        raise ValidationError("provide exactly one of --rule or --table")
    if rule is not None:
        return rule_from_wolfram_number(rule)
    return RuleSpec.from_id(table, k, r, w)


@cli.command()
@click.option("--rule", type=int, default=None, help="Wolfram number 0..255.")
@click.option("--table", default=None, help="Hex rule id for a generalized rule.")
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--r", type=int, default=1, show_default=True)
@click.option("--w", type=int, default=1, show_default=True)
@click.option("--width", type=int, required=True)
@click.option("--steps", type=int, required=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--density", type=float, default=0.5, show_default=True)
@click.option("--init", "init_mode", type=click.Choice(["random", "center"]), default="random",
              show_default=True)
@click.option("--boundary", default="wrap", show_default=True, help="wrap | fixed | fixedN")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def generate(rule, table, k, r, w, width, steps, seed, density, init_mode, boundary, out):
    """Evolve a rule and write a pattern document."""
    spec = _parse_rule(rule, table, k, r, w)
    if init_mode == "center":
        init = InitSpec.single_center()
    else:
        init = InitSpec.random(seed, density)
    config = EvolutionConfig(width, steps, Boundary.parse(boundary), init)
    grid = evolve(spec, config)
    doc = PatternDocument(grid=grid, rule=spec, config=config)
    with open(out, "wb") as f:
        f.write(encode_pattern_json(doc))
    click.echo(f"wrote {out}: rule {spec.id}, {grid.rows}x{grid.width}")


@cli.command()
@click.option("--width", type=int, default=101, show_default=True)
@click.option("--steps", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--density", type=float, default=0.5, show_default=True)
@click.option("--boundary", default="wrap", show_default=True)
@click.option("--h-max", type=float, default=4.0, show_default=True)
@click.option("--h-min", type=float, default=None, help="Defaults to 1/h_max.")
@click.option("--max-float", type=int, default=5, show_default=True)
@click.option("--block-len", type=int, default=DEFAULT_BLOCK_LEN, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def sweep(width, steps, seed, density, boundary, h_max, h_min, max_float, block_len, fmt, out):
    """256-rule elementary sweep (the Figure-2 style table)."""
    config = EvolutionConfig(width, steps, Boundary.parse(boundary), InitSpec.random(seed, density))
    results = sweep_elementary(config, _weav_config(h_max, h_min, max_float), block_len)
    payload = sweep_to_csv(results).encode("ascii") if fmt == "csv" else sweep_to_json(results)
    with open(out, "wb") as f:
        f.write(payload)
    click.echo(f"wrote {out}: 256 rules")


@cli.command()
@click.argument("doc_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--h-max", type=float, default=4.0, show_default=True)
@click.option("--h-min", type=float, default=None)
@click.option("--max-float", type=int, default=5, show_default=True)
@click.option("--block-len", type=int, default=DEFAULT_BLOCK_LEN, show_default=True)
@click.option("--scope", type=click.Choice(["generated", "all"]), default="generated",
              show_default=True)
def metrics(doc_path, h_max, h_min, max_float, block_len, scope):
    """Print entropy, ratio, floats and the weaveability verdict for a document."""
    with open(doc_path, "rb") as f:
        doc = decode_pattern_json(f.read())
    if doc.grid.init_rows >= doc.grid.rows:
        scope = "all"
    m = compute_metrics(doc.grid, _weav_config(h_max, h_min, max_float), block_len, scope)
    click.echo(json.dumps(metrics_to_json(m), indent=2))


@cli.command()
@click.argument("image_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["fixed-threshold", "otsu", "ordered-dither",
                                             "error-diffusion"]),
              default="error-diffusion", show_default=True)
@click.option("--width", type=int, required=True)
@click.option("--height", type=int, required=True)
@click.option("--threshold", type=float, default=0.5, show_default=True)
@click.option("--polarity", type=click.Choice(["dark", "light"]), default="dark",
              show_default=True)
@click.option("--k", "palette_size", type=int, default=2, show_default=True)
@click.option("--repair/--no-repair", default=False, show_default=True)
@click.option("--max-float", type=int, default=5, show_default=True)
@click.option("--h-max", type=float, default=4.0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def rasterize(image_path, method, width, height, threshold, polarity, palette_size, repair,
              max_float, h_max, out):
    """Convert an image (PGM/PPM/PNG) into a weavable pattern document."""
    with open(image_path, "rb") as f:
        matrix = load_image(f.read())
    config = RasterConfig(width, height, method, threshold, polarity=polarity,
                          palette_size=palette_size)
    if palette_size == 2:
        result = weavable_rasterize(matrix, config, _weav_config(h_max, None, max_float),
                                    repair=repair)
        grid = result.grid
        m = compute_metrics(grid, _weav_config(h_max, None, max_float), scope="all")
        doc = PatternDocument(grid=grid, metrics=m)
        verdict = "weaveable" if result.weaveable else f"NOT weaveable ({', '.join(result.reasons)})"
        note = f", {len(result.flipped)} stitch points" if result.flipped else ""
        click.echo(f"{verdict}{note}")
    else:
        from .raster import rasterize as raster_grid

        doc = PatternDocument(grid=raster_grid(matrix, config))
    with open(out, "wb") as f:
        f.write(encode_pattern_json(doc))
    click.echo(f"wrote {out}")


@cli.command()
@click.argument("doc_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--wif", "wif_path", type=click.Path(dir_okay=False), default=None)
@click.option("--png", "png_path", type=click.Path(dir_okay=False), default=None)
@click.option("--pbm", "pbm_path", type=click.Path(dir_okay=False), default=None)
@click.option("--cell-px", type=int, default=8, show_default=True)
@click.option("--capacity", type=int, default=32, show_default=True)
def draft(doc_path, wif_path, png_path, pbm_path, cell_px, capacity):
    """Factorize a pattern document into a loom draft and export it."""
    with open(doc_path, "rb") as f:
        doc = decode_pattern_json(f.read())
    if doc.colorway is not None:
        cw = doc.colorway
        dd = drawdown_from_grid(doc.grid, cw.warp_colors, cw.weft_colors, cw.palette)
    else:
        dd = drawdown_from_grid(doc.grid)
    if wif_path:
        loom = factorize(dd, capacity)
        with open(wif_path, "wb") as f:
            f.write(export_wif(loom))
        click.echo(f"wrote {wif_path}: {loom.shaft_count} shafts")
    if png_path:
        with open(png_path, "wb") as f:
            f.write(write_png(render(dd, cell_px)))
        click.echo(f"wrote {png_path}")
    if pbm_path:
        with open(pbm_path, "wb") as f:
            f.write(write_pbm(doc.grid.cells))
        click.echo(f"wrote {pbm_path}")


@cli.command()
@click.option("--port", type=int, default=8765, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--state-dir", type=click.Path(file_okay=False), default=None)
@click.option("--cors-origin", default="*", show_default=True)
def serve(port, host, state_dir, cors_origin):
    """Start the HTTP design service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(state_dir=state_dir, cors_origin=cors_origin), host=host, port=port)


def main(argv=None) -> int:
    """Entry point mapping package exceptions onto documented exit codes."""
    json_errors = "--json-errors" in (argv if argv is not None else sys.argv[1:])

    def emit(kind: str, exc: Exception) -> None:
        if json_errors:
            click.echo(json.dumps({"error": kind, "message": str(exc)}), err=True)
        else:
            click.echo(f"error: {exc}", err=True)

    try:
        cli.main(args=argv, standalone_mode=False, obj={})
        return EXIT_OK
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        emit("usage", exc)
        return EXIT_VALIDATION
    except CapacityError as exc:
        emit("capacity", exc)
        return EXIT_CAPACITY
    except (ValidationError, DomainError) as exc:
        emit("validation", exc)
        return EXIT_VALIDATION
    except (ParseError, OSError) as exc:
        emit("io", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
