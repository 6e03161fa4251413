"""Command line client for the simulator.

Each subcommand builds the same request model the HTTP service accepts and
either executes it in process (default) or posts it to a running service
(--server URL). Exit codes: 0 on success, 1 for configuration problems,
2 for I/O or transport failures.
"""

import json
import pathlib
import sys

import click
import httpx

from .service.handlers import execute_demo, execute_sweep, execute_timing, sweep_csv_text
from .service.schemas import DemoRequest, SweepRequest, TimingRequest

_BITS_CHOICE = click.Choice(["1", "2", "inf"])


def _parse_bits(values) -> list[int | None]:
    return [None if v == "inf" else int(v) for v in values]


def _load_config_file(ctx: click.Context, param: click.Parameter, value):
    """Seed the default map from a key=value file; explicit flags still win."""
    if value is None:
        return None
    multi = {p.name for p in ctx.command.params if getattr(p, "multiple", False)}
    defaults = {}
    try:
        text = pathlib.Path(value).read_text(encoding="utf-8")
    except OSError as exc:
        raise click.UsageError(f"cannot read config file: {exc}")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise click.UsageError(f"{value}:{lineno}: expected key=value, got {line!r}")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        val = val.strip()
        defaults[key] = [v.strip() for v in val.split(",")] if key in multi else val
    ctx.default_map = {**defaults, **(ctx.default_map or {})}
    return value


def _config_option():
    return click.option(
        "--config",
        type=click.Path(exists=False),
        default=None,
        is_eager=True,
        expose_value=False,
        callback=_load_config_file,
        help="Key=value file with the same keys as the flags; flags override it.",
    )


def _make_http_client(server: str) -> httpx.Client:
    return httpx.Client(base_url=server, timeout=3600.0)


def _post(server: str, path: str, payload: dict) -> dict:
    with _make_http_client(server) as client:
        resp = client.post(path, json=payload)
        if resp.status_code >= 400:
            raise click.UsageError(f"server rejected request: {resp.status_code} {resp.text}")
        return resp.json()


def _get_text(server: str, path: str) -> str:
    with _make_http_client(server) as client:
        resp = client.get(path)
        if resp.status_code >= 400:
            raise click.UsageError(f"server error: {resp.status_code} {resp.text}")
        return resp.text


@click.group()
def cli() -> None:
    """Two-phase beam training simulator."""


@cli.command()
@_config_option()
@click.option("--snr-start", type=float, default=-20.0, show_default=True, help="Sweep start SNR in dB.")
@click.option("--snr-stop", type=float, default=0.0, show_default=True, help="Sweep end SNR in dB, inclusive.")
@click.option("--snr-step", type=float, default=5.0, show_default=True, help="SNR increment in dB.")
@click.option("--bits", type=_BITS_CHOICE, multiple=True, default=("1", "2"), show_default=True,
              help="Quantizer resolution, repeatable; inf disables quantization.")
@click.option("--paths", type=int, multiple=True, default=(1, 2), show_default=True,
              help="Path count L, repeatable.")
@click.option("--grid", type=int, multiple=True, default=(16,), show_default=True,
              help="Beam grid size per axis, repeatable.")
@click.option("--array", type=int, default=16, show_default=True, help="Antennas per axis, both ends.")
@click.option("--trials", type=int, default=1000, show_default=True, help="Monte Carlo trials per cell.")
@click.option("--seed", type=int, default=0, show_default=True, help="Base seed for the whole sweep.")
@click.option("--gain-dist", type=click.Choice(["unit", "cn"]), default="unit", show_default=True,
              help="Path gain law: unit-modulus phases or circular complex normal.")
@click.option("--score", type=click.Choice(["pairs", "perpath"]), default="pairs", show_default=True,
              help="Trial scoring rule.")
@click.option("--out", type=click.Path(dir_okay=False), default="sweep.csv", show_default=True,
              help="CSV output path.")
@click.option("--json", "json_out", is_flag=True, help="Also write a JSON summary next to the CSV.")
@click.option("--server", default=None, help="Run on this service URL instead of in process.")
def sweep(snr_start, snr_stop, snr_step, bits, paths, grid, array, trials, seed,
          gain_dist, score, out, json_out, server) -> None:
    """Run a Monte Carlo success-rate sweep and write it as CSV."""
    if snr_step <= 0:
        raise click.UsageError("--snr-step must be positive")
    if snr_stop < snr_start:
        raise click.UsageError("--snr-stop must be >= --snr-start")
    snrs = []
    current = snr_start
    while current <= snr_stop + 1e-9:
        snrs.append(round(current, 9))
        current += snr_step
    try:
        req = SweepRequest(
            snr_db=snrs,
            bits=_parse_bits(bits),
            paths=list(paths),
            grid=list(grid),
            array=array,
            trials=trials,
            seed=seed,
            gain_dist=gain_dist,
            score=score,
            wait=True,
        )
        req.to_config()
    except ValueError as exc:
        raise click.UsageError(str(exc))

    if server is None:
        result, summary = execute_sweep(req)
        csv_text = sweep_csv_text(result)
        summary_dict = summary.model_dump()
    else:
        info = _post(server, "/sweeps", req.model_dump())
        if info.get("state") != "done":
            raise click.UsageError(f"server returned unfinished job: {info}")
        csv_text = _get_text(server, f"/sweeps/{info['job_id']}/csv")
        summary_dict = info["result"]

    pathlib.Path(out).write_text(csv_text, encoding="utf-8", newline="")
    written = [out]
    if json_out:
        json_path = str(pathlib.Path(out).with_suffix(".json"))
        pathlib.Path(json_path).write_text(
            json.dumps(summary_dict, indent=2) + "\n", encoding="utf-8"
        )
        written.append(json_path)
    n_cells = len(summary_dict["cells"])
    n_skipped = len(summary_dict["skipped"])
    click.echo(f"wrote {' and '.join(written)} ({n_cells} cells, {n_skipped} skipped)")


@cli.command()
@_config_option()
@click.option("--paths", type=int, multiple=True, default=(1, 2), show_default=True,
              help="Path count L, repeatable.")
@click.option("--sectors", type=int, default=2, show_default=True,
              help="Sector split K of the hierarchical baseline.")
@click.option("--gt", type=int, default=32, show_default=True,
              help="Transmit beam count swept by the baseline.")
@click.option("--server", default=None, help="Run on this service URL instead of in process.")
def timing(paths, sectors, gt, server) -> None:
    """Print the training slot count against the hierarchical baseline."""
    try:
        req = TimingRequest(paths=list(paths), sectors=sectors, gt=gt)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if server is None:
        try:
            resp = execute_timing(req)
        except ValueError as exc:
            raise click.UsageError(str(exc))
        text = resp.text
    else:
        text = _post(server, "/timing", req.model_dump())["text"]
    click.echo(text)


@cli.command()
@_config_option()
@click.option("--snr", "snr_db", type=float, default=0.0, show_default=True, help="SNR in dB.")
@click.option("--bits", type=_BITS_CHOICE, default="1", show_default=True, help="Quantizer resolution.")
@click.option("--paths", type=int, default=2, show_default=True, help="Path count L.")
@click.option("--grid", type=int, default=16, show_default=True, help="Beam grid size per axis.")
@click.option("--array", type=int, default=16, show_default=True, help="Antennas per axis.")
@click.option("--seed", type=int, default=0, show_default=True, help="Trial seed.")
@click.option("--gain-dist", type=click.Choice(["unit", "cn"]), default="unit", show_default=True)
@click.option("--server", default=None, help="Run on this service URL instead of in process.")
def demo(snr_db, bits, paths, grid, array, seed, gain_dist, server) -> None:
    """Run one training trial and print everything it recovered."""
    try:
        req = DemoRequest(
            snr_db=snr_db, bits=bits, paths=paths, grid=grid,
            array=array, seed=seed, gain_dist=gain_dist,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if server is None:
        try:
            resp = execute_demo(req).model_dump()
        except ValueError as exc:
            raise click.UsageError(str(exc))
    else:
        resp = _post(server, "/demo", req.model_dump())

    def fmt_pairs(pairs):
        return ", ".join(f"({a[0]},{a[1]})->({d[0]},{d[1]})" for a, d in pairs)

    def fmt_beams(beams):
        return ", ".join(f"({b[0]},{b[1]})" for b in beams)

    click.echo(
        f"one trial: L={resp['paths']}, grid {resp['grid']}x{resp['grid']}, "
        f"array {resp['array']}x{resp['array']}, bits={resp['bits']}, "
        f"snr={resp['snr_db']} dB, gains={resp['gain_dist']}, seed={resp['seed']}"
    )
    click.echo(f"truth pairs:        {fmt_pairs(resp['truth_pairs'])}")
    click.echo(f"recovered arrivals: {fmt_beams(resp['s_aoa'])}")
    click.echo(f"matched departures: {fmt_beams(resp['s_aod'])}")
    click.echo(f"recovered pairs:    {fmt_pairs(resp['pairs'])}")
    click.echo(f"slots used:         {resp['slots_used']}")
    click.echo(f"success:            {resp['success']}")


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


def main(argv=None) -> int:
    """Entry point returning the process exit code instead of raising."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except httpx.HTTPError as exc:
        click.echo(f"transport error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return 2
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
