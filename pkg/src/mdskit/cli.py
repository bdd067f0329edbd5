"""Command-line entry point: ``mdskit <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (or a negative verdict such
as a set that is not decycling) and 2 on a usage error.
"""
from __future__ import annotations

import csv
import io
import json
import os
import sys

import click

from . import constructions, sketching
from .dbg_core import GraphParams, decode, format_kmer_set, necklace_count, read_kmer_set
from .decycling import find_cycle_avoiding, longest_remaining_path
from .errors import MdsError
from .mds_space import (
    Mds,
    enumerate_all_mds_bruteforce,
    mds_graph_dot,
    nondecycling_fmove_graph_check,
    traverse_components,
    verify_conjecture_connectivity,
    verify_conjecture_imove_signature,
)
from .optimize import AnnealConfig, anneal_many, component_rpl_range

CENSUS_DEFAULT_KMAX = 6
CENSUS_FORCED_KMAX = 7


def resolve_threads(value: int | None) -> int:
    if value:
        return max(1, value)
    env = os.environ.get("MDS_THREADS", "")
    if env.strip().isdigit() and int(env) > 0:
        return int(env)
    return os.cpu_count() or 1


class Output:
    """Tabular writer honouring --format and --out."""

    def __init__(self, fmt: str, path: str | None):
        self.fmt = fmt
        self.path = path
        self.buffer = io.StringIO(newline="")

    def table(self, header: list[str], rows) -> None:
        if self.fmt == "json":
            for row in rows:
                self.buffer.write(json.dumps(dict(zip(header, row))) + "\n")
            return
        writer = csv.writer(self.buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)

    def text(self, text: str) -> None:
        self.buffer.write(text)

    def flush(self) -> None:
        data = self.buffer.getvalue()
        if self.path:
            with open(self.path, "w", encoding="utf-8", newline="") as fh:
                fh.write(data)
        else:
            click.echo(data, nl=False)


GLOBAL_DEFAULTS = {"sigma": 2, "k": None, "seed": 0, "out": None}


def _resolve(ctx, **given):
    """Fill options left unset on the subcommand from the group-level flags."""
    out = []
    for name, value in given.items():
        if value is None:
            value = ctx.obj.get(name)
        if value is None:
            value = GLOBAL_DEFAULTS.get(name)
        if value is None and name == "k":
            raise click.UsageError("--k is required", ctx)
        out.append(value)
    return out if len(out) > 1 else out[0]


sigma_option = click.option("--sigma", type=int, default=None, help="Alphabet size (default 2).")
k_option = click.option("--k", "k", type=int, default=None, help="k-mer length.")
seed_option = click.option("--seed", type=int, default=None, help="Random seed (default 0).")
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write here instead of stdout.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--threads", type=int, default=None, help="Worker cap (default: MDS_THREADS or all cores).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "dot"]), default="csv", show_default=True)
@sigma_option
@k_option
@seed_option
@out_option
@click.pass_context
def cli(ctx, threads, fmt, sigma, k, seed, out):
    """Construct, verify, enumerate and optimise minimum decycling sets."""
    ctx.obj = {"threads": resolve_threads(threads), "format": fmt, "sigma": sigma, "k": k, "seed": seed, "out": out}


@cli.command()
@click.option("--method", type=click.Choice(["mykkeltveit", "champarnaud", "random"]), required=True)
@sigma_option
@k_option
@seed_option
@out_option
@click.pass_context
def generate(ctx, method, sigma, k, seed, out):
    """Emit an MDS in the k-mer set text format."""
    sigma, k, seed, out = _resolve(ctx, sigma=sigma, k=k, seed=seed, out=out)
    params = GraphParams(sigma, k)
    if method == "mykkeltveit":
        kmers = constructions.mykkeltveit_set(params)
    elif method == "champarnaud":
        kmers = constructions.champarnaud_set(params)
    else:
        kmers = constructions.random_mds(params, seed=seed)
    sink = Output("csv", out)
    sink.text(format_kmer_set(kmers))
    sink.flush()


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def verify(path):
    """Check that a k-mer set is decycling; print its remaining path length or a cycle."""
    kmers = read_kmer_set(path)
    p = kmers.params
    cycle = find_cycle_avoiding(kmers)
    if cycle is not None:
        click.echo("not decycling")
        click.echo("cycle: " + cycle.render(p))
        return 1
    rpl = len(longest_remaining_path(kmers))
    click.echo(f"decycling remaining_path_length={rpl}")
    if len(kmers) == necklace_count(p):
        click.echo(f"size {len(kmers)} (minimum)")
    else:
        click.echo(f"size {len(kmers)} (minimum is {necklace_count(p)})")
    return 0


@cli.command("longest-path")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def longest_path(path):
    """Print the remaining path length and one longest path avoiding the set."""
    kmers = read_kmer_set(path)
    p = kmers.params
    walk = longest_remaining_path(kmers)
    click.echo(f"remaining_path_length={len(walk)}")
    click.echo("path: " + " ".join(decode(u, p) for u in walk))
    click.echo("sequence: " + "".join(str(c) for c in sketching.spell_path(walk, p)))


@cli.command()
@sigma_option
@k_option
@click.option("--dot", is_flag=True, help="Emit the whole F-move graph on MDSs in DOT (sigma^k <= 32).")
@click.option("--rpl/--no-rpl", default=True, show_default=True, help="Report per-component path-length range.")
@out_option
@click.pass_context
def enumerate(ctx, sigma, k, dot, rpl, out):
    """Per-component statistics: size, layer sizes, path-length range."""
    sigma, k, out = _resolve(ctx, sigma=sigma, k=k, out=out)
    params = GraphParams(sigma, k)
    if dot or ctx.obj["format"] == "dot":
        sink = Output("csv", out)
        sink.text(mds_graph_dot(params))
        sink.flush()
        return
    start = Mds.from_kmer_set(constructions.mykkeltveit_set(params))
    report = traverse_components(start, with_rpl=rpl)
    rows = [
        (c.fingerprint_hash, c.mds_count, " ".join(map(str, c.layer_sizes)),
         "" if c.min_rpl is None else c.min_rpl, "" if c.max_rpl is None else c.max_rpl)
        for c in sorted(report, key=lambda c: c.representative.chosen)
    ]
    sink = Output(ctx.obj["format"], out)
    sink.table(["fingerprint_hash", "mds_count", "layers", "min_rpl", "max_rpl"], rows)
    sink.flush()


@cli.command()
@sigma_option
@k_option
@click.option("--limit", type=int, default=None, help="Stop after this many components.")
@click.option("--paranoid", is_flag=True, help="Also compare canonical representatives on fingerprint hits.")
@seed_option
@out_option
@click.pass_context
def traverse(ctx, sigma, k, limit, paranoid, seed, out):
    """Walk the component graph from the Mykkeltveit set and summarise the census."""
    sigma, k, out = _resolve(ctx, sigma=sigma, k=k, out=out)
    params = GraphParams(sigma, k)
    start = Mds.from_kmer_set(constructions.mykkeltveit_set(params))
    report = traverse_components(start, limit=limit, seed=seed, paranoid=paranoid)
    layers = [x for c in report for x in c.layer_sizes if x]
    sink = Output(ctx.obj["format"], out)
    sink.table(
        ["sigma", "k", "components", "mds_count", "layer_min", "layer_max", "collisions"],
        [(sigma, k, len(report), report.mds_count, min(layers), max(layers), len(report.collisions))],
    )
    sink.flush()
    if report.collisions:
        click.echo(f"fingerprint collisions: {len(report.collisions)}", err=True)
        return 1
    return 0


@cli.command("verify-conjectures")
@sigma_option
@k_option
@click.option("--force", is_flag=True, help="Allow the long exhaustive runs (sigma^k up to 128).")
@click.pass_context
def verify_conjectures(ctx, sigma, k, force):
    """Compare conjecture-driven traversal with exhaustive enumeration."""
    sigma, k = _resolve(ctx, sigma=sigma, k=k)
    params = GraphParams(sigma, k)
    reports = [verify_conjecture_connectivity(params, force), verify_conjecture_imove_signature(params, force)]
    ok = True
    for r in reports:
        click.echo(r.line())
        ok &= r.holds
    if params.size <= 16:
        g = nondecycling_fmove_graph_check(params)
        click.echo(
            f"nondecycling-fmove-graph: {'holds' if g.holds else 'FAILS'} nodes={g.nodes} "
            f"components={g.components} longest_path={g.longest_path} crossing_edges={g.crossing_edges}"
        )
        ok &= g.holds
    return 0 if ok else 1


@cli.command("anneal")
@sigma_option
@k_option
@click.option("--objective", type=click.Choice(["min", "max"]), default="min", show_default=True)
@click.option("--iterations", type=int, default=200, show_default=True)
@click.option("--fmoves", type=int, default=None, help="Random F-moves per component (default 2k).")
@click.option("--t0", type=float, default=None, help="Initial temperature (default k).")
@click.option("--cooling", type=float, default=0.995, show_default=True)
@click.option("--start", type=click.Choice(["mykkeltveit", "champarnaud", "random"]), default="mykkeltveit")
@click.option("--chains", type=int, default=1, show_default=True, help="Independent chains with seeds seed..seed+chains-1.")
@seed_option
@out_option
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), default=None, help="JSON-lines trace file.")
@click.pass_context
def anneal_cmd(ctx, sigma, k, objective, iterations, fmoves, t0, cooling, start, chains, seed, out, trace_path):
    """Simulated annealing for the smallest or largest remaining path length."""
    sigma, k, seed, out = _resolve(ctx, sigma=sigma, k=k, seed=seed, out=out)
    params = GraphParams(sigma, k)
    try:
        cfg = AnnealConfig(objective, fmoves, iterations, t0, cooling, seed, start)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    results = anneal_many(params, cfg, range(seed, seed + chains), threads=ctx.obj["threads"])
    pick = min if objective == "min" else max
    best = pick(results, key=lambda r: r.best_rpl)
    if trace_path:
        with open(trace_path, "w", encoding="utf-8") as fh:
            for chain, res in zip(range(seed, seed + chains), results):
                for it, fp, local, temp in res.trace:
                    fh.write(json.dumps({"seed": chain, "iteration": it, "component": fp,
                                         "local_best": local, "temperature": round(temp, 12)}) + "\n")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(format_kmer_set(best.best.kmer_set()))
    stopped = " (stopped: no I-move)" if best.stopped_early else ""
    click.echo(f"best_remaining_path_length={best.best_rpl}{stopped}")


@cli.command("rpl-range")
@sigma_option
@k_option
@click.option("--sample", type=int, default=None, help="Random-walk this many F-moves instead of enumerating.")
@click.option("--limit", type=int, default=None, help="Components to visit.")
@seed_option
@out_option
@click.pass_context
def rpl_range(ctx, sigma, k, sample, limit, seed, out):
    """Per-component minimum and maximum remaining path length (CSV)."""
    sigma, k, seed, out = _resolve(ctx, sigma=sigma, k=k, seed=seed, out=out)
    params = GraphParams(sigma, k)
    start = Mds.from_kmer_set(constructions.mykkeltveit_set(params))
    report = traverse_components(start, limit=limit, seed=seed if limit else None)
    rows = []
    for c in sorted(report, key=lambda c: c.representative.chosen):
        if sample:
            lo, hi = component_rpl_range(c.representative, "sample", samples=sample, seed=seed)
        else:
            lo, hi = component_rpl_range(c.representative)
        rows.append((c.fingerprint_hash, lo, hi))
    sink = Output(ctx.obj["format"], out)
    sink.table(["component_hash", "min_rpl", "max_rpl"], rows)
    sink.flush()


def _parse_mask(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise click.BadParameter("mask must be comma-separated offsets") from exc


@cli.command("sketch-eval")
@click.option("--scheme", type=click.Choice(["set", "minimizer", "syncmer", "threshold"]), required=True)
@sigma_option
@k_option
@click.option("--w", type=int, default=10, show_default=True)
@click.option("--s", "s", type=int, default=None)
@click.option("--mask", default="1", show_default=True, help="Syncmer offsets, 1-based, comma separated.")
@click.option("--threshold", type=float, default=0.1, show_default=True)
@click.option("--set", "set_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--length", type=int, default=100_000, show_default=True)
@click.option("--trials", type=int, default=5, show_default=True)
@click.option("--mutation-rate", type=float, default=0.01, show_default=True)
@seed_option
@out_option
@click.pass_context
def sketch_eval(ctx, scheme, sigma, k, w, s, mask, threshold, set_path, length, trials, mutation_rate, seed, out):
    """Density, conservation and largest gap of a scheme on random sequences."""
    seed, out = _resolve(ctx, seed=seed, out=out)
    sigma = sigma or ctx.obj["sigma"] or 4
    k = k or ctx.obj["k"]
    try:
        if scheme == "set":
            if not set_path:
                raise click.UsageError("--scheme set needs --set FILE")
            kmers = read_kmer_set(set_path)
            sch = sketching.set_indicator(kmers)
        elif k is None:
            raise click.UsageError("--k is required for this scheme")
        elif scheme == "minimizer":
            sch = sketching.minimizer(k, w, seed=seed, sigma=sigma)
        elif scheme == "syncmer":
            sch = sketching.syncmer(k, s if s is not None else max(1, k - 4), _parse_mask(mask), seed=seed, sigma=sigma)
        else:
            sch = sketching.hash_threshold(k, threshold, seed=seed, sigma=sigma)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    rng = constructions.make_rng(seed)
    seq = sketching.random_sequence(length, sch.sigma, rng)
    dens = sketching.density(sketching.sketch(sch, seq))
    cons = sketching.conservation(sch, seq, mutation_rate, trials=trials, seed=seed)
    gap, _ = sketching.empirical_window(sch, trials=trials, length=length, seed=seed + 1)
    sink = Output(ctx.obj["format"], out)
    sink.table(["scheme", "density", "conservation", "max_gap"], [(scheme, f"{dens:.6f}", f"{cons:.6f}", gap)])
    sink.flush()


@cli.command()
@k_option
@click.option("--s", "s", type=int, default=None, help="s-mer length (default k-1).")
@sigma_option
@out_option
@click.pass_context
def adversary(ctx, k, s, sigma, out):
    """Write a sequence on which the first-offset open syncmer selects nothing."""
    sigma, k, out = _resolve(ctx, sigma=sigma, k=k, out=out)
    s = k - 1 if s is None else s
    try:
        seq, scheme = sketching.syncmer_adversary(k, s, sigma)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    picked = int(sketching.selected_mask(scheme, seq).sum())
    sink = Output("csv", out)
    sink.text("".join(str(c) for c in seq) + "\n")
    sink.flush()
    click.echo(f"length={len(seq)} selected={picked}", err=True)


def _exhaustive_range(params: GraphParams, force: bool):
    values = [m.rpl() for m in enumerate_all_mds_bruteforce(params, force=force)]
    return min(values), max(values)


@cli.command()
@click.option("--which", type=click.Choice(["1", "2"]), required=True)
@sigma_option
@click.option("--kmax", type=int, required=True)
@click.option("--force", is_flag=True, help="Include the long k=7 cells.")
@out_option
@click.pass_context
def tables(ctx, which, sigma, kmax, force, out):
    """Reproduce the feasible cells of the component table (1) or path-length table (2)."""
    sigma, out = _resolve(ctx, sigma=sigma, out=out)
    sink = Output(ctx.obj["format"], out)
    if which == "1":
        ks = list(range(2, kmax + 1))
        limit = CENSUS_FORCED_KMAX if force else CENSUS_DEFAULT_KMAX
        cols = {"components": [], "mds": [], "layer_range": []}
        for k in ks:
            params = GraphParams(sigma, k)
            if k > limit or params.size > 2**limit:
                for v in cols.values():
                    v.append("")
                continue
            report = traverse_components(Mds.from_kmer_set(constructions.mykkeltveit_set(params)))
            layers = [x for c in report for x in c.layer_sizes if x]
            cols["components"].append(len(report))
            cols["mds"].append(report.mds_count)
            cols["layer_range"].append(f"{min(layers)}-{max(layers)}")
        sink.table(["metric"] + ks, [[name] + vals for name, vals in cols.items()])
    else:
        ks = list(range(4, kmax + 1))
        rows = {"Mykkeltveit": [], "Champarnaud": [], "Exhaustive Min": [], "Exhaustive Max": []}
        for k in ks:
            params = GraphParams(sigma, k)
            rows["Mykkeltveit"].append(len(longest_remaining_path(constructions.mykkeltveit_set(params))))
            rows["Champarnaud"].append(len(longest_remaining_path(constructions.champarnaud_set(params))))
            if params.size <= 64 or (force and params.size <= 128):
                lo, hi = _exhaustive_range(params, force)
            else:
                lo = hi = ""
            rows["Exhaustive Min"].append(lo)
            rows["Exhaustive Max"].append(hi)
        sink.table(["algorithm"] + ks, [[name] + vals for name, vals in rows.items()])
    sink.flush()


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="mdskit", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 1
    except MdsError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return rv if isinstance(rv, int) else 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
