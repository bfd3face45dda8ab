"""Command-line surface: sweeps, DMT tables, trace CDFs, and the selftest.

All values cross this boundary in dB and SI units; conversion to the linear
internal representation happens here. Output is CSV with a fixed column
order, so re-running a command with the same flags and seed is
byte-identical.

Exit codes: 0 success, 2 validation error, 3 numeric failure, 4 I/O error.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import field_trial, selftest
from . import outage as outage_mod
from .combiners import Combiner
from .exceptions import (BracketError, ConvergenceError, DegenerateSpacingError,
                         DomainError, QuadratureError, TraceError,
                         UnsupportedLinkCountError)
from .gains_dmt import (GainQuery, dmt, dmt_empirical, snr_gain_jd_vs,
                        snr_gain_mco_sco)
from .link_model import db_to_linear, equal_power_topology
from .throughput import throughput_asymptotic, throughput_exact

_COMBINER_CHOICES = [c.value for c in Combiner]
_OUTAGE_METHODS = ["exact", "asymptotic", "bound", "mc"]
_THROUGHPUT_METHODS = ["exact", "asymptotic", "paper-approx"]
_GAIN_KINDS = ["mco-sco", "jd-sc", "jd-mrc"]


def _parse_range(spec: str) -> list[float]:
    try:
        start_s, stop_s, steps_s = spec.split(":")
        start, stop, steps = float(start_s), float(stop_s), int(steps_s)
    except ValueError:
        raise DomainError(f"range must be start:stop:steps, got {spec!r}")
    if not start < stop:
        raise DomainError(f"range start must be below stop in {spec!r}")
    if steps < 2:
        raise DomainError(f"range needs at least 2 steps, got {steps}")
    return [float(x) for x in np.linspace(start, stop, steps)]


def _parse_distances(spec, n_links) -> dict[int, list[float]]:
    if spec is None:
        return {n: [1.0] * n for n in n_links}
    values = [float(x) for x in spec.split(",")]
    if any(d <= 0 for d in values):
        raise DomainError("distances must be positive")
    for n in n_links:
        if n != len(values):
            raise DomainError(
                f"--distances has {len(values)} entries but --n-links "
                f"includes {n}")
    return {n: values for n in n_links}


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _write_gnuplot(out: str, header) -> None:
    script = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set logscale y",
        f"plot " + ", ".join(
            f"'{Path(out).name}' using 1:{i + 2} with lines"
            for i in range(len(header) - 2)),
        "pause -1",
    ]
    Path(out).with_suffix(".gp").write_text("\n".join(script) + "\n",
                                            encoding="utf-8")


def _fmt(value: float) -> str:
    return repr(float(value))


def _plan_n(combiner: Combiner, n: int) -> int:
    # SCo is the single-link baseline regardless of the sweep's link counts.
    return 1 if combiner is Combiner.SCO else n


def _normalize_plan(combiners, n_links, methods, valid_methods,
                    check) -> list[tuple[Combiner, int, str]]:
    plan = []
    for n in n_links:
        if n < 1:
            raise DomainError("--n-links entries must be >= 1")
        for name in combiners:
            combiner = Combiner.parse(name)
            for method in methods:
                if method not in valid_methods:
                    raise DomainError(f"unknown method {method!r}")
                check(combiner, _plan_n(combiner, n), method)
                entry = (combiner, _plan_n(combiner, n), method)
                if entry not in plan:
                    plan.append(entry)
    return plan


def _check_outage_combo(combiner: Combiner, n: int, method: str) -> None:
    if method == "exact" and combiner is Combiner.JD and n > outage_mod.MAX_QUADRATURE_LINKS:
        raise UnsupportedLinkCountError(
            f"exact JD outage supports N <= {outage_mod.MAX_QUADRATURE_LINKS}")
    if method == "bound" and combiner in (Combiner.SC, Combiner.SCO):
        raise DomainError(f"method 'bound' is not defined for "
                          f"{combiner.value}")


def _check_throughput_combo(combiner: Combiner, n: int, method: str) -> None:
    if method == "exact" and combiner is Combiner.JD and n > outage_mod.MAX_QUADRATURE_LINKS:
        raise UnsupportedLinkCountError(
            f"exact JD rate supports N <= {outage_mod.MAX_QUADRATURE_LINKS}")
    if method == "paper-approx" and combiner is not Combiner.JD:
        raise DomainError("method 'paper-approx' applies to JD only")


# Figure-reproduction presets: pinned parameters, modest default fidelity.
_PRESETS = {
    "fig2a": dict(
        command="outage", n_links=(2, 3, 5), rate=0.5,
        plan=[(Combiner.JD, n, m) for n in (2, 3, 5)
              for m in ("mc", "asymptotic", "bound")]
        + [(Combiner.SCO, 1, "exact"), (Combiner.SCO, 1, "asymptotic")],
        snr_db_range="0:40:21", mc_samples=100_000, seed=7),
    "fig2b": dict(
        command="throughput", n_links=(2, 3, 5), p_out=1e-3,
        bandwidth_hz=20e6,
        plan=[(Combiner.JD, n, m) for n in (2, 3, 5)
              for m in ("asymptotic", "paper-approx")]
        + [(Combiner.SCO, 1, "asymptotic")],
        snr_db_range="10:60:26", seed=7),
    "fig3a": dict(
        command="gain", kinds=("mco-sco",), n_links=(2, 3, 4),
        p_outs=(1e-3, 1e-5), rate_range="0.5:25:50"),
    "fig3b": dict(
        command="gain", kinds=("jd-sc", "jd-mrc"), n_links=(2, 3, 4),
        p_outs=(1e-3,), rate_range="0.5:25:50"),
    "fig5c": dict(
        command="cdf", metric="outage", n_links=(2, 3), rate=1.0,
        combiners=("jd", "sc", "mrc", "sco"),
        synth_measurements=1000, synth_bs=16, seed=7),
    "fig5d": dict(
        command="cdf", metric="throughput", n_links=(2, 3), p_out=1e-5,
        bandwidth_hz=20e6, combiners=("jd", "sc", "mrc", "sco"),
        synth_measurements=1000, synth_bs=16, seed=7),
}


def _preset(name, expected_command):
    if name is None:
        return None
    if name not in _PRESETS:
        raise DomainError(f"unknown preset {name!r}; choose from "
                          f"{sorted(_PRESETS)}")
    preset = _PRESETS[name]
    if preset["command"] != expected_command:
        raise DomainError(f"preset {name!r} belongs to the "
                          f"'{preset['command']}' subcommand")
    return preset


@click.group()
def cli():
    """Outage, throughput, SNR-gain, and DMT calculator for
    multi-connectivity over parallel Rayleigh fading links."""


@cli.command("outage")
@click.option("--preset", default=None, help="Figure preset (fig2a).")
@click.option("--n-links", "n_links", multiple=True, type=int)
@click.option("--rate", type=float, default=None,
              help="Spectral efficiency R_c.")
@click.option("--combiner", "combiners", multiple=True,
              type=click.Choice(_COMBINER_CHOICES))
@click.option("--method", "methods", multiple=True,
              type=click.Choice(_OUTAGE_METHODS))
@click.option("--snr-db-range", default=None, help="start:stop:steps in dB.")
@click.option("--distances", default=None,
              help="Comma-separated per-link distances in meters.")
@click.option("--eta", type=float, default=2.0)
@click.option("--mc-samples", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--bandwidth-hz", type=float, default=20e6)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@click.option("--gnuplot", is_flag=True)
def outage_cmd(preset, n_links, rate, combiners, methods, snr_db_range,
               distances, eta, mc_samples, seed, bandwidth_hz, out, gnuplot):
    """Sweep outage probability over total transmit SNR."""
    cfg = _preset(preset, "outage")
    if cfg:
        plan = cfg["plan"]
        rate = rate if rate is not None else cfg["rate"]
        snr_db_range = snr_db_range or cfg["snr_db_range"]
        mc_samples = mc_samples if mc_samples is not None else cfg["mc_samples"]
        seed = seed if seed is not None else cfg["seed"]
        n_links = n_links or cfg["n_links"]
    else:
        n_links = n_links or (2,)
        combiners = combiners or ("jd",)
        methods = methods or ("asymptotic",)
        plan = _normalize_plan(combiners, n_links, methods, _OUTAGE_METHODS,
                               _check_outage_combo)
        rate = rate if rate is not None else 1.0
        snr_db_range = snr_db_range or "0:40:21"
        mc_samples = mc_samples if mc_samples is not None else 1_000_000
        seed = seed if seed is not None else 0
    if rate < 0:
        raise DomainError("--rate must be nonnegative")
    grid = _parse_range(snr_db_range)
    dist_map = _parse_distances(distances, {n for _, n, _ in plan})

    header = ["snr_db"]
    for combiner, n, method in plan:
        name = f"{combiner.value}_n{n}_{method}"
        header.append(name)
        if method == "mc":
            header.append(name + "_ci")
    header.append("flags")

    rows = []
    for point_index, snr_db in enumerate(grid):
        total = db_to_linear(snr_db)
        row = [_fmt(snr_db)]
        flags = []
        for col_index, (combiner, n, method) in enumerate(plan):
            dists = dist_map[n]
            topo = equal_power_topology(total, dists, eta, bandwidth_hz)
            gammas = [link.average_snr for link in topo.links]
            if method == "exact":
                if combiner is Combiner.JD:
                    est = outage_mod.outage_jd_quadrature(gammas, rate)
                else:
                    est = outage_mod.outage_exact_closed(combiner, gammas, rate)
            elif method == "asymptotic":
                est = outage_mod.outage_asymptotic(combiner, gammas, rate)
            elif method == "bound":
                if combiner is Combiner.JD:
                    if max(gammas) - min(gammas) > 1e-12 * max(gammas):
                        raise DomainError(
                            "the JD lower bound requires equal per-link SNRs")
                    est = outage_mod.outage_jd_lower_bound_tse(
                        gammas[0], n, rate)
                else:
                    est = outage_mod.outage_asymptotic(combiner, gammas, rate)
            else:
                est = outage_mod.outage_monte_carlo(
                    combiner, topo, rate, sample_count=mc_samples,
                    seed=seed + 1009 * point_index + col_index)
            row.append(_fmt(est.value))
            if method == "mc":
                row.append(_fmt(est.ci_half_width))
            for flag in est.flags:
                flags.append(f"{combiner.value}_n{n}_{method}:{flag}")
        row.append(";".join(flags))
        rows.append(row)

    _emit(_csv_text(header, rows), out)
    if gnuplot and out:
        _write_gnuplot(out, header)


@cli.command("throughput")
@click.option("--preset", default=None, help="Figure preset (fig2b).")
@click.option("--n-links", "n_links", multiple=True, type=int)
@click.option("--outage", "p_out", type=float, default=None,
              help="Target outage probability.")
@click.option("--combiner", "combiners", multiple=True,
              type=click.Choice(_COMBINER_CHOICES))
@click.option("--method", "methods", multiple=True,
              type=click.Choice(_THROUGHPUT_METHODS))
@click.option("--snr-db-range", default=None)
@click.option("--distances", default=None)
@click.option("--eta", type=float, default=2.0)
@click.option("--seed", type=int, default=0)
@click.option("--bandwidth-hz", type=float, default=None)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@click.option("--gnuplot", is_flag=True)
def throughput_cmd(preset, n_links, p_out, combiners, methods, snr_db_range,
                   distances, eta, seed, bandwidth_hz, out, gnuplot):
    """Sweep throughput at a target outage over total transmit SNR."""
    cfg = _preset(preset, "throughput")
    if cfg:
        plan = cfg["plan"]
        p_out = p_out if p_out is not None else cfg["p_out"]
        snr_db_range = snr_db_range or cfg["snr_db_range"]
        bandwidth_hz = bandwidth_hz if bandwidth_hz is not None else cfg["bandwidth_hz"]
    else:
        n_links = n_links or (2,)
        combiners = combiners or ("jd",)
        methods = methods or ("asymptotic",)
        plan = _normalize_plan(combiners, n_links, methods,
                               _THROUGHPUT_METHODS, _check_throughput_combo)
        p_out = p_out if p_out is not None else 1e-3
        snr_db_range = snr_db_range or "10:60:26"
        bandwidth_hz = bandwidth_hz if bandwidth_hz is not None else 20e6
    if bandwidth_hz <= 0:
        raise DomainError("--bandwidth-hz must be positive")
    if not 0.0 < p_out < 1.0:
        raise DomainError("--outage must lie in (0, 1)")
    grid = _parse_range(snr_db_range)
    dist_map = _parse_distances(distances, {n for _, n, _ in plan})

    header = ["snr_db"]
    header += [f"{c.value}_n{n}_{m}_bps" for c, n, m in plan]
    header.append("flags")

    rows = []
    for snr_db in grid:
        total = db_to_linear(snr_db)
        row = [_fmt(snr_db)]
        flags = []
        for combiner, n, method in plan:
            topo = equal_power_topology(total, dist_map[n], eta, bandwidth_hz)
            gammas = [link.average_snr for link in topo.links]
            try:
                if method == "exact":
                    result = throughput_exact(combiner, topo, p_out)
                elif method == "paper-approx":
                    result = throughput_asymptotic(combiner, gammas, p_out,
                                                   bandwidth_hz, mode="paper")
                else:
                    result = throughput_asymptotic(combiner, gammas, p_out,
                                                   bandwidth_hz)
                row.append(_fmt(result.throughput))
            except (DomainError, BracketError):
                # Low-SNR points where an asymptotic inverse is undefined
                # still get a cell, flagged instead of dropped.
                row.append(_fmt(float("nan")))
                flags.append(f"{combiner.value}_n{n}_{method}:undefined")
        row.append(";".join(flags))
        rows.append(row)

    _emit(_csv_text(header, rows), out)
    if gnuplot and out:
        _write_gnuplot(out, header)


@cli.command("gain")
@click.option("--preset", default=None, help="Figure preset (fig3a, fig3b).")
@click.option("--kind", "kinds", multiple=True, type=click.Choice(_GAIN_KINDS))
@click.option("--n-links", "n_links", multiple=True, type=int)
@click.option("--outage", "p_outs", multiple=True, type=float)
@click.option("--rate-range", default=None, help="start:stop:steps.")
@click.option("--distances", default=None)
@click.option("--eta", type=float, default=2.0)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@click.option("--gnuplot", is_flag=True)
def gain_cmd(preset, kinds, n_links, p_outs, rate_range, distances, eta,
             out, gnuplot):
    """Sweep SNR gains (in dB) over spectral efficiency."""
    cfg = _preset(preset, "gain")
    if cfg:
        kinds = kinds or cfg["kinds"]
        n_links = n_links or cfg["n_links"]
        p_outs = p_outs or cfg["p_outs"]
        rate_range = rate_range or cfg["rate_range"]
    else:
        kinds = kinds or ("mco-sco",)
        n_links = n_links or (2,)
        p_outs = p_outs or (1e-3,)
        rate_range = rate_range or "0.5:25:50"
    for p in p_outs:
        if not 0.0 < p < 1.0:
            raise DomainError("--outage values must lie in (0, 1)")
    grid = _parse_range(rate_range)
    if grid[0] <= 0:
        raise DomainError("gain sweeps require positive spectral efficiency")
    dist_map = _parse_distances(distances, set(n_links))

    plan = []
    for kind in kinds:
        for n in n_links:
            if n < 2:
                raise DomainError("gain sweeps require n >= 2")
            if kind == "mco-sco":
                plan.extend((kind, n, p) for p in p_outs)
            else:
                plan.append((kind, n, None))

    header = ["rate"]
    for kind, n, p in plan:
        name = f"{kind.replace('-', '_')}_n{n}"
        if p is not None:
            name += f"_p{p:.0e}"
        header.append(name + "_db")

    rows = []
    for r_c in grid:
        row = [_fmt(r_c)]
        for kind, n, p in plan:
            if kind == "mco-sco":
                query = GainQuery(n_links=n, r_c=r_c, p_out=p,
                                  distances=tuple(dist_map[n]), eta=eta)
                gain = snr_gain_mco_sco(query)
            elif kind == "jd-sc":
                gain = snr_gain_jd_vs(Combiner.SC, n, r_c)
            else:
                gain = snr_gain_jd_vs(Combiner.MRC, n, r_c)
            row.append(_fmt(10.0 * math.log10(gain)))
        rows.append(row)

    _emit(_csv_text(header, rows), out)
    if gnuplot and out:
        _write_gnuplot(out, header)


@cli.command("dmt")
@click.option("--combiner", "combiners", multiple=True,
              type=click.Choice(["jd", "sc", "mrc"]))
@click.option("--n-links", "n_links", multiple=True, type=int)
@click.option("--steps", type=int, default=11)
@click.option("--empirical", is_flag=True,
              help="Add an empirical diversity-gain column.")
@click.option("--snr-db-range", default="80:100:5",
              help="Grid for the empirical estimate.")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def dmt_cmd(combiners, n_links, steps, empirical, snr_db_range, out):
    """Tabulate the diversity-multiplexing tradeoff."""
    combiners = combiners or ("jd", "sc", "mrc")
    n_links = n_links or (2,)
    if steps < 2:
        raise DomainError("--steps must be >= 2")
    grid_db = _parse_range(snr_db_range) if empirical else None

    header = ["combiner", "n_links", "r", "d_analytic"]
    if empirical:
        header.append("d_empirical")
    rows = []
    for name in combiners:
        combiner = Combiner.parse(name)
        for n in n_links:
            r_max = float(n) if combiner is Combiner.JD else 1.0
            for r in np.linspace(0.0, r_max, steps):
                point = dmt(combiner, float(r), n)
                row = [combiner.value, str(n), _fmt(r),
                       _fmt(point.diversity_gain)]
                if empirical:
                    row.append(_fmt(dmt_empirical(combiner, float(r), n,
                                                  grid_db)))
                rows.append(row)

    _emit(_csv_text(header, rows), out)


@cli.command("cdf")
@click.option("--preset", default=None, help="Figure preset (fig5c, fig5d).")
@click.option("--trace", "trace_path", default=None,
              type=click.Path(dir_okay=False))
@click.option("--synth-measurements", type=int, default=None)
@click.option("--synth-bs", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--n-links", "n_links", multiple=True, type=int)
@click.option("--combiner", "combiners", multiple=True,
              type=click.Choice(_COMBINER_CHOICES))
@click.option("--rate", type=float, default=None,
              help="Spectral efficiency for outage CDFs.")
@click.option("--outage", "p_out", type=float, default=None,
              help="Target outage for throughput CDFs.")
@click.option("--bandwidth-hz", type=float, default=20e6)
@click.option("--out", default=None,
              help="Output path prefix; one CSV per (combiner, N).")
def cdf_cmd(preset, trace_path, synth_measurements, synth_bs, seed, n_links,
            combiners, rate, p_out, bandwidth_hz, out):
    """Empirical outage or throughput CDFs from a measured or synthetic
    trace."""
    cfg = _preset(preset, "cdf")
    if cfg:
        n_links = n_links or cfg["n_links"]
        combiners = combiners or cfg["combiners"]
        seed = seed if seed is not None else cfg["seed"]
        synth_measurements = synth_measurements or cfg["synth_measurements"]
        synth_bs = synth_bs or cfg["synth_bs"]
        if cfg["metric"] == "outage":
            rate = rate if rate is not None else cfg["rate"]
        else:
            p_out = p_out if p_out is not None else cfg["p_out"]
            bandwidth_hz = cfg.get("bandwidth_hz", bandwidth_hz)
    else:
        n_links = n_links or (2,)
        combiners = combiners or ("jd",)
        seed = seed if seed is not None else 0

    if (rate is None) == (p_out is None):
        raise DomainError("pass exactly one of --rate (outage CDF) or "
                          "--outage (throughput CDF)")

    if trace_path:
        trace = field_trial.load_trace(trace_path)
    else:
        trace = field_trial.synthesize_trace(synth_measurements or 1000,
                                             synth_bs or 16, seed=seed)

    metric = "outage" if p_out is None else "throughput"
    for name in combiners:
        combiner = Combiner.parse(name)
        for n in n_links:
            n_eff = _plan_n(combiner, n)
            if metric == "outage":
                cdf = field_trial.empirical_outage_cdf(trace, n_eff, rate,
                                                       combiner)
            else:
                cdf = field_trial.empirical_throughput_cdf(
                    trace, n_eff, p_out, bandwidth_hz, combiner)
            buf = io.StringIO()
            field_trial.write_cdf(cdf, buf)
            if out:
                path = Path(f"{out}_{metric}_{combiner.value}_n{n_eff}.csv")
                path.write_text(buf.getvalue(), encoding="utf-8")
                if cdf.skipped_measurements:
                    click.echo(f"# skipped {cdf.skipped_measurements} "
                               f"measurements for {combiner.value} "
                               f"n={n_eff}", err=True)
            else:
                click.echo(f"# metric={metric} combiner={combiner.value} "
                           f"n={n_eff} skipped={cdf.skipped_measurements}")
                click.echo(buf.getvalue(), nl=False)


@cli.command("synth-trace")
@click.option("--measurements", type=int, default=1000)
@click.option("--bs", "n_bs", type=int, default=16)
@click.option("--seed", type=int, default=0)
@click.option("--mean-db", type=float, default=21.0)
@click.option("--bs-spread-db", type=float, default=4.0)
@click.option("--shadowing-db", type=float, default=5.0)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def synth_trace_cmd(measurements, n_bs, seed, mean_db, bs_spread_db,
                    shadowing_db, out):
    """Generate a deterministic synthetic SNR trace CSV."""
    params = field_trial.SnrModelParams(mean_db=mean_db,
                                        bs_spread_db=bs_spread_db,
                                        shadowing_db=shadowing_db)
    trace = field_trial.synthesize_trace(measurements, n_bs,
                                         snr_model_params=params, seed=seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(field_trial.TRACE_HEADER)
    for rec in trace.records:
        writer.writerow([rec.measurement_id, rec.bs_id,
                         repr(rec.avg_snr_db)])
    _emit(buf.getvalue(), out)


@cli.command("selftest")
@click.option("--mc-samples", type=int, default=1_000_000)
@click.option("--seed", type=int, default=20)
def selftest_cmd(mc_samples, seed):
    """Run the oracle-equivalence suite; nonzero exit on any failure."""
    ok = selftest.run_selftest(mc_samples=mc_samples, seed=seed)
    if not ok:
        raise QuadratureError("selftest failed")
    click.echo("selftest: all checks passed")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 2
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return exc.exit_code or 1
    except (DomainError, UnsupportedLinkCountError) as exc:
        click.echo(f"validation error: {exc}", err=True)
        return 2
    except (ConvergenceError, QuadratureError, BracketError,
            DegenerateSpacingError) as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        return 3
    except (TraceError, OSError) as exc:
        click.echo(f"I/O error: {exc}", err=True)
        return 4


if __name__ == "__main__":
    sys.exit(main())
