"""Command-line interface.

Usage::

    erpinfo entropy mixture.json --method taylor-split --order 4
    erpinfo bounds --sigma1 1 --sigma2 2
    erpinfo fig7 --p-max 50 --p-step 5 --output sweep.csv
    erpinfo synth config.json --output outdir/
    erpinfo mi outdir/dataset.csv outdir/roimap.json --ci --output report.json
    erpinfo ci values.txt

Exit codes: 0 success, 2 input error, 3 numeric error.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

import click

from . import __version__
from .bootstrap import BootstrapSpec, bootstrap_t_ci, read_values
from .bounds import entropy_bounds_1d, intersection_lambda
from .datagen import load_synth_config, synth_dataset
from .entropy import METHODS, EntropyMethod, estimate_entropy
from .erp import load_roi_map, mi_report, read_dataset_csv, write_dataset_csv
from .exceptions import InputError, NumericError, ResourceError
from .mixture import GaussianMixture, load_mixture
from .oracles import McSpec, entropy_monte_carlo, entropy_quadrature
from .taylor import SplitSchedule, entropy_taylor, entropy_with_splitting

EXIT_INPUT = 2
EXIT_NUMERIC = 3

_METHOD_CHOICES = list(METHODS) + ["mc"]


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, output: str | None) -> None:
    if output is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        _atomic_write(Path(output), text)


def _emit_json(obj: dict, output: str | None) -> None:
    _emit(json.dumps(obj, indent=2, allow_nan=False) + "\n", output)


class _Group(click.Group):
    """Maps package exceptions onto exit codes."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except InputError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_INPUT)
        except (NumericError, ResourceError, FloatingPointError) as exc:
            click.echo(f"numeric error: {exc}", err=True)
            ctx.exit(EXIT_NUMERIC)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_INPUT)


@click.group(cls=_Group)
@click.version_option(__version__, prog_name="erpinfo")
@click.option("-v", "--verbose", count=True, help="Increase log verbosity (-v info, -vv debug).")
def cli(verbose):
    """Entropy of Gaussian mixtures and mutual information of ERP channels."""
    level = logging.WARNING - 10 * min(verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _method_from_options(method, order, ways, rounds, target_rule, mc_samples, seed) -> EntropyMethod:
    return EntropyMethod(
        name=method,
        order=order,
        schedule=SplitSchedule(ways, rounds, target_rule),
        mc=McSpec(mc_samples, seed),
    )


_order_opt = click.option("--order", type=click.Choice(["0", "2", "4"]), default="4", show_default=True)
_ways_opt = click.option("--ways", type=click.Choice(["2", "4"]), default="4", show_default=True)
_rounds_opt = click.option("--rounds", type=click.IntRange(min=0), default=2, show_default=True)
_rule_opt = click.option(
    "--target-rule",
    type=click.Choice(["all-components", "largest-eigenvalue"]),
    default="all-components",
    show_default=True,
)
_mc_opt = click.option("--mc-samples", type=click.IntRange(min=1), default=1_000_000, show_default=True)
_seed_opt = click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=0, show_default=True)
_output_opt = click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="Write here instead of stdout.")


@cli.command()
@click.argument("gmm_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(_METHOD_CHOICES), default="taylor-split", show_default=True)
@_order_opt
@_ways_opt
@_rounds_opt
@_rule_opt
@_mc_opt
@_seed_opt
@_output_opt
def entropy(gmm_file, method, order, ways, rounds, target_rule, mc_samples, seed, output):
    """Estimate the differential entropy of the mixture in GMM_FILE."""
    gmm = load_mixture(gmm_file)
    m = _method_from_options(method, int(order), int(ways), rounds, target_rule, mc_samples, seed)
    est = estimate_entropy(gmm, m)
    report = {"schema": "erpinfo.entropy_report/1", "version": __version__, "dim": gmm.dim, "n_input_components": len(gmm)}
    report.update(est.to_dict())
    report["config"] = m.to_dict()
    _emit_json(report, output)


@cli.command()
@click.option("--sigma1", type=float, required=True)
@click.option("--sigma2", type=float, required=True)
@_output_opt
def bounds(sigma1, sigma2, output):
    """Entropy bounds for 0.5 N(0, sigma1^2) + 0.5 N(0, sigma2^2)."""
    if sigma1 > sigma2:
        sigma1, sigma2 = sigma2, sigma1
    b = entropy_bounds_1d(sigma1, sigma2)
    lam = None if sigma1 == sigma2 else intersection_lambda(sigma1, sigma2)
    _emit_json(
        {
            "schema": "erpinfo.bounds_report/1",
            "version": __version__,
            "sigma1": sigma1,
            "sigma2": sigma2,
            "lambda": lam,
            "lower_nats": b.lower,
            "upper_nats": b.upper,
            "lower_bits": b.lower_bits,
            "upper_bits": b.upper_bits,
        },
        output,
    )


def fig7_mixture(p: float) -> GaussianMixture:
    """Zero-mean, equal-weight pair with C1 = [4 2; 2 4] and C2 = [5+p 2; 2 5+p]."""
    return GaussianMixture.from_arrays(
        [0.5, 0.5], [[0.0, 0.0], [0.0, 0.0]], [[[4.0, 2.0], [2.0, 4.0]], [[5.0 + p, 2.0], [2.0, 5.0 + p]]]
    )


def fig7_rows(p_max, p_step, order=4, ways=4, rounds=2, target_rule="all-components", mc_samples=100_000, seed=0):
    if p_max < 0:
        raise InputError("p-max must be nonnegative")
    if p_step <= 0:
        raise InputError("p-step must be positive")
    n_steps = int(math.floor(p_max / p_step + 1e-9))
    schedule = SplitSchedule(ways, rounds, target_rule)
    for i in range(n_steps + 1):
        p = i * p_step
        gmm = fig7_mixture(p)
        mc = entropy_monte_carlo(gmm, McSpec(mc_samples, seed)) if mc_samples else None
        yield {
            "p": p,
            "taylor_nats": entropy_taylor(gmm, order).nats,
            "taylor_split_nats": entropy_with_splitting(gmm, order, schedule).nats,
            "quadrature_nats": entropy_quadrature(gmm).nats,
            "mc_nats": None if mc is None else mc.nats,
            "mc_stderr_nats": None if mc is None else mc.stderr,
        }


@cli.command()
@click.option("--p-max", type=float, default=50.0, show_default=True)
@click.option("--p-step", type=float, default=5.0, show_default=True)
@_order_opt
@_ways_opt
@_rounds_opt
@_rule_opt
@click.option("--mc-samples", type=click.IntRange(min=0), default=100_000, show_default=True, help="0 disables the MC column.")
@_seed_opt
@_output_opt
def fig7(p_max, p_step, order, ways, rounds, target_rule, mc_samples, seed, output):
    """Sweep the synthetic two-component mixture and compare estimators (CSV)."""
    buf = io.StringIO()
    fields = ["p", "taylor_nats", "taylor_split_nats", "quadrature_nats", "mc_nats", "mc_stderr_nats"]
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in fig7_rows(p_max, p_step, int(order), int(ways), rounds, target_rule, mc_samples, seed):
        writer.writerow({k: ("" if v is None else repr(v)) for k, v in row.items()})
    _emit(buf.getvalue(), output)


@cli.command()
@click.argument("dataset_csv", type=click.Path(exists=True, dir_okay=False))
@click.argument("roimap_json", type=click.Path(exists=True, dir_okay=False))
@click.option("--estimator", type=click.Choice(_METHOD_CHOICES), default="taylor-split", show_default=True)
@_order_opt
@_ways_opt
@_rounds_opt
@_rule_opt
@click.option("--zero-mean", is_flag=True, help="Force zero class means.")
@click.option("--roi-variance", type=click.Choice(["mean", "pooled"]), default="mean", show_default=True)
@click.option("--ci", "with_ci", is_flag=True, help="Add a bootstrap-t interval for the median.")
@click.option("--B", "n_boot", type=click.IntRange(min=2), default=1000, show_default=True)
@click.option("--inner-B", "inner_boot", type=click.IntRange(min=2), default=200, show_default=True)
@_mc_opt
@_seed_opt
@_output_opt
def mi(dataset_csv, roimap_json, estimator, order, ways, rounds, target_rule, zero_mean, roi_variance,
       with_ci, n_boot, inner_boot, mc_samples, seed, output):
    """Per-trial mutual information (bits) of a labelled dataset."""
    dataset = read_dataset_csv(dataset_csv)
    roi_map = load_roi_map(roimap_json)
    method = _method_from_options(estimator, int(order), int(ways), rounds, target_rule, mc_samples, seed)
    spec = BootstrapSpec(n_boot, inner_boot, seed=seed) if with_ci else None
    report = mi_report(dataset, roi_map, method, zero_mean, spec, roi_variance)
    _emit_json(report.to_dict(), output)
    failed = [t for t in report.per_trial if not t.ok]
    for t in failed:
        click.echo(f"trial {t.trial_id} failed: {t.error}", err=True)
    if report.per_trial and len(failed) == len(report.per_trial):
        sys.exit(EXIT_NUMERIC)


@cli.command()
@click.argument("values_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--B", "n_boot", type=click.IntRange(min=2), default=1000, show_default=True)
@click.option("--inner-B", "inner_boot", type=click.IntRange(min=2), default=200, show_default=True)
@click.option("--lo", type=float, default=2.5, show_default=True)
@click.option("--hi", type=float, default=97.5, show_default=True)
@_seed_opt
@_output_opt
def ci(values_file, n_boot, inner_boot, lo, hi, seed, output):
    """Bootstrap-t interval for the median of the numbers in VALUES_FILE."""
    values = read_values(values_file)
    spec = BootstrapSpec(n_boot, inner_boot, (lo, hi), seed)
    res = bootstrap_t_ci(values, spec)
    _emit_json(
        {
            "schema": "erpinfo.ci_report/1",
            "version": __version__,
            "n": len(values),
            "median": res.median,
            "ci_low": res.ci_low,
            "ci_high": res.ci_high,
            "config": {"B": n_boot, "inner_B": inner_boot, "levels": [lo, hi], "seed": seed},
        },
        output,
    )


@cli.command()
@click.argument("config_json", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(file_okay=False), required=True, help="Output directory.")
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=None, help="Override the config seed.")
def synth(config_json, output, seed):
    """Write a synthetic dataset.csv and roimap.json into OUTPUT."""
    cfg = load_synth_config(config_json)
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    out = Path(output)
    out.mkdir(parents=True, exist_ok=True)
    dataset = synth_dataset(cfg)
    buf = io.StringIO()
    write_dataset_csv(dataset, buf)
    _atomic_write(out / "dataset.csv", buf.getvalue())
    _atomic_write(out / "roimap.json", json.dumps(cfg.roi_map().to_dict(), indent=2) + "\n")
    click.echo(json.dumps({"dataset": str(out / "dataset.csv"), "roimap": str(out / "roimap.json"),
                           "trials": cfg.trials, "channels": cfg.n_channels}))


def main(argv=None):
    return cli.main(args=argv, prog_name="erpinfo")


if __name__ == "__main__":
    main()
