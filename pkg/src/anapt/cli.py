"""Command-line interface.

Every failure ends with a nonzero exit status and one JSON object on
stderr: ``{"error": <code>, "message": <text>}``.
"""

from __future__ import annotations

import json
import math
import os
import sys
import warnings
from pathlib import Path

import click
import numpy as np

from . import baselines, calibration, formats
from .errors import AnaptError, DomainError, ParseError
from .estimator import ReliabilityWarning, anapt, cutoff_from_median
from .noise import DEFAULT_ALPHA, FAMILIES, cutoff as cutoff_fn, make_model
from .persistence import sublevel_persistence
from .signals import KINDS, SignalSpec, add_noise, generate, sigma_from_snr
from .tables import DEFAULT_TABLES, CalibrationTables

CALIBRATION_ENV = "ANAPT_CALIBRATION"

family_option = click.option(
    "--family", type=click.Choice(FAMILIES, case_sensitive=False), default="gaussian", show_default=True,
    help="Additive noise family.",
)
alpha_option = click.option("--alpha", type=float, default=DEFAULT_ALPHA, show_default=True, help="Confidence level.")
seed_option = click.option("--seed", type=int, default=0, show_default=True, help="Random seed.")
rate_option = click.option(
    "--sample-rate", type=float, default=None, help="Sampling rate (Hz) for single-column input; default 1."
)


def _emit(obj, output: str | None) -> None:
    text = json.dumps(obj, indent=2)
    if output:
        Path(output).write_text(text + "\n")
    else:
        click.echo(text)


def _tables(path: str | None) -> CalibrationTables:
    path = path or os.environ.get(CALIBRATION_ENV)
    if not path:
        return DEFAULT_TABLES
    return CalibrationTables.load(path)


def _check_alpha(alpha: float) -> float:
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    return alpha


def _filter_cutoff(value: str | None):
    if value is None or value in baselines.CUTOFF_RULES:
        return value
    try:
        return float(value)
    except ValueError:
        raise DomainError(
            f"--filter-cutoff must be a frequency in Hz or one of {', '.join(baselines.CUTOFF_RULES)}"
        ) from None


@click.group()
@click.version_option(package_name="artifact")
def cli() -> None:
    """Noise cutoffs for sublevel-set persistence diagrams of time series."""


@cli.command()
@click.argument("input", type=click.Path(dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Diagram CSV; stdout if omitted.")
@rate_option
def persist(input: str, output: str | None, sample_rate: float | None) -> None:
    """Persistence diagram of a series CSV."""
    dgm = sublevel_persistence(formats.read_series(input, sample_rate))
    formats.write_diagram(dgm, output or click.get_text_stream("stdout"))


@cli.command()
@click.argument("input", type=click.Path(dir_okay=False))
@family_option
@alpha_option
@rate_option
@click.option("--report", "report_path", type=click.Path(dir_okay=False), help="Report JSON; stdout if omitted.")
@click.option("--diagram", "diagram_path", type=click.Path(dir_okay=False), help="Labelled diagram CSV.")
@click.option("--calibration", type=click.Path(dir_okay=False), help=f"Calibration JSON (else ${CALIBRATION_ENV}).")
def analyze(input, family, alpha, sample_rate, report_path, diagram_path, calibration) -> None:
    """Estimate the noise level and cutoff of a series CSV and label its pairs."""
    _check_alpha(alpha)
    series = formats.read_series(input, sample_rate)
    dgm = sublevel_persistence(series)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ReliabilityWarning)
        report = anapt(dgm, family, alpha, _tables(calibration))
    for w in caught:
        click.echo(json.dumps({"warning": "unreliable_estimate", "message": str(w.message)}), err=True)
    if diagram_path:
        formats.write_diagram(dgm, diagram_path, dgm.lifetimes > report.compensated_cutoff)
    if report_path:
        formats.write_report(report, report_path)
    else:
        click.echo(formats.report_json(report))


@cli.command()
@family_option
@click.option("--param", type=float, help="Noise parameter (sigma, delta, sigma or lambda).")
@click.option("--median", type=float, help="Median lifetime; estimates the parameter instead of --param.")
@alpha_option
@click.option("--n", "n", type=int, required=True, help="Series length.")
@click.option("--calibration", type=click.Path(dir_okay=False), help=f"Calibration JSON (else ${CALIBRATION_ENV}).")
def cutoff(family, param, median, alpha, n, calibration) -> None:
    """Print the cutoff for known noise or for a given median lifetime."""
    _check_alpha(alpha)
    if (param is None) == (median is None):
        raise DomainError("give exactly one of --param and --median")
    if param is not None:
        value = cutoff_fn(make_model(family, param), alpha, n)
    else:
        value = cutoff_from_median(family, median, alpha, n, _tables(calibration).rho_for(family))
    click.echo("%.17g" % value)


@cli.group()
def calibrate() -> None:
    """Recompute the empirical constants by Monte Carlo."""


@calibrate.command("rho")
@click.option("--family", "families", multiple=True, type=click.Choice(FAMILIES, case_sensitive=False),
              help="Family to calibrate (repeatable); all if omitted.")
@click.option("--n", "n", type=int, default=100_000, show_default=True)
@click.option("--trials", type=int, default=10, show_default=True)
@seed_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Calibration JSON; stdout if omitted.")
def calibrate_rho(families, n, trials, seed, output) -> None:
    """Mean-to-median lifetime ratios."""
    tables = calibration.recalibrate(families or None, n=n, rho_trials=trials, seed=seed, compensation=False)
    _emit(tables.to_dict(), output)


@calibrate.command("compensation")
@click.option("--family", "families", multiple=True, type=click.Choice(FAMILIES, case_sensitive=False),
              help="Family to calibrate (repeatable); all if omitted.")
@click.option("--runs", type=int, default=10, show_default=True, help="Independent fits.")
@click.option("--trials", type=int, default=100, show_default=True, help="Noise draws per signal step.")
@seed_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Calibration JSON; stdout if omitted.")
def calibrate_compensation(families, runs, trials, seed, output) -> None:
    """Compensation constants c1, c2."""
    tables = calibration.recalibrate(families or None, runs=runs, trials=trials, seed=seed, rho=False)
    _emit(tables.to_dict(), output)


@cli.group()
def baseline() -> None:
    """Reference methods."""


@baseline.command("entropy")
@click.argument("input", type=click.Path(dir_okay=False))
@rate_option
@click.option("-o", "--output", type=click.Path(dir_okay=False))
def baseline_entropy(input, sample_rate, output) -> None:
    """Persistent-entropy labels of the pairs of a series CSV."""
    dgm = sublevel_persistence(formats.read_series(input, sample_rate))
    labels = baselines.persistent_entropy_separation(dgm)
    _emit({
        "method": "persistent_entropy",
        "n_pairs": len(dgm),
        "n_signal": int(labels.sum()),
        "labels": ["signal" if v else "noise" for v in labels],
        "pairs": [p._asdict() for p in dgm.pairs],
    }, output)


@baseline.command("bootstrap")
@click.argument("input", type=click.Path(dir_okay=False))
@rate_option
@click.option("--resamples", type=int, default=1000, show_default=True)
@click.option("--percentile", type=float, default=0.95, show_default=True)
@click.option("--filter-cutoff", default=None,
              help="Low-pass cutoff in Hz, or 'noise_floor' (default) or 'dominant'.")
@click.option("--order", type=int, default=4, show_default=True, help="Butterworth order.")
@seed_option
@click.option("-o", "--output", type=click.Path(dir_okay=False))
def baseline_bootstrap(input, sample_rate, resamples, percentile, filter_cutoff, order, seed, output) -> None:
    """Bottleneck-bootstrap lifetime threshold."""
    series = formats.read_series(input, sample_rate)
    cfg = baselines.BootstrapConfig(resamples, percentile, _filter_cutoff(filter_cutoff), order, seed)
    res = baselines.bootstrap(series, cfg)
    dgm = sublevel_persistence(series)
    _emit({
        "method": "bootstrap",
        "threshold": res.threshold,
        "percentile": percentile,
        "resamples": resamples,
        "filter_cutoff_hz": res.filter_cutoff_hz,
        "filter_order": order,
        "seed": seed,
        "n_pairs": len(dgm),
        "n_signal": int(np.count_nonzero(dgm.lifetimes > res.threshold)),
    }, output)


@baseline.command("sigma")
@click.argument("input", type=click.Path(dir_okay=False))
@rate_option
@click.option("--filter-cutoff", default=None,
              help="Low-pass cutoff in Hz, or 'noise_floor' (default) or 'dominant'.")
@click.option("--order", type=int, default=4, show_default=True)
@click.option("--calibration", type=click.Path(dir_okay=False), help=f"Calibration JSON (else ${CALIBRATION_ENV}).")
@click.option("-o", "--output", type=click.Path(dir_okay=False))
def baseline_sigma(input, sample_rate, filter_cutoff, order, calibration, output) -> None:
    """Gaussian sigma by spline residuals, low-pass residuals and the diagram."""
    series = formats.read_series(input, sample_rate)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReliabilityWarning)
        report = anapt(series, "gaussian", DEFAULT_ALPHA, _tables(calibration))
    _emit({
        "method": "sigma",
        "spline": baselines.spline_residual_sigma(series),
        "lowpass": baselines.lowpass_residual_sigma(series, _filter_cutoff(filter_cutoff), order),
        "anapt": report.compensated_param,
        "anapt_uncompensated": report.raw_param,
    }, output)


@cli.command()
@click.option("--kind", type=click.Choice(KINDS), required=True)
@click.option("--amplitude", type=float, default=1.0, show_default=True)
@click.option("--t-start", "t_a", type=float, default=None, help="Domain start (s).")
@click.option("--t-end", "t_b", type=float, default=None, help="Domain end (s).")
@click.option("--sample-rate", type=float, default=None, help="Hz.")
@click.option("--frequency", type=float, default=None, help="Sinusoid frequency (Hz).")
@click.option("--keep-last", type=int, default=None, help="Lorenz: samples kept after the transient.")
@click.option("--noise", type=click.Choice(FAMILIES, case_sensitive=False), default=None, help="Noise family.")
@click.option("--noise-param", type=float, default=None, help="Noise parameter.")
@click.option("--snr-db", type=float, default=None, help="Gaussian noise level as an SNR instead of --noise-param.")
@seed_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True, help="Series CSV.")
def simulate(kind, amplitude, t_a, t_b, sample_rate, frequency, keep_last, noise, noise_param, snr_db, seed, output):
    """Generate a test signal, optionally with additive noise, as time,value CSV."""
    extra = {}
    if frequency is not None:
        extra["frequency"] = frequency
    if keep_last is not None:
        extra["keep_last"] = keep_last
    series = generate(SignalSpec(kind, amplitude, t_a, t_b, sample_rate, extra))
    if snr_db is not None:
        if noise_param is not None or (noise not in (None, "gaussian")):
            raise DomainError("--snr-db implies Gaussian noise and excludes --noise-param")
        noise, noise_param = "gaussian", sigma_from_snr(series, snr_db)
    if noise is not None:
        series = add_noise(series, make_model(noise, 1.0 if noise_param is None else noise_param), seed)
    elif noise_param is not None:
        raise DomainError("--noise-param requires --noise")
    formats.write_series(series, output)


@cli.command()
@click.argument("diagram", type=click.Path(dir_okay=False))
@click.option("--cutoff", "cutoff_value", type=float, default=None, help="Lifetime cutoff to shade.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None,
              help="Take the compensated cutoff from an analyze report.")
@click.option("--title", default=None)
@click.option("--size", type=int, default=480, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True, help="SVG file.")
def render(diagram, cutoff_value, report_path, title, size, output) -> None:
    """Draw a diagram CSV as SVG with the diagonal and the noise band."""
    if cutoff_value is not None and report_path is not None:
        raise DomainError("give at most one of --cutoff and --report")
    if report_path is not None:
        try:
            cutoff_value = float(json.loads(Path(report_path).read_text())["compensated_cutoff"])
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"{report_path}: not an analyze report ({exc})") from exc
    if cutoff_value is not None and not (cutoff_value >= 0 and math.isfinite(cutoff_value)):
        raise DomainError("cutoff must be a non-negative number")
    dgm = formats.read_diagram(diagram)
    Path(output).write_text(formats.render_svg(dgm, cutoff_value, size, title))


def _fail(code: str, message: str, status: int) -> int:
    click.echo(json.dumps({"error": code, "message": message}), err=True)
    return status


def main(argv=None) -> int:
    """Entry point; returns the exit status."""
    try:
        cli.main(args=argv, prog_name="anapt", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        return _fail("aborted", "aborted", 1)
    except click.UsageError as exc:
        return _fail("usage_error", exc.format_message(), 2)
    except click.ClickException as exc:
        return _fail("usage_error", exc.format_message(), 2)
    except AnaptError as exc:
        return _fail(exc.code, str(exc), 1)
    except FileNotFoundError as exc:
        return _fail("file_not_found", f"{exc.filename}: no such file", 1)
    except OSError as exc:
        return _fail("io_error", str(exc), 1)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
