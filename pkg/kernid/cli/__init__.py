"""Command line interface for kernid.

Contains commands for checking designs, building Gram matrices,
searching for witnesses and verifying the numeric properties the checks
rely on.

"""
import contextlib
import logging
import os
import platform
import sys
import traceback

import click
from typing import Any, Dict, Iterator, List, Optional  # noqa

from kernid import __version__ as kernid_version
from kernid.cli.factory import CLIFactory
from kernid.constants import (
    OUTPUT_FORMATS, EXIT_USAGE, EXIT_NEGATIVE, EXIT_DIMENSION,
    EXIT_VERIFICATION,
)
from kernid.design import (
    distance_set, check_rbf_periodic_condition, check_two_rbf_condition,
    find_quadruple_witness, QuadrupleNotFoundError,
)
from kernid.documents import dump_dataset, dump_spec
from kernid.gpfit import NotPsdError, fit_mle, sample_prior
from kernid.kernels import KernelFamily, DimensionMismatch, build_gram
from kernid.lemmas import SamplingMode, run_checks
from kernid.report import CheckSummary, GramSummary, SampleSummary
from kernid.witness import find_witness, reproduce_reference_examples


LOGGER = logging.getLogger(__name__)


class InvalidInputError(click.ClickException):
    exit_code = EXIT_USAGE


class DimensionError(click.ClickException):
    exit_code = EXIT_DIMENSION


class CovarianceError(click.ClickException):
    exit_code = EXIT_USAGE


class VerificationFailedError(click.ClickException):
    exit_code = EXIT_VERIFICATION


def _configure_logging(level, format_string=None):
    # type: (int, Optional[str]) -> None
    if format_string is None:
        format_string = "%(asctime)s %(name)s [%(levelname)s] %(message)s"
    logger = logging.getLogger('kernid')
    logger.setLevel(level)
    handler = logging.StreamHandler()
    handler.setLevel(level)
    formatter = logging.Formatter(format_string)
    handler.setFormatter(formatter)
    logger.addHandler(handler)


def get_system_info():
    # type: () -> str
    python_info = "python {}.{}.{}".format(sys.version_info[0],
                                           sys.version_info[1],
                                           sys.version_info[2])
    platform_system = platform.system().lower()
    platform_release = platform.release()
    platform_info = "{} {}".format(platform_system, platform_release)
    return "{}, {}".format(python_info, platform_info)


@contextlib.contextmanager
def _exit_codes():
    # type: () -> Iterator[None]
    try:
        yield
    except DimensionMismatch as e:
        raise DimensionError(str(e))
    except NotPsdError as e:
        raise CovarianceError(
            "%s.  Check the kernel parameters and noise_var." % e)
    except ValueError as e:
        # Parse and validation errors: documents, config, parameters,
        # bounds and designs all raise ValueError subclasses.
        raise InvalidInputError(str(e))


@click.group()
@click.version_option(version=kernid_version,
                      message='%(prog)s %(version)s, {}'
                      .format(get_system_info()))
@click.option('--project-dir',
              help='Directory that relative paths and the default config '
                   'file are resolved against.  Defaults to CWD.')
@click.option('--debug/--no-debug',
              default=False,
              help='Print debug logs to stderr.')
@click.option('--format', 'output_format', type=click.Choice(OUTPUT_FORMATS),
              default=None, help='Output format (default: text).')
@click.option('--seed', type=int, default=None,
              help='Seed for every random draw.')
@click.option('--tol-div', type=float, default=None,
              help='Tolerance for "is a multiple of the period".')
@click.option('--tol-dedup', type=float, default=None,
              help='Distances closer than this are merged.')
@click.option('--config', 'config_path', default=None,
              help='Config file (JSON or YAML).  Defaults to '
                   '.kernid/config.json when present.')
@click.pass_context
def cli(ctx, project_dir, debug=False, output_format=None, seed=None,
        tol_div=None, tol_dedup=None, config_path=None):
    # type: (click.Context, str, bool, Optional[str], Optional[int], Optional[float], Optional[float], Optional[str]) -> None
    if project_dir is None:
        project_dir = os.getcwd()
    elif not os.path.isabs(project_dir):
        project_dir = os.path.abspath(project_dir)
    if debug is True:
        _configure_logging(logging.DEBUG)
    if config_path is not None and not os.path.isabs(config_path):
        config_path = os.path.join(project_dir, config_path)
    global_params = {
        'output_format': output_format,
        'seed': seed,
        'div_tol': tol_div,
        'dedup_tol': tol_dedup,
    }
    ctx.obj['project_dir'] = project_dir
    ctx.obj['debug'] = debug
    ctx.obj['factory'] = CLIFactory(project_dir, debug, environ=os.environ,
                                    config_path=config_path,
                                    global_params=global_params)


@cli.command()
@click.argument('design_path')
@click.option('--p', 'period', type=float, default=None,
              help='Period of the periodic kernel.  When given, the '
                   'RBF + periodic condition decides the exit code.')
@click.pass_context
def check(ctx, design_path, period=None):
    # type: (click.Context, str, Optional[float]) -> None
    """Check the identifiability conditions for DESIGN_PATH.

    Exits 0 when the deciding condition holds and 3 when it does not.
    A failed condition leaves identifiability undetermined.
    """
    factory = ctx.obj['factory']  # type: CLIFactory
    with _exit_codes():
        config = factory.create_config_obj('check')
        reporter = factory.create_reporter(config)
        design = factory.load_design(design_path)
        distances = distance_set(design, config.dedup_tol)
        deciding = check_two_rbf_condition(distances)
        reports = [deciding]
        quadruple = None
        if period is not None:
            deciding = check_rbf_periodic_condition(distances, period,
                                                    config.div_tol)
            reports.append(deciding)
            if deciding.holds:
                try:
                    quadruple = find_quadruple_witness(distances, period,
                                                       config.div_tol)
                except QuadrupleNotFoundError as e:
                    LOGGER.warning("%s", e)
    reporter.display_report('check', CheckSummary(
        distances=distances, reports=reports, deciding=deciding,
        quadruple=quadruple))
    if not deciding.holds:
        sys.exit(EXIT_NEGATIVE)


@cli.command()
@click.argument('design_path')
@click.argument('params_path')
@click.option('--noise/--no-noise', default=False,
              help='Add noise_var from the params file to the diagonal.')
@click.option('--out', 'out_path', default=None,
              help='Write the matrix as CSV to this path instead of '
                   'printing it.')
@click.pass_context
def gram(ctx, design_path, params_path, noise=False, out_path=None):
    # type: (click.Context, str, str, bool, Optional[str]) -> None
    """Build the mixed Gram matrix of PARAMS_PATH on DESIGN_PATH."""
    factory = ctx.obj['factory']  # type: CLIFactory
    with _exit_codes():
        config = factory.create_config_obj('gram')
        reporter = factory.create_reporter(config)
        design = factory.load_design(design_path)
        spec = factory.load_params(params_path)
        matrix = build_gram(spec, design, include_noise=noise)
        if out_path is not None:
            factory.write_matrix(out_path, matrix.entries)
    reporter.display_report('gram', GramSummary(gram=matrix, path=out_path))


@cli.command()
@click.argument('design_path')
@click.argument('params_path')
@click.option('--starts', type=int, default=None,
              help='Number of random starts.')
@click.option('--max-iters', type=int, default=None,
              help='Iteration cap per local search.')
@click.option('--residual-tol', type=float, default=None,
              help='Largest normalized Gram residual counted as a match.')
@click.option('--distinct-tol', type=float, default=None,
              help='Smallest relative parameter distance from the target.')
@click.option('--save', 'save_path', default=None,
              help='Write the witness parameters to this params file.')
@click.pass_context
def witness(ctx, design_path, params_path, starts=None, max_iters=None,
            residual_tol=None, distinct_tol=None, save_path=None):
    # type: (click.Context, str, str, Optional[int], Optional[int], Optional[float], Optional[float], Optional[str]) -> None
    """Search for a second parameter set with the same Gram matrix.

    Exits 0 with the witness when one is found and 3 when none is.
    Finding none is not a proof of identifiability.
    """
    factory = ctx.obj['factory']  # type: CLIFactory
    with _exit_codes():
        config = factory.create_config_obj(
            'witness', starts=starts, max_iters=max_iters,
            residual_tol=residual_tol, distinct_tol=distinct_tol)
        reporter = factory.create_reporter(config)
        search_config = config.witness_search_config()
        design = factory.load_design(design_path)
        spec = factory.load_params(params_path)
        report = find_witness(spec, design, search_config)
        if report.found and save_path is not None:
            factory.write_document(save_path,
                                   dump_spec(report.outcome.params))
    reporter.display_report('witness', report)
    if not report.found:
        sys.exit(EXIT_NEGATIVE)


@cli.command()
@click.pass_context
def reproduce(ctx):
    # type: (click.Context) -> None
    """Rebuild the reference counterexamples and compare their matrices."""
    factory = ctx.obj['factory']  # type: CLIFactory
    with _exit_codes():
        config = factory.create_config_obj('reproduce')
        reporter = factory.create_reporter(config)
    results = reproduce_reference_examples()
    reporter.display_report('reproduce', results)
    failed = [r.example_id for r in results if not r.passed]
    if failed:
        raise VerificationFailedError(
            "Reproduction failed for: %s" % ', '.join(failed))


@cli.command('verify-lemmas')
@click.option('--samples', type=int, default=None,
              help='Random draws per check.')
@click.option('--samples-per-axis', type=int, default=None,
              help='Points per variable in grid mode.')
@click.option('--mode', type=click.Choice([m.value for m in SamplingMode]),
              default=SamplingMode.RANDOM.value,
              help='Draw inputs uniformly at random or on a grid.')
@click.pass_context
def verify_lemmas(ctx, samples=None, samples_per_axis=None,
                  mode=SamplingMode.RANDOM.value):
    # type: (click.Context, Optional[int], Optional[int], str) -> None
    """Check numerically the properties the conditions rely on."""
    factory = ctx.obj['factory']  # type: CLIFactory
    with _exit_codes():
        config = factory.create_config_obj(
            'verify-lemmas', samples=samples,
            samples_per_axis=samples_per_axis)
        reporter = factory.create_reporter(config)
        grid = config.grid_spec(SamplingMode(mode))
        results = run_checks(grid)
    reporter.display_report('lemmas', results)
    failed = [r.lemma_id.value for r in results if not r.passed]
    if failed:
        raise VerificationFailedError(
            "Violations found in: %s" % ', '.join(failed))


@cli.command()
@click.argument('dataset_path')
@click.option('--variant', type=click.Choice([f.value for f in KernelFamily]),
              default=KernelFamily.RBF_PERIODIC.value,
              help='Kernel family to fit.')
@click.option('--p', 'period', type=float, default=None,
              help='Period of the periodic kernel (required for '
                   'rbf_periodic).')
@click.option('--noise-var', type=float, default=0.0,
              help='Fixed observation noise variance.')
@click.option('--fit-noise/--no-fit-noise', default=False,
              help='Estimate the noise variance as a free parameter.')
@click.option('--starts', type=int, default=None,
              help='Number of random starts.')
@click.option('--max-iters', type=int, default=None,
              help='Iteration cap per local search.')
@click.pass_context
def fit(ctx, dataset_path, variant=KernelFamily.RBF_PERIODIC.value,
        period=None, noise_var=0.0, fit_noise=False, starts=None,
        max_iters=None):
    # type: (click.Context, str, str, Optional[float], float, bool, Optional[int], Optional[int]) -> None
    """Maximum likelihood fit of a mixed kernel to DATASET_PATH."""
    factory = ctx.obj['factory']  # type: CLIFactory
    with _exit_codes():
        config = factory.create_config_obj('fit', starts=starts,
                                           max_iters=max_iters)
        reporter = factory.create_reporter(config)
        search_config = config.witness_search_config()
        data = factory.load_dataset(dataset_path)
        fits = fit_mle(data, KernelFamily(variant), period, search_config,
                       noise_var=noise_var, fit_noise=fit_noise)
    reporter.display_report('fit', fits)


@cli.command()
@click.argument('design_path')
@click.argument('params_path')
@click.option('--replicates', type=int, default=1,
              help='Number of independent draws.')
@click.option('--out', 'out_path', default=None,
              help='Write the dataset document to this path.')
@click.pass_context
def sample(ctx, design_path, params_path, replicates=1, out_path=None):
    # type: (click.Context, str, str, int, Optional[str]) -> None
    """Draw responses from the prior of PARAMS_PATH on DESIGN_PATH."""
    factory = ctx.obj['factory']  # type: CLIFactory
    with _exit_codes():
        config = factory.create_config_obj('sample')
        reporter = factory.create_reporter(config)
        design = factory.load_design(design_path)
        spec = factory.load_params(params_path)
        dataset = sample_prior(spec, design, config.seed, replicates)
        if out_path is not None:
            factory.write_document(out_path, dump_dataset(dataset))
    reporter.display_report('sample', SampleSummary(dataset=dataset,
                                                    path=out_path))


def main():
    # type: () -> int
    # click's dynamic attrs will allow us to pass through
    # 'obj' via the context object, so we're ignoring
    # these error messages from pylint because we know it's ok.
    # pylint: disable=unexpected-keyword-arg,no-value-for-parameter
    try:
        return cli(obj={})
    except Exception:
        click.echo(traceback.format_exc(), err=True)
        return EXIT_USAGE
