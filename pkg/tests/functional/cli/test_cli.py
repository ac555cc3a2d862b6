import json
import os

import numpy as np
import pytest
from click.testing import CliRunner

from kernid import cli
from kernid import documents
from kernid.cli import factory
from kernid.design import Design
from kernid.kernels import build_gram
from kernid.report import CONDITION_HOLDS_TEXT, NO_WITNESS_TEXT


IDENTIFIABLE_DESIGN = {'dim': 1, 'points': [0, 3, 7, 10]}
ALIGNED_DESIGN = {'dim': 1, 'points': [1, 8, 15, 22, 29, 36]}
PLANE_DESIGN = {'dim': 2, 'points': [[0, 0], [1, 0], [0, 1]]}
PERIODIC_PARAMS = {'variant': 'rbf_periodic', 'sigma': 1.0, 'ell': 3.0,
                   'tau': 1.0, 's': 1.0, 'p': 7.0, 'noise_var': 0.1}
ALIGNED_PARAMS = {'variant': 'rbf_periodic', 'sigma': 1.0, 'ell': 1.0,
                  'tau': 1.0, 's': 1.0, 'p': 7.0}


@pytest.fixture
def runner():
    return CliRunner()


def _write_json(filename, doc):
    dirname = os.path.dirname(filename)
    if dirname and not os.path.isdir(dirname):
        os.makedirs(dirname)
    with open(filename, 'w') as f:
        json.dump(doc, f)


def _run_cli_command(runner, function, args, cli_factory=None):
    # Commands read the factory from ctx.obj, which is what
    # 'def cli(...)' sets up when going through the group.
    if cli_factory is None:
        cli_factory = factory.CLIFactory('.')
    result = runner.invoke(
        function, args, obj={'project_dir': '.', 'debug': False,
                             'factory': cli_factory})
    return result


def _json_factory(**params):
    params['output_format'] = 'json'
    return factory.CLIFactory('.', global_params=params)


def test_check_identifiable_design(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', IDENTIFIABLE_DESIGN)
        result = _run_cli_command(runner, cli.check,
                                  ['design.json', '--p', '7'])
        assert result.exit_code == 0, result.output
        assert 'Distance set: |X| = 5' in result.output
        assert CONDITION_HOLDS_TEXT in result.output
        assert 'witness quadruple {0, 7, 3, 10}' in result.output


def test_check_aligned_design_is_undetermined(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', ALIGNED_DESIGN)
        result = _run_cli_command(runner, cli.check,
                                  ['design.json', '--p', '7'])
        assert result.exit_code == 3
        assert 'failed: no non-multiple distance' in result.output
        assert 'kernid witness' in result.output


def test_check_yaml_design_as_json(runner):
    with runner.isolated_filesystem():
        with open('design.yaml', 'w') as f:
            f.write('dim: 1\npoints: [0, 3, 7, 10]\n')
        result = _run_cli_command(runner, cli.check,
                                  ['design.yaml', '--p', '7'],
                                  _json_factory())
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc['distances'] == [0.0, 3.0, 4.0, 7.0, 10.0]
        assert doc['verdict'] == 'condition_holds'


def test_dedup_tolerance_merges_distances(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', {'dim': 1, 'points': [0, 1, 2.001]})
        result = _run_cli_command(
            runner, cli.check, ['design.json'],
            _json_factory(dedup_tol=0.01))
        assert result.exit_code == 3
        assert json.loads(result.output)['cardinality'] == 3


@pytest.mark.parametrize('filename,contents', [
    ('missing.json', None),
    ('design.txt', '0 1 2'),
    ('design.json', '{"dim": 2, "points": [[0, 0], [1]]}'),
    ('design.json', '[0, 1, 2]'),
])
def test_bad_design_documents_are_usage_errors(runner, filename, contents):
    with runner.isolated_filesystem():
        if contents is not None:
            with open(filename, 'w') as f:
                f.write(contents)
        result = _run_cli_command(runner, cli.check, [filename])
        assert result.exit_code == 2
        assert filename in result.output


def test_gram_prints_csv(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', IDENTIFIABLE_DESIGN)
        _write_json('params.json', PERIODIC_PARAMS)
        result = _run_cli_command(runner, cli.gram,
                                  ['design.json', 'params.json'])
        assert result.exit_code == 0
        rows = [r for r in result.output.splitlines() if r]
        assert len(rows) == 4
        assert rows[0].split(',')[0] == '2.0'


def test_gram_written_as_csv_reads_back_exactly(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', IDENTIFIABLE_DESIGN)
        _write_json('params.json', PERIODIC_PARAMS)
        result = _run_cli_command(
            runner, cli.gram,
            ['design.json', 'params.json', '--noise', '--out',
             'out/gram.csv'])
        assert result.exit_code == 0
        assert 'Wrote 4x4 Gram matrix' in result.output
        expected = build_gram(documents.load_params('params.json'),
                              documents.load_design('design.json'),
                              include_noise=True).entries
        assert np.array_equal(documents.read_matrix_csv('out/gram.csv'),
                              expected)


def test_gram_json_entries_are_exact(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', IDENTIFIABLE_DESIGN)
        _write_json('params.json', PERIODIC_PARAMS)
        result = _run_cli_command(runner, cli.gram,
                                  ['design.json', 'params.json'],
                                  _json_factory())
        assert result.exit_code == 0
        doc = json.loads(result.output)
        expected = build_gram(documents.load_params('params.json'),
                              Design.from_points([0, 3, 7, 10]))
        assert doc['entries'] == expected.to_list()
        assert doc['min_eigenvalue'] > 0


def test_periodic_gram_on_plane_is_a_dimension_error(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', PLANE_DESIGN)
        _write_json('params.json', PERIODIC_PARAMS)
        result = _run_cli_command(runner, cli.gram,
                                  ['design.json', 'params.json'])
        assert result.exit_code == 4


def test_invalid_params_are_usage_errors(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', IDENTIFIABLE_DESIGN)
        _write_json('params.json', dict(PERIODIC_PARAMS, ell=-1.0))
        result = _run_cli_command(runner, cli.gram,
                                  ['design.json', 'params.json'])
        assert result.exit_code == 2
        assert 'ell' in result.output


def test_witness_on_identifiable_design(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', IDENTIFIABLE_DESIGN)
        _write_json('params.json', PERIODIC_PARAMS)
        result = _run_cli_command(
            runner, cli.witness,
            ['design.json', 'params.json', '--starts', '4',
             '--max-iters', '300'])
        assert result.exit_code == 3
        assert NO_WITNESS_TEXT in result.output
        assert 'of 4 (seed 0)' in result.output


def test_witness_rejects_bad_search_settings(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', IDENTIFIABLE_DESIGN)
        _write_json('params.json', PERIODIC_PARAMS)
        result = _run_cli_command(
            runner, cli.witness,
            ['design.json', 'params.json', '--starts', '0'])
        assert result.exit_code == 2


@pytest.mark.slow
def test_witness_on_aligned_design_is_saved(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', ALIGNED_DESIGN)
        _write_json('params.json', ALIGNED_PARAMS)
        result = _run_cli_command(
            runner, cli.witness,
            ['design.json', 'params.json', '--starts', '8', '--save',
             'witness.yaml'], _json_factory())
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc['found'] is True
        saved = documents.load_params('witness.yaml')
        assert documents.dump_spec(saved) == doc['witness']['params']


def test_reproduce(runner):
    result = _run_cli_command(runner, cli.reproduce, [])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert len(lines) == 4
    assert all(line.endswith('PASS') for line in lines[1:])


def test_verify_lemmas_with_few_samples(runner):
    result = _run_cli_command(runner, cli.verify_lemmas,
                              ['--samples', '200'], _json_factory())
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc['passed'] is True
    assert len(doc['checks']) == 7


def test_verify_lemmas_on_a_grid(runner):
    result = _run_cli_command(runner, cli.verify_lemmas,
                              ['--mode', 'grid', '--samples-per-axis', '3'])
    assert result.exit_code == 0
    assert 'FAIL' not in result.output


def test_verify_lemmas_rejects_zero_samples(runner):
    result = _run_cli_command(runner, cli.verify_lemmas, ['--samples', '0'])
    assert result.exit_code == 2


def test_sample_then_fit(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', IDENTIFIABLE_DESIGN)
        _write_json('params.json', PERIODIC_PARAMS)
        result = _run_cli_command(
            runner, cli.sample,
            ['design.json', 'params.json', '--replicates', '3', '--out',
             'data/draws.json'])
        assert result.exit_code == 0
        assert 'Wrote 3 replicate(s) on 4 points' in result.output
        data = documents.load_dataset('data/draws.json')
        assert data.responses.shape == (3, 4)

        result = _run_cli_command(
            runner, cli.fit,
            ['data/draws.json', '--p', '7', '--noise-var', '0.1',
             '--starts', '2', '--max-iters', '200'], _json_factory())
        assert result.exit_code == 0
        optima = json.loads(result.output)['optima']
        assert optima
        assert optima[0]['params']['p'] == 7.0
        assert optima[0]['params']['noise_var'] == 0.1


def test_fit_without_period_is_a_usage_error(runner):
    with runner.isolated_filesystem():
        _write_json('data.json', {'dim': 1, 'points': [0, 1, 2],
                                  'responses': [0.1, 0.2, 0.3]})
        result = _run_cli_command(runner, cli.fit, ['data.json'])
        assert result.exit_code == 2


def test_sample_uses_the_seed(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', IDENTIFIABLE_DESIGN)
        _write_json('params.json', PERIODIC_PARAMS)
        outputs = [
            _run_cli_command(runner, cli.sample,
                             ['design.json', 'params.json'],
                             factory.CLIFactory('.', global_params={
                                 'seed': seed})).output
            for seed in (5, 5, 6)
        ]
        assert outputs[0] == outputs[1]
        assert outputs[0] != outputs[2]


def test_config_file_sets_output_format(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', IDENTIFIABLE_DESIGN)
        _write_json(os.path.join('.kernid', 'config.json'),
                    {'version': '1.0', 'output_format': 'json'})
        result = _run_cli_command(runner, cli.check,
                                  ['design.json', '--p', '7'])
        assert result.exit_code == 0
        assert json.loads(result.output)['cardinality'] == 5


def test_unknown_config_version_is_a_usage_error(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', IDENTIFIABLE_DESIGN)
        _write_json(os.path.join('.kernid', 'config.json'),
                    {'version': '2.0'})
        result = _run_cli_command(runner, cli.check, ['design.json'])
        assert result.exit_code == 2
        assert 'version' in result.output


def test_group_options_reach_commands(runner):
    with runner.isolated_filesystem():
        _write_json('design.json', IDENTIFIABLE_DESIGN)
        result = runner.invoke(
            cli.cli, ['--format', 'json', 'check', 'design.json', '--p', '7'],
            obj={})
        assert result.exit_code == 0
        assert json.loads(result.output)['verdict'] == 'condition_holds'


def test_project_dir_resolves_relative_paths(runner, tmpdir):
    project = tmpdir.mkdir('project')
    project.join('design.json').write(json.dumps(ALIGNED_DESIGN))
    result = runner.invoke(
        cli.cli, ['--project-dir', str(project), 'check', 'design.json',
                  '--p', '7'], obj={})
    assert result.exit_code == 3


def test_version_option(runner):
    result = runner.invoke(cli.cli, ['--version'], obj={})
    assert result.exit_code == 0
    assert '0.1.0, python' in result.output
