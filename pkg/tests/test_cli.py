"""
Tests for the nhosc command line
"""

import json

import pandas as pd
import pytest

from cli.nhosc_cli import EXIT_OK, EXIT_USAGE, EXIT_VALIDATION_FAILED, build_parser, main


def test_no_command_prints_help(capsys):
    assert main([]) == EXIT_USAGE
    assert 'phase-map' in capsys.readouterr().out


def test_unknown_option_is_a_usage_error():
    assert main(['probability', '--frobnicate']) == EXIT_USAGE


def test_help_exits_cleanly():
    assert main(['--help']) == EXIT_OK


def test_parser_has_every_subcommand():
    parser = build_parser()
    args = parser.parse_args(['validate', '--points', '3'])
    assert args.command == 'validate' and args.points == 3


def test_phase_map(tmp_path):
    out = tmp_path / "map.csv"
    code = main(['phase-map', '--preset', 'fig1', '--samples', '3',
                 '--kappa-range', '0', '0.01', '--sigma-range', '-0.005', '0', '--out', str(out)])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ['kappa', 'sigma', 'regime', 'discriminant']
    assert len(frame) == 9
    assert set(frame.regime) <= {'unbroken', 'broken', 'exceptional'}


def test_phase_map_rejects_reversed_range(tmp_path):
    assert main(['phase-map', '--kappa-range', '0.01', '0', '--out', str(tmp_path / "x.csv")]) == EXIT_USAGE


def test_probability_to_stdout(capsys):
    code = main(['probability', '--preset', 'fig2', '--samples', '3', '--stop', '1000'])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'x,p_aa,p_ab,p_ba,p_bb,sum_a,sum_b,regime,error'
    assert len(lines) == 4
    assert float(lines[1].split(',')[2]) == pytest.approx(0.25, abs=1e-14)


def test_probability_output_is_byte_identical(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ['probability', '--method', 'density-analytic', '--theta', 'pi/3', '--alpha', 'pi/6',
            '--beta', 'pi/3', '--samples', '20', '--units-mode', 'exact']
    assert main(argv + ['--out', str(first)]) == EXIT_OK
    assert main(argv + ['--out', str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_probability_json(tmp_path):
    out = tmp_path / "fig4.json"
    assert main(['probability', '--preset', 'fig4', '--samples', '5', '--format', 'json',
                 '--out', str(out)]) == EXIT_OK
    document = json.loads(out.read_text(encoding='utf-8'))
    assert document['config']['method'] == 'density-analytic'
    assert len(document['rows']) == 5


@pytest.mark.parametrize("argv", [
    ['probability', '--preset', 'fig2', '--theta', '0.5', '--samples', '3'],
    ['probability', '--preset', 'fig3', '--appendix-verbatim', '--units-mode', 'exact'],
    ['probability', '--preset', 'fig9'],
    ['probability', '--kappa', '1e-3', '--tau', 'pi/6'],
    ['probability', '--theta', 'pie'],
    ['probability', '--config', 'does/not/exist.yaml'],
])
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_exceptional_point_is_a_usage_error_for_g_metric():
    argv = ['probability', '--method', 'g-metric', '--kappa', '5e-3', '--phi', 'pi/6', '--samples', '3']
    assert main(argv) == EXIT_USAGE


@pytest.mark.parametrize("flag", ['--points', '--times'])
def test_validate_rejects_empty_grid(flag, tmp_path):
    assert main(['validate', flag, '0', '--report', str(tmp_path / "r.json")]) == EXIT_USAGE


def test_validate_passes_and_writes_report(tmp_path):
    report = tmp_path / "validation.json"
    code = main(['validate', '--points', '3', '--times', '2', '--steps-per-period', '1000',
                 '--report', str(report)])
    assert code == EXIT_OK
    data = json.loads(report.read_text(encoding='utf-8'))
    assert data['summary']['pass'] is True


def test_validate_detects_injected_fault(tmp_path):
    report = tmp_path / "validation.json"
    code = main(['validate', '--points', '1', '--times', '2', '--steps-per-period', '1000',
                 '--inject-fault', '--report', str(report)])
    assert code == EXIT_VALIDATION_FAILED
    data = json.loads(report.read_text(encoding='utf-8'))
    assert data['summary']['fault_injected'] is True
    assert data['criteria']['closed_form_vs_trace']['pass'] is False


def test_validate_report_has_invariant_section(tmp_path):
    report = tmp_path / "validation.json"
    code = main(['validate', '--points', '2', '--times', '2', '--steps-per-period', '1000',
                 '--out', str(report)])
    assert code == EXIT_OK
    data = json.loads(report.read_text(encoding='utf-8'))
    for name in ('bi_orthonormality', 'completeness', 'g_deficit_identity', 'g_unitarity_restoration',
                 'density_positivity', 'hermitian_regression_exact'):
        assert data['invariants'][name]['pass'] is True


def test_validate_takes_preset_and_units_mode(tmp_path):
    out = tmp_path / "validation.csv"
    code = main(['validate', '--preset', 'fig2', '--units-mode', 'paper', '--format', 'csv',
                 '--points', '2', '--times', '2', '--steps-per-period', '1000', '--out', str(out)])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ['section', 'criterion', 'samples', 'max_abs_dev', 'tolerance', 'pass']
    assert frame['pass'].all()
    # the fig2 point leads the grid and is PT-unbroken
    unbroken = frame[frame['criterion'] == 'g_unbroken_closed_vs_pipeline']
    assert int(unbroken['samples'].iloc[0]) >= 2


def test_validate_reads_config_file(tmp_path):
    config = tmp_path / "run.yaml"
    config.write_text("points: 1\ntimes: 2\nsteps_per_period: 1000\nseed: 11\n", encoding='utf-8')
    report = tmp_path / "validation.json"
    assert main(['validate', '--config', str(config), '--out', str(report)]) == EXIT_OK
    data = json.loads(report.read_text(encoding='utf-8'))
    assert data['summary']['times'] == 2


def test_validate_rejects_bad_config_value(tmp_path):
    config = tmp_path / "run.yaml"
    config.write_text("points: many\n", encoding='utf-8')
    assert main(['validate', '--config', str(config), '--out', str(tmp_path / "r.json")]) == EXIT_USAGE
