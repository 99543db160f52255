import pytest
from unittest.mock import Mock, patch
import json
import os
import tempfile

from src.cli_parser import create_parser
from src.exceptions import InconsistencyError, NotSmoothError
from src.main import main
from src.report_handler import ReportHandler


@pytest.fixture
def output_path():
    """Fixture providing a temporary report path."""
    temp_dir = tempfile.mkdtemp()
    path = os.path.join(temp_dir, "report.json")
    yield path

    if os.path.exists(path):
        os.remove(path)
    os.rmdir(temp_dir)


def run(argv, capsys):
    main(argv)
    return capsys.readouterr().out


class TestCLIParser:
    """Test cases for the argument parser."""

    def test_analyze_arguments(self):
        """✓ Should parse a cubic and shared options."""
        args = create_parser().parse_args(['analyze', '3', '2', '0', '6', '--json',
                                           '--depth', '5'])
        assert (args.a2, args.a1, args.a0, args.n) == (3, 2, 0, 6)
        assert args.json and args.depth == 5
        assert args.bound is None

    def test_tetra_range(self):
        """✓ Should parse --n-range into two integers."""
        args = create_parser().parse_args(['tetra', '--n-range', '1', '4'])
        assert args.n is None
        assert args.n_range == [1, 4]

    def test_bundle_axis(self):
        """✗ Should reject an axis outside 1..3."""
        with pytest.raises(SystemExit) as exc_info:
            create_parser().parse_args(['bundle', '21', '0', '50', '--axis', '4'])
        assert exc_info.value.code == 2

    def test_search_requires_box(self):
        """✗ Should require --box for search."""
        with pytest.raises(SystemExit):
            create_parser().parse_args(['search', '3', '2', '0', '6'])


class TestMain:
    """Test cases for the command line entry point."""

    def test_search(self, capsys):
        """✓ Should find the point (1, 0, 0) for the tetrahedral n = 1."""
        data = json.loads(run(['search', '3', '2', '0', '6', '--box', '3', '--json'], capsys))
        assert data['verdict'] == "Found"
        assert [1, 0, 0] in data['result']['points']

    def test_analyze_sum_of_cubes(self, capsys):
        """✓ Should report n = 4 as a sum of cubes locally insoluble."""
        data = json.loads(run(['analyze', '0', '0', '0', '4', '--json'], capsys))
        assert data['verdict'] == "LocallyInsoluble"
        assert data['command'] == "analyze"

    def test_analyze_text(self, capsys):
        """✓ Should report a known integral point in text form."""
        out = run(['analyze', '3', '2', '0', '6'], capsys)
        assert out.startswith("analyze: IntegralPointKnown")

    def test_u50(self, capsys):
        """✓ Should report the real-invariant disagreement as a failure."""
        data = json.loads(run(['u50', '--json'], capsys))
        assert data['verdict'] == "Failed"
        assert data['notes'] == ["real-invariant cross-check"]

    def test_local_single_prime(self, capsys):
        """✓ Should certify one prime and count points in the Weil window."""
        data = json.loads(run(['local', '3', '2', '0', '6', '--prime', '17',
                               '--json'], capsys))
        assert data['result']['validated'] is True
        low, high = data['result']['weil_window']
        assert low <= data['result']['fp_points'] <= high

    def test_tetra_range_lines(self, capsys):
        """✓ Should print one JSON object per n."""
        out = run(['tetra', '--n-range', '1', '2', '--json'], capsys)
        lines = out.strip().splitlines()
        assert len(lines) == 2
        assert [json.loads(line)['inputs']['n'] for line in lines] == [1, 2]

    def test_tetra_single_range_is_one_line(self, capsys):
        """✓ Should print a one-element range as a single JSON line."""
        out = run(['tetra', '--n-range', '1', '1', '--json'], capsys)
        lines = out.strip().splitlines()
        assert len(lines) == 1
        assert json.loads(lines[0])['verdict'] == "Reproduced"

    def test_tetra_range_output_file(self, capsys, output_path):
        """✓ Should write the streamed lines to the report file."""
        out = run(['tetra', '--n-range', '-1', '1', '--json', '--workers', '2',
                   '--output', output_path], capsys)
        envelopes = ReportHandler(output_path).read()
        assert [e.inputs['n'] for e in envelopes] == [-1, 0, 1]
        assert [ReportHandler.serialize_line(e) for e in envelopes] == out.strip().splitlines()

    def test_tetra_empty_range(self, capsys):
        """✗ Should exit 2 for an empty range."""
        with pytest.raises(SystemExit) as exc_info:
            main(['tetra', '--n-range', '3', '1'])
        assert exc_info.value.code == 2
        assert "Empty range" in capsys.readouterr().out

    def test_output_file(self, capsys, output_path):
        """✓ Should write a report that parses back."""
        out = run(['search', '3', '2', '0', '6', '--box', '2', '--json',
                   '--output', output_path], capsys)
        envelopes = ReportHandler(output_path).read()
        assert len(envelopes) == 1
        assert ReportHandler.serialize(envelopes[0]) == out.strip()

    def test_no_command(self, capsys):
        """✗ Should print help and exit 2 without a command."""
        with pytest.raises(SystemExit) as exc_info:
            main([])
        assert exc_info.value.code == 2

    def test_non_integer_argument(self):
        """✗ Should exit 2 for a non-integer coefficient."""
        with pytest.raises(SystemExit) as exc_info:
            main(['analyze', '3', 'x', '0', '6'])
        assert exc_info.value.code == 2

    def test_validation_error_handling(self):
        """✓ Should handle ValidationError with exit code 2."""
        with patch('builtins.print') as mock_print:
            with pytest.raises(SystemExit) as exc_info:
                main(['exceptional', '0', '0'])
            assert exc_info.value.code == 2
        assert mock_print.call_args[0][0].startswith("Validation Error:")

    def test_missing_config(self):
        """✗ Should exit 2 for a missing settings file."""
        with patch('builtins.print') as mock_print:
            with pytest.raises(SystemExit) as exc_info:
                main(['u50', '--config', '/nonexistent/settings.json'])
            assert exc_info.value.code == 2
        assert mock_print.call_args[0][0].startswith("Config Error:")

    @patch('src.main.AnalysisManager')
    def test_smoothness_error_handling(self, mock_manager_class):
        """✓ Should handle NotSmoothError with exit code 2."""
        mock_manager = Mock()
        mock_manager_class.return_value = mock_manager
        mock_manager.analyze.side_effect = NotSmoothError("Test error")

        with patch('builtins.print') as mock_print:
            with pytest.raises(SystemExit) as exc_info:
                main(['analyze', '1', '1', '1', '1'])
            assert exc_info.value.code == 2
        mock_print.assert_called_with("Smoothness Error: Test error")

    @patch('src.main.AnalysisManager')
    def test_inconsistency_error_handling(self, mock_manager_class):
        """✓ Should handle InconsistencyError with exit code 1."""
        mock_manager = Mock()
        mock_manager_class.return_value = mock_manager
        mock_manager.u50.side_effect = InconsistencyError("Test error")

        with patch('builtins.print') as mock_print:
            with pytest.raises(SystemExit) as exc_info:
                main(['u50'])
            assert exc_info.value.code == 1
        mock_print.assert_called_with("Internal Error: Test error")
