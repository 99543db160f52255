import pytest
import json
import os
import tempfile
from fractions import Fraction

from src.algebra import Poly, SquareClass
from src.config import Settings, load_settings
from src.exceptions import ConfigError, StorageError
from src.galois import GaloisLabel
from src.local_analysis import Place
from src.report_handler import ReportEnvelope, ReportHandler, to_jsonable


@pytest.fixture
def temp_dir():
    """Fixture providing a temporary directory."""
    path = tempfile.mkdtemp()
    yield path
    for name in os.listdir(path):
        os.remove(os.path.join(path, name))
    os.rmdir(path)


@pytest.fixture
def envelope():
    """Fixture providing a small report."""
    return ReportEnvelope(
        command='analyze', inputs={'a2': 3, 'a1': 2, 'a0': 0, 'n': 6},
        result={'root': Fraction(3, 4), 'class': SquareClass(-6),
                'label': GaloisLabel.S3_X_S3, 'point': (1, -1, -1),
                'poly': Poly.of(-6, -1, 0, 1), 'place': Place.real()},
        verdict='NoObstruction', notes=['checked'])


def write_json(directory, name, data):
    path = os.path.join(directory, name)
    with open(path, 'w') as f:
        f.write(data if isinstance(data, str) else json.dumps(data))
    return path


class TestToJsonable:
    """Tests for the canonical rendering."""

    def test_scalars(self):
        """✓ Should render rationals as p/q and classes as integers."""
        assert to_jsonable(Fraction(3, 4)) == "3/4"
        assert to_jsonable(Fraction(5)) == "5"
        assert to_jsonable(SquareClass(-6)) == -6
        assert to_jsonable(GaloisLabel.SUM_OF_CUBES) == "SumOfCubes"
        assert to_jsonable((1, 2)) == [1, 2]

    def test_unknown_type(self):
        """✗ Should raise StorageError for an object it cannot render."""
        with pytest.raises(StorageError):
            to_jsonable(object())


class TestReportHandler:
    """Tests for serialization and file output."""

    def test_round_trip(self, envelope):
        """✓ Should parse back to an equal envelope."""
        text = ReportHandler.serialize(envelope)
        assert ReportHandler.parse(text) == envelope

    def test_deterministic(self, envelope):
        """✓ Should emit sorted keys and identical bytes."""
        first = ReportHandler.serialize(envelope)
        assert first == ReportHandler.serialize(envelope)
        data = json.loads(first)
        assert list(data) == sorted(data)
        assert data['result']['root'] == "3/4"
        assert data['result']['class'] == -6

    def test_write_and_read(self, envelope, temp_dir):
        """✓ Should write a report file and read it back."""
        handler = ReportHandler(os.path.join(temp_dir, 'report.json'))
        handler.write(handler.render(envelope, as_json=True))
        assert handler.read() == [envelope]

    def test_batch_lines(self, envelope, temp_dir):
        """✓ Should append one compact JSON object per line for a batch."""
        handler = ReportHandler(os.path.join(temp_dir, 'batch.jsonl'))
        with handler.output() as append:
            for _ in range(3):
                append(handler.render(envelope, as_json=True, batch=True))
        with open(handler.output_path) as f:
            lines = f.read().splitlines()
        assert len(lines) == 3
        assert handler.read() == [envelope] * 3

    def test_batch_of_one_is_one_line(self, envelope):
        """✓ Should keep a single batch report on one compact line."""
        line = ReportHandler().render(envelope, as_json=True, batch=True)
        assert "\n" not in line
        assert line == json.dumps(json.loads(line), sort_keys=True,
                                  separators=(',', ':'), ensure_ascii=False)
        assert ReportHandler.parse(line) == envelope

    def test_output_without_path(self, envelope):
        """✓ Should accept appends and write nothing without a path."""
        handler = ReportHandler()
        with handler.output() as append:
            append(handler.render(envelope, as_json=False))
        assert handler.output_path is None

    def test_text_rendering(self, envelope):
        """✓ Should render a readable summary."""
        text = ReportHandler.format_text(envelope)
        assert text.startswith("analyze: NoObstruction")
        assert "root: 3/4" in text

    def test_write_failure(self, envelope, temp_dir):
        """✗ Should raise StorageError when the path is a directory."""
        handler = ReportHandler(temp_dir)
        with pytest.raises(StorageError):
            handler.write("{}")

    def test_parse_failure(self):
        """✗ Should raise StorageError for malformed JSON."""
        with pytest.raises(StorageError):
            ReportHandler.parse("{not json")


class TestSettings:
    """Tests for configuration loading."""

    def test_defaults(self):
        """✓ Should carry the documented defaults."""
        settings = Settings()
        assert (settings.depth, settings.bound, settings.workers) == (4, 10 ** 4, 1)
        assert settings.layered_search_cap == 50

    def test_load_file(self, temp_dir):
        """✓ Should override defaults from a file."""
        path = write_json(temp_dir, 'settings.json', {'depth': 6})
        settings = load_settings(path)
        assert settings.depth == 6
        assert settings.bound == 10 ** 4

    def test_flag_overrides(self):
        """✓ Should let flags win and ignore absent flags."""
        settings = Settings(depth=6).with_overrides(depth=None, bound=5)
        assert (settings.depth, settings.bound) == (6, 5)

    def test_missing_explicit_file(self, temp_dir):
        """✗ Should raise ConfigError for a missing explicit file."""
        with pytest.raises(ConfigError, match="not found"):
            load_settings(os.path.join(temp_dir, 'absent.json'))

    def test_invalid_json(self, temp_dir):
        """✗ Should raise ConfigError for malformed JSON."""
        with pytest.raises(ConfigError):
            load_settings(write_json(temp_dir, 'bad.json', "{depth"))

    def test_unknown_key(self, temp_dir):
        """✗ Should raise ConfigError for an unknown setting."""
        with pytest.raises(ConfigError, match="Unknown"):
            load_settings(write_json(temp_dir, 'extra.json', {'colour': 'red'}))

    @pytest.mark.parametrize("field,value", [('depth', 0), ('workers', 0), ('bound', -1),
                                             ('depth', 2.5), ('depth', True)])
    def test_invalid_values(self, field, value):
        """✗ Should raise ConfigError for out-of-range values."""
        with pytest.raises(ConfigError):
            Settings(**{field: value})
