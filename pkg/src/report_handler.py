import dataclasses
import json
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional

from . import __version__
from .algebra import Poly, SquareClass
from .conic_bundle import ClosedPoint
from .etale import EtaleElement
from .exceptions import StorageError
from .local_analysis import Place


def to_jsonable(value: Any) -> Any:
    """Rationals become "p/q" strings, square classes signed integers."""
    if isinstance(value, Enum):
        return value.value
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, SquareClass):
        return value.value
    if isinstance(value, (Poly, EtaleElement, ClosedPoint, Place)):
        return str(value)
    if dataclasses.is_dataclass(value):
        return {item.name: to_jsonable(getattr(value, item.name))
                for item in dataclasses.fields(value)
                if not item.metadata.get('skip')}
    if isinstance(value, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted((to_jsonable(v) for v in value), key=str)
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise StorageError(f"Cannot serialise {type(value).__name__}")


@dataclass
class ReportEnvelope:
    command: str
    inputs: Dict[str, Any]
    result: Any
    verdict: str
    notes: List[str] = field(default_factory=list)
    tool_version: str = __version__

    def __post_init__(self):
        self.inputs = to_jsonable(self.inputs)
        self.result = to_jsonable(self.result)
        self.verdict = to_jsonable(self.verdict)
        self.notes = [str(note) for note in self.notes]


class ReportHandler:
    def __init__(self, output_path: Optional[str] = None):
        self.output_path = Path(output_path) if output_path else None

    @staticmethod
    def serialize(envelope: ReportEnvelope, indent: Optional[int] = 2) -> str:
        return json.dumps(dataclasses.asdict(envelope), sort_keys=True,
                          indent=indent, ensure_ascii=False)

    @staticmethod
    def parse(text: str) -> ReportEnvelope:
        try:
            data = json.loads(text)
            return ReportEnvelope(**data)
        except Exception as e:
            raise StorageError(f"Failed to parse report: {str(e)}")

    @staticmethod
    def format_text(envelope: ReportEnvelope) -> str:
        lines = [f"{envelope.command}: {envelope.verdict}"]
        lines += _text_lines(envelope.result, 1)
        lines += [f"  note: {note}" for note in envelope.notes]
        return "\n".join(lines)

    @staticmethod
    def serialize_line(envelope: ReportEnvelope) -> str:
        return json.dumps(dataclasses.asdict(envelope), sort_keys=True,
                          separators=(',', ':'), ensure_ascii=False)

    def render(self, envelope: ReportEnvelope, as_json: bool, batch: bool = False) -> str:
        """A batch gets one compact JSON object per line, a single report pretty JSON."""
        if as_json and batch:
            return self.serialize_line(envelope)
        if as_json:
            return self.serialize(envelope)
        return self.format_text(envelope)

    @contextmanager
    def output(self) -> Iterator[Callable[[str], None]]:
        """Yield an appender that writes each rendered report as it arrives."""
        if self.output_path is None:
            yield lambda text: None
            return
        try:
            self.output_path.parent.mkdir(parents=True, exist_ok=True)
            f = open(self.output_path, 'w')
        except Exception as e:
            raise StorageError(f"Failed to write report: {str(e)}")

        def append(text: str) -> None:
            try:
                f.write(text + "\n")
                f.flush()
            except Exception as e:
                raise StorageError(f"Failed to write report: {str(e)}")

        with f:
            yield append

    def write(self, text: str) -> None:
        with self.output() as append:
            append(text)

    def read(self) -> List[ReportEnvelope]:
        if self.output_path is None:
            raise StorageError("No report file configured")
        try:
            with open(self.output_path, 'r') as f:
                text = f.read()
        except Exception as e:
            raise StorageError(f"Failed to read report: {str(e)}")
        stripped = text.strip()
        if stripped.startswith("{\n"):
            return [self.parse(stripped)]
        return [self.parse(line) for line in stripped.splitlines() if line.strip()]


def _text_lines(value: Any, level: int) -> List[str]:
    pad = "  " * level
    if isinstance(value, dict):
        lines = []
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item and not _flat(item):
                lines.append(f"{pad}{key}:")
                lines += _text_lines(item, level + 1)
            else:
                lines.append(f"{pad}{key}: {_inline(item)}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            if isinstance(item, (dict, list)) and not _flat(item):
                lines.append(f"{pad}-")
                lines += _text_lines(item, level + 1)
            else:
                lines.append(f"{pad}- {_inline(item)}")
        return lines
    return [f"{pad}{_inline(value)}"]


def _flat(value: Any) -> bool:
    return isinstance(value, list) and not any(isinstance(v, (dict, list)) for v in value)


def _inline(value: Any) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_inline(v) for v in value) + "]"
    if value is None:
        return "-"
    return str(value)
