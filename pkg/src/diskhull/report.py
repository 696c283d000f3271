"""Result documents (JSON) and curve exports (CSV)."""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

SCHEMA_VERSION = 1
SOFTWARE_VERSION = "0.1.0"
JSON_DIGITS = 12
TABLE_DIGITS = 9

# reference values from the published simulation study, for side-by-side display
REFERENCES: dict[str, dict[str, float]] = {
    "perimeter": {"expected_perimeter_mc": 3.2136},
    "convex-area": {"convex_area_direct_mc": 0.6612, "convex_area_blaschke_mc": 0.6618},
    "star-area": {"star_area_mc": 0.4725},
    "topological-area": {"topological_area_mc": 0.2816},
    "cdf": {"P(M >= 1/2)": 0.5},
}


def round_sig(x: float, digits: int = JSON_DIGITS) -> float:
    if not math.isfinite(x) or x == 0.0:
        return x
    return float(f"{x:.{digits - 1}e}")


def rounded(obj: Any, digits: int = JSON_DIGITS) -> Any:
    """Copy of a JSON-like structure with every float cut to ``digits``
    significant digits. Idempotent, so documents survive re-serialization."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return round_sig(obj, digits)
    if hasattr(obj, "item") and not hasattr(obj, "__len__"):  # numpy scalar
        return rounded(obj.item(), digits)
    if isinstance(obj, Mapping):
        return {str(k): rounded(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v, digits) for v in obj]
    if hasattr(obj, "value"):  # enums
        return obj.value
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


@dataclass
class ResultDocument:
    command: str
    parameters: dict[str, Any]
    results: dict[str, Any]
    references: dict[str, Any] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    timestamp: str = field(default_factory=_now)
    schema_version: int = SCHEMA_VERSION
    software_version: str = SOFTWARE_VERSION

    def __post_init__(self):
        self.parameters = rounded(self.parameters)
        self.results = rounded(self.results)
        self.references = rounded(self.references)
        self.checks = {str(k): bool(v) for k, v in self.checks.items()}

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=True)

    @classmethod
    def from_json(cls, text: str) -> "ResultDocument":
        d = json.loads(text)
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {d.get('schema_version')!r}")
        return cls(**d)

    def numeric_payload(self) -> dict[str, Any]:
        """Everything except wall-clock fields; equal across reruns."""
        return _strip_timing({"parameters": self.parameters, "results": self.results})

    def write(self, path: str | Path | None) -> None:
        text = self.to_json() + "\n"
        if path is None:
            print(text, end="")
        else:
            Path(path).write_text(text, encoding="utf-8")


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k not in ("wall_time", "workers")}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


# --- CSV ------------------------------------------------------------------------


def format_csv_number(x: float) -> str:
    # repr is shortest round-trip and always uses '.', independent of locale
    return repr(float(x))


def write_csv(
    path: str | Path | None,
    header: Sequence[str],
    rows: Iterable[Sequence[float]],
    metadata: Mapping[str, Any],
) -> str:
    """CSV with ``# key: value`` metadata lines above the header row.
    Returns the text; writes it to ``path`` unless that is None."""
    buf = io.StringIO(newline="")
    for key, value in metadata.items():
        buf.write(f"# {key}: {value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_csv_number(v) for v in row])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def read_csv(text: str) -> tuple[dict[str, str], list[str], list[list[float]]]:
    meta: dict[str, str] = {}
    lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            meta[key] = value
        elif line:
            lines.append(line)
    reader = csv.reader(lines)
    header = next(reader)
    return meta, header, [[float(v) for v in row] for row in reader]


# --- human table ----------------------------------------------------------------


def _cell(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.{TABLE_DIGITS}g}"
    return str(v)


def format_table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [list(header)] + [[_cell(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
