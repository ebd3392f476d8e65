"""
Repository for run artifacts.
Handles CSV and JSON files written under an output directory.
"""
import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from src.core.constants import CSV_DIGITS


def to_json_value(value: Any) -> Any:
    """Plain JSON data; exact rationals become "num/den" strings and complex numbers [re, im]."""
    if isinstance(value, BaseModel):
        return to_json_value(value.model_dump())
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): to_json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_json_value(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    return value


def canonical_json(value: Any) -> str:
    return json.dumps(to_json_value(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def config_hash(payload: Any) -> str:
    """Short SHA-256 of the canonical JSON form of a configuration."""
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()[:16]


def format_number(value: Any) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return f"{float(value):.{CSV_DIGITS}g}"


class ArtifactRepository:
    """Repository for CSV and JSON artifacts of one run"""

    def __init__(self, out_dir: str | Path, meta: Optional[dict] = None):
        self.out_dir = Path(out_dir)
        self.meta = dict(meta or {})
        self.written: list[Path] = []

    def _path(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir / name

    # ============= CSV Operations =============

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        """Write '#'-prefixed metadata lines, a column header and 17-digit rows"""
        lines = [f"# {key}: {self.meta[key]}" for key in sorted(self.meta)]
        lines.append(",".join(header))
        lines.extend(",".join(format_number(v) for v in row) for row in rows)
        path = self._path(name)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        self.written.append(path)
        return path

    @staticmethod
    def read_csv(path: str | Path) -> tuple[dict[str, str], list[str], list[list[float]]]:
        """Read back metadata, header and numeric rows"""
        meta: dict[str, str] = {}
        header: list[str] = []
        rows: list[list[float]] = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(": ")
                meta[key] = value
            elif not header:
                header = line.split(",")
            elif line:
                rows.append([float(v) for v in line.split(",")])
        return meta, header, rows

    def write_text(self, name: str, body: str) -> Path:
        """Plain text body under the same '#' metadata lines"""
        lines = [f"# {key}: {self.meta[key]}" for key in sorted(self.meta)]
        path = self._path(name)
        path.write_text("\n".join(lines) + "\n" + body, encoding="utf-8")
        self.written.append(path)
        return path

    # ============= JSON Operations =============

    def write_json(self, name: str, payload: Any) -> Path:
        """Write UTF-8 JSON with sorted keys, the metadata under "meta" """
        document = {"meta": self.meta, "data": payload}
        path = self._path(name)
        path.write_text(
            json.dumps(to_json_value(document), sort_keys=True, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        self.written.append(path)
        return path

    @staticmethod
    def read_json(path: str | Path) -> dict:
        return json.loads(Path(path).read_text(encoding="utf-8"))
