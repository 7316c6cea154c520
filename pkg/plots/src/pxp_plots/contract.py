"""Reading side of the run-directory contract.

A run directory holds manifest.json (with a "scenario" key) plus the
scenario's CSV/JSON artifacts. CSVs are comma-separated with a header row;
every data cell parses as a float except declared tag columns.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path


class ContractError(RuntimeError):
    """Run directory does not satisfy the documented contract."""


def read_manifest(run_dir: Path) -> dict:
    path = run_dir / "manifest.json"
    if not path.is_file():
        raise ContractError(f"{run_dir} has no manifest.json")
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ContractError(f"{path}: invalid JSON: {exc}") from exc
    if "scenario" not in manifest:
        raise ContractError(f"{path}: manifest lacks a 'scenario' key")
    return manifest


def read_json(run_dir: Path, name: str) -> dict:
    path = run_dir / name
    if not path.is_file():
        raise ContractError(f"missing artifact {name} in {run_dir}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ContractError(f"{path}: invalid JSON: {exc}") from exc


def read_table(run_dir: Path, name: str, required: list[str],
               text_columns: tuple[str, ...] = ()) -> dict[str, list]:
    """Parse a CSV into named columns, checking the required header set."""
    path = run_dir / name
    if not path.is_file():
        raise ContractError(f"missing artifact {name} in {run_dir}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ContractError(f"{path}: empty file") from None
        missing = [col for col in required if col not in header]
        if missing:
            raise ContractError(
                f"{path}: missing column(s) {missing}; expected at least "
                f"{required}, found {header}")
        columns: dict[str, list] = {col: [] for col in header}
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ContractError(
                    f"{path}:{lineno}: expected {len(header)} cells, got {len(row)}")
            for col, cell in zip(header, row):
                if col in text_columns:
                    columns[col].append(cell)
                else:
                    try:
                        columns[col].append(float(cell))
                    except ValueError:
                        raise ContractError(
                            f"{path}:{lineno}: column {col!r} holds "
                            f"non-numeric cell {cell!r}") from None
    return columns


def prefixed_columns(columns: dict[str, list], prefix: str) -> list[str]:
    """Names like n_site_0, n_site_1, ... in site order."""
    found = [c for c in columns if c.startswith(prefix)]
    return sorted(found, key=lambda c: int(c[len(prefix):]))
