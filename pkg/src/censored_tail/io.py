"""Data-file parsing and result serialisation (CSV rows, JSON summaries)."""

from __future__ import annotations

import csv
import io
import json
import math

from .distributions import CensoredSample
from .montecarlo import ReplicationRecord

__all__ = [
    "DataFileError",
    "RESULT_COLUMNS",
    "read_data_file",
    "parse_data",
    "format_float",
    "records_to_csv",
    "records_from_csv",
    "write_results_csv",
    "read_results_csv",
    "dump_json",
]

RESULT_COLUMNS = (
    "case_id",
    "n",
    "beta",
    "replication",
    "gamma_x_hat",
    "relative_error",
    "truncated_by_s",
    "truncated_by_h",
    "censor_fraction",
)


class DataFileError(ValueError):
    """Malformed censored-data file."""


def parse_data(text, source="<input>"):
    """Parse ``z,delta`` CSV text into a :class:`CensoredSample`.

    The header row must be exactly ``z,delta``; every following row needs a
    finite positive ``z`` and a ``delta`` of 0 or 1.  Blank lines are skipped.
    """
    lines = text.splitlines()
    if not lines or not any(line.strip() for line in lines):
        raise DataFileError(f"{source}: file is empty, expected header 'z,delta'")
    header = [h.strip() for h in lines[0].split(",")]
    if header != ["z", "delta"]:
        raise DataFileError(f"{source}:1: expected header 'z,delta', got {lines[0]!r}")
    z, delta = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise DataFileError(f"{source}:{lineno}: expected 2 fields, got {len(fields)}")
        try:
            zi = float(fields[0])
        except ValueError:
            raise DataFileError(f"{source}:{lineno}: z is not a number: {fields[0]!r}") from None
        if not (math.isfinite(zi) and zi > 0.0):
            raise DataFileError(f"{source}:{lineno}: z must be finite and positive, got {fields[0]!r}")
        if fields[1] not in ("0", "1"):
            raise DataFileError(f"{source}:{lineno}: delta must be 0 or 1, got {fields[1]!r}")
        z.append(zi)
        delta.append(int(fields[1]))
    if not z:
        raise DataFileError(f"{source}: no data rows after header")
    return CensoredSample(z, delta)


def read_data_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse_data(fh.read(), source=str(path))


def format_float(x):
    """17 significant digits, enough to round-trip any double."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"refusing to serialise non-finite value {x}")
    return format(x, ".17g")


def records_to_csv(records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for r in records:
        writer.writerow(
            [
                r.case_id,
                r.n,
                format_float(r.beta),
                r.replication,
                format_float(r.gamma_x_hat),
                format_float(r.relative_error),
                int(r.truncated_by_s),
                int(r.truncated_by_h),
                format_float(r.censor_fraction),
            ]
        )
    return buf.getvalue()


def records_from_csv(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != RESULT_COLUMNS:
        raise DataFileError(f"unexpected result header {header!r}")
    out = []
    for row in reader:
        out.append(
            ReplicationRecord(
                case_id=row[0],
                n=int(row[1]),
                beta=float(row[2]),
                replication=int(row[3]),
                gamma_x_hat=float(row[4]),
                relative_error=float(row[5]),
                truncated_by_s=bool(int(row[6])),
                truncated_by_h=bool(int(row[7])),
                censor_fraction=float(row[8]),
            )
        )
    return out


def write_results_csv(path, records):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_to_csv(records))


def read_results_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return records_from_csv(fh.read())


def dump_json(obj, path=None):
    """Stable-key JSON; strict about NaN and infinity."""
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=False, ensure_ascii=False) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
