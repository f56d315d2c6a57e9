"""Deterministic report emitters (JSON / CSV / text / histogram CSV).

Byte-identical output for identical inputs is a contract: field order is
fixed, floats are printed with 9 significant digits through one formatter,
the decimal separator is always a point, and an infinite divergence is
spelled literally as "inf" (a JSON string, since JSON has no infinity).
"""

from __future__ import annotations

import csv
import io
import json
import math

from .distribution import Distribution
from .order import HEADLINE_MODE, ModeEntry, OrderReport

ENTRY_FIELDS = (
    "feature",
    "renorm",
    "reference",
    "delta_s",
    "kl",
    "support_mismatch_mass",
    "residual_mean_gap",
    "clipped_mass",
    "skipped",
    "skip_reason",
)


def format_float(x: float) -> str:
    """9 significant digits, locale-independent, -0 normalized, inf literal."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        x = 0.0
    return format(x, ".9g")


def entry_to_dict(entry: ModeEntry) -> dict:
    kl = None
    if entry.value is not None:
        kl = "inf" if math.isinf(entry.value.kl) else entry.value.kl
    return {
        "feature": entry.mode.feature.value,
        "renorm": entry.mode.renorm.value,
        "reference": entry.mode.reference.value,
        "delta_s": None if entry.value is None else entry.value.delta_s,
        "kl": kl,
        "support_mismatch_mass": (
            None if entry.value is None else entry.value.support_mismatch_mass
        ),
        "residual_mean_gap": entry.residual_mean_gap,
        "clipped_mass": entry.clipped_mass,
        "skipped": entry.skipped,
        "skip_reason": entry.skip_reason,
    }


def report_to_dict(report: OrderReport) -> dict:
    headline = report.headline
    return {
        "image_a": {"path": report.image_a.path, "sha256": report.image_a.sha256},
        "image_b": {"path": report.image_b.path, "sha256": report.image_b.sha256},
        "epsilon": report.epsilon,
        "strict": report.strict,
        "headline": None if headline is None else entry_to_dict(headline),
        "entries": [entry_to_dict(entry) for entry in report.entries],
    }


def render_json(report: OrderReport) -> str:
    return _write_json(report_to_dict(report), 0) + "\n"


def render_csv(report: OrderReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(ENTRY_FIELDS)
    for entry in report.entries:
        row = entry_to_dict(entry)
        writer.writerow([_csv_cell(row[field]) for field in ENTRY_FIELDS])
    return out.getvalue()


def render_text(report: OrderReport) -> str:
    """Headline scalar only; the full matrix needs json or csv."""
    for entry in report.entries:
        if entry.mode == HEADLINE_MODE:
            if entry.skipped:
                return f"OCY(headline, gray/mass/first): skipped ({entry.skip_reason})\n"
            return (
                f"OCY(headline, gray/mass/first): {format_float(entry.value.delta_s)}\n"
            )
    return "OCY(headline, gray/mass/first): unavailable\n"


def render_hist_csv(dist: Distribution) -> str:
    """bin_index,bin_level,mass rows for every bin, zero-mass bins included."""
    lines = ["bin_index,bin_level,mass"]
    for index, (level, mass) in enumerate(zip(dist.levels, dist.masses)):
        lines.append(f"{index},{level:.6f},{format_float(mass)}")
    return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _write_json(value, indent: int) -> str:
    # json.dumps would print floats at full repr precision; this writer keeps
    # the 9-significant-digit contract and a fixed key order.
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=True)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [
            f'{inner}{json.dumps(key)}: {_write_json(item, indent + 1)}'
            for key, item in value.items()
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        parts = [inner + _write_json(item, indent + 1) for item in value]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")
