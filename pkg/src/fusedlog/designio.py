"""JSON design files and the bundled published coefficient tables."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from fusedlog.hw_model import ConverterDesign, Datapath, FusedDesign
from fusedlog.minimax import Segment
from fusedlog.numerics import Mode
from fusedlog.segmentation import Scheme
from fusedlog.signed_digit import CoefficientError, OffsetCode, format_coefficient, parse_coefficient

SCHEMA_VERSION = 1

BUNDLED = {
    ("log", "recursive"): "table1_log.json",
    ("antilog", "recursive"): "table1_antilog.json",
    ("log", "flattened"): "table2_log.json",
    ("antilog", "flattened"): "table2_antilog.json",
}


class DesignFileError(ValueError):
    """Malformed design file; the message starts with the offending field path."""


def design_to_dict(design: ConverterDesign) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "mode": design.mode.value,
        "width_m": design.width_m,
        "scheme": design.scheme.value,
        "segments": [{"lo": s.lo, "hi": s.hi} for s in design.segments],
        "coefficients": [{"a": format_coefficient(a), "b": b.value} for a, b in design.coeffs],
        "datapath": {"rounding": design.datapath.rounding, "overflow": design.datapath.overflow},
        "metadata": design.metadata,
    }


def _need(obj, key, path, kind):
    if not isinstance(obj, dict) or key not in obj:
        raise DesignFileError(f"{path}.{key}: missing")
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise DesignFileError(f"{path}.{key}: expected integer, got {val!r}")
    if kind is not int and not isinstance(val, kind):
        raise DesignFileError(f"{path}.{key}: expected {kind.__name__}, got {type(val).__name__}")
    return val


def design_from_dict(d: dict, path: str = "$") -> ConverterDesign:
    version = _need(d, "schema_version", path, int)
    if version != SCHEMA_VERSION:
        raise DesignFileError(f"{path}.schema_version: unsupported version {version}")
    try:
        mode = Mode.parse(_need(d, "mode", path, str))
    except ValueError as e:
        raise DesignFileError(f"{path}.mode: {e}") from None
    m = _need(d, "width_m", path, int)
    try:
        scheme = Scheme(d.get("scheme", "published"))
    except ValueError:
        raise DesignFileError(f"{path}.scheme: unknown scheme {d.get('scheme')!r}") from None
    segs_raw = _need(d, "segments", path, list)
    coefs_raw = _need(d, "coefficients", path, list)
    if not segs_raw:
        raise DesignFileError(f"{path}.segments: empty")
    if len(coefs_raw) != len(segs_raw):
        raise DesignFileError(f"{path}.coefficients: {len(coefs_raw)} entries for {len(segs_raw)} segments")
    segments = []
    for k, s in enumerate(segs_raw):
        p = f"{path}.segments[{k}]"
        try:
            segments.append(Segment(_need(s, "lo", p, int), _need(s, "hi", p, int), mode))
        except DesignFileError:
            raise
        except ValueError as e:
            raise DesignFileError(f"{p}: {e}") from None
    coeffs = []
    for k, c in enumerate(coefs_raw):
        p = f"{path}.coefficients[{k}]"
        try:
            a = parse_coefficient(_need(c, "a", p, str), m)
        except CoefficientError as e:
            raise DesignFileError(f"{p}.a: {e}") from None
        try:
            b = OffsetCode(m, _need(c, "b", p, int))
        except CoefficientError as e:
            raise DesignFileError(f"{p}.b: {e}") from None
        coeffs.append((a, b))
    dp = d.get("datapath", {})
    try:
        datapath = Datapath(dp.get("rounding", "truncate"), dp.get("overflow", "saturate"))
    except (ValueError, AttributeError) as e:
        raise DesignFileError(f"{path}.datapath: {e}") from None
    try:
        return ConverterDesign(mode, m, tuple(segments), tuple(coeffs), scheme, datapath, dict(d.get("metadata", {})))
    except ValueError as e:
        raise DesignFileError(f"{path}: {e}") from None


def dumps_design(design: ConverterDesign) -> str:
    return json.dumps(design_to_dict(design), indent=2, sort_keys=False) + "\n"


def save_design(design: ConverterDesign, path) -> None:
    Path(path).write_text(dumps_design(design), encoding="utf-8", newline="\n")


def load_design(path) -> ConverterDesign:
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DesignFileError(f"$: not valid JSON ({e})") from None
    if isinstance(d, dict) and "log" in d and "antilog" in d:
        raise DesignFileError("$: this is a fused design file; use load_fused")
    return design_from_dict(d)


def fused_to_dict(fused: FusedDesign, metadata: dict | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "fused",
        "log": design_to_dict(fused.log_design),
        "antilog": design_to_dict(fused.antilog_design),
        "metadata": metadata or {},
    }


def load_fused(path) -> FusedDesign:
    d = json.loads(Path(path).read_text(encoding="utf-8"))
    return FusedDesign(design_from_dict(d["log"], "$.log"), design_from_dict(d["antilog"], "$.antilog"))


def bundled_path(mode: Mode | str, scheme: str) -> Path:
    name = BUNDLED[(Mode.parse(mode).value, Scheme(scheme).value)]
    return Path(str(resources.files("fusedlog") / "tables" / name))


def published_design(mode: Mode | str, scheme: str) -> ConverterDesign:
    """One of the four bundled published designs (recursive or flattened plan)."""
    return load_design(bundled_path(mode, scheme))
