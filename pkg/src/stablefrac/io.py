"""JSON and CSV serialization.

Functions are stored as ``{"kind": "grid", "x0", "dx", "values"}`` or
``{"kind": "spectral", "du", "x0", "re", "im"}``. Paths and local-time fields
use their field names. CSV reports start with ``# schema=1`` and a
``# config=<json>`` line holding the effective configuration.

Floats are written with ``repr`` precision, so output is byte-identical for
identical inputs and reading it back is lossless.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path

import numpy as np

from stablefrac.errors import StableFracError
from stablefrac.fracops import GridFunction, SpectralFunction
from stablefrac.simulate import LocalTimeField, PathSample

SCHEMA = 1


class ParseError(StableFracError):
    """Input file does not match a documented layout."""


def _floats(a) -> list[float]:
    return [float(v) for v in np.asarray(a).ravel()]


def function_to_dict(f) -> dict:
    if isinstance(f, GridFunction):
        return {"kind": "grid", "x0": f.x0, "dx": f.dx, "values": _floats(f.values)}
    if isinstance(f, SpectralFunction):
        return {
            "kind": "spectral",
            "du": f.du,
            "x0": f.x0,
            "re": _floats(f.coeffs.real),
            "im": _floats(f.coeffs.imag),
        }
    raise TypeError(f"cannot serialize {type(f).__name__}")


def function_from_dict(d: dict):
    try:
        if "values" in d:
            return GridFunction(float(d["x0"]), float(d["dx"]), np.asarray(d["values"], float))
        if "re" in d:
            re = np.asarray(d["re"], float)
            im = np.asarray(d.get("im", np.zeros_like(re)), float)
            if re.shape != im.shape:
                raise ParseError("re and im must have equal length")
            return SpectralFunction(float(d["du"]), re + 1j * im, float(d.get("x0", "nan")))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, StableFracError):
            raise
        raise ParseError(f"malformed function record: {exc}") from exc
    raise ParseError("function record needs either 'values' or 're'/'im'")


def path_to_dict(p: PathSample) -> dict:
    return {
        "t_grid": _floats(p.t_grid),
        "values": _floats(p.values),
        "seed": p.seed,
        "stream": p.stream,
    }


def path_from_dict(d: dict) -> PathSample:
    return PathSample(
        np.asarray(d["t_grid"], float), np.asarray(d["values"], float), int(d["seed"]),
        int(d.get("stream", 0)),
    )


def local_time_to_dict(lt: LocalTimeField) -> dict:
    return {
        "levels": _floats(lt.levels),
        "bandwidth": lt.bandwidth,
        "l_values": _floats(lt.l_values),
        "t_end": lt.t_end,
    }


def local_time_from_dict(d: dict) -> LocalTimeField:
    return LocalTimeField(
        np.asarray(d["levels"], float),
        float(d["bandwidth"]),
        np.asarray(d["l_values"], float),
        float(d["t_end"]),
    )


def dumps_json(payload: dict) -> str:
    return json.dumps(payload, indent=1, allow_nan=False) + "\n"


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(dumps_json(payload), encoding="utf-8")


def read_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def dumps_csv(columns: list[str], rows: list[list], config: dict) -> str:
    buf = _io.StringIO()
    buf.write(f"# schema={SCHEMA}\n")
    buf.write("# config=" + json.dumps(config, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def read_csv(text: str) -> tuple[dict, list[dict]]:
    """Parse a report written by :func:`dumps_csv` into ``(metadata, rows)``."""
    meta: dict = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, val = line[2:].partition("=")
            meta[key] = json.loads(val) if key == "config" else val
        else:
            body.append(line)
    return meta, list(csv.DictReader(body))
