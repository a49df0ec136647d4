"""JSON file formats for series and plants.

Series::

    {"version": 1, "nvars": 2,
     "terms": [{"exp": [1, 1], "re": 1.0, "im": 0.0}, ...]}

Plant::

    {"version": 1, "num": <series>, "den": <series>,
     "bezout": {"x": <series>, "y": <series>}}     # "bezout" optional
"""

from __future__ import annotations

import json
import numbers
from pathlib import Path

from .plants import CoprimePlant
from .series import Series

FORMAT_VERSION = 1


class FormatError(ValueError):
    """Malformed series or plant document; the message names the location."""


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise FormatError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _check_version(obj, where: str) -> None:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    if obj.get("version", FORMAT_VERSION) != FORMAT_VERSION:
        raise FormatError(f"{where}.version: unsupported version {obj.get('version')!r}")


def series_to_dict(f: Series) -> dict:
    return {
        "version": FORMAT_VERSION,
        "nvars": f.nvars,
        "terms": [
            {"exp": list(exp), "re": c.real, "im": c.imag} for exp, c in f.terms.items()
        ],
    }


def series_from_dict(obj, where: str = "series") -> Series:
    _check_version(obj, where)
    nvars = obj.get("nvars")
    if isinstance(nvars, bool) or not isinstance(nvars, int) or nvars < 1:
        raise FormatError(f"{where}.nvars: expected a positive integer, got {nvars!r}")
    terms = obj.get("terms")
    if not isinstance(terms, list):
        raise FormatError(f"{where}.terms: expected a list")
    out: dict[tuple[int, ...], complex] = {}
    for i, term in enumerate(terms):
        at = f"{where}.terms[{i}]"
        if not isinstance(term, dict):
            raise FormatError(f"{at}: expected an object")
        exp = term.get("exp")
        if not isinstance(exp, list) or len(exp) != nvars:
            raise FormatError(f"{at}.exp: expected a list of {nvars} integers")
        for j, e in enumerate(exp):
            if isinstance(e, bool) or not isinstance(e, int) or e < 0:
                raise FormatError(f"{at}.exp[{j}]: expected a nonnegative integer, got {e!r}")
        key = tuple(exp)
        if key in out:
            raise FormatError(f"{at}.exp: duplicate exponent {list(key)}")
        if "re" not in term:
            raise FormatError(f"{at}.re: missing")
        out[key] = complex(_number(term["re"], f"{at}.re"), _number(term.get("im", 0.0), f"{at}.im"))
    try:
        return Series(nvars, out)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from exc


def plant_to_dict(num: Series, den: Series, witnesses=None) -> dict:
    doc = {"version": FORMAT_VERSION, "num": series_to_dict(num), "den": series_to_dict(den)}
    if witnesses is not None:
        doc["bezout"] = {"x": series_to_dict(witnesses[0]), "y": series_to_dict(witnesses[1])}
    return doc


def plant_document(plant: CoprimePlant) -> dict:
    return plant_to_dict(plant.num, plant.den, plant.witnesses)


def plant_from_dict(obj, where: str = "plant"):
    """Parse a plant document into ``(num, den, witnesses_or_None)``."""
    _check_version(obj, where)
    for key in ("num", "den"):
        if key not in obj:
            raise FormatError(f"{where}.{key}: missing")
    num = series_from_dict(obj["num"], f"{where}.num")
    den = series_from_dict(obj["den"], f"{where}.den")
    if num.nvars != den.nvars:
        raise FormatError(f"{where}: num has {num.nvars} variables, den has {den.nvars}")
    witnesses = None
    if obj.get("bezout") is not None:
        bez = obj["bezout"]
        if not isinstance(bez, dict) or "x" not in bez or "y" not in bez:
            raise FormatError(f"{where}.bezout: expected an object with 'x' and 'y'")
        x = series_from_dict(bez["x"], f"{where}.bezout.x")
        y = series_from_dict(bez["y"], f"{where}.bezout.y")
        if x.nvars != num.nvars or y.nvars != num.nvars:
            raise FormatError(f"{where}.bezout: witnesses must have {num.nvars} variables")
        witnesses = (x, y)
    return num, den, witnesses


def _load(path) -> object:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from exc


def load_series(path) -> Series:
    return series_from_dict(_load(path), str(path))


def load_plant(path):
    return plant_from_dict(_load(path), str(path))


def _dump(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def write_series(path, f: Series) -> None:
    _dump(series_to_dict(f), path)


def write_plant(path, num: Series, den: Series, witnesses=None) -> None:
    _dump(plant_to_dict(num, den, witnesses), path)
