"""
Series and table cache: one JSON file per form, coefficients as decimal strings.
"""

import json
import os
import re
from pathlib import Path

from loguru import logger
from tenacity import (
    retry,
    retry_if_exception_type,
    stop_after_attempt,
    wait_exponential,
)

from modular_congruences.utils.errors import BadParameter, PrecisionExceeded
from modular_congruences.utils.forms import FormSpec, build_form
from modular_congruences.utils.series import PowerSeries, make_series

CACHE_ENV = "MODCONG_CACHE_DIR"
CACHE_FILE = re.compile(r"^[a-z0-9_]+(-\d+)?\.json$")
TRANSIENT_IO = (TimeoutError, BlockingIOError, InterruptedError)


def cache_dir(path: str | None = None) -> Path:
    """--dir wins over the environment."""
    chosen = path or os.environ.get(CACHE_ENV)
    if not chosen:
        raise BadParameter(f"no cache directory given and {CACHE_ENV} is not set")
    return Path(chosen)


def cache_path(directory: Path, spec: FormSpec) -> Path:
    suffix = "" if spec.n is None else f"-{spec.n}"
    return directory / f"{spec.name}{suffix}.json"


def series_to_json(spec: FormSpec, series: PowerSeries) -> dict:
    return {
        "name": spec.name,
        "n": spec.n,
        "prec": series.prec,
        "coeffs": [str(c) for c in series.coeffs],
    }


def series_from_json(payload: dict) -> tuple[FormSpec, PowerSeries]:
    try:
        spec = FormSpec(payload["name"], payload["n"])
        coeffs = [int(c) for c in payload["coeffs"]]
        prec = int(payload["prec"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BadParameter(f"malformed cache entry: {exc}") from exc
    return spec, make_series(coeffs, prec)


@retry(
    stop=stop_after_attempt(5),
    wait=wait_exponential(multiplier=1, min=4, max=10),
    retry=retry_if_exception_type(TRANSIENT_IO),
)
def _write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


@retry(
    stop=stop_after_attempt(5),
    wait=wait_exponential(multiplier=1, min=4, max=10),
    retry=retry_if_exception_type(TRANSIENT_IO),
)
def _read_text(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def write_cache(directory: Path, spec: FormSpec, prec: int) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    path = cache_path(directory, spec)
    series = build_form(spec, prec)
    _write_text(path, json.dumps(series_to_json(spec, series)))
    logger.info(f"cached {spec.label} to {prec} terms in {path}")
    return path


def read_cache(directory: Path, spec: FormSpec, prec: int | None = None) -> PowerSeries:
    """Load a cached form, truncated to ``prec`` when given."""
    path = cache_path(directory, spec)
    if not path.exists():
        raise BadParameter(f"no cache entry for {spec.label} in {directory}")
    try:
        payload = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise BadParameter(f"malformed cache entry in {path}: {exc}") from exc
    stored_spec, series = series_from_json(payload)
    if stored_spec != spec:
        raise BadParameter(f"{path} holds {stored_spec.label}, not {spec.label}")
    if prec is None:
        return series
    if series.prec < prec:
        raise PrecisionExceeded(
            f"cache holds {spec.label} to {series.prec} terms, {prec} requested"
        )
    return series.truncate(prec)


def load_or_build(directory: Path | None, spec: FormSpec, prec: int) -> PowerSeries:
    """Cached expansion when one of sufficient precision exists, else a fresh one."""
    if directory is not None:
        try:
            return read_cache(directory, spec, prec)
        except (BadParameter, PrecisionExceeded) as exc:
            logger.debug(f"cache miss for {spec.label}: {exc}")
    return build_form(spec, prec)


def clear_cache(directory: Path) -> list[Path]:
    """Remove cache files only; anything else in the directory is left alone."""
    removed = []
    if not directory.is_dir():
        return removed
    for path in sorted(directory.iterdir()):
        if path.is_file() and CACHE_FILE.match(path.name):
            path.unlink()
            removed.append(path)
    logger.info(f"removed {len(removed)} cache files from {directory}")
    return removed
