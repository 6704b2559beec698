import json

import pytest

from modular_congruences.utils import cache
from modular_congruences.utils.cache import (
    cache_path,
    clear_cache,
    load_or_build,
    read_cache,
    series_from_json,
    series_to_json,
    write_cache,
)
from modular_congruences.utils.errors import BadParameter, PrecisionExceeded
from modular_congruences.utils.forms import FormSpec, build_form


def test_cache_file_names(tmp_path):
    assert cache_path(tmp_path, FormSpec("f", 3)).name == "f-3.json"
    assert cache_path(tmp_path, FormSpec("one_minus_16l")).name == "one_minus_16l.json"


def test_json_keeps_large_integers_exact():
    spec = FormSpec("nu")
    series = build_form(spec, 60)
    payload = json.loads(json.dumps(series_to_json(spec, series)))
    assert all(isinstance(c, str) for c in payload["coeffs"])
    assert series_from_json(payload) == (spec, series)


@pytest.mark.parametrize(
    "payload",
    [
        {"name": "f1", "n": None, "prec": 2},
        {"name": "f1", "n": None, "prec": 2, "coeffs": ["0", "x"]},
        {"name": "bogus", "n": None, "prec": 1, "coeffs": ["0"]},
    ],
)
def test_malformed_entries(payload):
    with pytest.raises(BadParameter):
        series_from_json(payload)


def test_write_then_read(tmp_path):
    spec = FormSpec("h", 2)
    path = write_cache(tmp_path, spec, 30)
    assert path == tmp_path / "h-2.json"
    assert read_cache(tmp_path, spec) == build_form(spec, 30)
    assert read_cache(tmp_path, spec, 12) == build_form(spec, 12)
    with pytest.raises(PrecisionExceeded):
        read_cache(tmp_path, spec, 31)


def test_read_checks_the_stored_form(tmp_path):
    spec = FormSpec("psi")
    write_cache(tmp_path, spec, 10)
    (tmp_path / "psi.json").rename(tmp_path / "nu.json")
    with pytest.raises(BadParameter):
        read_cache(tmp_path, FormSpec("nu"))


def test_load_or_build_falls_back(tmp_path, mocker):
    spec = FormSpec("f1")
    write_cache(tmp_path, spec, 8)
    spy = mocker.spy(cache, "build_form")
    assert load_or_build(tmp_path, spec, 8) == build_form(spec, 8)
    assert spy.call_count == 0
    assert load_or_build(tmp_path, spec, 20) == build_form(spec, 20)
    assert spy.call_count == 1
    assert load_or_build(None, spec, 5) == build_form(spec, 5)


def test_corrupt_entry_is_rebuilt(tmp_path, mocker):
    spec = FormSpec("f1")
    (tmp_path / "f1.json").write_text("{not json")
    with pytest.raises(BadParameter):
        read_cache(tmp_path, spec)
    spy = mocker.spy(cache, "build_form")
    assert load_or_build(tmp_path, spec, 10) == build_form(spec, 10)
    assert spy.call_count == 1


def test_clear_missing_directory(tmp_path):
    assert clear_cache(tmp_path / "absent") == []


def test_transient_errors_are_retried(tmp_path, mocker):
    mocker.patch("time.sleep")
    spec = FormSpec("theta")
    write_cache(tmp_path, spec, 6)
    original = type(tmp_path).read_text
    attempts = []

    def flaky(self, *args, **kwargs):
        attempts.append(self)
        if len(attempts) < 3:
            raise TimeoutError("share busy")
        return original(self, *args, **kwargs)

    mocker.patch.object(type(tmp_path), "read_text", flaky)
    assert read_cache(tmp_path, spec).coeffs == (1, 4, 4, 0, 4, 8)
    assert len(attempts) == 3
