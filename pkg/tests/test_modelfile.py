import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sharpldp.errors import ModelError
from sharpldp.modelfile import (canonical_hash, corpus_paths, load, loads, parse_literal, resolve)
from sharpldp.sft import validate_model

from conftest import CORPUS

BASE = {"format_version": 1, "name": "t", "model": {"alphabet": ["a", "b"], "transitions": [[1, 1], [1, 1]]},
        "potentials": {"psi": {"memory": 1, "values": {"a": 1, "b": 0}}}}


def doc(**over):
    d = json.loads(json.dumps(BASE))
    d.update(over)
    return json.dumps(d)


def test_literals():
    assert parse_literal("1/3") == Fraction(1, 3)
    assert parse_literal(0.1) == Fraction(1, 10)
    assert parse_literal("0.25 + 1/4") == Fraction(1, 2)
    assert parse_literal("1 + sqrt2/10") == 1 + math.sqrt(2) / 10
    assert parse_literal("golden") == (1 + math.sqrt(5)) / 2
    assert parse_literal("-pi/4") == -math.pi / 4


@pytest.mark.parametrize("bad", ["foo", "2**3", "1/0", "__import__('os')", "1 +", True, None])
def test_bad_literals(bad):
    with pytest.raises(ModelError):
        parse_literal(bad)


def test_corpus_loads():
    assert len(CORPUS) >= 6
    for path in corpus_paths():
        mf = load(path)
        assert validate_model(mf.model).primitive
        mf.potential("psi")
        assert len(mf.content_hash) == 64


def test_resolve_names():
    assert resolve("bernoulli").name == "bernoulli.model"
    assert resolve("bernoulli.model").exists()


def test_syntax_error_position():
    with pytest.raises(ModelError, match=r":3:"):
        loads('{\n "format_version": 1,\n "model": }')


def test_schema_errors():
    with pytest.raises(ModelError, match="format_version"):
        loads(doc(format_version=2))
    with pytest.raises(ModelError, match="schema error"):
        loads(doc(extra=1))
    d = json.loads(doc())
    d["potentials"]["psi"]["values"]["c"] = 1
    with pytest.raises(ModelError, match="'c'"):
        loads(json.dumps(d))
    d = json.loads(doc())
    d["potentials"]["psi"]["memory"] = 2
    with pytest.raises(ModelError, match="length"):
        loads(json.dumps(d))


def test_missing_potential():
    mf = loads(doc())
    with pytest.raises(ModelError):
        mf.potential("nope")
    assert mf.potential("phi", default_zero=True).is_constant()


def test_experiments_and_profiles():
    mf = load(resolve("suspension"))
    assert "psi" in mf.profiles and mf.potential("psi").memory >= 1
    assert "suspend" in mf.experiments


@given(st.dictionaries(st.text(min_size=1, max_size=5), st.integers(-5, 5), max_size=4))
def test_hash_key_order(d):
    flipped = dict(reversed(list(d.items())))
    assert canonical_hash(d) == canonical_hash(flipped)


@given(st.fractions(max_denominator=1000))
def test_fraction_literal_roundtrip(q):
    assert parse_literal(f"{q.numerator}/{q.denominator}") == q
