"""Model files: JSON documents with exact and symbolic numeric literals.

A model file looks like::

    {
      "format_version": 1,
      "name": "bernoulli",
      "model": {"alphabet": ["a", "b"], "transitions": [[1, 1], [1, 1]]},
      "potentials": {
        "phi": {"memory": 1, "values": {"a": 0, "b": 0}},
        "psi": {"memory": 1, "values": {"a": 1, "b": 0}}
      },
      "experiments": {"ldp": {"p": 0.7, "schedule": "poly:c=1,beta=2", "n": [100, 2000]}}
    }

Values may be JSON numbers or strings holding arithmetic over decimals,
rationals ``p/q`` and the constants ``sqrt2``, ``golden``, ``e`` and ``pi``
(e.g. ``"1 + sqrt2/10"``).  Purely rational literals, decimals included,
stay exact; anything involving a constant is evaluated at 50 significant
digits, then rounded to float.  Words are label strings, with ``.`` between multi-character
labels.
"""

from __future__ import annotations

import ast
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import jsonschema
import mpmath

from .errors import ModelError
from .potentials import Potential
from .sft import MarkovModel
from .suspension import RAMPS, OrbitProfile, RoofFunction, build_bump_observable, psi_from_profile

FORMAT_VERSION = 1
DIGITS = 50

_number = {"oneOf": [{"type": "number"}, {"type": "string"}]}
SCHEMA = {
    "type": "object",
    "required": ["format_version", "model"],
    "additionalProperties": False,
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "model": {
            "type": "object",
            "required": ["transitions"],
            "additionalProperties": False,
            "properties": {
                "alphabet": {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 1},
                "transitions": {
                    "type": "array", "minItems": 1,
                    "items": {"type": "array", "items": {"enum": [0, 1]}},
                },
            },
        },
        "potentials": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["memory", "values"],
                "additionalProperties": False,
                "properties": {
                    "memory": {"type": "integer", "minimum": 1},
                    "values": {"type": "object", "additionalProperties": _number},
                    "positive": {"type": "boolean"},
                },
            },
        },
        "profiles": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["kind", "roof"],
                "additionalProperties": False,
                "properties": {
                    "kind": {"enum": ["bump", "g0", "constant"]},
                    "roof": {"type": "string"},
                    "target": {"type": "string"},
                    "A": _number,
                    "ramp": {"enum": sorted(RAMPS)},
                },
            },
        },
        "experiments": {"type": "object", "additionalProperties": {"type": "object"}},
    },
}


# -- literals ---------------------------------------------------------------

def _constants():
    mp = mpmath.mp
    return {"sqrt2": mpmath.sqrt(2), "golden": (1 + mpmath.sqrt(5)) / 2, "e": mp.e, "pi": mp.pi}


_BINOPS = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b,
           ast.Mult: lambda a, b: a * b, ast.Div: lambda a, b: a / b}


def _eval(node, consts):
    if isinstance(node, ast.Expression):
        return _eval(node.body, consts)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        # decimals are read exactly from their source text
        return Fraction(str(node.value)) if isinstance(node.value, float) else Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id not in consts:
            raise ModelError(f"unknown constant {node.id!r}; allowed: {sorted(consts)}")
        return consts[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        v = _eval(node.operand, consts)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        a, b = _eval(node.left, consts), _eval(node.right, consts)
        if isinstance(node.op, ast.Div) and b == 0:
            raise ModelError("division by zero in literal")
        if isinstance(a, Fraction) != isinstance(b, Fraction):
            a, b = (mpmath.mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else a,
                    mpmath.mpf(b.numerator) / b.denominator if isinstance(b, Fraction) else b)
        return _BINOPS[type(node.op)](a, b)
    raise ModelError(f"unsupported syntax in literal: {ast.dump(node)[:60]}")


def parse_literal(value) -> Fraction | float:
    """Exact ``Fraction`` for rational literals, else a float rounded from 50 digits."""
    if isinstance(value, bool):
        raise ModelError("booleans are not numeric literals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # a decimal in the file is an exact rational
        return Fraction(repr(value))
    if not isinstance(value, str):
        raise ModelError(f"bad literal {value!r}")
    try:
        tree = ast.parse(value.strip(), mode="eval")
    except SyntaxError:
        raise ModelError(f"cannot parse literal {value!r}") from None
    with mpmath.workdps(DIGITS):
        out = _eval(tree, _constants())
        return out if isinstance(out, Fraction) else float(out)


# -- documents ------------------------------------------------------------------

@dataclass
class ModelFile:
    """Parsed, validated model file."""

    path: str
    data: dict
    model: MarkovModel
    potentials: dict = field(default_factory=dict)
    profiles: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.data.get("name", Path(self.path).stem)

    @property
    def content_hash(self) -> str:
        return canonical_hash(self.data)

    @property
    def experiments(self) -> dict:
        return self.data.get("experiments", {})

    def potential(self, name: str | None, default_zero: bool = False) -> Potential:
        if name in self.potentials:
            return self.potentials[name]
        if name in self.profiles:
            profile, roof = self.profiles[name]
            return psi_from_profile(profile, roof)
        if default_zero:
            return Potential.constant(self.model, 0, "zero")
        raise ModelError(f"no potential or profile named {name!r} in {self.path}")


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_hash(data) -> str:
    """sha256 of the key-sorted, whitespace-free JSON form."""
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()


def loads(text: str, path: str = "<string>") -> ModelFile:
    """Parse and validate a model file.

    Raises
    ------
    ModelError
        With line/column for syntax errors, the JSON path for schema errors,
        and the offending symbol or word for model errors.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    errors = sorted(jsonschema.Draft202012Validator(SCHEMA).iter_errors(data), key=lambda e: list(e.path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise ModelError(f"{path}: schema error at {where}: {err.message}")
    m = data["model"]
    try:
        model = MarkovModel(tuple(tuple(r) for r in m["transitions"]), m.get("alphabet"))
    except ModelError as exc:
        raise ModelError(f"{path}: {exc}") from None
    mf = ModelFile(path, data, model)
    for name, entry in data.get("potentials", {}).items():
        values = {}
        for key, lit in entry["values"].items():
            try:
                word = model.parse_word(key)
                values[word] = parse_literal(lit)
            except ModelError as exc:
                raise ModelError(f"{path}: potential {name!r}, word {key!r}: {exc}") from None
            if len(word) != entry["memory"]:
                raise ModelError(f"{path}: potential {name!r}: word {key!r} has length {len(word)}, "
                                 f"memory is {entry['memory']}")
        try:
            mf.potentials[name] = Potential(model, entry["memory"], values, name,
                                            positive=entry.get("positive", False))
        except ModelError as exc:
            raise ModelError(f"{path}: {exc}") from None
    for name, entry in data.get("profiles", {}).items():
        roof = RoofFunction(mf.potential(entry["roof"]))
        A = float(parse_literal(entry.get("A", 0)))
        ramp = RAMPS[entry.get("ramp", "smoothstep")]
        if entry["kind"] == "bump":
            if "target" not in entry:
                raise ModelError(f"{path}: bump profile {name!r} needs a target potential")
            profile = build_bump_observable(mf.potential(entry["target"]), roof, A, ramp)
        else:
            profile = OrbitProfile(entry["kind"], roof.memory, A=A, ramp=ramp)
        mf.profiles[name] = (profile, roof)
    return mf


def load(path) -> ModelFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ModelError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, str(path))


def corpus_dir() -> Path:
    return Path(__file__).parent / "corpus"


def corpus_paths(filter_text: str | None = None) -> list[Path]:
    paths = sorted(corpus_dir().glob("*.model"))
    if filter_text:
        paths = [p for p in paths if filter_text in p.stem]
    return paths


def resolve(path_or_name) -> Path:
    """A path, or the stem/filename of a bundled corpus model."""
    p = Path(path_or_name)
    if p.exists():
        return p
    for cand in (corpus_dir() / p.name, corpus_dir() / f"{p.name}.model"):
        if cand.exists():
            return cand
    return p
