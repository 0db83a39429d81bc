"""Problem-instance documents: one structured-text (JSON) format for every
CLI stage, schema-checked with unknown fields rejected, canonically hashed so
runs embed exactly what they resolved."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import numbers, signs
from .digit_sets import DigitSet, digit_set_from_document
from .growth import GrowthFunction, growth_from_document

INSTANCE_SCHEMA = "srcf-instance/1"

_TOP_FIELDS = {"schema", "sigma", "digit_set", "growth", "x", "digits", "alphabets", "params"}
_PARAM_FIELDS = {
    "depth", "seed", "tolerance", "epsilon", "delta", "epsilon_schedule",
    "delta_schedule", "horizon", "audit_depth", "precision_bits", "threads",
    "deterministic", "s", "mode", "depths", "solve", "point", "tau_method",
    "samples", "classify",
}


class InstanceError(ValueError):
    pass


@dataclass
class ProblemInstance:
    document: dict
    sigma: signs.SignSequence | None = None
    digit_set: DigitSet | None = None
    growth: GrowthFunction | None = None
    x: object | None = None
    digits: tuple[int, ...] | None = None
    alphabets: object | None = None
    params: dict = field(default_factory=dict)

    @property
    def instance_hash(self) -> str:
        canon = json.dumps(self.document, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()

    def require(self, *names: str) -> None:
        for name in names:
            if getattr(self, name) is None:
                raise InstanceError(f"instance is missing the required section {name!r}")

    def param(self, name: str, default=None):
        return self.params.get(name, default)

    def fraction_param(self, name: str, default=None):
        v = self.params.get(name, default)
        if v is None:
            return None
        return Fraction(str(v))


def parse_instance(doc: dict) -> ProblemInstance:
    if not isinstance(doc, dict):
        raise InstanceError("instance document must be a JSON object")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise InstanceError(f"unknown instance fields: {sorted(unknown)}")
    if doc.get("schema", INSTANCE_SCHEMA) != INSTANCE_SCHEMA:
        raise InstanceError(f"unsupported instance schema {doc.get('schema')!r}")
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise InstanceError("params must be an object")
    unknown = set(params) - _PARAM_FIELDS
    if unknown:
        raise InstanceError(f"unknown params fields: {sorted(unknown)}")

    inst = ProblemInstance(document=doc, params=dict(params))
    try:
        if "sigma" in doc:
            inst.sigma = signs.from_document(doc["sigma"])
        if "digit_set" in doc:
            inst.digit_set = digit_set_from_document(doc["digit_set"])
        if "growth" in doc:
            inst.growth = growth_from_document(doc["growth"])
        if "x" in doc:
            inst.x = numbers.from_document(doc["x"])
        if "digits" in doc:
            inst.digits = tuple(int(a) for a in doc["digits"])
        if "alphabets" in doc:
            inst.alphabets = doc["alphabets"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(str(exc)) from exc
    return inst


def load_instance(text: str) -> ProblemInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(
            f"instance parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_instance(doc)
