"""Intelligibility of fully connected feed-forward networks from layer counts.

A network with ``N_h`` hidden layers has one weight and one bias tensor per
hidden layer plus one of each for the output layer, none of which can be
combined, so ``N_E = 2 (N_h + 1)``.  Only metadata is analysed; no weights
are ever loaded or evaluated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import InvalidSpec
from .intelligibility import format_decimal

DEFAULT_ASYMPTOTIC_RATIO = 100


@dataclass(frozen=True)
class NetworkSpec:
    name: str
    hidden_layers: int
    io_variable_count: int
    notes: str = ""

    def check(self) -> "NetworkSpec":
        for field_name in ("hidden_layers", "io_variable_count"):
            value = getattr(self, field_name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidSpec(f"{field_name} must be an integer, got {value!r}")
        if self.hidden_layers < 1:
            raise InvalidSpec(f"hidden_layers must be >= 1, got {self.hidden_layers}")
        if self.io_variable_count < 1:
            raise InvalidSpec(f"io_variable_count must be >= 1, got {self.io_variable_count}")
        return self

    # counts under the names used by significantly_different()
    @property
    def n_e(self) -> int:
        return nn_empirical_constants(self)

    @property
    def n_o(self) -> int:
        return self.io_variable_count

    @classmethod
    def from_dict(cls, data) -> "NetworkSpec":
        if not isinstance(data, dict):
            raise InvalidSpec("network spec must be a JSON object")
        unknown = sorted(set(data) - {"name", "hidden_layers", "io_variable_count", "notes"})
        if unknown:
            raise InvalidSpec("unknown key(s): " + ", ".join(unknown))
        missing = [k for k in ("name", "hidden_layers", "io_variable_count") if k not in data]
        if missing:
            raise InvalidSpec("missing key(s): " + ", ".join(missing))
        if not isinstance(data["name"], str):
            raise InvalidSpec("name must be a string")
        return cls(data["name"], data["hidden_layers"], data["io_variable_count"],
                   str(data.get("notes", ""))).check()

    def to_dict(self) -> dict:
        return {"name": self.name, "hidden_layers": self.hidden_layers,
                "io_variable_count": self.io_variable_count, "notes": self.notes}


def load_network_spec(path) -> NetworkSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"not valid JSON: {exc}") from None
    return NetworkSpec.from_dict(data)


def nn_empirical_constants(spec: NetworkSpec) -> int:
    """``2 (N_h + 1)``; at least 4 for any valid spec."""
    spec.check()
    return 2 * (spec.hidden_layers + 1)


def nn_score(spec: NetworkSpec) -> Fraction:
    """Exact ``1 - 2 (N_h + 1) / N_O``."""
    return 1 - Fraction(nn_empirical_constants(spec), spec.io_variable_count)


@dataclass(frozen=True)
class AsymptoticScore:
    value: int          # -N_h
    applicable: bool    # N_h >> N_O, i.e. N_h >= ratio * N_O
    exact: Fraction


def nn_asymptotic_score(spec: NetworkSpec,
                        ratio: int = DEFAULT_ASYMPTOTIC_RATIO) -> AsymptoticScore:
    exact = nn_score(spec)
    applicable = spec.hidden_layers >= ratio * spec.io_variable_count
    return AsymptoticScore(-spec.hidden_layers, applicable, exact)


def network_report(spec: NetworkSpec, ratio: int = DEFAULT_ASYMPTOTIC_RATIO) -> dict:
    """Serialisable summary used by the command line and the corpus."""
    asym = nn_asymptotic_score(spec, ratio)
    i = asym.exact
    return {
        "name": spec.name,
        "N_h": spec.hidden_layers,
        "N_O": spec.io_variable_count,
        "N_E": nn_empirical_constants(spec),
        "I": {"num": i.numerator, "den": i.denominator},
        "I_decimal": format_decimal(i),
        "asymptotic": {"value": asym.value, "applicable": asym.applicable},
    }
