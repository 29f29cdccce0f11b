"""JSON run configuration."""
from __future__ import annotations

import json
from dataclasses import dataclass

from .interp import DEFAULT_STEP_LIMIT
from .maxtests import SEARCHES
from .measures import MeasureError, MeasureSpec


class ConfigError(ValueError):
    pass


_FIELDS = {"measures", "n", "time_limit_secs", "search", "seed", "step_limit", "array_merge_rw"}


@dataclass
class Config:
    measure: MeasureSpec
    n: int = 30
    time_limit_secs: float = 1800
    search: str = "progression"
    seed: int | None = None
    step_limit: int = DEFAULT_STEP_LIMIT

    @classmethod
    def from_dict(cls, doc) -> Config:
        if not isinstance(doc, dict):
            raise ConfigError("configuration must be a JSON object")
        unknown = sorted(set(doc) - _FIELDS)
        if unknown:
            raise ConfigError(f"unknown configuration field(s): {', '.join(unknown)}")
        raw = doc.get("measures", [{"name": "block", "weight": 1}])
        if not isinstance(raw, list):
            raise ConfigError("'measures' must be a list of {name, weight} objects")
        pairs = []
        for item in raw:
            if isinstance(item, str):
                pairs.append((item, 1))
                continue
            if not isinstance(item, dict) or set(item) - {"name", "weight"} or "name" not in item:
                raise ConfigError(f"bad measure entry {item!r}")
            pairs.append((item["name"], item.get("weight", 1)))
        try:
            spec = MeasureSpec.from_pairs(pairs, bool(doc.get("array_merge_rw", False)))
        except (MeasureError, ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from None

        n = doc.get("n", 30)
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ConfigError("'n' must be a positive integer")
        limit = doc.get("time_limit_secs", 1800)
        if not isinstance(limit, (int, float)) or isinstance(limit, bool) or limit <= 0:
            raise ConfigError("'time_limit_secs' must be a positive number")
        search = doc.get("search", "progression")
        if search not in SEARCHES:
            raise ConfigError(f"'search' must be one of {', '.join(SEARCHES)}")
        seed = doc.get("seed")
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
            raise ConfigError("'seed' must be an integer")
        step_limit = doc.get("step_limit")
        if step_limit is None:
            step_limit = DEFAULT_STEP_LIMIT
        elif not isinstance(step_limit, int) or isinstance(step_limit, bool) or step_limit < 1:
            raise ConfigError("'step_limit' must be a positive integer")
        return cls(spec, n, limit, search, seed, step_limit)

    @classmethod
    def load(cls, path) -> Config:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(doc)


def parse_measure_flags(flags) -> MeasureSpec:
    """``["block=1", "loop=0.5"]`` -> MeasureSpec."""
    pairs = []
    for flag in flags:
        name, _, weight = flag.partition("=")
        try:
            pairs.append((name.strip(), float(weight) if weight else 1))
        except ValueError:
            raise ConfigError(f"bad --measure value {flag!r}") from None
    try:
        return MeasureSpec.from_pairs(pairs)
    except MeasureError as exc:
        raise ConfigError(str(exc)) from None
