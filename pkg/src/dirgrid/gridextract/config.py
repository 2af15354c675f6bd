"""Pipeline multipliers and budgets, with a flat ``key = value`` file form."""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields

from ..errors import InvalidInput


@dataclass(frozen=True)
class PipelineConfig:
    """Multipliers are per unit of ``n``; the defaults are the proof's constants."""

    circuits_required: int = 120
    paths_required: int = 240
    cut_order: int = 7
    circuit_count: int = 13
    edge_excess: int = 83
    # a small cut's "big side" must keep this many circuits (per n)
    big_side: int = 110
    # size factor of the linked grid used by the closure construction
    closure_factor: int = 3
    search_budget: int = 2_000_000
    minor_budget: int = 200_000
    reroute_budget: int = 1_000_000

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                raise InvalidInput(f"config field {f.name} must be a positive integer, got {v!r}")

    def required(self, field: str, n: int) -> int:
        return getattr(self, field) * n

    def to_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in asdict(self).items())

    @classmethod
    def from_text(cls, text: str) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        vals: dict[str, int] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidInput(f"config line {lineno}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            k = k.replace("-", "_")
            if k not in known:
                raise InvalidInput(f"config line {lineno}: unknown key {k!r}")
            if k in vals:
                raise InvalidInput(f"config line {lineno}: duplicate key {k!r}")
            try:
                vals[k] = int(v)
            except ValueError:
                raise InvalidInput(f"config line {lineno}: {k} needs an integer") from None
        return cls(**vals)
