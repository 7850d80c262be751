"""Run reports shared by the CLI: a plain record with JSON and text renderings."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .attractors import Attractor
from .model import format_state


@dataclass(frozen=True)
class AttractorEntry:
    kind: str
    period: int | None
    states: tuple[str, ...]

    @classmethod
    def of(cls, a: Attractor) -> AttractorEntry:
        return cls(a.kind, a.period, a.key)


@dataclass(frozen=True)
class RunReport:
    network: str
    genes: int
    mode: str
    engine: str
    attractors: tuple[AttractorEntry, ...] = ()
    unstable_cycles: tuple[tuple[str, ...], ...] = ()
    seconds: float = 0.0
    final_length: int | None = None
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.seconds < 0:
            raise ValueError("seconds must be non-negative")
        object.__setattr__(self, "seconds", round(float(self.seconds), 3))

    @classmethod
    def build(cls, network, genes, mode, engine, attractors, unstable_cycles=(),
              seconds=0.0, final_length=None, warnings=()) -> RunReport:
        """Report from engine values; attractors are sorted by (kind, key)."""
        ordered = sorted(attractors, key=Attractor.sort_key)
        cycles = tuple(tuple(format_state(x, genes) for x in c) for c in unstable_cycles)
        return cls(network, genes, str(mode), engine,
                   tuple(AttractorEntry.of(a) for a in ordered),
                   cycles, seconds, final_length, tuple(warnings))

    def to_dict(self) -> dict:
        d = asdict(self)
        del d["warnings"]
        d["attractors"] = [
            {"kind": a.kind, "period": a.period, "states": list(a.states)} for a in self.attractors
        ]
        d["unstable_cycles"] = [list(c) for c in self.unstable_cycles]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> RunReport:
        return cls(
            network=d["network"],
            genes=int(d["genes"]),
            mode=d["mode"],
            engine=d["engine"],
            attractors=tuple(
                AttractorEntry(a["kind"], a["period"], tuple(a["states"])) for a in d["attractors"]
            ),
            unstable_cycles=tuple(tuple(c) for c in d["unstable_cycles"]),
            seconds=d["seconds"],
            final_length=d["final_length"],
        )

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> RunReport:
        return cls.from_dict(json.loads(text))

    def to_text(self, show_unstable: bool = False) -> str:
        lines = [
            f"network: {self.network}",
            f"genes: {self.genes}",
            f"mode: {self.mode}",
            f"engine: {self.engine}",
            f"attractors: {len(self.attractors)}",
        ]
        for a in self.attractors:
            period = "-" if a.period is None else str(a.period)
            sep = " -> " if a.kind != "complex" else " "
            lines.append(f"  {a.kind:<13} period={period:<4} {sep.join(a.states)}")
        lines.append(f"unstable cycles: {len(self.unstable_cycles)}")
        if show_unstable:
            for c in self.unstable_cycles:
                lines.append(f"  {' -> '.join(c)}")
        if self.final_length is not None:
            lines.append(f"final length: {self.final_length}")
        lines.append(f"seconds: {self.seconds:.3f}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines) + "\n"


def parse_text_attractors(text: str) -> list[tuple[str, tuple[str, ...]]]:
    """(kind, states) pairs read back from :meth:`RunReport.to_text` output."""
    out = []
    body = False
    for line in text.splitlines():
        if line.startswith("attractors:"):
            body = True
            continue
        if body and line.startswith("  "):
            kind, _period, rest = line.split(None, 2)
            states = tuple(s for s in rest.replace("->", " ").split())
            out.append((kind, states))
        elif body:
            break
    return out
