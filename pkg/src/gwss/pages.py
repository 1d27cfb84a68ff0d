"""Bigraded pages and their JSON form.

Entries are keyed by (s, t) and plotted at bidegree (-s, t).  For field
coefficients an entry is a dimension; over Z or Z_(p) it is an AbelianGroup.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

from .abelian import AbelianGroup
from .fields import Ring


@dataclass
class BigradedPage:
    ring: Ring
    page: int
    d: int
    s_max: int
    t_max: int
    entries: dict[tuple[int, int], AbelianGroup] = field(default_factory=dict)
    # per-entry annotations, e.g. {"torsion_free": True} or {"edge_incomplete": True}
    flags: dict[tuple[int, int], dict] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.page < 1:
            raise ValueError("page number must be >= 1")

    def in_region(self, s: int, t: int) -> bool:
        return 0 <= s <= self.s_max and 0 <= t <= self.t_max

    def set(self, s: int, t: int, value: AbelianGroup | int, **flags) -> None:
        if not self.in_region(s, t):
            raise KeyError(f"({s}, {t}) outside region s<={self.s_max}, t<={self.t_max}")
        if isinstance(value, int):
            value = AbelianGroup(value)
        self.entries[(s, t)] = value
        if flags:
            self.flags.setdefault((s, t), {}).update(flags)

    def __getitem__(self, key: tuple[int, int]) -> AbelianGroup:
        s, t = key
        if not self.in_region(s, t):
            raise KeyError(key)
        return self.entries.get(key, AbelianGroup())

    def dim(self, s: int, t: int) -> int:
        return self[s, t].free_rank

    def nonzero(self) -> Iterator[tuple[tuple[int, int], AbelianGroup]]:
        for key in sorted(self.entries):
            if not self.entries[key].is_trivial:
                yield key, self.entries[key]

    def is_zero(self) -> bool:
        return not any(True for _ in self.nonzero())

    def to_json(self) -> dict:
        rows = []
        for s in range(self.s_max + 1):
            for t in range(self.t_max + 1):
                g = self.entries.get((s, t))
                if g is None:
                    continue
                row = {"s": s, "t": t, "rank": g.free_rank, "torsion": list(g.torsion)}
                row.update(self.flags.get((s, t), {}))
                rows.append(row)
        out = {"ring": str(self.ring), "page": self.page, "d": self.d,
               "s_max": self.s_max, "t_max": self.t_max, "entries": rows}
        out.update(self.meta)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, obj: dict) -> "BigradedPage":
        page = cls(Ring.parse(obj["ring"]), obj["page"], obj["d"], obj["s_max"], obj["t_max"])
        reserved = {"s", "t", "rank", "torsion"}
        for row in obj["entries"]:
            flags = {k: v for k, v in row.items() if k not in reserved}
            page.set(row["s"], row["t"], AbelianGroup(row["rank"], tuple(row["torsion"])), **flags)
        known = {"ring", "page", "d", "s_max", "t_max", "entries"}
        page.meta = {k: v for k, v in obj.items() if k not in known}
        return page

    def table(self, second_index: str = "t") -> str:
        """Aligned text table: one row per second index (top = largest), one column per s.

        "." marks a bidegree outside the computed support, "0" a computed zero.
        """
        cols = list(range(self.s_max + 1))
        header = [f"{second_index}\\s"] + [str(-s) for s in cols]
        body = []
        for t in range(self.t_max, -1, -1):
            row = [str(t)]
            for s in cols:
                g = self.entries.get((s, t))
                if g is None:
                    row.append(".")
                elif g.is_trivial:
                    row.append("0")
                else:
                    row.append(str(g.free_rank) if self.ring.is_field else str(g))
            body.append(row)
        widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
        fmt = lambda r: "  ".join(x.rjust(w) for x, w in zip(r, widths))
        return "\n".join([fmt(header)] + [fmt(r) for r in body]) + "\n"
