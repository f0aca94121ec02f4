"""Published error tables, stored as text in ``data/table{1..6}.txt``.

Each data row is ``N e_1 p_1 e_2 p_2 ...`` with errors in two-digit
mantissa form (``0.89E-2``) and rates with two decimals; ``---`` marks the
missing rate of the last row.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .exceptions import ConfigError

__all__ = ["ReferenceEntry", "ReferenceTable", "load_reference", "paper_format", "rounds_to"]


@dataclass(frozen=True)
class ReferenceEntry:
    printed: str
    value: float
    rate: float | None


@dataclass(frozen=True)
class ReferenceTable:
    table_id: int
    title: str
    quantity: str          # "e_energy" or "e_superclose"
    eps2: float
    eps1_list: tuple[float, ...]
    n_list: tuple[int, ...]
    entries: dict          # (eps1, N) -> ReferenceEntry

    def entry(self, eps1: float, N: int) -> ReferenceEntry:
        return self.entries[(eps1, N)]

    @property
    def rate_target(self) -> float:
        return 1.0 if self.quantity == "e_energy" else 2.0


@lru_cache(maxsize=None)
def load_reference(table_id: int) -> ReferenceTable:
    if table_id not in range(1, 7):
        raise ConfigError(f"reference table id must be 1..6, got {table_id!r}")
    text = resources.files("bakhvalov_fem").joinpath(f"data/table{table_id}.txt").read_text()
    title, quantity, eps2, eps1_list = "", "", None, ()
    entries = {}
    n_list = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            title = line.lstrip("# ").strip()
            continue
        key, *rest = line.split()
        if key == "quantity":
            quantity = rest[0]
        elif key == "eps2":
            eps2 = float(rest[0])
        elif key == "eps1":
            eps1_list = tuple(float(v) for v in rest)
        else:
            N = int(key)
            n_list.append(N)
            for j, eps1 in enumerate(eps1_list):
                e, r = rest[2 * j], rest[2 * j + 1]
                entries[(eps1, N)] = ReferenceEntry(e, float(e), None if r == "---" else float(r))
    return ReferenceTable(table_id, title, quantity, eps2, eps1_list, tuple(n_list), entries)


def paper_format(x: float) -> str:
    """Two-digit mantissa notation, e.g. 8.93e-3 -> ``0.89E-2``."""
    if not (x > 0 and math.isfinite(x)):
        return "nan" if not math.isfinite(x) else "0.00E0"
    e = math.floor(math.log10(x)) + 1
    m = round(x / 10.0**e * 100)
    if m >= 100:
        m //= 10
        e += 1
    if m < 10:
        m *= 10
        e -= 1
    return f"0.{m:02d}E{e}"


def rounds_to(x: float, printed: str) -> bool:
    """True when ``x`` displays as ``printed`` in two-digit mantissa form."""
    return paper_format(x) == paper_format(float(printed))
