"""Line-oriented a_p cache.

Format::

    # n=3 b=-3888
    7,5
    13,2

Rows are sorted by p, unique, and every a_p obeys the Hasse bound.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .arithmetic import is_prime
from .serialize import atomic_write

_HEADER = re.compile(r"^# n=(\d+) b=(-?\d+)$")
_ROW = re.compile(r"^(\d+),(-?\d+)$")


class CacheError(ValueError):
    pass


@dataclass
class CacheFile:
    n: Optional[int] = None
    b: Optional[int] = None
    rows: list[tuple[int, int]] = field(default_factory=list)

    def as_dict(self) -> dict[int, int]:
        return dict(self.rows)


def _check_row(p: int, a: int) -> Optional[str]:
    if not is_prime(p):
        return f"{p} is not prime"
    if a * a > 4 * p:
        return f"a_{p} = {a} violates the Hasse bound"
    return None


def cache_store(path, n: int, rows: Iterable[tuple[int, int]]) -> CacheFile:
    rows = sorted(dict(rows).items())
    for p, a in rows:
        err = _check_row(p, a)
        if err:
            raise CacheError(err)
    b = -432 * n * n
    lines = [f"# n={n} b={b}"] + [f"{p},{a}" for p, a in rows]
    atomic_write(Path(path), "\n".join(lines) + "\n")
    return CacheFile(n, b, rows)


def cache_load(path) -> CacheFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CacheError(f"cannot read {path}: {exc}") from exc
    cache = CacheFile()
    last = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            m = _HEADER.match(line)
            if not m or lineno != 1:
                raise CacheError(f"{path}:{lineno}: malformed header {line!r}")
            cache.n, cache.b = int(m.group(1)), int(m.group(2))
            if cache.b != -432 * cache.n ** 2:
                raise CacheError(f"{path}:{lineno}: b does not match n")
            continue
        m = _ROW.match(line.strip())
        if not m:
            raise CacheError(f"{path}:{lineno}: malformed row {line!r}")
        p, a = int(m.group(1)), int(m.group(2))
        err = _check_row(p, a)
        if err:
            raise CacheError(f"{path}:{lineno}: {err}")
        if p <= last:
            raise CacheError(f"{path}:{lineno}: rows must be strictly ascending in p")
        last = p
        cache.rows.append((p, a))
    if cache.rows and cache.n is None:
        raise CacheError(f"{path}: rows present without a header")
    return cache
