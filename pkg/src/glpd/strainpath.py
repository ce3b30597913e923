"""Strain paths for single material-point runs.

One increment per line::

    count  e11 e22 e33 e12 e13 e23  [18 gradient components]

``count`` repeats the increment.  Gradient components are ``G_ijk`` in
packed pair order (11, 22, 33, 12, 13, 23) with ``k = 1, 2, 3`` fastest.
Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class PathFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class StrainPath:
    segments: tuple  # (count, d_eps (6,), d_gradw (6, 3))

    def increments(self):
        for count, d_eps, d_gradw in self.segments:
            for _ in range(count):
                yield d_eps, d_gradw

    def __len__(self) -> int:
        return sum(c for c, _, _ in self.segments)


def parse_path(text: str) -> StrainPath:
    segments = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) not in (7, 25):
            raise PathFormatError(f"expected 7 or 25 fields, got {len(tok)}", n)
        try:
            count = int(tok[0])
            vals = [float(t) for t in tok[1:]]
        except ValueError as exc:
            raise PathFormatError(str(exc), n) from None
        if count < 1:
            raise PathFormatError("count must be positive", n)
        if not all(math.isfinite(v) for v in vals):
            raise PathFormatError("non-finite entry", n)
        d_eps = np.array(vals[:6])
        d_gradw = np.array(vals[6:]).reshape(6, 3) if len(vals) == 24 else np.zeros((6, 3))
        segments.append((count, d_eps, d_gradw))
    if not segments:
        raise PathFormatError("empty strain path")
    return StrainPath(tuple(segments))


def read_path(path) -> StrainPath:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise PathFormatError(f"cannot read strain path {path}: {exc}") from None
    return parse_path(text)
