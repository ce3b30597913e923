"""Matrix yield stress as a function of the averaged hardening strain E."""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field


@dataclass(frozen=True)
class HardeningCurve:
    """Matrix hardening law.

    Either a piecewise-linear table of ``(E, sigma_bar)`` knots (canonical) or,
    when ``exponent`` is set, the power law ``sigma_y * (1 + E / eps0) ** n``.
    Tables are extrapolated flat past the last knot.
    """

    strains: tuple[float, ...] = (0.0,)
    stresses: tuple[float, ...] = (450.0,)
    exponent: float | None = None
    eps0: float = 1.0
    _slopes: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.exponent is not None:
            if len(self.stresses) != 1 or self.stresses[0] <= 0 or self.eps0 <= 0:
                raise ValueError("power law needs one positive sigma_y and eps0 > 0")
            if self.exponent < 0:
                raise ValueError("power-law exponent must be >= 0")
            object.__setattr__(self, "_slopes", ())
            return
        if len(self.strains) != len(self.stresses) or not self.strains:
            raise ValueError("hardening table needs matching, non-empty columns")
        if self.strains[0] != 0.0:
            raise ValueError("hardening table must start at E = 0")
        if any(b <= a for a, b in zip(self.strains, self.strains[1:])):
            raise ValueError("hardening strains must be strictly increasing")
        if self.stresses[0] <= 0 or any(b < a for a, b in zip(self.stresses, self.stresses[1:])):
            raise ValueError("hardening stresses must be positive and non-decreasing")
        slopes = tuple(
            (s1 - s0) / (e1 - e0)
            for e0, e1, s0, s1 in zip(self.strains, self.strains[1:], self.stresses, self.stresses[1:])
        )
        object.__setattr__(self, "_slopes", slopes)

    @classmethod
    def perfect(cls, sigma_y: float) -> HardeningCurve:
        return cls((0.0,), (float(sigma_y),))

    @classmethod
    def table(cls, pairs) -> HardeningCurve:
        pairs = [(float(e), float(s)) for e, s in pairs]
        return cls(tuple(e for e, _ in pairs), tuple(s for _, s in pairs))

    @classmethod
    def power_law(cls, sigma_y: float, eps0: float, n: float) -> HardeningCurve:
        return cls((0.0,), (float(sigma_y),), exponent=float(n), eps0=float(eps0))

    @property
    def is_power_law(self) -> bool:
        return self.exponent is not None

    def evaluate(self, e: float) -> tuple[float, float]:
        if e < 0:
            raise ValueError(f"hardening strain must be >= 0, got {e}")
        if self.exponent is not None:
            sy, n, e0 = self.stresses[0], self.exponent, self.eps0
            base = 1.0 + e / e0
            return sy * base**n, sy * n / e0 * base ** (n - 1.0)
        if len(self.strains) == 1 or e >= self.strains[-1]:
            return self.stresses[-1], 0.0
        # right-hand slope at knots
        k = bisect.bisect_right(self.strains, e) - 1
        return self.stresses[k] + self._slopes[k] * (e - self.strains[k]), self._slopes[k]

    def beyond_table(self, e: float) -> bool:
        return self.exponent is None and len(self.strains) > 1 and e > self.strains[-1]


def hardening_stress(e: float, curve: HardeningCurve) -> tuple[float, float]:
    """Return ``(sigma_bar, h)`` with ``h = d sigma_bar / dE``."""
    return curve.evaluate(e)
