"""Surface types (g, n) and the curve/pants counts of a pants decomposition."""

from __future__ import annotations

from dataclasses import dataclass


class SurfaceError(ValueError):
    """Raised for surface types that admit no pants decomposition."""


@dataclass(frozen=True, order=True)
class SurfaceType:
    """Connected compact orientable surface of genus ``genus`` with
    ``boundary_count`` boundary circles."""

    genus: int
    boundary_count: int

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count

    def to_json(self) -> dict:
        return {"g": self.genus, "n": self.boundary_count}

    @classmethod
    def from_json(cls, data: dict) -> "SurfaceType":
        return validate_surface(data["g"], data["n"])

    def __str__(self) -> str:
        return f"({self.genus},{self.boundary_count})"


def validate_surface(g: int, n: int) -> SurfaceType:
    """Return the surface type (g, n), rejecting types without pants decompositions.

    (0, 3) is accepted: its decomposition is the empty curve system.
    """
    if isinstance(g, bool) or isinstance(n, bool) or not isinstance(g, int) or not isinstance(n, int):
        raise SurfaceError(f"genus and boundary count must be integers, got {g!r}, {n!r}")
    if g < 0 or n < 0:
        raise SurfaceError(f"genus and boundary count must be non-negative, got ({g},{n})")
    if 2 * g - 2 + n < 1:
        raise SurfaceError(f"type ({g},{n}) has Euler characteristic {2 - 2 * g - n} > -1; no pants decomposition")
    return SurfaceType(g, n)


def curve_count(s: SurfaceType) -> int:
    """Number of circles in a maximal cut system, 3g - 3 + n."""
    return 3 * s.genus - 3 + s.boundary_count


def pants_count(s: SurfaceType) -> int:
    """Number of pairs of pants, 2g - 2 + n = |chi|."""
    return 2 * s.genus - 2 + s.boundary_count
