from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import integrate

from fpme_lab.errors import InvalidArgumentError

__all__ = ["PROFILE_KINDS", "ProfileSpec", "profile_integral"]

PROFILE_KINDS = ("constant", "bump", "step")


@dataclass(frozen=True)
class ProfileSpec:
    """
    Initial density profile g on the torus [0, torus_length).

    ProfileSpec(kind, background=b, center=c, width=w, height=h,
                left_value=l, right_value=r)

    constant  g = b
    bump      g = b + h exp(1 - 1 / (1 - r^2)) for r = (u - c) / w in (-1, 1)
    step      g = left_value on [c - w, c), right_value on [c, c + w)
    All kinds equal b outside [c - w, c + w].
    """

    kind: str = "bump"
    background: float = 0.3
    center: float = 1.0
    width: float = 0.25
    height: float = 0.4
    left_value: float = 0.7
    right_value: float = 0.3

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise InvalidArgumentError(f"unknown profile kind '{self.kind}'")
        if self.width <= 0:
            raise InvalidArgumentError(f"width must be positive, got {self.width}")

        levels = [self.background]
        if self.kind == "bump":
            levels.append(self.background + self.height)
        elif self.kind == "step":
            levels += [self.left_value, self.right_value]

        if not all(0.0 <= level <= 1.0 for level in levels):
            raise InvalidArgumentError(f"profile values {levels} leave [0, 1]")

    @classmethod
    def constant(cls, b: float) -> "ProfileSpec":
        return cls("constant", background=b)

    @property
    def support(self) -> Tuple[float, float]:
        return self.center - self.width, self.center + self.width

    def check_torus(self, torus_length: float) -> None:
        low, high = self.support
        if self.kind != "constant" and not (0.0 < low and high < torus_length):
            raise InvalidArgumentError(
                f"profile support [{low}, {high}] must lie inside (0, {torus_length})"
            )

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        if self.kind == "step":
            low, high = self.support
            return low, self.center, high
        return ()

    def density(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        b = self.background

        if self.kind == "constant":
            return np.full(u.shape, b)[()]

        r = (u - self.center) / self.width
        inside = np.abs(r) < 1.0

        if self.kind == "bump":
            safe = np.where(inside, r, 0.0)
            bump = np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe * safe)), 0.0)
            return (b + self.height * bump)[()]

        return np.where(
            inside, np.where(r < 0.0, self.left_value, self.right_value), b
        )[()]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "background": self.background,
            "center": self.center,
            "width": self.width,
            "height": self.height,
            "left_value": self.left_value,
            "right_value": self.right_value,
        }


def profile_integral(weight, profile: ProfileSpec, torus_length: float) -> float:
    """int_0^torus_length weight(u) g(u) du by adaptive quadrature."""
    low, high = 0.0, torus_length
    points = [p for p in profile.breakpoints if low < p < high]
    if profile.kind == "bump":
        points += [p for p in profile.support if low < p < high]

    value, _ = integrate.quad(
        lambda u: float(weight(u)) * float(profile.density(u)),
        low,
        high,
        points=sorted(points) or None,
        limit=400,
        epsabs=1e-12,
    )
    return value
