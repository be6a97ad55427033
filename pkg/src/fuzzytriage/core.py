"""Grades, membership functions, finite fuzzy sets, and grade combinators.

Everything downstream (history inference, symptom designation, sign severity,
test-result normalization) is built from these four pieces. All values are
immutable after construction and every operation is a pure function, so the
whole module is safe to use concurrently without coordination.

A grade is a plain float in [0, 1]. Out-of-range or non-finite values are
rejected at construction time rather than clamped: silent clamping would mask
authoring errors in a knowledge base.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

COMBINATOR_KINDS = ("minimum", "maximum", "product", "weighted_mean")


def as_grade(value: object, what: str = "grade") -> float:
    """Validate and return ``value`` as a grade in [0, 1].

    Raises ValueError for non-numeric, non-finite, or out-of-range input.
    Booleans are rejected: a binary finding is an int 0/1, not True/False.
    """
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{what} must be a number, got {value!r}")
    g = float(value)
    if not math.isfinite(g):
        raise ValueError(f"{what} must be finite, got {value!r}")
    if g < 0.0 or g > 1.0:
        raise ValueError(f"{what} out of range [0, 1]: {value!r}")
    return g


@dataclass(frozen=True)
class MembershipFunction:
    """Continuous piecewise-linear map from a real input to a grade.

    ``breakpoints`` is a strictly increasing sequence of (input, grade) pairs.
    Left of the first breakpoint the function is flat at ``below`` and right
    of the last it is flat at ``above``; both default to the nearest
    breakpoint grade. Grades between breakpoints interpolate linearly, so the
    function is continuous inside the breakpoint range (the flat tails may
    introduce a step only if ``below``/``above`` are set away from the edge
    grades).
    """

    breakpoints: tuple[tuple[float, float], ...]
    below: float | None = None
    above: float | None = None

    def __post_init__(self):
        if not self.breakpoints:
            raise ValueError("membership function needs at least one breakpoint")
        pts = []
        prev_x = None
        for x, g in self.breakpoints:
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(float(x)):
                raise ValueError(f"breakpoint input must be a finite number, got {x!r}")
            x = float(x)
            if prev_x is not None and x <= prev_x:
                raise ValueError(f"breakpoint inputs must be strictly increasing (at {x!r})")
            prev_x = x
            pts.append((x, as_grade(g, "breakpoint grade")))
        object.__setattr__(self, "breakpoints", tuple(pts))
        for name in ("below", "above"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, as_grade(v, name))

    @property
    def below_grade(self) -> float:
        return self.below if self.below is not None else self.breakpoints[0][1]

    @property
    def above_grade(self) -> float:
        return self.above if self.above is not None else self.breakpoints[-1][1]

    def __call__(self, x: float) -> float:
        return eval_membership(self, x)


def eval_membership(mf: MembershipFunction, x: float) -> float:
    """Evaluate ``mf`` at ``x``; total over the reals, non-finite ``x`` is an error.

    At a breakpoint input the stored grade is returned exactly, with no
    interpolation round-off.
    """
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValueError(f"membership input must be a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"membership input must be finite, got {x!r}")
    pts = mf.breakpoints
    if x < pts[0][0]:
        return mf.below_grade
    if x > pts[-1][0]:
        return mf.above_grade
    # bisect_right - 1 lands on the breakpoint at or left of x
    i = bisect_right(pts, x, key=lambda p: p[0]) - 1
    x0, g0 = pts[i]
    if x == x0:
        return g0
    x1, g1 = pts[i + 1]
    t = (x - x0) / (x1 - x0)
    return g0 + t * (g1 - g0)


@dataclass(frozen=True)
class FuzzySet:
    """Finite fuzzy set: a grade for each member element of a named universe."""

    universe_id: str
    members: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self,
            "members",
            {e: as_grade(g, f"grade of {e!r}") for e, g in self.members.items()},
        )

    def grade(self, element: str) -> float:
        """Membership grade of ``element``; 0 for non-members."""
        return self.members.get(element, 0.0)


def alpha_cut(fs: FuzzySet, alpha: float) -> set[str]:
    """Crisp subset of elements whose grade meets or exceeds ``alpha``."""
    alpha = as_grade(alpha, "alpha")
    return {e for e, g in fs.members.items() if g >= alpha}


@dataclass(frozen=True)
class GradeCombinator:
    """Aggregates several grades into one.

    ``kind`` is one of minimum, maximum, product, weighted_mean. Only
    weighted_mean carries weights; they must be nonnegative with a positive
    sum, and their count must equal the grade count at combine time.
    """

    kind: str
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in COMBINATOR_KINDS:
            raise ValueError(f"unknown combinator kind {self.kind!r}")
        if self.kind == "weighted_mean":
            if not self.weights:
                raise ValueError("weighted_mean requires weights")
            ws = tuple(float(w) for w in self.weights)
            if any(not math.isfinite(w) or w < 0.0 for w in ws):
                raise ValueError("weighted_mean weights must be finite and nonnegative")
            if sum(ws) <= 0.0:
                raise ValueError("weighted_mean weights must sum to a positive value")
            object.__setattr__(self, "weights", ws)
        elif self.weights is not None:
            raise ValueError(f"{self.kind} combinator takes no weights")


MAXIMUM = GradeCombinator("maximum")


def combine(c: GradeCombinator, grades: list[float] | tuple[float, ...]) -> float:
    """Combine a nonempty list of grades per ``c``; result is again a grade."""
    if not grades:
        raise ValueError("cannot combine an empty list of grades")
    gs = [as_grade(g) for g in grades]
    if c.kind == "minimum":
        return min(gs)
    if c.kind == "maximum":
        return max(gs)
    if c.kind == "product":
        out = 1.0
        for g in gs:
            out *= g
        return out
    assert c.weights is not None
    if len(c.weights) != len(gs):
        raise ValueError(f"weighted_mean got {len(c.weights)} weights for {len(gs)} grades")
    total = sum(c.weights)
    return sum(w * g for w, g in zip(c.weights, gs)) / total
