"""Walks on the hypercubic lattice Z^d and the self-avoiding / bridge predicates.

A step is a pair ``(axis, sign)`` with ``0 <= axis < d`` and ``sign`` in
``{+1, -1}``. Walks start at the origin. The last coordinate (``axis == d - 1``)
is the height.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

Step = tuple[int, int]


def check_dimension(d: int) -> int:
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise ValueError(f"lattice dimension must be an integer >= 2, got {d!r}")
    return d


def step_from_code(code: int) -> Step:
    """Direction code ``2*axis`` is the positive step along ``axis``, ``2*axis + 1`` the negative one."""
    return (code // 2, 1 if code % 2 == 0 else -1)


def code_from_step(step: Step) -> int:
    axis, sign = step
    return 2 * axis + (0 if sign > 0 else 1)


@dataclass(frozen=True)
class Walk:
    d: int
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        check_dimension(self.d)
        steps = tuple((int(a), int(s)) for a, s in self.steps)
        for axis, sign in steps:
            if not 0 <= axis < self.d or sign not in (1, -1):
                raise ValueError(f"invalid step ({axis}, {sign}) for d={self.d}")
        object.__setattr__(self, "steps", steps)

    @classmethod
    def from_codes(cls, d: int, codes: Sequence[int]) -> Walk:
        return cls(d, tuple(step_from_code(int(c)) for c in codes))

    def __len__(self) -> int:
        return len(self.steps)

    def vertices(self) -> Iterator[tuple[int, ...]]:
        v = [0] * self.d
        yield tuple(v)
        for axis, sign in self.steps:
            v[axis] += sign
            yield tuple(v)

    def heights(self) -> list[int]:
        return [v[-1] for v in self.vertices()]


@dataclass(frozen=True)
class WalkClass:
    is_saw: bool
    is_bridge: bool
    end_height: int
    max_height: int
    min_height: int


def is_self_avoiding(walk: Walk) -> bool:
    seen = set()
    for v in walk.vertices():
        if v in seen:
            return False
        seen.add(v)
    return True


def classify(walk: Walk) -> WalkClass:
    """Classify ``walk``.

    A bridge is a self-avoiding walk whose height is strictly larger than the
    starting height at every later vertex, and whose final height equals the
    maximum height. The empty walk counts as a bridge of height 0.
    """
    saw = is_self_avoiding(walk)
    hs = walk.heights()
    end, top, bottom = hs[-1], max(hs), min(hs)
    bridge = saw and all(h > hs[0] for h in hs[1:]) and end == top
    return WalkClass(is_saw=saw, is_bridge=bridge, end_height=end,
                     max_height=top, min_height=bottom)
