"""
Solution

Result of a VolSel query: the selected original indices, the achieved
volume, the algorithm that produced it and what it guarantees.
"""

from dataclasses import dataclass, field

from volsel.constants import (
    GREEDY_FACTOR,
    GUARANTEE_EPTAS,
    GUARANTEE_EXACT,
    GUARANTEE_FACTOR,
    GUARANTEE_NONE,
)


@dataclass(frozen=True)
class Guarantee:
    kind: str = GUARANTEE_NONE
    value: float | None = None

    @classmethod
    def none(cls) -> "Guarantee":
        return cls(GUARANTEE_NONE)

    @classmethod
    def exact(cls) -> "Guarantee":
        return cls(GUARANTEE_EXACT)

    @classmethod
    def factor(cls, gamma: float = GREEDY_FACTOR) -> "Guarantee":
        return cls(GUARANTEE_FACTOR, gamma)

    @classmethod
    def eptas(cls, eps: float) -> "Guarantee":
        return cls(GUARANTEE_EPTAS, eps)

    def label(self) -> str:
        """Tag as printed in run records, e.g. factor(0.632121) or eptas(0.5)"""
        if self.value is None:
            return self.kind
        return f"{self.kind}({self.value:g})"


@dataclass(frozen=True)
class Solution:
    indices: tuple
    value: object
    algorithm: str
    guarantee: Guarantee = field(default_factory=Guarantee.none)

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(self.indices)))

    @property
    def size(self) -> int:
        return len(self.indices)

    def to_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "value": self.value,
            "algorithm": self.algorithm,
            "guarantee": self.guarantee.label(),
        }
