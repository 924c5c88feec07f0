"""
Run Record

One solver run as emitted by `volsel solve` (JSON) and `volsel bench` (CSV row).
"""

import json
from dataclasses import asdict, dataclass, field

from volsel.constants import BENCH_SCHEMA_VERSION, RUN_RECORD_SCHEMA_VERSION

CSV_COLUMNS = (
    "file",
    "algorithm",
    "n",
    "d",
    "k",
    "eps",
    "value",
    "ratio",
    "size",
    "indices",
    "elapsed_ms",
    "seed",
    "guarantee",
    "fallback_events",
    "schema_version",
)


@dataclass
class RunRecord:
    algorithm: str
    n: int
    d: int
    k: int
    value: object
    indices: list = field(default_factory=list)
    eps: float | None = None
    elapsed_ms: float = 0.0
    seed: int | None = None
    guarantee: str = "none"
    fallback_events: int | None = None
    extra: dict = field(default_factory=dict)
    schema_version: int = RUN_RECORD_SCHEMA_VERSION

    @classmethod
    def from_solution(cls, solution, n: int, d: int, k: int, **kwargs) -> "RunRecord":
        return cls(
            algorithm=solution.algorithm,
            n=n,
            d=d,
            k=k,
            value=solution.value,
            indices=list(solution.indices),
            guarantee=solution.guarantee.label(),
            **kwargs,
        )

    def to_dict(self, include_timing: bool = True) -> dict:
        """
        Plain dict for JSON output

        Args:
            include_timing: drop elapsed_ms when False so reruns compare byte-identical
        """
        data = asdict(self)
        if not include_timing:
            data.pop("elapsed_ms")
        data.update(data.pop("extra"))
        return data

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True)

    def csv_row(self, file: str = "", ratio: float | None = None, include_timing: bool = True) -> dict:
        """Row for the benchmark table, keyed by CSV_COLUMNS"""
        return {
            "file": file,
            "algorithm": self.algorithm,
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "eps": "" if self.eps is None else self.eps,
            "value": self.value,
            "ratio": "" if ratio is None else f"{ratio:.6f}",
            "size": len(self.indices),
            "indices": " ".join(str(i) for i in self.indices),
            "elapsed_ms": f"{self.elapsed_ms:.3f}" if include_timing else "",
            "seed": "" if self.seed is None else self.seed,
            "guarantee": self.guarantee,
            "fallback_events": "" if self.fallback_events is None else self.fallback_events,
            "schema_version": BENCH_SCHEMA_VERSION,
        }
