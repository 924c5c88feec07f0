"""
Volsel Settings - Single record

Process-wide limits and policies for every solver and generator.
Resolved once by volsel.config.get_settings() from the defaults below,
overridden by VOLSEL_<FIELD> environment variables.
"""

from dataclasses import dataclass, fields, replace

from volsel.constants import (
    BRUTE_FORCE_BUDGET,
    DP_CELL_BUDGET,
    EPTAS_CELL_CAP,
    EPTAS_EPS_DIVISOR,
    ERR_SETTING,
    FALLBACK_ERROR,
    FALLBACK_POLICIES,
    INCLUSION_EXCLUSION_LIMIT,
    MAX_HARDNESS_M,
    MONTE_CARLO_CONSTANT,
    REDUCTION_BUDGET,
    SUBSET_TABLE_LIMIT,
)
from volsel.exceptions import InvalidParameterError


@dataclass(frozen=True)
class VolselSettings:
    ie_limit: int = INCLUSION_EXCLUSION_LIMIT
    brute_budget: int = BRUTE_FORCE_BUDGET
    subset_table_limit: int = SUBSET_TABLE_LIMIT
    mc_constant: float = MONTE_CARLO_CONSTANT
    cell_cap: int = EPTAS_CELL_CAP
    fallback: str = FALLBACK_ERROR
    eps_divisor: int = EPTAS_EPS_DIVISOR
    dp_cell_budget: int = DP_CELL_BUDGET
    reduction_budget: int = REDUCTION_BUDGET
    max_hardness_m: int = MAX_HARDNESS_M

    def __post_init__(self):
        self.validate()

    def validate(self):
        """Validate settings"""
        for name in ("ie_limit", "brute_budget", "subset_table_limit", "cell_cap",
                     "eps_divisor", "dp_cell_budget", "reduction_budget"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise InvalidParameterError(
                    ERR_SETTING.format(name=name, value=value, reason="must be a positive integer")
                )

        if self.subset_table_limit > 30:
            raise InvalidParameterError(
                ERR_SETTING.format(name="subset_table_limit", value=self.subset_table_limit,
                                   reason="tables beyond 2^30 entries do not fit in memory")
            )

        if not self.mc_constant > 0:
            raise InvalidParameterError(
                ERR_SETTING.format(name="mc_constant", value=self.mc_constant, reason="must be positive")
            )

        if self.fallback not in FALLBACK_POLICIES:
            raise InvalidParameterError(
                ERR_SETTING.format(name="fallback", value=self.fallback,
                                   reason=f"use one of {', '.join(FALLBACK_POLICIES)}")
            )

        if self.max_hardness_m < 3:
            raise InvalidParameterError(
                ERR_SETTING.format(name="max_hardness_m", value=self.max_hardness_m, reason="must be at least 3")
            )

    def replace(self, **changes) -> "VolselSettings":
        """Return a validated copy with some fields changed"""
        return replace(self, **changes)

    @classmethod
    def field_types(cls) -> dict:
        return {f.name: f.type for f in fields(cls)}
