"""The 17 digital-strategy aspect labels and the 4-level maturity scale.

Aspect ids are fixed in the canonical reporting order (business value,
strategy management, digital technology) used for matrix columns and radar
series everywhere in the pipeline.
"""

from __future__ import annotations

from enum import IntEnum

BUSINESS_VALUE = (
    "digital_product",
    "digital_customer_experience",
    "digital_operations",
    "digital_business_model",
)

STRATEGY_MANAGEMENT = (
    "enablers",
    "practices",
)

DIGITAL_TECHNOLOGY = (
    "ai",
    "analytics",
    "iot",
    "blockchain",
    "cloud",
    "mobile",
    "social",
    "robotics",
    "ar",
    "vr",
    "printing_3d",
)

ASPECTS: tuple[str, ...] = BUSINESS_VALUE + STRATEGY_MANAGEMENT + DIGITAL_TECHNOLOGY

ASPECT_GROUPS: dict[str, str] = {
    **{a: "business_value" for a in BUSINESS_VALUE},
    **{a: "strategy_management" for a in STRATEGY_MANAGEMENT},
    **{a: "digital_technology" for a in DIGITAL_TECHNOLOGY},
}

assert len(ASPECTS) == 17


class Maturity(IntEnum):
    PLAN = 1
    PILOT = 2
    RELEASE = 3
    PIONEER = 4


# Key order for maturity score distributions on the prediction wire format.
MATURITY_KEYS = ("plan", "pilot", "release", "pioneer")

MATURITY_BY_KEY = {k: Maturity(i + 1) for i, k in enumerate(MATURITY_KEYS)}
