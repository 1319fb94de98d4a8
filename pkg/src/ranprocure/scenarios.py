"""Procurement scenarios and the strategy each player takes in them."""

from __future__ import annotations

from enum import Enum


class Scenario(str, Enum):
    TRADITIONAL = "traditional"
    PREDATORY = "predatory"
    DIRECT_OEM = "direct_oem"

    @property
    def short(self) -> str:
        return {"traditional": "s1", "predatory": "s2", "direct_oem": "s3"}[self.value]

    @property
    def has_nis(self) -> bool:
        return self is not Scenario.DIRECT_OEM

    @property
    def architecture(self) -> str:
        return "ORAN" if self is Scenario.DIRECT_OEM else "MRAN"

    @classmethod
    def parse(cls, value: "str | Scenario") -> "Scenario":
        if isinstance(value, Scenario):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {
            "s1": cls.TRADITIONAL,
            "s2": cls.PREDATORY,
            "s3": cls.DIRECT_OEM,
            "directoem": cls.DIRECT_OEM,
            "oran": cls.DIRECT_OEM,
        }
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown scenario {value!r}") from None


STRATEGIES = {
    Scenario.TRADITIONAL: {
        "OEM": "Continue with MRAN",
        "NIS": "Traditional pricing to MRAN",
        "MNO": "Continue using MRAN",
    },
    Scenario.PREDATORY: {
        "OEM": "Continue with MRAN",
        "NIS": "Predatory pricing to counter ORAN and offer MRAN",
        "MNO": "Demand ORAN but take predatory-priced MRAN",
    },
    Scenario.DIRECT_OEM: {
        "OEM": "Invest in manufacturing ORAN compliant components",
        "MNO": "Switch to ORAN",
    },
}

ALL_SCENARIOS = (Scenario.TRADITIONAL, Scenario.PREDATORY, Scenario.DIRECT_OEM)
