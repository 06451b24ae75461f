"""Phishing campaign model: more messages raise the odds of a foothold but
also the odds of being reported.

Messages are independent; a single report (human or machine) flags the whole
campaign. The n=0 campaign is the empty product: no infection, no alert.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import argmax_int
from .series import CurveSeries


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class PhishingParams:
    """Per-message click and alert probabilities for one campaign scenario."""

    p_click: float
    p_human_alert: float
    p_machine_alert: float

    def __post_init__(self):
        for name in ("p_click", "p_human_alert", "p_machine_alert"):
            _check_probability(name, getattr(self, name))

    @property
    def p_alert(self) -> float:
        """Per-message probability of being reported by human or machine
        (independent channels)."""
        return (
            self.p_human_alert
            + self.p_machine_alert
            - self.p_human_alert * self.p_machine_alert
        )


@dataclass(frozen=True)
class CampaignPoint:
    n_messages: int
    p_infection: float
    p_no_alert: float
    p_undetected: float

    def __post_init__(self):
        if self.n_messages < 0:
            raise ValueError("n_messages must be >= 0")
        _check_probability("p_infection", self.p_infection)
        _check_probability("p_no_alert", self.p_no_alert)
        _check_probability("p_undetected", self.p_undetected)
        if abs(self.p_undetected - self.p_infection * self.p_no_alert) > 1e-12:
            raise ValueError("p_undetected must equal p_infection * p_no_alert")


def p_infection(params: PhishingParams, n: int) -> float:
    """Probability of at least one click in an n-message campaign."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return 1.0 - (1.0 - params.p_click) ** n


def p_no_alert(params: PhishingParams, n: int) -> float:
    """Probability that none of the n messages is reported."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return (1.0 - params.p_alert) ** n


def p_undetected(params: PhishingParams, n: int) -> float:
    """Probability of at least one click with zero reports."""
    return p_infection(params, n) * p_no_alert(params, n)


def campaign_point(params: PhishingParams, n: int) -> CampaignPoint:
    inf = p_infection(params, n)
    noal = p_no_alert(params, n)
    return CampaignPoint(n, inf, noal, inf * noal)


def optimal_campaign(params: PhishingParams, n_max: int) -> CampaignPoint:
    """Campaign size in [1, n_max] maximizing the undetected-infection odds.

    Scans every size: the peak can be nearly flat (neighbouring sizes differ in
    the fifth digit), so hill-climbing with early stopping would be unsafe.
    Ties go to the smallest campaign.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    n, _ = argmax_int(lambda m: p_undetected(params, m), 1, n_max)
    return campaign_point(params, n)


def campaign_sweep(params: PhishingParams, n_max: int) -> CurveSeries:
    """Per-size campaign curve for n = 0..n_max."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    ns = np.arange(n_max + 1)
    inf = 1.0 - (1.0 - params.p_click) ** ns.astype(float)
    noal = (1.0 - params.p_alert) ** ns.astype(float)
    return CurveSeries(
        {"n": ns, "p_infection": inf, "p_no_alert": noal, "p_undetected": inf * noal},
        x_label="n",
        units="messages",
    )
