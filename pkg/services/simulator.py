# simulator.py
# Seeded generators for the five benchmark scenarios
"""
Every scenario splits {1..T} into three equal segments A1, A2, A3; A2 carries
the alternative distribution, so the true change points are T/3 + 1 and
2T/3 + 1. Observation t draws from its own stream keyed by
(scenario, segment, t).

Scenario 5 substitutes two densities with equal mean 1/2 and variance 1/12
that differ only in shape:
    g1 = Uniform(0, 1)
    g2 = 1/2 + sqrt(2/3) * (B - 1/2),  B ~ Beta(1/2, 1/2)
Beta(1/2, 1/2) has mean 1/2 and variance 1/8, so the rescaled variable keeps
mean 1/2 and has variance (2/3) * (1/8) = 1/12. g2 is the bimodal arcsine
law on [1/2 - sqrt(1/6), 1/2 + sqrt(1/6)].
"""

import math
from typing import Tuple

import numpy as np

from core.errors import BadDimension, BadLength
from core.models import ChangePointSet, Sample, ScenarioTruth, validate_sample
from services.random_streams import stream

SCENARIOS = (1, 2, 3, 4, 5)

_ARCSINE_SCALE = math.sqrt(2.0 / 3.0)


def mvn_sample(mean: np.ndarray, chol_lower: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """mean + L z, z standard normal"""
    mean = np.asarray(mean, dtype=np.float64)
    z = rng.standard_normal(mean.shape[0])
    return mean + np.asarray(chol_lower, dtype=np.float64) @ z


def mvt_sample(scale_chol: np.ndarray, df: float, rng: np.random.Generator) -> np.ndarray:
    """L z / sqrt(w / df), z standard normal, w chi-square(df)"""
    if not df > 0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    scale_chol = np.asarray(scale_chol, dtype=np.float64)
    z = rng.standard_normal(scale_chol.shape[0])
    w = rng.chisquare(df)
    return scale_chol @ z / math.sqrt(w / df)


def true_change_points(T: int) -> ChangePointSet:
    return ChangePointSet((T // 3 + 1, 2 * T // 3 + 1))


def _segment(t: int, T: int) -> int:
    """1, 2 or 3 for the segment containing 1-based t"""
    third = T // 3
    if t <= third:
        return 1
    return 2 if t <= 2 * third else 3


def _check(scenario_id: int, T: int, p: int) -> None:
    if scenario_id not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario_id}; expected one of {SCENARIOS}")
    if T < 3 or T % 3 != 0:
        raise BadLength(f"T must be a positive multiple of 3, got {T}")
    if p < 2:
        raise BadDimension(f"scenarios need p >= 2, got {p}")
    if scenario_id == 1 and p % 2 != 0:
        raise BadDimension(f"scenario 1 needs an even p, got {p}")


def gen_scenario(scenario_id: int, T: int, p: int, seed: int) -> Tuple[Sample, ScenarioTruth]:
    """Simulated sample and its ground truth"""
    _check(scenario_id, T, p)

    identity = np.eye(p)
    zero = np.zeros(p)
    ones = np.ones(p)

    if scenario_id == 1:
        shift = np.where(np.arange(p) < p // 2, 1.0, 0.0)
    elif scenario_id == 2:
        shift = 0.1 * ones
    elif scenario_id == 3:
        correlated = np.linalg.cholesky(0.5 * identity + 0.5 * np.outer(ones, ones))
    elif scenario_id == 4:
        null_chol = math.sqrt(1.25) * identity

    data = np.empty((T, p))
    for t in range(1, T + 1):
        segment = _segment(t, T)
        alternative = segment == 2
        rng = stream(seed, "scenario", scenario_id, segment, t)

        if scenario_id == 1:
            data[t - 1] = mvn_sample(shift if alternative else zero, identity, rng)
        elif scenario_id == 2:
            noise = mvt_sample(identity, 3.0, rng) / math.sqrt(3.0)
            data[t - 1] = (shift if alternative else zero) + noise
        elif scenario_id == 3:
            data[t - 1] = mvn_sample(zero, correlated if alternative else identity, rng)
        elif scenario_id == 4:
            if alternative:
                sign = 1.0 if rng.random() < 0.5 else -1.0
                data[t - 1] = mvn_sample(sign * 0.5 * ones, identity, rng)
            else:
                data[t - 1] = mvn_sample(zero, null_chol, rng)
        else:
            row = rng.random(p)
            if alternative:
                row[2:] = 0.5 + _ARCSINE_SCALE * (rng.beta(0.5, 0.5, size=p - 2) - 0.5)
            data[t - 1] = row

    truth = ScenarioTruth(scenario_id=scenario_id, T=T, p=p,
                          true_points=true_change_points(T), seed=seed)
    return validate_sample(data), truth
