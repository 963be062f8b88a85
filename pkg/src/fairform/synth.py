"""Seeded synthetic candidate pools.

Generates pools with controlled protected-group prevalences and a tunable
diversity/utility trade-off, so selection algorithms and evaluation metrics
can be exercised end to end at desk scale without any real dataset.

Each scoring feature is drawn independently per candidate from its
prevalence, the geographic one included, so prevalence 0 or 1 pins the
diversity score regardless of the other knobs. Geography is then realized
so the intended flag survives the ingestion pipeline: a protected candidate
becomes a US EPSCoR resident with probability ``epscor_fraction_of_us`` and
otherwise gets a country whose GDP sits below the bundled sample table's
mean; an unprotected candidate becomes a US non-EPSCoR resident with
probability ``us_fraction`` and otherwise gets a country at or above that
mean. University ranks use two fixed values (one per side), so a fixed rank
cutoff between them (600 works) recovers the intended flags exactly; the
pool-mean cutoff recovers them too whenever the pool mixes both ranks.

``utility_penalty`` subtracts its value from a candidate's h-index once per
protected flag, building the diversity/utility trade-off into the data by
construction.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Union

from .errors import ConfigError
from .ingestion import PoolFile
from .profiles import SCORING_FEATURES, RawCandidate

#: Country codes aligned with the bundled GDP sample table: every developed
#: code sits at or above that table's mean, every developing code below it.
DEVELOPED_COUNTRIES = ("JP", "DE", "GB", "FR", "CA", "KR")
DEVELOPING_COUNTRIES = ("BD", "KE", "GH", "NP", "LK", "UG", "TZ", "BO", "PY", "AM")

#: State codes aligned with the bundled EPSCoR list.
EPSCOR_STATES = ("AR", "KS", "MS", "NV", "OK", "RI", "SC", "VT", "WV", "ME")
NON_EPSCOR_STATES = ("CA", "NY", "MA", "WA", "TX", "IL", "MD", "PA", "MI", "GA")

#: Fixed rank realizations; any cutoff strictly between them recovers flags.
RANK_PROTECTED = 1200
RANK_UNPROTECTED = 100


@dataclass(frozen=True)
class HIndexModel:
    """Distribution the raw (pre-penalty) h-index is drawn from."""

    family: str = "gamma"
    parameters: Mapping[str, object] = field(
        default_factory=lambda: {"shape": 2.0, "scale": 10.0}
    )

    def __post_init__(self) -> None:
        p = self.parameters
        if self.family == "gamma":
            if float(p.get("shape", 0)) <= 0 or float(p.get("scale", 0)) <= 0:
                raise ConfigError("gamma h-index model needs positive shape and scale")
        elif self.family == "uniform":
            low, high = float(p.get("low", -1)), float(p.get("high", -1))
            if low < 0 or high < low:
                raise ConfigError("uniform h-index model needs 0 <= low <= high")
        elif self.family == "empirical":
            values = p.get("values")
            if not isinstance(values, (list, tuple)) or not values:
                raise ConfigError("empirical h-index model needs a non-empty values list")
            if any((not isinstance(v, (int, float))) or v < 0 for v in values):
                raise ConfigError("empirical h-index values must be non-negative numbers")
        else:
            raise ConfigError(f"unknown h-index distribution family {self.family!r}")

    def draw(self, rng: random.Random) -> float:
        p = self.parameters
        if self.family == "gamma":
            return rng.gammavariate(float(p["shape"]), float(p["scale"]))
        if self.family == "uniform":
            return rng.uniform(float(p["low"]), float(p["high"]))
        return float(rng.choice(list(p["values"])))  # type: ignore[arg-type]


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one synthetic pool.

    ``prevalence`` gives the per-feature protection probability and is
    authoritative for all five flags. The two residence knobs only shape how
    the geographic flag is realized: ``epscor_fraction_of_us`` is the share
    of protected candidates placed in US EPSCoR states (the rest get
    developing countries), ``us_fraction`` the share of unprotected
    candidates placed in US non-EPSCoR states (the rest get developed
    countries).
    """

    pool_size: int
    prevalence: Mapping[str, float]
    us_fraction: float = 0.5
    epscor_fraction_of_us: float = 0.25
    h_index_distribution: HIndexModel = HIndexModel()
    utility_penalty: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.pool_size < 1:
            raise ConfigError(f"pool_size must be >= 1, got {self.pool_size}")
        missing = set(SCORING_FEATURES) - set(self.prevalence)
        if missing:
            raise ConfigError(f"prevalence missing features: {', '.join(sorted(missing))}")
        extra = set(self.prevalence) - set(SCORING_FEATURES)
        if extra:
            raise ConfigError(f"prevalence has unknown features: {', '.join(sorted(extra))}")
        for name, p in self.prevalence.items():
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"prevalence[{name!r}] = {p} outside [0, 1]")
        for name, p in (("us_fraction", self.us_fraction),
                        ("epscor_fraction_of_us", self.epscor_fraction_of_us)):
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name} = {p} outside [0, 1]")
        if self.utility_penalty < 0:
            raise ConfigError("utility_penalty must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_dict(cls, payload: Mapping) -> "SynthSpec":
        allowed = {
            "pool_size", "prevalence", "us_fraction", "epscor_fraction_of_us",
            "h_index_distribution", "utility_penalty", "seed",
        }
        unknown = set(payload) - allowed
        if unknown:
            raise ConfigError(f"unknown synth spec keys: {', '.join(sorted(unknown))}")
        for key in ("pool_size", "prevalence"):
            if key not in payload:
                raise ConfigError(f"synth spec missing required key {key!r}")
        kwargs = dict(payload)
        dist = kwargs.pop("h_index_distribution", None)
        if dist is not None:
            if not isinstance(dist, Mapping) or "family" not in dist:
                raise ConfigError("h_index_distribution needs a 'family' key")
            params = {k: v for k, v in dist.items() if k != "family"}
            kwargs["h_index_distribution"] = HIndexModel(dist["family"], params)
        return cls(**kwargs)


def load_synth_spec(path: Union[str, Path]) -> SynthSpec:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if not isinstance(payload, Mapping):
        raise ConfigError(f"{Path(path).name}: expected a JSON object")
    return SynthSpec.from_dict(payload)


def generate_pool(spec: SynthSpec) -> PoolFile:
    """Generate a pool per the spec; identical specs give identical pools.

    Every emitted candidate is eligible by construction (scholar profile,
    academia, no missing values), so the exclusion pass retains all rows.
    """
    rng = random.Random(spec.seed)
    width = max(5, len(str(spec.pool_size)))
    records = []
    for i in range(1, spec.pool_size + 1):
        female = rng.random() < spec.prevalence["female"]
        non_white = rng.random() < spec.prevalence["non_white"]
        geo = rng.random() < spec.prevalence["geo_protected"]
        low_rank = rng.random() < spec.prevalence["low_rank_university"]
        junior = rng.random() < spec.prevalence["junior"]
        us = rng.random() < (spec.epscor_fraction_of_us if geo else spec.us_fraction)
        if us:
            country = "US"
            state = rng.choice(EPSCOR_STATES if geo else NON_EPSCOR_STATES)
        else:
            country = rng.choice(DEVELOPING_COUNTRIES if geo else DEVELOPED_COUNTRIES)
            state = None

        protected_count = female + non_white + geo + low_rank + junior
        h_raw = spec.h_index_distribution.draw(rng)
        h = max(0.0, h_raw - spec.utility_penalty * protected_count)

        records.append(
            RawCandidate(
                id=f"syn-{i:0{width}d}",
                gender="female" if female else "male",
                ethnicity="non_white" if non_white else "white",
                country=country,
                us_state=state,
                university_rank=RANK_PROTECTED if low_rank else RANK_UNPROTECTED,
                career_stage="junior" if junior else "senior",
                h_index=round(h),
                has_scholar_profile=True,
                sector="academia",
            )
        )
    return PoolFile(format="synth", records=records, source="synth")
