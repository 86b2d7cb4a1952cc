"""Analysis configuration, the aggregated index report, and the one-call
runner that fills it.

Reports are plain nested dictionaries wrapped in a small dataclass so they
serialize to JSON byte-identically across runs: no wall-clock fields are
written unless explicitly requested by the caller.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy

from . import __version__
from .errors import BayesIndicesError, InvalidArgumentError
from .indices import (
    ALL_SCALES,
    Rope,
    categorize_bf,
    fbst_evalue,
    map_p_value,
    posterior_median,
    probability_of_direction,
    rope_decision,
    rope_mass,
    savage_dickey_bf,
)
from .posterior import DensityGrid, ReferenceFunction, grid_mean, map_estimate
from .ttest import ALTERNATIVES, PRIOR_PRESETS, TWO_SIDED, Hypotheses


@dataclass(frozen=True)
class Thresholds:
    """Decision cutoffs; purely conventional and always overridable."""

    pd: float = 0.95
    p_map: float = 0.05
    ev: float = 0.95

    def __post_init__(self):
        for name in ("pd", "p_map", "ev"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise InvalidArgumentError(f"threshold {name} must lie in (0, 1)")


@dataclass(frozen=True)
class AnalysisConfig:
    """Everything one analysis run depends on besides the data."""

    prior_scale: float | None = None
    prior_preset: str | None = None
    rope: Rope = field(default_factory=Rope)
    hpd_mass: float = 0.95
    null_value: float = 0.0
    alternative: str = TWO_SIDED
    grid_size: int = 4096
    thresholds: Thresholds = field(default_factory=Thresholds)
    seed: int | None = None

    def __post_init__(self):
        if self.prior_scale is not None and self.prior_preset is not None:
            raise InvalidArgumentError("prior_scale and prior_preset are mutually exclusive")
        if self.prior_preset is not None and self.prior_preset not in PRIOR_PRESETS:
            raise InvalidArgumentError(
                f"unknown prior preset {self.prior_preset!r}; "
                f"choose from {sorted(PRIOR_PRESETS)}"
            )
        if self.prior_scale is not None and not self.prior_scale > 0:
            raise InvalidArgumentError("prior_scale must be positive")
        if not 0.0 < self.hpd_mass < 1.0:
            raise InvalidArgumentError("hpd_mass must lie in (0, 1)")
        if self.alternative not in ALTERNATIVES:
            raise InvalidArgumentError(f"alternative must be one of {ALTERNATIVES}")
        if self.grid_size < 64:
            raise InvalidArgumentError("grid_size must be at least 64")
        if not math.isfinite(self.null_value):
            raise InvalidArgumentError("null_value must be finite")
        if not self.rope.contains(self.null_value):
            raise InvalidArgumentError("ROPE must contain the null value")

    @property
    def scale(self) -> float:
        """Resolved Cauchy prior scale."""
        if self.prior_preset is not None:
            return PRIOR_PRESETS[self.prior_preset]
        if self.prior_scale is not None:
            return self.prior_scale
        return 1.0

    def hypotheses(self) -> Hypotheses:
        return Hypotheses(null_value=self.null_value, alternative=self.alternative)

    def to_dict(self) -> dict[str, Any]:
        """Round-trippable form: only one of prior_scale/prior_preset is set."""
        return {
            "prior_scale": None if self.prior_preset is not None else self.scale,
            "prior_preset": self.prior_preset,
            "rope": [self.rope.lower, self.rope.upper],
            "hpd_mass": self.hpd_mass,
            "null_value": self.null_value,
            "alternative": self.alternative,
            "grid_size": self.grid_size,
            "thresholds": {
                "pd": self.thresholds.pd,
                "p_map": self.thresholds.p_map,
                "ev": self.thresholds.ev,
            },
            "seed": self.seed,
        }

    def echo(self) -> dict[str, Any]:
        """Report form: the prior scale is always resolved to a number."""
        out = self.to_dict()
        out["prior_scale"] = self.scale
        return out

    _KEYS = (
        "prior_scale", "prior_preset", "rope", "hpd_mass", "null_value",
        "alternative", "grid_size", "thresholds", "seed",
    )

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "AnalysisConfig":
        unknown = set(raw) - set(cls._KEYS)
        if unknown:
            raise InvalidArgumentError(
                f"unknown config key(s): {', '.join(sorted(unknown))}"
            )
        kwargs: dict[str, Any] = {k: v for k, v in raw.items() if k in cls._KEYS}
        if "rope" in kwargs and kwargs["rope"] is not None:
            lo, hi = kwargs["rope"]
            kwargs["rope"] = Rope(float(lo), float(hi))
        if "thresholds" in kwargs and kwargs["thresholds"] is not None:
            thr = kwargs["thresholds"]
            extra = set(thr) - {"pd", "p_map", "ev"}
            if extra:
                raise InvalidArgumentError(
                    f"unknown threshold key(s): {', '.join(sorted(extra))}"
                )
            kwargs["thresholds"] = Thresholds(**thr)
        return cls(**{k: v for k, v in kwargs.items() if v is not None or k in ("prior_scale", "prior_preset", "seed")})


def package_versions() -> dict[str, str]:
    return {
        "bayesindices": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def derive_verdicts(indices: dict[str, Any], thresholds: Thresholds, rope: Rope) -> dict[str, Any]:
    """Recompute every verdict from raw index values and thresholds.

    Kept as a standalone function so reports can be audited: rebuilding the
    verdict block from the indices block must reproduce it exactly.
    """
    verdicts: dict[str, Any] = {}
    hpd_lower = indices.get("hpd_lower")
    hpd_upper = indices.get("hpd_upper")
    if hpd_lower is None or hpd_upper is None:
        verdicts["rope"] = None
    elif hpd_upper < rope.lower or hpd_lower > rope.upper:
        verdicts["rope"] = "reject_null"
    elif rope.lower <= hpd_lower and hpd_upper <= rope.upper:
        verdicts["rope"] = "accept_null"
    else:
        verdicts["rope"] = "undecided"
    p_map = indices.get("p_map")
    verdicts["p_map_reject"] = None if p_map is None else bool(p_map < thresholds.p_map)
    pd = indices.get("pd")
    verdicts["pd_reject"] = None if pd is None else bool(pd >= thresholds.pd)
    for key in ("ev_against_flat", "ev_against_prior"):
        ev = indices.get(key)
        verdicts[f"{key}_reject"] = None if ev is None else bool(ev >= thresholds.ev)
    return verdicts


@dataclass
class IndexReport:
    """All computed indices, verdicts and provenance for one analysis."""

    config: dict[str, Any]
    indices: dict[str, Any]
    verdicts: dict[str, Any]
    diagnostics: dict[str, Any]
    errors: dict[str, str]
    versions: dict[str, str]
    data: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": self.config,
            "data": self.data,
            "indices": self.indices,
            "verdicts": self.verdicts,
            "diagnostics": self.diagnostics,
            "errors": self.errors,
            "versions": self.versions,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)

    def to_text(self) -> str:
        ind = self.indices
        lines = ["Bayesian posterior index report", "=" * 32]
        if self.data:
            d = self.data
            lines.append(
                f"data: n1={d['n1']} n2={d['n2']}  "
                f"mean1={d['mean1']:.4g} sd1={d['sd1']:.4g}  "
                f"mean2={d['mean2']:.4g} sd2={d['sd2']:.4g}"
            )
            lines.append(
                f"      t={d['t']:.4f} df={d['df']} n_eff={d['n_eff']:.4g} "
                f"cohen_d={d['cohen_d']:.4f}"
            )
        cfg = self.config
        scale = cfg.get("prior_scale")
        scale_txt = f"{scale:.6g}" if scale is not None else "n/a"
        lines.append(
            f"model: Cauchy prior scale {scale_txt}, "
            f"null at {cfg['null_value']:g}, {cfg['alternative']} alternative"
        )
        lines.append("")

        def fmt(key: str, digits: int = 4) -> str:
            v = ind.get(key)
            return "n/a" if v is None else f"{v:.{digits}f}"

        lines.append(f"posterior: mean {fmt('mean')}  median {fmt('median')}  "
                     f"MAP {fmt('map_location')}")
        lines.append(f"{int(cfg['hpd_mass'] * 100)}% HPD: "
                     f"[{fmt('hpd_lower')}, {fmt('hpd_upper')}]")
        lines.append("")
        lines.append("Bayes factor - how strongly should the data shift beliefs "
                     "between the hypotheses?")
        bf_a = ind.get("bf01_analytic")
        if bf_a is not None:
            lines.append(f"  bf01 = {bf_a:.4f} (predictive ratio), "
                         f"bf10 = {1 / bf_a:.4f}")
        lines.append(f"  bf01 = {fmt('bf01_savage_dickey')} (density ratio at the null)")
        for scale_name, cat in (ind.get("bf_labels") or {}).items():
            lines.append(f"    {scale_name}: {cat['label']} ({cat['direction']})")
        lines.append("ROPE - is the effect practically equivalent to the null?")
        lines.append(f"  verdict: {self.verdicts.get('rope')}   "
                     f"mass in ROPE: {fmt('rope_mass_total')}   "
                     f"share of HPD mass in ROPE: {fmt('rope_mass')}")
        lines.append("MAP-based p-value - how plausible is the null next to the "
                     "posterior mode?")
        lines.append(f"  p_map = {fmt('p_map')}  (reject below "
                     f"{cfg['thresholds']['p_map']:g}: {self.verdicts.get('p_map_reject')})")
        lines.append("Probability of direction - how certain is the sign of the effect?")
        lines.append(f"  pd = {fmt('pd')}  (reject at or above "
                     f"{cfg['thresholds']['pd']:g}: {self.verdicts.get('pd_reject')})")
        lines.append("Surprise-based e-value - how much evidence lies against the "
                     "point null?")
        lines.append(f"  ev_against (flat reference)  = {fmt('ev_against_flat')}  "
                     f"(reject at or above {cfg['thresholds']['ev']:g}: "
                     f"{self.verdicts.get('ev_against_flat_reject')})")
        lines.append(f"  ev_against (prior reference) = {fmt('ev_against_prior')}  "
                     f"(reject at or above {cfg['thresholds']['ev']:g}: "
                     f"{self.verdicts.get('ev_against_prior_reject')})")
        if self.errors:
            lines.append("")
            lines.append("per-index failures:")
            for name, msg in self.errors.items():
                lines.append(f"  {name}: {msg}")
        return "\n".join(lines) + "\n"


def run_all_indices(
    posterior: DensityGrid,
    prior: DensityGrid,
    hypotheses: Hypotheses,
    rope: Rope,
    hpd_mass: float = 0.95,
    thresholds: Thresholds | None = None,
    *,
    analytic_bf01: float | None = None,
    extra_diagnostics: dict[str, Any] | None = None,
) -> IndexReport:
    """Compute every index on a shared posterior/prior pair.

    Individual index failures are trapped and recorded under ``errors``
    while the remaining indices still run; the corresponding index fields
    are left as None.
    """
    if thresholds is None:
        thresholds = Thresholds()
    if not rope.contains(hypotheses.null_value):
        raise InvalidArgumentError("ROPE must contain the null value")
    null = hypotheses.null_value

    indices: dict[str, Any] = {}
    errors: dict[str, str] = {}

    def attempt(name: str, fn, *keys: str):
        try:
            return fn()
        except (BayesIndicesError, ZeroDivisionError) as exc:
            errors[name] = f"{type(exc).__name__}: {exc}"
            for key in keys or (name,):
                indices.setdefault(key, None)
            return None

    indices["bf01_analytic"] = analytic_bf01

    bf = attempt(
        "savage_dickey",
        lambda: savage_dickey_bf(posterior, prior, null),
        "bf01_savage_dickey", "bf10_savage_dickey", "bf_labels",
    )
    if bf is not None:
        indices["bf01_savage_dickey"] = bf
        indices["bf10_savage_dickey"] = 1.0 / bf
        indices["bf_labels"] = {
            scale.name: {"label": cat.label, "direction": cat.direction}
            for scale in ALL_SCALES
            for cat in (categorize_bf(bf, scale),)
        }

    decision = attempt(
        "rope",
        lambda: rope_decision(posterior, rope, hpd_mass),
        "hpd_lower", "hpd_upper", "rope_mass_total", "rope_mass",
    )
    if decision is not None:
        indices["hpd_lower"] = decision.hpd.lower
        indices["hpd_upper"] = decision.hpd.upper
        indices["rope_mass_total"] = decision.mass_in_rope
        indices["rope_mass"] = rope_mass(posterior, rope, hpd_mass, hpd=decision.hpd)

    peak = map_estimate(posterior)
    indices["map_location"] = peak.location
    indices["map_density"] = peak.density
    p_map = attempt("p_map", lambda: map_p_value(posterior, null), "p_map")
    if p_map is not None:
        indices["p_map"] = p_map

    indices["pd"] = probability_of_direction(posterior)
    median = posterior_median(posterior)
    indices["median"] = median
    indices["mean"] = grid_mean(posterior)
    indices["density_at_null"] = (
        float(posterior.density_at(null))
        if posterior.support[0] <= null <= posterior.support[1]
        else None
    )

    flat = ReferenceFunction.flat()
    fbst_flat = attempt(
        "fbst_flat",
        lambda: fbst_evalue(posterior, flat, null),
        "ev_against_flat", "ev_for_flat", "s_star_flat",
    )
    if fbst_flat is not None:
        indices["ev_against_flat"] = fbst_flat.ev_against
        indices["ev_for_flat"] = fbst_flat.ev_for
        indices["s_star_flat"] = fbst_flat.s_star

    prior_ref = ReferenceFunction.from_prior(prior)
    fbst_prior = attempt(
        "fbst_prior",
        lambda: fbst_evalue(posterior, prior_ref, null),
        "ev_against_prior", "ev_for_prior", "s_star_prior",
    )
    if fbst_prior is not None:
        indices["ev_against_prior"] = fbst_prior.ev_against
        indices["ev_for_prior"] = fbst_prior.ev_for
        indices["s_star_prior"] = fbst_prior.s_star

    diagnostics: dict[str, Any] = {
        "map_at_boundary": peak.at_boundary,
        "degenerate_direction": median == 0.0,
        "posterior_edge_density_ratio": float(
            max(posterior.densities[0], posterior.densities[-1]) / posterior.densities.max()
        ),
        "grid_points": int(posterior.points.size),
        "support": [posterior.support[0], posterior.support[1]],
    }
    if extra_diagnostics:
        diagnostics.update(extra_diagnostics)

    config_echo = {
        "prior_scale": None,
        "prior_preset": None,
        "rope": [rope.lower, rope.upper],
        "hpd_mass": hpd_mass,
        "null_value": null,
        "alternative": hypotheses.alternative,
        "grid_size": int(posterior.points.size),
        "thresholds": {"pd": thresholds.pd, "p_map": thresholds.p_map, "ev": thresholds.ev},
        "seed": None,
    }
    return IndexReport(
        config=config_echo,
        indices=indices,
        verdicts=derive_verdicts(indices, thresholds, rope),
        diagnostics=diagnostics,
        errors=errors,
        versions=package_versions(),
    )
