"""INI-style run configuration.

Every key is optional; defaults reproduce the published analysis setup::

    [prior]
    alpha = 1              ; one value for all cells, or four: a00,a01,a10,a11

    [sampler]
    kind = direct          ; direct | mcmc
    draws = 40000          ; direct sampler only
    chains = 4             ; mcmc only
    steps = 10000          ; retained draws per chain
    burn_in = 1000
    thin = 1
    seed = 0
    workers = 1

    [significance]
    base = 0.02            ; divided by the number of pairs (Bonferroni)
    ci_level = 0.95
    min_draws = 1000

    [simulation]
    repetitions = 1
    bins = 50
    use_default_suite = yes   ; ignored when [spec:*] sections are present

    [spec:grief-like]
    prob_a = 0.3
    prob_b = 0.4
    delta_p = 0.2
    n = 1000
    seed = 1
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError, ParseError
from .inference import AnalysisConfig
from .posterior import DirichletParams
from .synthesis import DEFAULT_SUITE, SyntheticSpec


@dataclass(frozen=True)
class SimulationSettings:
    specs: tuple[SyntheticSpec, ...] = DEFAULT_SUITE
    names: tuple[str, ...] = field(
        default_factory=lambda: tuple(f"spec{i}" for i in range(len(DEFAULT_SUITE)))
    )
    repetitions: int = 1
    bins: int = 50


def _get(section, key, kind, default):
    if section is None or key not in section:
        return default
    raw = section[key]
    try:
        if kind is bool:
            return section.getboolean(key)
        return kind(raw)
    except ValueError:
        raise ConfigurationError(f"[{section.name}] {key} = {raw!r} is not a valid {kind.__name__}") from None


def load_config(path=None) -> tuple[AnalysisConfig, SimulationSettings]:
    """Read ``path`` (or nothing) into analysis and simulation settings."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"config file {path} does not exist")
        try:
            parser.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise ParseError(f"{path}: {exc}") from None

    prior = parser["prior"] if parser.has_section("prior") else None
    sampler = parser["sampler"] if parser.has_section("sampler") else None
    sig = parser["significance"] if parser.has_section("significance") else None
    sim = parser["simulation"] if parser.has_section("simulation") else None

    alpha_text = _get(prior, "alpha", str, "1")
    try:
        alpha = [float(x) for x in alpha_text.split(",")]
    except ValueError:
        raise ConfigurationError(f"[prior] alpha = {alpha_text!r} is not a number list") from None

    d = AnalysisConfig()
    config = AnalysisConfig(
        base_significance=_get(sig, "base", float, d.base_significance),
        prior=DirichletParams.from_sequence(alpha),
        sampler=_get(sampler, "kind", str, d.sampler),
        draws=_get(sampler, "draws", int, d.draws),
        chains=_get(sampler, "chains", int, d.chains),
        steps=_get(sampler, "steps", int, d.steps),
        burn_in=_get(sampler, "burn_in", int, d.burn_in),
        thin=_get(sampler, "thin", int, d.thin),
        seed=_get(sampler, "seed", int, d.seed),
        ci_level=_get(sig, "ci_level", float, d.ci_level),
        min_draws=_get(sig, "min_draws", int, d.min_draws),
        workers=_get(sampler, "workers", int, d.workers),
    )

    names, specs = [], []
    for name in parser.sections():
        if not name.startswith("spec:"):
            continue
        s = parser[name]
        try:
            specs.append(
                SyntheticSpec(
                    prob_a=_get(s, "prob_a", float, None),
                    prob_b=_get(s, "prob_b", float, None),
                    delta_p=_get(s, "delta_p", float, 0.0),
                    n=_get(s, "n", int, 1000),
                    seed=_get(s, "seed", int, len(specs)),
                )
            )
        except TypeError:
            raise ConfigurationError(f"[{name}] needs prob_a and prob_b") from None
        except ConfigurationError as exc:
            raise ConfigurationError(f"[{name}] {exc}") from None
        names.append(name.split(":", 1)[1])
    if not specs and _get(sim, "use_default_suite", bool, True):
        specs = list(DEFAULT_SUITE)
        names = [f"spec{i}" for i in range(len(specs))]

    settings = SimulationSettings(
        specs=tuple(specs),
        names=tuple(names),
        repetitions=_get(sim, "repetitions", int, 1),
        bins=_get(sim, "bins", int, 50),
    )
    if settings.repetitions < 1 or settings.bins < 1:
        raise ConfigurationError("[simulation] repetitions and bins must be at least 1")
    return config, settings


def config_snapshot(config: AnalysisConfig) -> dict:
    """Plain-data view of ``config`` for the run manifest."""
    return {
        "prior": list(config.prior.as_array()),
        "sampler": config.sampler,
        "draws": config.draws,
        "chains": config.chains,
        "steps": config.steps,
        "burn_in": config.burn_in,
        "thin": config.thin,
        "seed": config.seed,
        "base_significance": config.base_significance,
        "ci_level": config.ci_level,
        "min_draws": config.min_draws,
        "workers": config.workers,
    }
