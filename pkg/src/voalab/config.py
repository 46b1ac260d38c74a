"""Engine configuration shared by all computations."""

import os
from dataclasses import dataclass, replace
from typing import Optional


def _jobs_from_environment() -> int:
    value = os.environ.get("VOALAB_JOBS", "")
    return int(value) if value.isdigit() and int(value) > 0 else 1


@dataclass(frozen=True)
class EngineConfig:
    """
    Configuration for graded computations.

    Attributes
    ----------
    max_weight : int
        Weight cutoff W. Subspaces and dimension tables cover grades 0..W; lattice VOAs
        are built with one extra grade of headroom. Default is 4.
    jobs : int
        Number of worker threads for grade-parallel passes. Default comes from
        the VOALAB_JOBS environment variable, else 1.
    group_bound : int
        Largest group order accepted by group closure and order searches. Default is 64.
    certify_depth : int
        Highest grade on which Virasoro commutators are checked as operator identities.
        Default is 2.
    propagation_check_weight : int | None
        Highest grade on which a propagated map is checked against every spanning word.
        None checks every propagated grade.
    homomorphism_samples : int
        Number of random basis pairs used by sampled vertex-algebra checks. Default is 20.
    sample_seed : int
        Seed of the sampling generator. Default is 0.
    strict_annihilation : bool
        If True, scenarios also run the full annihilation cross-check of commutants.
    strict_annihilation_grade : int
        Highest grade covered by the annihilation cross-check. Default is 2.
    """

    max_weight: int = 4
    jobs: int = 0
    group_bound: int = 64
    certify_depth: int = 2
    propagation_check_weight: Optional[int] = None
    homomorphism_samples: int = 20
    sample_seed: int = 0
    strict_annihilation: bool = False
    strict_annihilation_grade: int = 2

    def __post_init__(self):
        """Resolve the job count and validate the cutoff."""
        if self.jobs <= 0:
            object.__setattr__(self, "jobs", _jobs_from_environment())
        if self.max_weight < 0:
            raise ValueError(f"max_weight must be non-negative, got {self.max_weight}")

    @property
    def basis_cutoff(self) -> int:
        """Cutoff of the graded bases: one grade above max_weight for e_(0) images."""
        return self.max_weight + 1

    def with_overrides(self, **changes) -> "EngineConfig":
        """
        Return a copy with the given fields replaced (None values are ignored).

        Parameters
        ----------
        **changes
            Field values to replace.

        Returns
        -------
        EngineConfig
            The updated configuration.
        """
        return replace(self, **{key: value for key, value in changes.items() if value is not None})


# Module-level default config
_default_config: Optional[EngineConfig] = None


def get_default_config() -> EngineConfig:
    """
    Get the package-level default engine configuration.

    Returns
    -------
    EngineConfig
        The default configuration. If not set, creates a new one with defaults.
    """
    global _default_config
    if _default_config is None:
        _default_config = EngineConfig()
    return _default_config


def set_default_config(config: EngineConfig) -> None:
    """
    Set the package-level default engine configuration.

    This is global state used by every computation that receives no explicit config.

    Parameters
    ----------
    config : EngineConfig
        The configuration to use as the default.

    Examples
    --------
    >>> from voalab import EngineConfig, set_default_config
    >>> set_default_config(EngineConfig(max_weight=6, jobs=4))
    """
    global _default_config
    _default_config = config
