"""Central tolerance configuration.

Every numeric threshold used by the solvers and claim checks lives in one
record so that claims can be re-run under a uniformly tightened profile.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    newton_residual: float = 1e-10      # target residual for Newton refinement
    report_residual: float = 1e-8       # max residual accepted in a SolutionSet
    dedup_distance: float = 1e-6        # Fubini-Study dedup threshold
    match_distance: float = 1e-7        # point matching against exact lists
    census_vanish: float = 1e-7         # form-vanishing threshold in the census
    snap_distance: float = 1e-6         # eigenvalue snap gate to roots of unity
    hessian_gap: float = 1e-4           # ODP: s_4 >= gap * s_1
    fixed_eigen: float = 1e-8           # fixed point must sit in one eigenspace
    rank_tol_low: float = 1e-10         # rank plateau sweep (lower end)
    rank_tol_high: float = 1e-6         # rank plateau sweep (upper end)
    orbit_distance: float = 1e-7        # point identification inside orbits


DEFAULT = Tolerances()

# the strict profile tightens every threshold that gates an integer outcome
STRICT = replace(
    DEFAULT,
    report_residual=1e-9,
    dedup_distance=1e-7,
    match_distance=1e-8,
    census_vanish=1e-8,
    snap_distance=1e-7,
    orbit_distance=1e-8,
)

PROFILES = {"default": DEFAULT, "strict": STRICT}


@dataclass(frozen=True)
class RunConfig:
    tolerances: Tolerances = DEFAULT
    profile: str = "default"
    seed: int = 0
    workers: int = 1
    cache_dir: str | None = None

    @classmethod
    def make(cls, profile: str = "default", seed: int = 0, workers: int = 1,
             cache_dir: str | None = None) -> "RunConfig":
        if profile not in PROFILES:
            raise ValueError(f"unknown tolerance profile {profile!r}")
        return cls(tolerances=PROFILES[profile], profile=profile, seed=seed,
                   workers=workers, cache_dir=cache_dir)
