"""Randomized covering procedures and outlier witnesses for quantum states."""

try:
    # installed wheel: the extension lives inside the package
    from ._qoutlier import (  # noqa: F401
        ContractError,
        IoError,
        beta_tail,
        canonical_state_json,
        haar_projector,
        haar_sample,
        point_test,
        run_cover,
        schumacher_demo,
        typical_projector,
        verify_moments,
        von_neumann_entropy,
    )
except ImportError:
    # build tree: the extension sits on sys.path next to the package
    from _qoutlier import (  # noqa: F401
        ContractError,
        IoError,
        beta_tail,
        canonical_state_json,
        haar_projector,
        haar_sample,
        point_test,
        run_cover,
        schumacher_demo,
        typical_projector,
        verify_moments,
        von_neumann_entropy,
    )

__all__ = [
    "ContractError",
    "IoError",
    "beta_tail",
    "canonical_state_json",
    "haar_projector",
    "haar_sample",
    "point_test",
    "run_cover",
    "schumacher_demo",
    "typical_projector",
    "verify_moments",
    "von_neumann_entropy",
]
