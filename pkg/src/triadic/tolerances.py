from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by the library and its tests."""

    projector: float = 1e-12  # idempotency / completeness / orthogonality, relative
    reconstruct: float = 1e-12
    pythagoras_series: float = 1e-10
    face: float = 1e-9  # equality-face detection, relative to delta
    exp_clamp: float = 700.0  # |argument| cap for exponential targets
    epsilon_rel: float = 0.05
    window_fraction: float = 0.2
    dt: float = 0.01


DEFAULT_TOLERANCES = Tolerances()
