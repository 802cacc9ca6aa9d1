"""Solver configuration with the artifact's default tolerances."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class OdeConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_steps: int = 200_000

    def __post_init__(self) -> None:
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("ODE tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


@dataclass
class NewtonConfig:
    tol: float = 1e-10
    max_iter: int = 50
    fd_jacobian_step: float = math.sqrt(2.220446049250313e-16)

    def __post_init__(self) -> None:
        if self.tol <= 0 or self.fd_jacobian_step <= 0:
            raise ValueError("Newton tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class SolverConfig:
    ode: OdeConfig = field(default_factory=OdeConfig)
    newton: NewtonConfig = field(default_factory=NewtonConfig)
