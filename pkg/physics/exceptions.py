# physics/exceptions.py


class RegimeWarning(UserWarning):
    """Advisory: a closed form or a step size is used outside the regime it was derived for."""


class NoiseModelError(RuntimeError):
    """The assembled Langevin covariance is not positive semidefinite."""


class IntegrationError(RuntimeError):
    """A trajectory produced a non-finite state."""

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (t = {t:.6g} / gamma)")
        self.t = t
