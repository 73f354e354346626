"""Exception hierarchy shared by all netstar modules."""

from __future__ import annotations


class NetstarError(Exception):
    """Base class for every error raised by netstar."""


class SingularMatrix(NetstarError):
    def __init__(self, sigma_min: float, what: str = "matrix"):
        self.sigma_min = float(sigma_min)
        self.what = what
        super().__init__(f"{what} is numerically singular (sigma_min={sigma_min:.3e})")


class SingularBlock(SingularMatrix):
    """A diagonal block that has to be inverted failed the invertibility gate."""

    def __init__(self, sigma_min: float, what: str = "A22 block"):
        super().__init__(sigma_min, what)


class NonInvertibleInteriorBlock(SingularBlock):
    def __init__(self, sigma_min: float):
        super().__init__(sigma_min, "interior block L_I")


class NonComposable(SingularBlock):
    """The resolvent of a star product step is singular."""

    def __init__(self, sigma_min: float, step: int | None = None):
        self.step = step
        what = "star product resolvent" if step is None else f"star product resolvent at step {step}"
        super().__init__(sigma_min, what)


class DisconnectedGraph(NetstarError):
    pass


class DataMismatch(NetstarError):
    pass


class MissingLengths(NetstarError):
    pass


class NonpositiveEnergy(NetstarError):
    pass


class NotPositiveDefinite(NetstarError):
    pass


class NotOrthogonal(NetstarError):
    pass


class FamilyMismatch(NetstarError):
    pass


class SizeGuardExceeded(NetstarError):
    pass
