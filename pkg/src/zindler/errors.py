"""Exception types raised across the package."""


class CarouselError(Exception):
    pass


class OutOfRegion(CarouselError, ValueError):
    """An angle state lies outside the admissible triangle D."""


class StateLeftRegion(CarouselError):
    """Integration reached the boundary of D.

    ``last_time`` and ``last_state`` hold the final interior sample.
    """

    def __init__(self, message, last_time=None, last_state=None):
        super().__init__(message)
        self.last_time = last_time
        self.last_state = last_state


class StepTooLarge(CarouselError):
    pass


class OutOfEnergyRange(CarouselError, ValueError):
    pass


class QuadratureNotConverged(CarouselError):
    pass


class NegativeRadicand(CarouselError, ValueError):
    pass


class AngleSumInvalid(CarouselError, ValueError):
    pass


class NonClosure(CarouselError, ValueError):
    pass


class SumConstraintViolated(CarouselError, ValueError):
    pass


class DegenerateCurve(CarouselError, ValueError):
    pass


class InconsistentAngles(CarouselError, ValueError):
    pass


class NoReturn(CarouselError):
    pass
