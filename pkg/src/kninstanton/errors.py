"""Exception hierarchy shared by every module."""


class InstantonError(Exception):
    """Base class for all numerical failures raised by the package."""


class InvalidParameters(InstantonError, ValueError):
    pass


class ChartFailure(InstantonError):
    """Boyer-Lindquist chart breaks down (horizon, pole or Sigma = 0)."""


class SingularityHit(ChartFailure):
    pass


class QuarticDegenerate(InstantonError):
    """The radial function is not a quartic (L == 0)."""


class UnchartedStructure(InstantonError):
    """Root count of Delta_r matches neither block table.

    The partially built chart (a single unlabeled interval when there are
    no roots) is attached as ``chart``.
    """

    def __init__(self, message, roots=(), chart=None):
        super().__init__(message)
        self.roots = tuple(roots)
        self.chart = chart


class BothHorizons(InstantonError):
    pass


class PoleEvaluation(InstantonError):
    pass


class ThetaHorizonEvaluation(InstantonError):
    pass


class DomainEmpty(InstantonError):
    pass


class IntegrationError(InstantonError):
    pass


class StepFailure(IntegrationError):
    pass


class MaxSteps(IntegrationError):
    pass


class EventStop(IntegrationError):
    pass
