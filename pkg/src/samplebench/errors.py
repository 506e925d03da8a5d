"""Exception hierarchy shared by all modules."""


class SampleBenchError(Exception):
    """Base class for every error raised by samplebench."""


class ParameterError(SampleBenchError, ValueError):
    pass


class DegenerateInputError(ParameterError):
    """Input is valid in shape but carries no spread (single point, zero bandwidth...)."""


class FormatError(SampleBenchError, ValueError):
    pass


class CapacityError(SampleBenchError):
    """Not enough effective samples to fill the requested batches."""


class UnsupportedMetricError(SampleBenchError):
    pass


class NotFoundError(SampleBenchError, LookupError):
    pass


class ProgressError(SampleBenchError, RuntimeError):
    """An iterative procedure hit its attempt cap before finishing."""
