"""Exception hierarchy shared across the pipeline."""


class OaStatusError(Exception):
    """Base class for every data-level failure raised by this package."""


class MalformedDoi(OaStatusError, ValueError):
    pass


class MalformedIssn(OaStatusError, ValueError):
    pass


class BadCheckDigit(MalformedIssn):
    pass


class UnparsableRecord(OaStatusError, ValueError):
    pass


class MissingDoi(UnparsableRecord):
    pass


class MissingColumn(OaStatusError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InconsistentInput(OaStatusError, RuntimeError):
    """Raised when callers hand the classifier an impossible combination."""


class EmptyCorpus(OaStatusError, ValueError):
    pass


class SampleTooLarge(OaStatusError, ValueError):
    pass


class UnfilledRows(OaStatusError, ValueError):
    pass


class RemoteError(OaStatusError):
    pass


class NotFound(RemoteError):
    pass


class RetriesExhausted(RemoteError):
    def __init__(self, message, attempts=0, last_status=None):
        super().__init__(message)
        self.attempts = attempts
        self.last_status = last_status


class HttpStatusError(RemoteError):
    def __init__(self, message, status):
        super().__init__(message)
        self.status = status
