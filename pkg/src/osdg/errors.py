"""Exception taxonomy shared by all osdg modules.

Every error carries a stable machine ``code`` so the HTTP service and the
CLI can map failures without string matching.
"""


class OsdgError(Exception):
    """Base class; ``code`` is a stable machine-readable identifier."""

    code = "Error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


class DataError(OsdgError):
    """Invalid input data (datasets, ontologies, request payloads)."""

    code = "DataError"


class InvalidSdg(DataError):
    code = "InvalidSdg"


class MalformedHeader(DataError):
    code = "MalformedHeader"


class AgreementMismatch(DataError):
    code = "AgreementMismatch"


class DuplicateRow(DataError):
    code = "DuplicateRow"


class EmptyText(DataError):
    code = "EmptyText"


class UnsupportedLanguage(DataError):
    code = "UnsupportedLanguage"


class EmptySuggestion(DataError):
    code = "EmptySuggestion"


class NoPositives(DataError):
    code = "NoPositives"


class StratifyError(DataError):
    code = "StratifyError"


class Divergence(OsdgError):
    """Training loss became non-finite; carries the epoch it happened at."""

    code = "Divergence"

    def __init__(self, epoch: int, message: str = ""):
        super().__init__(message or f"loss became non-finite at epoch {epoch}")
        self.epoch = epoch


class UnsupportedVersion(DataError):
    code = "UnsupportedVersion"


class Corrupt(DataError):
    code = "Corrupt"


class TranslationError(OsdgError):
    """Backend failure; ``retries`` is how many attempts were made."""

    code = "TranslationError"

    def __init__(self, message: str = "", retries: int = 0, cause: Exception | None = None):
        super().__init__(message)
        self.retries = retries
        self.__cause__ = cause


class MalformedResponse(TranslationError):
    code = "MalformedResponse"


class AlreadyOnboarded(OsdgError):
    code = "AlreadyOnboarded"


class IntroIncomplete(OsdgError):
    code = "IntroIncomplete"


class NotOnboarded(OsdgError):
    code = "NotOnboarded"


class OpenSessionExists(OsdgError):
    def __init__(self, message: str = "", session_id: str = ""):
        super().__init__(message)
        self.session_id = session_id

    code = "OpenSessionExists"


class NoEligibleTasks(OsdgError):
    code = "NoEligibleTasks"


class UnknownSession(OsdgError):
    code = "UnknownSession"


class UnknownTask(OsdgError):
    code = "UnknownTask"


class UnknownVolunteer(OsdgError):
    code = "UnknownVolunteer"


class DuplicateVote(OsdgError):
    code = "DuplicateVote"


class VoteCapReached(OsdgError):
    code = "VoteCapReached"


class TaskRetired(OsdgError):
    """Current task hit the vote cap concurrently; a substitute was swapped in."""

    def __init__(self, message: str = "", substitute_task_id: str | None = None):
        super().__init__(message)
        self.substitute_task_id = substitute_task_id

    code = "TaskRetired"


class OutOfOrderVote(OsdgError):
    code = "OutOfOrderVote"


class SessionComplete(OsdgError):
    code = "SessionComplete"


class NoExtractor(OsdgError):
    code = "NoExtractor"


class EmptyExtraction(OsdgError):
    code = "EmptyExtraction"


class ExtractorFailed(OsdgError):
    code = "ExtractorFailed"


class ConfigError(OsdgError):
    code = "ConfigError"


class StorageError(OsdgError):
    code = "StorageError"
