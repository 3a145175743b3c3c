"""Exception types shared across the package."""


class VfxControlError(Exception):
    """Base class for all package errors."""


class CatalogError(VfxControlError):
    """Catalog document is malformed or inconsistent."""


class UnknownParameterError(CatalogError):
    """A parameter name is not present in the catalog."""


class RangeViolationError(VfxControlError):
    """A value falls outside the catalog range for its parameter."""


class UnknownTemplateError(VfxControlError):
    """Requested particle template kind is not in the library."""


class TreeError(VfxControlError):
    """Control-tree structural or usage error."""


class UnknownNodeError(TreeError):
    """Node id not present in the tree."""


class LockedNodeError(TreeError):
    """Write attempted on a locked node."""


class RenderError(VfxControlError):
    """Prompt template could not be rendered (missing or unresolved slots)."""


class PipelineError(VfxControlError):
    """The generation pipeline failed at a stage.

    `stage` labels where the failure happened so callers can surface it.
    """

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class GenerationValidationError(PipelineError):
    """A generated document failed validation against its schema or the catalog."""


class ProviderError(VfxControlError):
    """Transport-level provider failure."""


class FixtureMissError(ProviderError):
    """Replay-mode provider has no recorded response for a request."""
