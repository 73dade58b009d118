from services.wdcheck.errors import SpanFillsAmbient


class ComputationAborted(RuntimeError):
    """A configured computation budget ran out; never converted into a verdict."""

    status = "ABORTED"

    def __init__(self, stage: str, detail: str):
        super().__init__(f"{stage} aborted: {detail}")
        self.stage = stage
        self.detail = detail


class NotZeroDimensional(ValueError):
    pass


__all__ = ["ComputationAborted", "NotZeroDimensional", "SpanFillsAmbient"]
