class InvalidProblem(ValueError):
    pass


class SpanFillsAmbient(ValueError):
    """The span is (or is expected to be) the whole ambient space; no functionals cut it."""
    pass
