import logging

# --------------------------------------------------
# Base logging setup
# --------------------------------------------------

class _TraceDefault(logging.Filter):
    """Records emitted outside a TraceAdapter still need a trace_id for the format."""

    def filter(self, record):
        if not hasattr(record, "trace_id"):
            record.trace_id = "-"
        return True


def setup_logging(level: str = "WARNING"):
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s trace=%(trace_id)s %(name)s - %(message)s",
    )
    for handler in logging.getLogger().handlers:
        if not any(isinstance(f, _TraceDefault) for f in handler.filters):
            handler.addFilter(_TraceDefault())


class TraceAdapter(logging.LoggerAdapter):
    def process(self, msg, kwargs):
        extra = kwargs.get("extra", {})
        extra.setdefault("trace_id", self.extra.get("trace_id", "-"))
        kwargs["extra"] = extra
        return msg, kwargs


# --------------------------------------------------
# Public helpers
# --------------------------------------------------

def get_trace_logger(trace_id: str, logger_name: str = "identcert"):
    """
    Returns a logger bound to a run trace id.
    """
    base_logger = logging.getLogger(logger_name)
    return TraceAdapter(base_logger, {"trace_id": trace_id})
