"""Global search-work budget.

Brute-force sweeps charge the meter as they expand nodes; exceeding the cap
raises WorkLimitExceeded, which the CLI turns into an exit-2 WorkLimit report.
The cap comes from the GUK_MAX_WORK environment variable (default 10**7).
"""
import os

from .errors import WorkLimitExceeded

DEFAULT_LIMIT = 10_000_000
ENV_VAR = "GUK_MAX_WORK"


class WorkMeter:
    def __init__(self, limit: int = DEFAULT_LIMIT):
        self.limit = limit
        self.spent = 0

    def reset(self, limit: int | None = None):
        if limit is not None:
            self.limit = limit
        self.spent = 0

    def charge(self, n: int = 1):
        self.spent += n
        if self.spent > self.limit:
            raise WorkLimitExceeded(
                "search-node budget exhausted", limit=self.limit, spent=self.spent
            )


METER = WorkMeter()


def limit_from_env() -> int:
    raw = os.environ.get(ENV_VAR, "")
    try:
        return int(raw) if raw else DEFAULT_LIMIT
    except ValueError:
        return DEFAULT_LIMIT
