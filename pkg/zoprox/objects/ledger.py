from contextlib import contextmanager
from threading import Lock, local
from typing import Optional

from zoprox.objects.errors import InvalidArgumentException


class QueryLedger:
    """Counts component-function evaluations.

    The count only goes up. Evaluations made inside :meth:`refunded` are handed
    back, which is how checkpoint measurements stay out of the FQC curves.
    Increments are guarded by a lock so diagnostic threads sharing a ledger do
    not lose counts; refunds are tracked per thread.
    """

    __slots__ = ("_total", "_lock", "_local")

    def __init__(self, total: int = 0):
        if total < 0:
            raise InvalidArgumentException(f"Ledger can not start negative: {total}")
        self._total = int(total)
        self._lock = Lock()
        self._local = local()

    @property
    def total(self) -> int:
        return self._total

    def charge(self, count: int = 1):
        if count < 0:
            raise InvalidArgumentException(f"Can not charge a negative query count: {count}")
        if getattr(self._local, "depth", 0):
            return
        with self._lock:
            self._total += count

    @contextmanager
    def refunded(self):
        """Evaluations made by this thread inside the block are not counted."""
        self._local.depth = getattr(self._local, "depth", 0) + 1
        try:
            yield self
        finally:
            self._local.depth -= 1

    def __repr__(self):
        return f"QueryLedger({self._total})"


class QueryBudget:
    """A cap on how far a ledger may advance from where the budget was opened.

    ``limit=None`` never refuses.
    """

    __slots__ = ("ledger", "start", "limit")

    def __init__(self, ledger: QueryLedger, limit: Optional[int] = None):
        if limit is not None and limit < 0:
            raise InvalidArgumentException(f"Budget can not be negative: {limit}")
        self.ledger = ledger
        self.start = ledger.total
        self.limit = limit

    @property
    def spent(self) -> int:
        return self.ledger.total - self.start

    @property
    def remaining(self) -> Optional[int]:
        if self.limit is None:
            return None
        return max(self.limit - self.spent, 0)

    def fits(self, cost: int) -> bool:
        return self.limit is None or self.spent + cost <= self.limit

    def __repr__(self):
        return f"QueryBudget(spent={self.spent}, limit={self.limit})"
