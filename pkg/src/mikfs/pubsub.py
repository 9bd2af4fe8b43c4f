"""Bounded-queue fan-out used by change notifications and site subscriptions.

Publishers run inside a mutation's critical section, so enqueue order is
commit order.  Each subscription owns a bounded deque; when a slow
consumer lets it overflow, the subscription is terminated and the
consumer sees a final error marker instead of silently losing events.
"""

from __future__ import annotations

import itertools
import threading
from collections import deque
from typing import Any, Callable, Iterator

DEFAULT_QUEUE_LIMIT = 1024


class Subscription:
    """One consumer's bounded event queue.

    ``transform`` maps a published item to what the consumer should
    receive; returning None drops the item for this subscriber.  It runs
    on the publisher's thread, inside the commit critical section, so it
    may read state that the commit lock protects.
    """

    def __init__(
        self,
        transform: Callable[[Any], Any] | None = None,
        limit: int = DEFAULT_QUEUE_LIMIT,
    ):
        self._items: deque[Any] = deque()
        self._cond = threading.Condition()
        self._limit = limit
        self._transform = transform
        self.error: str | None = None
        self._closed = False

    def publish(self, item: Any) -> None:
        with self._cond:
            if self._closed:
                return
            if self._transform is not None:
                item = self._transform(item)
                if item is None:
                    return
            if len(self._items) >= self._limit:
                self.error = "subscription queue overflow"
                self._closed = True
            else:
                self._items.append(item)
            self._cond.notify_all()

    def close(self, error: str | None = None) -> None:
        with self._cond:
            if not self._closed:
                self.error = error
                self._closed = True
            self._cond.notify_all()

    def __iter__(self) -> Iterator[Any]:
        """Yield items until the subscription is closed and drained."""
        while True:
            with self._cond:
                while not self._items and not self._closed:
                    self._cond.wait()
                if self._items:
                    item = self._items.popleft()
                else:
                    return
            yield item


class Hub:
    """Registry of live subscriptions; publish fans out to all of them."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._subs: dict[int, Subscription] = {}
        self._ids = itertools.count(1)

    def subscribe(
        self,
        transform: Callable[[Any], Any] | None = None,
        limit: int = DEFAULT_QUEUE_LIMIT,
    ) -> tuple[int, Subscription]:
        sub = Subscription(transform, limit)
        with self._lock:
            sub_id = next(self._ids)
            self._subs[sub_id] = sub
        return sub_id, sub

    def unsubscribe(self, sub_id: int) -> None:
        with self._lock:
            sub = self._subs.pop(sub_id, None)
        if sub is not None:
            sub.close()

    def publish(self, item: Any) -> None:
        with self._lock:
            subs = list(self._subs.items())
        for sub_id, sub in subs:
            sub.publish(item)
            if sub.error is not None:
                with self._lock:
                    self._subs.pop(sub_id, None)

    def active_count(self) -> int:
        with self._lock:
            return len(self._subs)
