"""In-process pub/sub bus with a per-publish delivery delay.

Stands in for the networked middleware of a deployed swarm: publishers
stamp messages with a deliver-at time (send time + latency) and
subscribers see nothing earlier. Queues are FIFO per (topic,
subscriber) -- a message never overtakes an earlier one on its topic,
even if a later publish used a smaller latency.

Topics with several subscribers are broadcast: every subscriber gets
its own copy of each message. Time is an opaque monotonic number; the
simulation engine passes integer tick counts so that delivery
accounting stays exact, while direct callers may use plain seconds.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any

_DEFAULT_SUB = "_default_"


@dataclass(frozen=True)
class BusMessage:
    """Timestamped envelope on a named topic."""

    topic: str
    payload: Any
    sent_at: float
    deliver_at: float

    def __post_init__(self):
        if self.deliver_at < self.sent_at:
            raise ValueError("deliver_at must be >= sent_at")


class Subscription:
    """One subscriber's view of a topic."""

    def __init__(self, bus: "MessageBus", topic: str, subscriber: str):
        self.bus = bus
        self.topic = topic
        self.subscriber = subscriber

    def poll(self, now: float) -> list[BusMessage]:
        return self.bus.poll(self.topic, now, subscriber=self.subscriber)


class MessageBus:
    def __init__(self):
        self._queues: dict[str, dict[str, deque[BusMessage]]] = {}

    def subscribe(self, topic: str, subscriber: str) -> Subscription:
        """Register a subscriber; it receives publishes from now on."""
        topic_queues = self._queues.setdefault(topic, {})
        if subscriber in topic_queues:
            raise ValueError(f"{subscriber!r} is already subscribed to {topic!r}")
        topic_queues[subscriber] = deque()
        return Subscription(self, topic, subscriber)

    def publish(self, topic: str, payload: Any, now: float, latency: float = 0.0) -> BusMessage:
        """Enqueue a message for delivery at now + latency."""
        if latency < 0:
            raise ValueError("latency must be >= 0")
        msg = BusMessage(topic=topic, payload=payload, sent_at=now, deliver_at=now + latency)
        topic_queues = self._queues.setdefault(topic, {})
        if not topic_queues:
            # No subscribers yet: keep the message in the topic mailbox so
            # plain publish-then-poll works without explicit subscription.
            topic_queues[_DEFAULT_SUB] = deque()
        for q in topic_queues.values():
            q.append(msg)
        return msg

    def poll(self, topic: str, now: float, subscriber: str = _DEFAULT_SUB) -> list[BusMessage]:
        """Remove and return this subscriber's deliverable messages, FIFO."""
        q = self._queues.get(topic, {}).get(subscriber)
        if q is None:
            return []
        out = []
        while q and q[0].deliver_at <= now:
            out.append(q.popleft())
        return out

    def pending(self, topic: str, subscriber: str = _DEFAULT_SUB) -> int:
        q = self._queues.get(topic, {}).get(subscriber)
        return len(q) if q else 0
