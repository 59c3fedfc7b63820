"""Record of every symbol sent on every link during a protocol run.

Feeds two consumers: cost accounting (symbols per category) and
eavesdropper views (query/answer payloads per link). Provisioning events
may bill symbols without carrying payloads; see the scheme modules for the
accounting conventions.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

ROUND_SETUP = 0
ROUND_QUERY = 1
ROUND_ANSWER = 2

QUERY = "query"
ANSWER = "answer"
MASK_SHARE = "mask-share"
NOISE_SHARE = "noise-share"
STORAGE_SHARE = "storage-share"


@dataclass(frozen=True)
class Event:
    round: int
    sender: str
    receiver: str
    link: str
    category: str
    values: tuple[int, ...]
    symbols: int


class Transcript:
    def __init__(self) -> None:
        self.events: list[Event] = []

    def emit(self, round: int, sender: str, receiver: str, link: str,
             category: str, values=(), symbols: int | None = None) -> Event:
        values = tuple(values)
        ev = Event(round=round, sender=sender, receiver=receiver, link=link,
                   category=category, values=values,
                   symbols=len(values) if symbols is None else symbols)
        self.events.append(ev)
        return ev

    def events_in(self, category: str) -> list[Event]:
        return [ev for ev in self.events if ev.category == category]

    def symbols_in(self, category: str) -> int:
        return sum(ev.symbols for ev in self.events if ev.category == category)

    def payload_stream(self) -> list[tuple[str, str, tuple[int, ...]]]:
        """(link, category, values) for every event that carries symbols on
        a wire; accounting-only events are skipped."""
        return [(ev.link, ev.category, ev.values) for ev in self.events if ev.values]

    def to_jsonable(self) -> list[dict]:
        return [
            {
                "round": ev.round,
                "from": ev.sender,
                "to": ev.receiver,
                "link": ev.link,
                "category": ev.category,
                "values": list(ev.values),
                "symbols": ev.symbols,
            }
            for ev in self.events
        ]

    def digest(self) -> str:
        blob = json.dumps(self.to_jsonable(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()
