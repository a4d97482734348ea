from dataclasses import dataclass, field


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: a boolean plus human-readable evidence.

    ``witnesses`` explain a failure (or are empty on success), ``table`` holds
    any per-item data the check computed, and ``notes`` carry informational
    remarks that do not affect ``ok``.
    """

    ok: bool
    witnesses: tuple = ()
    table: tuple = ()
    notes: tuple = field(default=())

    def __bool__(self):
        return self.ok
