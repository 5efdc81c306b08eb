"""The closed set of target semantic relations."""

from __future__ import annotations

import enum


class UnknownRelationError(ValueError):
    """Raised when a relation label is outside the supported set.

    The offending label is kept on ``.label`` so callers can count or report
    skipped rows without string-parsing the message.
    """

    def __init__(self, label: str):
        super().__init__(f"unknown relation label: {label!r}")
        self.label = label


class Relation(enum.Enum):
    """The twelve extraction-target relations, in canonical (alphabetical) order."""

    AtLocation = "AtLocation"
    CapableOf = "CapableOf"
    Causes = "Causes"
    CreatedBy = "CreatedBy"
    Desires = "Desires"
    HasProperty = "HasProperty"
    HasSubevent = "HasSubevent"
    IsA = "IsA"
    MadeOf = "MadeOf"
    PartOf = "PartOf"
    ReceivesAction = "ReceivesAction"
    UsedFor = "UsedFor"

    @classmethod
    def parse(cls, label: str) -> "Relation":
        """Parse a relation label, raising :class:`UnknownRelationError` otherwise."""
        try:
            return cls(label)
        except ValueError:
            raise UnknownRelationError(label) from None

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


#: All relations in canonical order.
ALL_RELATIONS: tuple[Relation, ...] = tuple(Relation)
