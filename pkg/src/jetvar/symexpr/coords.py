from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

BASE = "base"
FIELD = "field-jet"
PARAM = "parameter-jet"
CONST = "constant"

KINDS = (BASE, FIELD, PARAM, CONST)


@dataclass(frozen=True)
class Coordinate:
    """A jet-space coordinate.

    ``owner`` is the base direction for ``BASE``, the field index for ``FIELD``,
    the parameter index for ``PARAM`` and the constant index for ``CONST``.
    ``index`` is the exponent vector of the multi-index (empty for base
    coordinates and constants).  ``rank`` is the position in the global
    variable order of the owning space.
    """

    kind: str
    owner: int
    index: Tuple[int, ...]
    name: str
    rank: int = field(compare=False, repr=False)

    @property
    def order(self) -> int:
        return sum(self.index)

    @property
    def is_jet(self) -> bool:
        return self.kind in (FIELD, PARAM)

    def __str__(self) -> str:
        return self.name
