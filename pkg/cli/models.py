"""
Pydantic models for catalog records
"""

from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, StringConstraints

from core.piped import FIELD_NAMES, MonoclinicPiped
from core.search import CatalogEntry

# Integers travel as decimal strings so consumers never overflow
Length = Annotated[str, StringConstraints(pattern=r"^(0|[1-9][0-9]*)$")]
Parameter = Annotated[str, StringConstraints(pattern=r"^(0|-?[1-9][0-9]*)$")]

CATALOG_COLUMNS = (
    ("family", "m", "n")
    + FIELD_NAMES
    + ("content",)
    + tuple(f"primitive_{name}" for name in FIELD_NAMES)
)


# ============================================================================
# Catalog Models
# ============================================================================

class CatalogRecord(BaseModel):
    """One catalog line; m and n are absent for brute-force entries"""
    model_config = ConfigDict(extra="forbid")

    family: str
    m: Optional[Parameter] = None
    n: Optional[Parameter] = None
    x: Length
    y: Length
    z: Length
    a: Length
    b: Length
    c1: Length
    c2: Length
    d1: Length
    d2: Length
    content: Length
    primitive_x: Length
    primitive_y: Length
    primitive_z: Length
    primitive_a: Length
    primitive_b: Length
    primitive_c1: Length
    primitive_c2: Length
    primitive_d1: Length
    primitive_d2: Length
    classification: Optional[str] = None

    @classmethod
    def from_entry(cls, entry: CatalogEntry, classification: Optional[str] = None) -> "CatalogRecord":
        values = {
            'family': entry.family,
            'm': None if entry.m is None else str(entry.m),
            'n': None if entry.n is None else str(entry.n),
            'content': str(entry.content),
            'classification': classification,
        }
        for name, value in zip(FIELD_NAMES, entry.raw.as_tuple()):
            values[name] = str(value)
        for name, value in zip(FIELD_NAMES, entry.primitive.as_tuple()):
            values[f"primitive_{name}"] = str(value)
        return cls(**values)

    def raw_piped(self) -> MonoclinicPiped:
        return MonoclinicPiped.from_sequence([int(getattr(self, name)) for name in FIELD_NAMES])

    def primitive_piped(self) -> MonoclinicPiped:
        return MonoclinicPiped.from_sequence([int(getattr(self, f"primitive_{name}")) for name in FIELD_NAMES])

    def to_entry(self) -> CatalogEntry:
        return CatalogEntry(
            family=self.family,
            m=None if self.m is None else int(self.m),
            n=None if self.n is None else int(self.n),
            raw=self.raw_piped(),
            primitive=self.primitive_piped(),
            content=int(self.content),
        )

    def to_line(self) -> str:
        return self.model_dump_json(exclude_none=True)
