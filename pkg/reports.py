"""
Result type shared by every structural validator.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a law check: ok, or the first violated law with witnesses."""
    ok: bool
    law: str = ""
    witness: Tuple[Any, ...] = field(default_factory=tuple)
    detail: str = ""

    @classmethod
    def passed(cls) -> "CheckReport":
        return cls(ok=True)

    @classmethod
    def violation(cls, law: str, *witness: Any, detail: str = "") -> "CheckReport":
        return cls(ok=False, law=law, witness=tuple(witness), detail=detail)

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> Dict:
        """Convert to dictionary for serialization."""
        data: Dict[str, Any] = {"ok": self.ok}
        if not self.ok:
            data["law"] = self.law
            data["witness"] = [str(w) for w in self.witness]
            if self.detail:
                data["detail"] = self.detail
        return data
