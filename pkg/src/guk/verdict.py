"""Pass/fail results with machine-readable witnesses."""
from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Verdict:
    ok: bool
    law: str = ""
    witness: Any = None
    caveats: tuple = ()

    def __bool__(self) -> bool:
        return self.ok

    @staticmethod
    def passing(witness=None, caveats=()) -> "Verdict":
        return Verdict(True, "", witness, tuple(caveats))

    @staticmethod
    def failing(law: str, witness=None, caveats=()) -> "Verdict":
        return Verdict(False, law, witness, tuple(caveats))
