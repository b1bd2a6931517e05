"""Machine-checkable impossibility certificates.

A zero-sum square cannot exist for sides 1 and 2, nor over a group with a
unique involution iota: summing all cells row by row gives n*mu = 0, while
summing element by element gives iota != 0.  The certificate stores the
witness so a checker can redo that argument from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import BuildError
from .groups import Element, GroupSpec, classify


@dataclass(frozen=True)
class ImpossibilityCertificate:
    reason: str  # "side_too_small" | "unique_involution"
    spec: GroupSpec
    side: int
    involution: Optional[Element] = None

    def check(self) -> None:
        """Re-verify the witness independently of whoever issued it."""
        if self.reason == "side_too_small":
            if self.side > 2 or self.side * self.side != self.spec.order:
                raise BuildError("side_too_small certificate does not match the group")
            return
        if self.reason != "unique_involution":
            raise BuildError(f"unknown certificate reason {self.reason!r}")
        spec = self.spec
        iota = self.involution
        if iota is None or iota == spec.zero():
            raise BuildError("missing or trivial involution witness")
        if spec.scale(2, iota) != spec.zero():
            raise BuildError("witness is not an involution")
        if spec.order <= 1 << 20:
            total = spec.sum(spec.elements())
        else:
            total = classify(spec).total_sum
        if total != iota:
            raise BuildError("group element sum does not equal the witness involution")

    def to_json(self) -> dict:
        out = {"reason": self.reason, "group": self.spec.to_json(), "side": self.side}
        if self.involution is not None:
            out["involution"] = list(self.involution)
        return out
