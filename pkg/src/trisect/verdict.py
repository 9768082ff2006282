"""Three-valued verdicts with mandatory evidence.

Semi-decidable questions get one of three answers:

* Verified -- the positive answer, carrying a witness a checker can replay;
* Refuted  -- the negative answer, also carrying a concrete witness;
* Unknown  -- no answer within budget, carrying the reason.

A Verified or Refuted verdict without a witness is a bug, as is an Unknown
without a reason; the constructors enforce this.
"""

from __future__ import annotations

from dataclasses import dataclass

VERIFIED = "verified"
REFUTED = "refuted"
UNKNOWN = "unknown"

_RANK = {REFUTED: 0, UNKNOWN: 1, VERIFIED: 2}


@dataclass(frozen=True)
class Verdict:
    status: str
    reason: str
    witness: object = None

    def __post_init__(self):
        if self.status not in _RANK:
            raise ValueError("bad verdict status %r" % self.status)
        if self.status in (VERIFIED, REFUTED) and self.witness is None:
            raise ValueError("%s verdict requires a witness" % self.status)
        if self.status == UNKNOWN and not self.reason:
            raise ValueError("unknown verdict requires a reason")

    @property
    def is_verified(self):
        return self.status == VERIFIED

    @property
    def is_refuted(self):
        return self.status == REFUTED

    @property
    def is_unknown(self):
        return self.status == UNKNOWN

    def to_dict(self):
        return {"status": self.status, "reason": self.reason, "witness": self.witness}


def verified(reason, witness):
    return Verdict(VERIFIED, reason, witness)


def refuted(reason, witness):
    return Verdict(REFUTED, reason, witness)


def unknown(reason):
    return Verdict(UNKNOWN, reason)


def weakest(verdicts):
    """The least assuring verdict of a non-empty collection
    (Refuted < Unknown < Verified)."""
    vs = list(verdicts)
    if not vs:
        raise ValueError("no verdicts to combine")
    return min(vs, key=lambda v: _RANK[v.status])
