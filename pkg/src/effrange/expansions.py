"""Two-parameter effective-range expansions, truncated after the k**2 term.

Each :class:`ExpansionKind` evaluates one of three functions of the phase
shift: tan(delta)/k (natural for |a| < R), k*cot(delta) (natural for
|a| > R), or -delta/k. ``ErParams.r0`` is the effective range r0 for the
large-a kinds and the small-a effective range for the others.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleError

TAN = "tan_delta_over_k"
KCOT = "k_cot_delta"
MINUS_DELTA = "minus_delta_over_k"


class ExpansionKind(enum.Enum):
    # value = (CLI token, value role, requires r0 > 0)
    TextbookLargeA = ("er1", KCOT, False)
    KetterleParam = ("er2", MINUS_DELTA, False)
    InverseOfTextbook = ("inv4", TAN, True)
    LowestSmall = ("er18", TAN, True)
    LowestLarge = ("er19", KCOT, True)
    ReciprocalSmallA = ("er22", TAN, True)
    ImprovedSmallA = ("er23", TAN, True)
    ImprovedLargeA = ("er24", KCOT, True)

    @property
    def token(self) -> str:
        return self.value[0]

    @property
    def value_role(self) -> str:
        return self.value[1]

    @property
    def needs_positive_range(self) -> bool:
        return self.value[2]

    @classmethod
    def from_token(cls, token: str) -> "ExpansionKind":
        for kind in cls:
            if kind.token == token or kind.name == token:
                return kind
        raise ValueError(
            f"unknown expansion {token!r}; expected one of {[k.token for k in cls]}"
        )


@dataclass(frozen=True)
class ErParams:
    a: float
    r0: float


def coefficients(kind: ExpansionKind, p: ErParams):
    """(intercept, k**2 slope) of the truncated expansion."""
    a, r = p.a, p.r0
    if kind.needs_positive_range and not r > 0:
        raise ValueError(f"{kind.token} needs a positive effective range, got r0={r}")
    if kind.value_role == KCOT and a == 0.0:
        raise PoleError(
            f"{kind.token}: k*cot(delta) has a pole at zero energy when a = 0"
        )

    if kind is ExpansionKind.TextbookLargeA or kind is ExpansionKind.LowestLarge:
        return -1.0 / a, 0.5 * r
    if kind is ExpansionKind.ImprovedLargeA:
        return -1.0 / a, r / 2 - r**3 / (6 * a**2) - 2 * r**2 / (math.pi**2 * a)
    if kind is ExpansionKind.ReciprocalSmallA or kind is ExpansionKind.LowestSmall:
        return -a, r**3 / 6
    if kind is ExpansionKind.ImprovedSmallA:
        return -a, r**3 / 6 - a**2 * r / 2
    if kind is ExpansionKind.InverseOfTextbook:
        return -a, -0.5 * a**2 * r
    if kind is ExpansionKind.KetterleParam:
        return a, -(a**3 / 3 - a**2 * r / 2)
    raise TypeError(kind)


def eval_expansion(kind: ExpansionKind, p: ErParams, k):
    """Evaluate the truncated expansion at momentum ``k`` (scalar or array).

    The returned quantity is ``kind.value_role``: tan(delta)/k, k*cot(delta)
    or -delta/k.

    Raises
    ------
    PoleError
        For a k*cot(delta) kind with a = 0.
    """
    intercept, slope = coefficients(kind, p)
    ksq = np.square(k)
    value = intercept + slope * ksq
    return float(value) if np.ndim(k) == 0 else value


def reciprocal_coefficients(a: float, b: float):
    """Reciprocal of the series -a + b k**2, truncated after k**2.

    Returns
    -------
    (intercept, slope) : tuple of float
        ``(-1/a, -b/a**2)``.
    """
    if a == 0.0:
        raise PoleError("reciprocal series undefined at a = 0: the expansion breaks down")
    return -1.0 / a, -b / a**2
