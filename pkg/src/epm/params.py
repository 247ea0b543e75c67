"""Ambient parameters (p, m) shared by every ring value."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from sympy import isprime

from .errors import BadParameter


@dataclass(frozen=True)
class RingParams:
    """The pair (p, m): a prime p and the matrix dimension m.

    Row i of every matrix is reduced modulo p^i (1-based).  m = 1 is allowed
    for cross-checks but the protocol modules require m >= 2, since the ring
    is commutative without off-diagonal room.
    """

    p: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise BadParameter(f"m must be >= 1, got {self.m}")
        if self.p < 2 or not isprime(self.p):
            raise BadParameter(f"p must be prime, got {self.p}")

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        """moduli[i] = p^(i+1), the modulus of row i (0-based)."""
        out = []
        q = 1
        for _ in range(self.m):
            q *= self.p
            out.append(q)
        return tuple(out)

    def require_protocol_size(self):
        if self.m < 2:
            raise BadParameter("protocol operations require m >= 2")
