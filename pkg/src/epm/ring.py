"""Exact arithmetic in the matrix ring with row moduli p, p^2, ..., p^m.

Elements are m x m integer matrices where row i (1-based) lives modulo p^i
and every sub-diagonal entry (i, j) with i > j is divisible by p^(i-j).
All values are immutable; every operation returns a fresh element.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadParameter,
    DivisibilityViolation,
    InternalVerificationFailure,
    InvariantViolation,
    NotInvertible,
    ParamsMismatch,
)
from .params import RingParams


@dataclass(frozen=True)
class RingElement:
    params: RingParams
    rows: tuple  # rows[i][j] with 0 <= rows[i][j] < p^(i+1)

    def __post_init__(self):
        m = self.params.m
        mods = self.params.moduli
        p = self.params.p
        if len(self.rows) != m or any(len(r) != m for r in self.rows):
            raise BadParameter(f"expected a {m}x{m} matrix")
        for i in range(m):
            for j in range(m):
                v = self.rows[i][j]
                if not (0 <= v < mods[i]):
                    raise InvariantViolation(
                        f"entry ({i + 1},{j + 1}) = {v} out of range [0, p^{i + 1})"
                    )
                if i > j and v % p ** (i - j) != 0:
                    raise DivisibilityViolation(
                        f"entry ({i + 1},{j + 1}) = {v} not divisible by p^{i - j}"
                    )

    def _check_params(self, other: "RingElement"):
        if self.params != other.params:
            raise ParamsMismatch("elements built over different (p, m)")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check_params(other)
        mods = self.params.moduli
        rows = tuple(
            tuple((a + b) % mods[i] for a, b in zip(ra, rb))
            for i, (ra, rb) in enumerate(zip(self.rows, other.rows))
        )
        return RingElement(self.params, rows)

    def __neg__(self) -> "RingElement":
        mods = self.params.moduli
        rows = tuple(
            tuple((-a) % mods[i] for a in ra) for i, ra in enumerate(self.rows)
        )
        return RingElement(self.params, rows)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check_params(other)
        m = self.params.m
        mods = self.params.moduli
        a, b = self.rows, other.rows
        rows = tuple(
            tuple(
                sum(a[i][k] * b[k][j] for k in range(m)) % mods[i]
                for j in range(m)
            )
            for i in range(m)
        )
        return RingElement(self.params, rows)

    def __pow__(self, k: int) -> "RingElement":
        if k < 0:
            raise BadParameter("negative powers not defined; use inverse()")
        result = identity(self.params)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_invertible(self) -> bool:
        p = self.params.p
        return all(self.rows[i][i] % p != 0 for i in range(self.params.m))

    def inverse(self) -> "RingElement":
        """Two-sided inverse, or NotInvertible.

        Lift to a matrix over Z_{p^m}, Gauss-Jordan there (diagonal pivots
        are units mod p, hence units mod p^m, and sub-diagonal entries are
        multiples of p, so no pivoting is ever needed), then reduce row i
        back mod p^i.  The result is verified on both sides.
        """
        if not self.is_invertible():
            raise NotInvertible("a diagonal entry is divisible by p")
        m = self.params.m
        q = self.params.moduli[-1]
        a = [list(row) for row in self.rows]
        x = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        for col in range(m):
            inv = pow(a[col][col], -1, q)
            a[col] = [v * inv % q for v in a[col]]
            x[col] = [v * inv % q for v in x[col]]
            for r in range(m):
                if r == col or a[r][col] == 0:
                    continue
                f = a[r][col]
                a[r] = [(v - f * w) % q for v, w in zip(a[r], a[col])]
                x[r] = [(v - f * w) % q for v, w in zip(x[r], x[col])]
        try:
            candidate = element(self.params, x)
        except DivisibilityViolation as exc:
            raise InternalVerificationFailure(
                f"reduced inverse broke divisibility: {exc.detail}"
            ) from exc
        ident = identity(self.params)
        if self * candidate != ident or candidate * self != ident:
            raise InternalVerificationFailure("two-sided inverse check failed")
        return candidate


def element(params: RingParams, raw) -> RingElement:
    """Build an element from arbitrary integers, reducing row i mod p^i.

    Raises DivisibilityViolation when a sub-diagonal entry is genuinely
    invalid (reduction mod p^i cannot break divisibility by p^(i-j)).
    """
    mods = params.moduli
    rows = tuple(
        tuple(int(v) % mods[i] for v in row) for i, row in enumerate(raw)
    )
    return RingElement(params, rows)


def zero(params: RingParams) -> RingElement:
    m = params.m
    return RingElement(params, tuple(tuple(0 for _ in range(m)) for _ in range(m)))


def identity(params: RingParams) -> RingElement:
    m = params.m
    return RingElement(
        params, tuple(tuple(1 if i == j else 0 for j in range(m)) for i in range(m))
    )


def commutes(a: RingElement, b: RingElement) -> bool:
    return a * b == b * a


def random_element(params: RingParams, rng) -> RingElement:
    """Uniform draw: entry (i,j) uniform in Z_{p^i} above the diagonal and
    p^(i-j) * u with u uniform in Z_{p^j} below it."""
    p = params.p
    m = params.m
    mods = params.moduli
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            if i <= j:
                row.append(rng.randrange(mods[i]))
            else:
                row.append(p ** (i - j) * rng.randrange(mods[j]))
        rows.append(tuple(row))
    return RingElement(params, tuple(rows))
