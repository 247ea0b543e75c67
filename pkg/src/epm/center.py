"""The center of the ring, the commuting subsemigroup H(M), and the
structured public base elements used by the protocols.

A central element is determined by m base-p digits u_0..u_{m-1}: it is the
diagonal matrix whose i-th entry is the truncation u_0 + u_1 p + ... +
u_{i-1} p^{i-1}.  H(M) is the set of polynomial evaluations sum C_i M^i
with central coefficients; every such evaluation commutes with M, which is
what makes both cryptosystems correct.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from sympy import n_order

from .errors import BadParameter, ExhaustedRetries, InvariantViolation, TooLarge
from .params import RingParams
from .ring import RingElement, commutes, identity, zero


@dataclass(frozen=True)
class CentralElement:
    params: RingParams
    digits: tuple  # m digits, each in [0, p)

    def __post_init__(self):
        if len(self.digits) != self.params.m:
            raise InvariantViolation(f"expected {self.params.m} digits")
        for d in self.digits:
            if not (0 <= d < self.params.p):
                raise InvariantViolation(f"digit {d} out of range [0, p)")

    def expand(self) -> RingElement:
        """The diagonal ring element with nested digit truncations."""
        p = self.params.p
        m = self.params.m
        diag = []
        acc = 0
        pk = 1
        for i in range(m):
            acc += self.digits[i] * pk
            pk *= p
            diag.append(acc)
        rows = tuple(
            tuple(diag[i] if i == j else 0 for j in range(m)) for i in range(m)
        )
        return RingElement(self.params, rows)

    def is_unit(self) -> bool:
        return self.digits[0] != 0


def central_expand(c: CentralElement) -> RingElement:
    return c.expand()


def is_central(a: RingElement) -> bool:
    """Diagonal, with entry i congruent to entry i-1 mod p^(i-1)."""
    m = a.params.m
    mods = a.params.moduli
    for i in range(m):
        for j in range(m):
            if i != j and a.rows[i][j] != 0:
                return False
    for i in range(1, m):
        if a.rows[i][i] % mods[i - 1] != a.rows[i - 1][i - 1]:
            return False
    return True


def central_digits_of(a: RingElement) -> CentralElement:
    """Digit form of a central element; InvariantViolation if not central."""
    if not is_central(a):
        raise InvariantViolation("element is not central")
    p = a.params.p
    digits = []
    prev = 0
    pk = 1
    for i in range(a.params.m):
        digits.append((a.rows[i][i] - prev) // pk % p)
        prev = a.rows[i][i]
        pk *= p
    return CentralElement(a.params, tuple(digits))


def central_sample(params: RingParams, rng, require_invertible: bool = False) -> CentralElement:
    p = params.p
    digits = [rng.randrange(p) for _ in range(params.m)]
    if require_invertible:
        digits[0] = rng.randrange(1, p)
    return CentralElement(params, tuple(digits))


def enumerate_center(params: RingParams):
    """All p^m central elements in lexicographic digit order."""
    for digits in itertools.product(range(params.p), repeat=params.m):
        yield CentralElement(params, digits)


@dataclass(frozen=True)
class HPolynomial:
    params: RingParams
    coeffs: tuple  # CentralElement coefficients C_0..C_k

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, base: RingElement) -> RingElement:
        """sum C_i * base^i with base^0 = I; always commutes with base."""
        result = zero(self.params)
        power = identity(self.params)
        for i, c in enumerate(self.coeffs):
            if i > 0:
                power = power * base
            result = result + c.expand() * power
        assert commutes(result, base)
        return result


def h_poly_sample(base: RingElement, max_degree: int, rng):
    """Random polynomial in H(base): degree uniform in [1, max_degree],
    uniform central coefficients.  Returns (polynomial, evaluation)."""
    if max_degree < 1:
        raise BadParameter("max_degree must be >= 1")
    k = rng.randrange(1, max_degree + 1)
    coeffs = tuple(central_sample(base.params, rng) for _ in range(k + 1))
    poly = HPolynomial(base.params, coeffs)
    return poly, poly.evaluate(base)


def sample_noncentral_commutant(
    base: RingElement, max_degree: int, rng, max_tries: int = 256
):
    """A non-central H(base) evaluation, by resampling.

    Returns (polynomial, evaluation).  Fails with ExhaustedRetries when base
    is degenerate (e.g. central itself, so H(base) sits inside the center).
    """
    for _ in range(max_tries):
        poly, g = h_poly_sample(base, max_degree, rng)
        if not is_central(g):
            return poly, g
    raise ExhaustedRetries(
        f"no non-central commutant of the base found in {max_tries} tries"
    )


def make_corner_M(params: RingParams, x: int) -> RingElement:
    """Single-entry base: x at position (m, m), x coprime to p."""
    x = x % params.moduli[-1]
    if gcd(x, params.p) != 1:
        raise BadParameter(f"x = {x} is not coprime to p")
    m = params.m
    rows = [[0] * m for _ in range(m)]
    rows[m - 1][m - 1] = x
    return RingElement(params, tuple(tuple(r) for r in rows))


def make_two_entry_M(params: RingParams, x: int, y: int) -> RingElement:
    """Two-entry base: x at (m, m) and y * p^(m-1) at (m, 1), where y has
    multiplicative order p - 1 mod p (y = 1 when p = 2)."""
    x = x % params.moduli[-1]
    if gcd(x, params.p) != 1:
        raise BadParameter(f"x = {x} is not coprime to p")
    y = y % params.p
    if y == 0 or n_order(y, params.p) != params.p - 1:
        raise BadParameter(f"y = {y} does not have order p - 1 mod p")
    m = params.m
    rows = [[0] * m for _ in range(m)]
    rows[m - 1][m - 1] = x
    rows[m - 1][0] = (y * params.p ** (m - 1)) % params.moduli[-1]
    if m == 1:
        # (m, 1) coincides with (m, m); keep the corner entry
        rows[0][0] = x
    return RingElement(params, tuple(tuple(r) for r in rows))


def count_distinct_G(
    params: RingParams, base: RingElement, degree_bound: int, guard: int = 1 << 24
) -> int:
    """Exact number of distinct evaluations sum_{i<=degree_bound} C_i base^i
    over all central coefficient tuples.  Small parameters only."""
    center_size = params.p ** params.m
    if center_size ** (degree_bound + 1) > guard:
        raise TooLarge("coefficient space exceeds the enumeration guard")
    powers = [identity(params)]
    for _ in range(degree_bound):
        powers.append(powers[-1] * base)
    center = [c.expand() for c in enumerate_center(params)]
    seen = set()
    for combo in itertools.product(center, repeat=degree_bound + 1):
        g = zero(params)
        for c, pw in zip(combo, powers):
            g = g + c * pw
        seen.add(g.rows)
    return len(seen)
