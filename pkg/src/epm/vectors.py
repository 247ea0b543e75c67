"""The acted-on set Z_p x Z_{p^2} x ... x Z_{p^m} and the left ring action."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantViolation, ParamsMismatch
from .params import RingParams
from .ring import RingElement


@dataclass(frozen=True)
class ActionVector:
    params: RingParams
    comps: tuple  # comps[i] in Z_{p^(i+1)}

    def __post_init__(self):
        mods = self.params.moduli
        if len(self.comps) != self.params.m:
            raise InvariantViolation(f"expected {self.params.m} components")
        for i, v in enumerate(self.comps):
            if not (0 <= v < mods[i]):
                raise InvariantViolation(
                    f"component {i + 1} = {v} out of range [0, p^{i + 1})"
                )

    def _check_params(self, other):
        if self.params != other.params:
            raise ParamsMismatch("vectors built over different (p, m)")

    def __add__(self, other: "ActionVector") -> "ActionVector":
        self._check_params(other)
        mods = self.params.moduli
        return ActionVector(
            self.params,
            tuple((a + b) % mods[i] for i, (a, b) in enumerate(zip(self.comps, other.comps))),
        )

    def __sub__(self, other: "ActionVector") -> "ActionVector":
        self._check_params(other)
        mods = self.params.moduli
        return ActionVector(
            self.params,
            tuple((a - b) % mods[i] for i, (a, b) in enumerate(zip(self.comps, other.comps))),
        )


def vector(params: RingParams, raw) -> ActionVector:
    mods = params.moduli
    return ActionVector(params, tuple(int(v) % mods[i] for i, v in enumerate(raw)))


def zero_vector(params: RingParams) -> ActionVector:
    return ActionVector(params, tuple(0 for _ in range(params.m)))


def act(mat: RingElement, v: ActionVector) -> ActionVector:
    """Left action: component i of the matrix-vector product, reduced mod p^i.

    This is exactly the ring's own row arithmetic applied to a single column,
    so (A*B) acting equals A acting after B.
    """
    if mat.params != v.params:
        raise ParamsMismatch("action across different (p, m)")
    m = mat.params.m
    mods = mat.params.moduli
    comps = tuple(
        sum(mat.rows[i][k] * v.comps[k] for k in range(m)) % mods[i]
        for i in range(m)
    )
    return ActionVector(mat.params, comps)


def vec_random(params: RingParams, rng) -> ActionVector:
    return ActionVector(
        params, tuple(rng.randrange(params.moduli[i]) for i in range(params.m))
    )
