"""Public-key protocols over a noncommutative matrix ring with row-wise
prime-power moduli.

Research artifact: no constant-time or side-channel hardening anywhere.
"""

from .attacks import (
    AttackOutcome,
    AttackStatus,
    attack_egdp_via_central,
    attack_sap,
    brute_force_unit_attack,
    egdp_break_from_dhdp_oracle,
    solve_central_dp,
    solve_central_sap,
)
from .center import (
    CentralElement,
    HPolynomial,
    central_expand,
    central_sample,
    count_distinct_G,
    enumerate_center,
    h_poly_sample,
    is_central,
    make_corner_M,
    make_two_entry_M,
    sample_noncentral_commutant,
)
from .dp import (
    DhdpSession,
    EgdpCiphertextAdd,
    EgdpCiphertextXor,
    EgdpPrivateKey,
    EgdpPublicKey,
    dhdp_complete,
    dhdp_init,
    egdp_decrypt_add,
    egdp_decrypt_xor,
    egdp_encrypt_add,
    egdp_encrypt_xor,
    egdp_keygen,
    egdp_validate_key,
)
from .errors import EpmError
from .params import RingParams
from .ring import (
    RingElement,
    commutes,
    element,
    identity,
    random_element,
    zero,
)
from .sap import (
    SapCiphertext,
    SapPrivateKey,
    SapPublicKey,
    sap_decrypt,
    sap_encrypt,
    sap_keygen,
    sap_validate_key,
)
from .vectors import ActionVector, act, vec_random, vector, zero_vector

__version__ = "0.1.0"
