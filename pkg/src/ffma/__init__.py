"""Finite-field multiple-access coding over GF(2^m) with a GMAC simulator."""

from .analysis import FblParams, fbl_rate_bound, gain_figures
from .baseline_aloha import AlohaConfig, aloha_receive, aloha_transmit
from .channel import GmacChannel, add_awgn, superimpose
from .ep_code import (
    ElementPair,
    EpSet,
    check_uspm,
    encode_user_sequence,
    f_b2q,
    f_q2b,
    ffsp,
    orthogonal_ep_set,
)
from .experiment import BerPoint, ExperimentSpec, emit_plot_data, run_experiment
from .ffma_system import (
    FrameResult,
    SystemConfig,
    cfsp_posterior,
    df_transmit,
    make_system,
    pa_power_allocation,
    pa_transmit,
    receive,
    sf_transmit,
    simulate_frame,
    sum_pattern_model,
)
from .gf2m import BasisGF2m, GF2m, build_field, field_for
from .linear_code import (
    LinearCode,
    ParityCheckMatrix,
    SystematicGenerator,
    bp_decode,
    encode,
    ldpc_construct,
    load_alist,
    repetition_encode,
    repetition_soft_decode,
    save_alist,
)

__version__ = "0.1.0"
