"""Error-rate analysis of decode-and-forward relay networks over η–μ fading."""
from .errors import AccuracyError, CapacityError, DomainError, UnsupportedError
from .fading import (
    EtaMuParams,
    Format,
    LinkParams,
    amount_of_fading,
    amount_of_fading_from_mgf,
    hH_from_eta,
    hoyt,
    mgf,
    nakagami,
    pdf_snr,
    rayleigh,
    sample_snr,
)
from .montecarlo import SimConfig, SimResult, detect_symbol, simulate_hop_ser, simulate_ser
from .network import Modulation, NetworkModel, PowerAllocation, Scheme, db_to_lin, epa, lin_to_db
from .power import OpaReport, kkt_residual, optimize_power, verify_convexity
from .ser import (
    Method,
    SerResult,
    a_coeff_relay_dest,
    a_coeff_source_relay,
    asymptotic_ser,
    cond_error,
    cond_error_mpsk,
    cond_error_mqam,
    end_to_end_ser,
    mrc_mgf,
    relay_decode_error,
)
from .special import FdArgs, gauss_2f1, lauricella_fd, log_gamma, tanh_sinh

__version__ = "1.0.0"
