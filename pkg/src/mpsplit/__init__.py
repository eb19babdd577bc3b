"""Marchenko-Pastur analysis of dense-layer weights and MP-guided low-rank layer splitting."""

from .bema import BemaConfig, BemaResult, FitReport, bema_fit, goodness_of_fit, spike_count
from .dataio import (
    Dataset,
    SpikedMatrixSpec,
    gen_spiked,
    load_checkpoint,
    load_mnist,
    save_checkpoint,
)
from .mp import MPParams, TWQuantileTable, mp_cdf, mp_edges, mp_pdf, mp_quantile, tw1_quantile
from .nn import (
    Layer,
    Network,
    cross_entropy,
    evaluate,
    forward,
    init_network,
    param_count,
    replace_layer,
    sgd_step,
    softmax,
)
from .spectral import Esd, empirical_cdf, symmetrized_spectrum
from .svdprune import SplitDecision, SplitResult, SvdFactors, decompose, plan_split, split

__version__ = "0.1.0"
