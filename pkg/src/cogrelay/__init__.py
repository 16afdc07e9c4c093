"""Rate-region toolkit for the causal cognitive relay channel.

Computes, optimizes, verifies and compares achievable rate regions of the
partial decode-forward binning schemes and their Han-Kobayashi extensions,
in both full- and half-duplex modes, together with a MISO broadcast outer
bound, discrete-memoryless evaluation of the underlying regions, and exact
Fourier-Motzkin re-derivation of the published region descriptions.
"""

from .core import (
    ChannelGains,
    GridSpec,
    PowerBudget,
    RatePoint,
    RateRegion,
    binary_entropy,
    gaussian_capacity,
)
from .gaussian_fd import (
    BinningState,
    FdHkPdfBinAlloc,
    FdPdfBinAlloc,
    fd_bin_det_objective,
    fd_hk_bin_det_objective,
    fd_hk_pdf_bin_lambda_star,
    fd_hk_pdf_bin_rates,
    fd_hk_pdf_bin_region,
    fd_max_r1,
    fd_max_r2,
    fd_pdf_bin_lambda_star,
    fd_pdf_bin_rates,
    fd_pdf_bin_region,
    hk_region,
)
from .gaussian_hd import (
    HdHkPdfBinAlloc,
    HdPdfBinAlloc,
    hd_bin_det_objective,
    hd_hk_pdf_bin_rates,
    hd_hk_pdf_bin_region,
    hd_lambda_star,
    hd_max_r1,
    hd_pdf_bin_rates,
    hd_pdf_bin_region,
)
from .outer_bound import MisoBcAlloc, miso_bc_rates, miso_bc_region
from .region_ops import contains, containment_slack, convex_hull, pareto_frontier, region_distance

__version__ = "0.1.0"

__all__ = [
    "ChannelGains",
    "PowerBudget",
    "RatePoint",
    "RateRegion",
    "GridSpec",
    "gaussian_capacity",
    "binary_entropy",
    "BinningState",
    "FdPdfBinAlloc",
    "FdHkPdfBinAlloc",
    "fd_pdf_bin_rates",
    "fd_pdf_bin_lambda_star",
    "fd_bin_det_objective",
    "fd_hk_pdf_bin_rates",
    "fd_hk_pdf_bin_lambda_star",
    "fd_hk_bin_det_objective",
    "fd_pdf_bin_region",
    "fd_hk_pdf_bin_region",
    "hk_region",
    "fd_max_r1",
    "fd_max_r2",
    "HdPdfBinAlloc",
    "HdHkPdfBinAlloc",
    "hd_pdf_bin_rates",
    "hd_hk_pdf_bin_rates",
    "hd_lambda_star",
    "hd_bin_det_objective",
    "hd_pdf_bin_region",
    "hd_hk_pdf_bin_region",
    "hd_max_r1",
    "MisoBcAlloc",
    "miso_bc_rates",
    "miso_bc_region",
    "convex_hull",
    "pareto_frontier",
    "contains",
    "containment_slack",
    "region_distance",
]
