"""Weighted composition operators on Dirichlet, Hardy and Bergman coefficient spaces."""
from .blaschke import BlaschkeProduct, decompose, frame_bounds, reconstruct, tm_basis
from .moebius import Moebius, classify, derivative_sup, iterate
from .series import Series, Symbol
from .spaces import BERGMAN, DIRICHLET, HARDY, SpaceWeight, multiplier_norm
from .spectra import eig_cloud, predicted_spectrum, radius_sequence, spectrum_report
from .wco import Wco, check_invertible, compress, power, weight_iterate

__all__ = [
    "BERGMAN", "DIRICHLET", "HARDY", "BlaschkeProduct", "Moebius", "Series", "SpaceWeight", "Symbol", "Wco",
    "check_invertible", "classify", "compress", "decompose", "derivative_sup", "eig_cloud", "frame_bounds",
    "iterate", "multiplier_norm", "power", "predicted_spectrum", "radius_sequence", "reconstruct",
    "spectrum_report", "tm_basis", "weight_iterate",
]
