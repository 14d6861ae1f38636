"""Matrix elements of x**(-alpha) in the Gol'dman-Krivchenkov basis of
B x**2 + A / x**2, with oracles and a Rayleigh-Ritz solver for the spiked
harmonic oscillator."""

from .errors import DomainDiverges, IndexOutOfTable, InvalidIndex, NoConvergence
from .gk_basis import BasisParams, energy, eval_wavefunction, from_goldman
from .matrix_elements import MatElemQuery, evaluate, matel_gk
from .variational import SpectrumResult, SymMatrix, ground_state_sweep, lambda_sweep

__version__ = "0.1.0"
