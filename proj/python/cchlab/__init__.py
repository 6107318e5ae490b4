"""Steady states, spectra, continuation and trajectories of the convective
Cahn-Hilliard equation u_t = (delta/2)(u^2)_x + D^6 u - D^4 (u^3 - u)."""

from ._cchlab import *  # noqa: F401,F403
from ._cchlab import __doc__ as _native_doc  # noqa: F401

__version__ = "0.1.0"
