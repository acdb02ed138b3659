"""Regularized determinants, heat traces and covariance finite parts on the
round sphere and flat rectangular tori.

Surfaces may be passed as ``SurfaceModel`` objects or as spec strings such as
``"sphere:R=1"`` and ``"torus:L1=1,L2=2"``. Result records are plain dicts.
"""

from ._regdet import *  # noqa: F401,F403
from ._regdet import __version__, run  # noqa: F401
