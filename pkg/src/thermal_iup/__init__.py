"""Thermal seeding of a nonlinear interferometer used for imaging with undetected photons.

Three independent engines compute the visible-mode photon number: the
closed form (:mod:`.interferometer`), a Gaussian covariance engine
(:mod:`.gaussian`) and a truncated Fock-space oracle (:mod:`.fock`).
:mod:`.blackbody` supplies thermal occupations and detector background.
"""

__version__ = "0.1.0"

from .exceptions import CutoffGuardError, DomainError  # noqa: E402
from .interferometer import InterferometerParams, VisibilityResult  # noqa: E402

__all__ = ["CutoffGuardError", "DomainError", "InterferometerParams", "VisibilityResult", "__version__"]
