"""Exception and warning types shared across the package."""


class EpchargeError(Exception):
    """Base class for all domain errors raised by this package."""


class ZeroCoupling(EpchargeError):
    """A coupling weight required for the reduction is zero."""


class NegativeDamping(EpchargeError):
    """A computed effective damping rate came out negative (unphysical input)."""


class AsymmetricDetuning(EpchargeError):
    """The detunings violate the antisymmetric-drive frame the closed forms assume."""


class DegenerateSpectrum(EpchargeError):
    """Eigenvalues coalesced; the two-eigenvalue closed form does not apply."""


class NotAtEP(EpchargeError):
    """Parameters do not satisfy the coalescence conditions."""


class AsymmetricParams(EpchargeError):
    """An operation restricted to symmetric damping was called with gamma_a != gamma_b."""


class NotBroken(EpchargeError):
    """An operation restricted to the exponentially growing phase was called outside it."""


class NoBracket(EpchargeError):
    """A sign change could not be bracketed on the search interval."""


class StepUnderflow(EpchargeError):
    """Step halving went below the minimum step; the problem is too stiff as posed."""


class NoThreshold(EpchargeError):
    """The energy never reached the requested threshold within the search guard."""


class SingularProduct(UserWarning):
    """The eigenvalue product is (near) zero; a quadrature fallback was used."""
