"""Exception types shared across the library."""


class BandphaseError(Exception):
    """Base class for all library-specific failures."""


class DegenerateSpectrum(BandphaseError):
    """Eigenvalues too close for the eigenvector direction to be meaningful."""


class NoConvergence(BandphaseError):
    """The iterative eigensolver failed to reach the requested tolerance."""


class UndersampledRing(BandphaseError):
    """Phase steps around the ring are too large; the winding is ambiguous."""


class GapClosure(BandphaseError):
    """The selected band touches a neighboring band along the path."""


class OverlapTooSmall(BandphaseError):
    """Successive chain states nearly orthogonal; increase M."""


class ZeroOverlap(BandphaseError):
    """An overlap factor vanished; the phase of the product is undefined."""


class NonUnitary(BandphaseError):
    """The supplied matrix is not unitary within tolerance."""


class OrthogonalStates(BandphaseError):
    """Total phase undefined: initial and final states are orthogonal."""


class NormDrift(BandphaseError):
    """State norm drifted beyond tolerance during time integration."""


class SingularOverlapMatrix(BandphaseError):
    """Many-body overlap determinant has vanishing modulus."""
