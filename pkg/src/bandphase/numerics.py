"""Angle arithmetic, small Hermitian eigensolvers, and winding numbers.

Everything here is a pure function of its inputs.  Eigenvector phases are
left exactly as the algorithm produces them: downstream gauge-invariant
constructions must not care, and an arbitrary phase keeps the tests honest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateSpectrum, NoConvergence, UndersampledRing

TWO_PI = 2.0 * math.pi

__all__ = [
    "Angle",
    "Eigenpair",
    "wrap_angle",
    "angle_distance",
    "herm_eig2",
    "herm_eig_n",
    "winding_number",
]


def _wrap(x: float) -> float:
    # remainder() lands in [-pi, pi]; fold the lower boundary onto +pi
    w = math.remainder(x, TWO_PI)
    if w <= -math.pi:
        w += TWO_PI
    return w


@dataclass(frozen=True)
class Angle:
    """A phase with mod-2pi semantics; the stored value lies in (-pi, pi]."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError(f"angle must be finite, got {v!r}")
        object.__setattr__(self, "value", _wrap(v))

    @property
    def pi_units(self) -> float:
        """Value expressed in units of pi (quantized phases read 0.0 / 1.0)."""
        return self.value / math.pi

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return f"Angle({self.value:.12g})"


def wrap_angle(x: float) -> Angle:
    """Canonical representative of x modulo 2pi, in (-pi, pi]."""
    return Angle(x)


def angle_distance(a, b) -> float:
    """Distance between two phases on the circle, in [0, pi]."""
    return abs(_wrap(float(a) - float(b)))


class Eigenpair(NamedTuple):
    energy: float
    vector: np.ndarray


def _check_hermitian(h: np.ndarray, atol: float) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    dev = np.abs(h - h.conj().T).max()
    if dev > atol:
        raise ValueError(f"matrix is not Hermitian: max |H - H^dag| = {dev:.3e}")
    return 0.5 * (h + h.conj().T)


def herm_eig2(h: np.ndarray, degeneracy_threshold: float = 1e-12):
    """Closed-form eigendecomposition of a 2x2 Hermitian matrix.

    Returns two Eigenpairs sorted by ascending energy.  Raises
    DegenerateSpectrum when the level splitting falls below
    ``degeneracy_threshold`` (the eigenvector directions are then noise).
    """
    h = _check_hermitian(h, atol=1e-12 * max(1.0, float(np.abs(h).max())))
    if h.shape != (2, 2):
        raise ValueError(f"herm_eig2 needs a 2x2 matrix, got {h.shape}")
    p = h[0, 0].real
    q = h[1, 1].real
    c = h[0, 1]
    mean = 0.5 * (p + q)
    d = 0.5 * (p - q)
    r = math.hypot(d, abs(c))
    if 2.0 * r < degeneracy_threshold:
        raise DegenerateSpectrum(
            f"level splitting {2 * r:.3e} below threshold {degeneracy_threshold:.3e}"
        )
    lo, hi = mean - r, mean + r
    # two algebraic forms per eigenvector; pick the better-conditioned one
    v_lo = np.array([-c, d + r]) if d >= 0 else np.array([d - r, np.conj(c)])
    v_hi = np.array([d + r, np.conj(c)]) if d >= 0 else np.array([c, r - d])
    v_lo = v_lo / np.linalg.norm(v_lo)
    v_hi = v_hi / np.linalg.norm(v_hi)
    return Eigenpair(lo, v_lo), Eigenpair(hi, v_hi)


def herm_eig_n(h: np.ndarray, tol: float = 1e-10) -> list[Eigenpair]:
    """Full eigendecomposition of a dense Hermitian matrix (desk scale).

    Backed by LAPACK through numpy; the result is verified against ``tol``:
    every eigenpair must satisfy ||H v - E v|| <= tol * ||H|| and the
    eigenvector set must be orthonormal, otherwise NoConvergence is raised.
    """
    scale_guess = float(np.max(np.abs(np.asarray(h)))) if np.size(h) else 1.0
    h = _check_hermitian(h, atol=max(1e-12, 1e-12 * scale_guess))
    n = h.shape[0]
    if n > 512:
        raise ValueError(f"dimension {n} exceeds the supported desk scale (512)")
    try:
        energies, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    scale = float(np.linalg.norm(h)) or 1.0
    residual = np.abs(h @ vectors - vectors * energies).max()
    ortho = np.abs(vectors.conj().T @ vectors - np.eye(n)).max()
    if residual > max(tol, 1e-14) * scale or ortho > 1e-10:
        raise NoConvergence(
            f"residual {residual:.3e} (scale {scale:.3e}) or orthonormality "
            f"defect {ortho:.3e} exceeds tolerance"
        )
    return [Eigenpair(float(energies[i]), vectors[:, i]) for i in range(n)]


def winding_number(ring, step_threshold: float = math.pi / 2) -> int:
    """Number of phase revolutions of a closed ring of unit-modulus numbers.

    The ring is traversed cyclically; each step must stay below
    ``step_threshold`` in wrapped phase, otherwise the sampling cannot
    distinguish windings and UndersampledRing is raised.
    """
    z = np.asarray(ring, dtype=complex)
    if z.ndim != 1 or z.size < 3:
        raise ValueError("ring must be a 1-d sequence with at least 3 entries")
    moduli = np.abs(z)
    if np.abs(moduli - 1.0).max() > 1e-8:
        raise ValueError("ring entries must have unit modulus")
    steps = np.angle(np.roll(z, -1) * z.conj())
    if np.abs(steps).max() >= step_threshold:
        raise UndersampledRing(
            f"phase step {np.abs(steps).max():.3f} rad >= {step_threshold:.3f}; "
            "sample the ring more densely"
        )
    total = float(steps.sum()) / TWO_PI
    n = round(total)
    if abs(total - n) > 1e-6:
        raise UndersampledRing(f"accumulated phase {total:.6f} turns is not an integer")
    return int(n)
