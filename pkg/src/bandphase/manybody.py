"""Filled-band many-particle geometric phase and its Slater-determinant oracle.

A band filled by N fermions (one per cell, wave vectors k_l = 2*pi*l/(N*a))
acquires, over one flux step, the single-particle band phase plus a Fermi
statistics contribution of pi for even N: the occupied set returns to
itself cyclically shifted by one slot, and the column reordering of the
Slater determinant contributes the sign of an N-cycle, (-1)^(N-1).

``slater_cycle_oracle`` checks this by brute force: it builds the N
occupied orbitals on an explicit N-cell lattice (dimension 2N), transports
each one through a single flux step k_l -> k_{l+1} with a fine chain of
projections (energies never enter, so the result is purely geometric),
applies the winding-one gauge relabeling to the initial set, and reads the
phase off the determinant of the N x N overlap matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularOverlapMatrix
from .models import (
    BlochModel,
    ContinuumModel,
    band_states,
    orbital_offsets,
)
from .numerics import Angle

__all__ = ["FilledBandSpec", "filled_band_phase", "slater_cycle_oracle"]

MAX_ORACLE_PARTICLES = 8


@dataclass(frozen=True)
class FilledBandSpec:
    """Filled band of N particles (= N cells) with a transport resolution."""

    model: BlochModel
    band: int
    n_particles: int
    m_per_step: int = 64

    def __post_init__(self):
        if self.n_particles < 1:
            raise ValueError("need at least one particle")
        if self.m_per_step < 4:
            raise ValueError("transport sub-chain needs m_per_step >= 4")
        if isinstance(self.model, ContinuumModel):
            raise TypeError("the filled-band oracle supports two-band lattice models")


def filled_band_phase(gamma_g, n_particles: int) -> Angle:
    """Filled-band phase: single-particle phase plus pi for even N."""
    if n_particles < 1:
        raise ValueError("need at least one particle")
    return Angle(float(gamma_g) + ((n_particles - 1) % 2) * math.pi)


def slater_cycle_oracle(spec: FilledBandSpec, gauge_phases=None) -> Angle:
    """Brute-force filled-band phase from an explicit Slater determinant.

    ``gauge_phases`` optionally multiplies each occupied orbital by a unit
    phase before the cycle; the determinant argument must not care.
    """
    n = spec.n_particles
    if n > MAX_ORACLE_PARTICLES:
        raise ValueError(
            f"oracle is desk-scale only (N <= {MAX_ORACLE_PARTICLES}), got N={n}"
        )
    model = spec.model
    a = model.a
    step = 2.0 * math.pi / (n * a)
    k_occ = step * np.arange(n)

    occupied = band_states(model, spec.band, k_occ)
    if gauge_phases is not None:
        phases = np.asarray(gauge_phases, dtype=float)
        if phases.shape != (n,):
            raise ValueError(f"need {n} gauge phases")
        occupied = occupied * np.exp(1j * phases)[:, None]

    # transport each occupied 2-vector through one flux step by projection
    transported = np.empty_like(occupied)
    for l in range(n):
        sub = np.linspace(k_occ[l], k_occ[l] + step, spec.m_per_step + 1)
        w = band_states(model, spec.band, sub)
        t = occupied[l]
        for j in range(1, spec.m_per_step + 1):
            t = w[j] * np.vdot(w[j], t)
        transported[l] = t

    # embed on the explicit N-cell lattice: site (m, s) at x = m*a + rho_s
    rho = orbital_offsets(model)
    x = (np.arange(n)[:, None] * a + rho[None, :]).reshape(-1)
    plane = np.exp(1j * np.outer(k_occ, x)) / math.sqrt(n)   # (n, 2n)
    content = np.repeat(occupied[:, None, :], n, axis=1).reshape(n, -1)
    content_t = np.repeat(transported[:, None, :], n, axis=1).reshape(n, -1)
    final = plane * content_t

    # One flux step shifts every wave-vector slot down by one; the endpoint
    # identification k_N == k_0 is a pure index wrap, so the initial set is
    # re-attached to the shifted plane-wave slots with its content (and the
    # eigensolver's phases) untouched.  Distinct slots are orthogonal, which
    # is what puts the cyclic-permutation structure into the determinant.
    relabeled = np.roll(plane, 1, axis=0) * content
    overlap = relabeled.conj() @ final.T
    det = complex(np.linalg.det(overlap))
    if abs(det) < 1e-10:
        raise SingularOverlapMatrix(
            f"|det| = {abs(det):.3e}; transport resolution too coarse"
        )
    return Angle(float(np.angle(det)))
