"""Gauge-invariant band phases from discrete overlap products.

The central object is a chain of independently diagonalized band
eigenvectors u_0 ... u_M sampled along kappa in [0, 2*pi/a].  The cyclic
product of successive overlaps, closed with <u_0|u_M>, is the Bargmann
invariant: every single-state phase appears once as a bra and once as a
ket, so its argument is exactly gauge independent.  That argument is the
Pancharatnam-Zak phase of the band.  Dropping the closing factor gives the
open product whose argument is the Zak phase; it depends on the endpoint
convention and on the unit-cell origin, which is what the comparison
operations here are designed to expose.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    GapClosure,
    NonUnitary,
    OrthogonalStates,
    OverlapTooSmall,
    ZeroOverlap,
)
from .models import (
    BlochModel,
    SshModel,
    band_count,
    band_energies,
    band_states,
    periodic_gauge_image,
)
from .numerics import Angle

__all__ = [
    "BargmannChain",
    "PhaseResult",
    "build_chain",
    "bargmann_invariant",
    "pancharatnam_zak",
    "zak_phase",
    "apply_gauge",
    "apply_static_unitary",
    "pancharatnam_total",
    "RAW_EIGENVECTOR",
    "PERIODIC_GAUGE",
]

RAW_EIGENVECTOR = "raw"
PERIODIC_GAUGE = "periodic"

BOUNDARY_FLAG = "BoundaryFlag"
NON_UNIFORM_GRID = "NonUniformGrid"

DEFAULT_OVERLAP_FLOOR = 0.5
DEFAULT_GAP_FLOOR = 1e-8


@dataclass(frozen=True)
class BargmannChain:
    """Eigenvector samples u_0 ... u_M of one band along the zone."""

    model: BlochModel
    band: int
    M: int
    grid: np.ndarray
    states: np.ndarray
    min_gap: float
    min_overlap: float
    flags: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class PhaseResult:
    """A computed phase plus the diagnostics needed to trust it."""

    gamma: Angle
    kind: str
    M: int
    min_overlap: float
    min_gap: float
    convention: str
    raw: float
    flags: tuple = ()


def _successive_overlaps(states: np.ndarray) -> np.ndarray:
    """<u_{j+1}|u_j> for j = 0..M-1."""
    return np.einsum("ij,ij->i", states[1:].conj(), states[:-1])


def build_chain(
    model: BlochModel,
    band: int,
    M: int,
    grid=None,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
    gap_floor: float = DEFAULT_GAP_FLOOR,
) -> BargmannChain:
    """Diagonalize the band on a kappa grid and bundle the samples.

    Eigenvectors are computed independently at each grid point with
    whatever phase the eigensolver produces.  Raises GapClosure when the
    band approaches a neighbor below ``gap_floor`` anywhere on the grid and
    OverlapTooSmall when successive samples are nearly orthogonal.
    """
    if M < 8:
        raise ValueError("need M >= 8 chain segments")
    edge = 2.0 * math.pi / model.a
    if grid is None:
        grid = np.linspace(0.0, edge, M + 1)
        uniform = True
    else:
        grid = np.asarray(grid, dtype=float)
        if grid.shape != (M + 1,):
            raise ValueError(f"grid must have M+1 = {M + 1} points")
        if not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        if abs(grid[0]) > 1e-12 or abs(grid[-1] - edge) > 1e-9 * edge:
            raise ValueError("grid must run from 0 to 2*pi/a")
        spacing = np.diff(grid)
        uniform = np.ptp(spacing) <= 1e-12 * spacing.max()

    energies = band_energies(model, grid)
    nb = band_count(model)
    gaps = []
    if band > 0:
        gaps.append(energies[:, band] - energies[:, band - 1])
    if band < nb - 1:
        gaps.append(energies[:, band + 1] - energies[:, band])
    chain_gap = float(np.min(np.concatenate(gaps)))
    if chain_gap < gap_floor:
        raise GapClosure(
            f"band {band} gap {chain_gap:.3e} below floor {gap_floor:.3e} on the grid"
        )

    states = band_states(model, band, grid)
    overlaps = np.abs(_successive_overlaps(states))
    min_overlap = float(overlaps.min())
    if min_overlap <= overlap_floor:
        raise OverlapTooSmall(
            f"successive overlap {min_overlap:.3f} <= floor {overlap_floor}; increase M"
        )

    flags = set()
    if isinstance(model, SshModel) and model.at_convention_boundary:
        flags.add(BOUNDARY_FLAG)
    if not uniform:
        flags.add(NON_UNIFORM_GRID)
    return BargmannChain(
        model=model,
        band=band,
        M=M,
        grid=grid,
        states=states,
        min_gap=chain_gap,
        min_overlap=min_overlap,
        flags=frozenset(flags),
    )


def bargmann_invariant(chain: BargmannChain) -> complex:
    """Cyclic overlap product <u_0|u_M><u_M|u_{M-1}> ... <u_1|u_0>."""
    factors = _successive_overlaps(chain.states)
    closing = np.vdot(chain.states[0], chain.states[-1])
    smallest = min(float(np.abs(factors).min()), abs(closing))
    if smallest < 1e-14:
        raise ZeroOverlap(
            f"overlap factor modulus {smallest:.3e} too small; phase undefined"
        )
    return complex(np.prod(factors) * closing)


def _phase_flags(chain: BargmannChain) -> tuple:
    return tuple(sorted(chain.flags))


def pancharatnam_zak(
    model: BlochModel,
    band: int = 0,
    M: int = 4096,
    grid=None,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
    gap_floor: float = DEFAULT_GAP_FLOOR,
) -> PhaseResult:
    """Gauge- and translation-invariant geometric phase of a band.

    Computed as the argument of the Bargmann invariant over the zone,
    including the closing overlap between the independently diagonalized
    endpoint states (no periodic-gauge identification is imposed, so the
    arbitrary endpoint phase drops out by construction).
    """
    chain = build_chain(model, band, M, grid=grid,
                        overlap_floor=overlap_floor, gap_floor=gap_floor)
    raw = float(np.angle(bargmann_invariant(chain)))
    return PhaseResult(
        gamma=Angle(raw),
        kind="pancharatnam_zak",
        M=chain.M,
        min_overlap=chain.min_overlap,
        min_gap=chain.min_gap,
        convention=f"{type(model).__name__}:cyclic",
        raw=raw,
        flags=_phase_flags(chain),
    )


def zak_phase(chain: BargmannChain, endpoint: str = PERIODIC_GAUGE) -> PhaseResult:
    """Argument of the open overlap product under an endpoint convention.

    ``"raw"`` keeps the chain's independently diagonalized u_M (its
    arbitrary phase enters the result -- deliberately); ``"periodic"``
    replaces u_M by the periodic-gauge image of u_0.
    """
    if endpoint not in (RAW_EIGENVECTOR, PERIODIC_GAUGE):
        raise ValueError(f"unknown endpoint convention {endpoint!r}")
    factors = _successive_overlaps(chain.states)
    if endpoint == PERIODIC_GAUGE:
        u_end = periodic_gauge_image(chain.model, chain.states[0])
        factors = factors.copy()
        factors[-1] = np.vdot(u_end, chain.states[-2])
    smallest = float(np.abs(factors).min())
    if smallest < 1e-14:
        raise ZeroOverlap(
            f"overlap factor modulus {smallest:.3e} too small; phase undefined"
        )
    raw = float(np.angle(np.prod(factors)))
    return PhaseResult(
        gamma=Angle(raw),
        kind="zak",
        M=chain.M,
        min_overlap=chain.min_overlap,
        min_gap=chain.min_gap,
        convention=f"endpoint={endpoint}",
        raw=raw,
        flags=_phase_flags(chain),
    )


def apply_gauge(chain: BargmannChain, gauge) -> BargmannChain:
    """Multiply each u_j by e^{i Lambda_j}; overlap moduli are untouched."""
    lam = np.asarray(gauge, dtype=float)
    if lam.shape != (chain.M + 1,):
        raise ValueError(f"gauge function must have M+1 = {chain.M + 1} entries")
    if not np.all(np.isfinite(lam)):
        raise ValueError("gauge function entries must be finite")
    states = chain.states * np.exp(1j * lam)[:, None]
    return dataclasses.replace(chain, states=states)


def apply_static_unitary(chain: BargmannChain, u: np.ndarray) -> BargmannChain:
    """Apply one fixed unitary to every chain state.

    The transformed states are generally no longer eigenvectors of the
    model; the chain is a test article whose overlaps (and hence the cyclic
    phase) must be preserved.
    """
    u = np.asarray(u, dtype=complex)
    dim = chain.states.shape[1]
    if u.shape != (dim, dim):
        raise ValueError(f"unitary must be {dim}x{dim}")
    defect = np.abs(u.conj().T @ u - np.eye(dim)).max()
    if defect > 1e-12:
        raise NonUnitary(f"U^dag U deviates from identity by {defect:.3e}")
    return dataclasses.replace(chain, states=chain.states @ u.T)


def pancharatnam_total(u_first: np.ndarray, u_last: np.ndarray) -> Angle:
    """Total phase Arg <u_first|u_last>; needs non-orthogonal states."""
    overlap = np.vdot(np.asarray(u_first, dtype=complex),
                      np.asarray(u_last, dtype=complex))
    if abs(overlap) <= 1e-12:
        raise OrthogonalStates(
            "total phase undefined: initial and final states are orthogonal"
        )
    return Angle(float(np.angle(overlap)))
