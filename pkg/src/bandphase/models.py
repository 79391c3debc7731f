"""Parametric Bloch Hamiltonian families for 1D periodic lattices.

Three model families are supported:

* ``SshModel`` -- two-site tight-binding chain with alternating hoppings
  v (intracell) and w (intercell).  The Bloch matrix off-diagonal is
  ``-(v e^{i kappa b} + w e^{i kappa (b - a)})`` and therefore depends on
  the intracell atom separation b.  Two basis conventions are first-class:
  ``"lattice"`` ignores the absolute orbital positions, ``"cell"`` embeds
  the orbitals at (r_alpha, r_alpha + b).  The 2x2 matrix is identical in
  both conventions (absolute positions cancel from its single off-diagonal
  element); the embedding enters the periodic-gauge endpoint map and the
  spatial-translation behavior, which is exactly where the Zak phase picks
  up its convention dependence.
* ``KitaevModel`` -- 1D p-wave superconductor in the Majorana 2x2 Bloch
  form, off-diagonal X + iY with X = (Delta/2) sin(kappa a) and
  Y = eps/4 - (J/2) cos(kappa a).
* ``ContinuumModel`` -- plane-wave discretization of
  (p + kappa)^2 / (2 mu) + V(x) with a real periodic potential given by
  Fourier components V_g (V_{-g} = conj(V_g) enforced).

Natural units hbar = e = 1; defaults a = 1, mu = 1.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "CELL_PERIODIC",
    "LATTICE_PERIODIC",
    "SshModel",
    "KitaevModel",
    "ContinuumModel",
    "BlochModel",
    "band_count",
    "bloch_matrix",
    "band_states",
    "band_energies",
    "min_gap",
    "translate",
    "orbital_offsets",
    "periodic_gauge_image",
    "ssh_obc_hamiltonian",
    "zero_mode_count",
]

CELL_PERIODIC = "cell"
LATTICE_PERIODIC = "lattice"


@dataclass(frozen=True)
class SshModel:
    v: float
    w: float
    b: float
    a: float = 1.0
    r_alpha: float = 0.0
    convention: str = CELL_PERIODIC

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("lattice constant a must be positive")
        if not 0 < self.b < self.a:
            raise ValueError(f"intracell separation must satisfy 0 < b < a, got b={self.b}")
        if self.v < 0 or self.w < 0:
            raise ValueError("hopping amplitudes v, w must be non-negative")
        if self.v == 0 and self.w == 0:
            raise ValueError("v and w cannot both vanish")
        if self.convention not in (CELL_PERIODIC, LATTICE_PERIODIC):
            raise ValueError(f"unknown basis convention {self.convention!r}")

    @property
    def at_convention_boundary(self) -> bool:
        """True exactly at b = a/2, where the two phase regimes meet."""
        return 2.0 * self.b == self.a


@dataclass(frozen=True)
class KitaevModel:
    eps: float
    J: float
    Delta: float
    a: float = 1.0

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("lattice constant a must be positive")


@dataclass(frozen=True)
class ContinuumModel:
    fourier: tuple
    a: float = 1.0
    mu: float = 1.0
    n_max: int = 16

    def __post_init__(self):
        if self.a <= 0 or self.mu <= 0:
            raise ValueError("a and mu must be positive")
        if self.n_max < 1:
            raise ValueError("plane-wave cutoff n_max must be >= 1")
        comps: dict[int, complex] = {}
        for g, vg in self.fourier:
            g = int(g)
            vg = complex(vg)
            if abs(g) > 2 * self.n_max:
                raise ValueError(
                    f"Fourier index {g} not representable with n_max={self.n_max}"
                )
            if g in comps and abs(comps[g] - vg) > 1e-12:
                raise ValueError(f"conflicting values for Fourier component g={g}")
            comps[g] = vg
        if 0 in comps and abs(comps[0].imag) > 1e-12:
            raise ValueError("V_0 must be real for a real potential")
        for g, vg in list(comps.items()):
            if g == 0:
                continue
            if -g in comps:
                if abs(comps[-g] - vg.conjugate()) > 1e-12:
                    raise ValueError(
                        f"V_{-g} must equal conj(V_{g}) for a real potential"
                    )
            else:
                comps[-g] = vg.conjugate()
        canon = tuple(sorted((g, complex(vg)) for g, vg in comps.items()))
        object.__setattr__(self, "fourier", canon)

    def fourier_component(self, g: int) -> complex:
        for gi, vg in self.fourier:
            if gi == g:
                return vg
        return 0.0 + 0.0j


BlochModel = Union[SshModel, KitaevModel, ContinuumModel]


def band_count(model: BlochModel) -> int:
    if isinstance(model, ContinuumModel):
        return 2 * model.n_max + 1
    return 2


def _offdiag(model, kappa):
    """Off-diagonal element(s) of the 2x2 Bloch matrix; vectorized in kappa."""
    k = np.asarray(kappa, dtype=float)
    if isinstance(model, SshModel):
        return -(model.v * np.exp(1j * k * model.b)
                 + model.w * np.exp(1j * k * (model.b - model.a)))
    if isinstance(model, KitaevModel):
        x = 0.5 * model.Delta * np.sin(k * model.a)
        y = 0.25 * model.eps - 0.5 * model.J * np.cos(k * model.a)
        return x + 1j * y
    raise TypeError(f"{type(model).__name__} is not a two-band lattice model")


def _potential_matrix(model: ContinuumModel) -> np.ndarray:
    n = 2 * model.n_max + 1
    v = np.zeros((n, n), dtype=complex)
    idx = np.arange(n) - model.n_max
    for i in range(n):
        for j in range(n):
            v[i, j] = model.fourier_component(int(idx[i] - idx[j]))
    return v


def bloch_matrix(model: BlochModel, kappa: float) -> np.ndarray:
    """Bloch Hamiltonian H(kappa) as a dense Hermitian matrix."""
    if not math.isfinite(kappa):
        raise ValueError("kappa must be finite")
    if isinstance(model, ContinuumModel):
        g = 2.0 * math.pi * (np.arange(2 * model.n_max + 1) - model.n_max) / model.a
        kinetic = (g + kappa) ** 2 / (2.0 * model.mu)
        return _potential_matrix(model) + np.diag(kinetic).astype(complex)
    h = complex(_offdiag(model, kappa))
    return np.array([[0.0, h], [np.conj(h), 0.0]], dtype=complex)


def band_energies(model: BlochModel, kappas) -> np.ndarray:
    """Band energies on a kappa grid, shape (len(kappas), band_count)."""
    k = np.atleast_1d(np.asarray(kappas, dtype=float))
    if isinstance(model, ContinuumModel):
        pot = _potential_matrix(model)
        g = 2.0 * math.pi * (np.arange(2 * model.n_max + 1) - model.n_max) / model.a
        out = np.empty((k.size, g.size))
        for i, kappa in enumerate(k):
            h = pot + np.diag((g + kappa) ** 2 / (2.0 * model.mu))
            out[i] = np.linalg.eigvalsh(h)
        return out
    e = np.abs(_offdiag(model, k))
    return np.stack([-e, e], axis=1)


def band_states(model: BlochModel, band: int, kappas) -> np.ndarray:
    """Normalized eigenvectors of H(kappa) for one band, one row per kappa.

    Each point is diagonalized independently; no phase smoothing is applied.
    """
    k = np.atleast_1d(np.asarray(kappas, dtype=float))
    nb = band_count(model)
    if not 0 <= band < nb:
        raise ValueError(f"band index {band} outside 0..{nb - 1}")
    if isinstance(model, ContinuumModel):
        pot = _potential_matrix(model)
        g = 2.0 * math.pi * (np.arange(nb) - model.n_max) / model.a
        states = np.empty((k.size, nb), dtype=complex)
        for i, kappa in enumerate(k):
            h = pot + np.diag((g + kappa) ** 2 / (2.0 * model.mu))
            _, vec = np.linalg.eigh(h)
            states[i] = vec[:, band]
        return states
    h = _offdiag(model, k)
    r = np.abs(h)
    if band == 0:
        states = np.stack([-h, r], axis=1)
    else:
        states = np.stack([r.astype(complex), np.conj(h)], axis=1)
    norm = np.sqrt(2.0) * r
    return states / norm[:, None]


def min_gap(model: BlochModel, band: int, M: int) -> float:
    """Minimum distance between the band and its nearest neighbor band.

    Sampled on a uniform grid of M+1 kappa points across [0, 2*pi/a].
    """
    if M < 16:
        raise ValueError("need M >= 16 grid points for a meaningful gap scan")
    nb = band_count(model)
    if not 0 <= band < nb:
        raise ValueError(f"band index {band} outside 0..{nb - 1}")
    k = np.linspace(0.0, 2.0 * math.pi / model.a, M + 1)
    e = band_energies(model, k)
    gaps = []
    if band > 0:
        gaps.append(e[:, band] - e[:, band - 1])
    if band < nb - 1:
        gaps.append(e[:, band + 1] - e[:, band])
    return float(np.min(np.concatenate(gaps)))


def translate(model: BlochModel, d: float) -> BlochModel:
    """Shift the spatial origin by d.

    SSH moves the orbital embedding (r_alpha -> r_alpha + d, b unchanged);
    the continuum potential picks up V_g -> V_g e^{-i g (2 pi / a) d}.  The
    Kitaev model carries no intracell offsets and is returned unchanged.
    """
    if isinstance(model, SshModel):
        return dataclasses.replace(model, r_alpha=model.r_alpha + d)
    if isinstance(model, ContinuumModel):
        shifted = tuple(
            (g, vg * np.exp(-1j * g * 2.0 * math.pi * d / model.a))
            for g, vg in model.fourier
        )
        return dataclasses.replace(model, fourier=shifted)
    return model


def orbital_offsets(model) -> np.ndarray:
    """Intracell positions of the two orbitals used for Bloch embedding."""
    if isinstance(model, SshModel):
        if model.convention == CELL_PERIODIC:
            return np.array([model.r_alpha, model.r_alpha + model.b])
        return np.array([0.0, model.b])
    if isinstance(model, KitaevModel):
        return np.zeros(2)
    raise TypeError("orbital offsets are defined for two-band lattice models only")


def periodic_gauge_image(model: BlochModel, u0: np.ndarray) -> np.ndarray:
    """Image of the kappa = 0 state under the periodic-gauge endpoint map.

    For lattice models this applies the component-wise phases
    e^{-i (2 pi / a) rho_s} of the orbital embedding; for the plane-wave
    basis it shifts the components by one reciprocal-lattice index.
    """
    u0 = np.asarray(u0, dtype=complex)
    if isinstance(model, ContinuumModel):
        out = np.zeros_like(u0)
        out[:-1] = u0[1:]
        return out
    phases = np.exp(-1j * 2.0 * math.pi * orbital_offsets(model) / model.a)
    return u0 * phases


def ssh_obc_hamiltonian(model: SshModel, cells: int) -> np.ndarray:
    """Real-space SSH Hamiltonian with open ends, dimension 2*cells."""
    if not isinstance(model, SshModel):
        raise TypeError("open-boundary Hamiltonian is defined for the SSH model")
    if not 1 <= cells <= 256:
        raise ValueError("cells must lie in 1..256")
    n = 2 * cells
    h = np.zeros((n, n))
    for m in range(cells):
        h[2 * m, 2 * m + 1] = h[2 * m + 1, 2 * m] = -model.v
        if m + 1 < cells:
            h[2 * m + 1, 2 * m + 2] = h[2 * m + 2, 2 * m + 1] = -model.w
    return h


def zero_mode_count(spectrum, threshold: float) -> int:
    """Number of eigenvalues with |E| below the threshold."""
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    return int(np.count_nonzero(np.abs(np.asarray(spectrum)) < threshold))
