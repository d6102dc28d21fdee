"""Deterministic grids and cell boxes.

Cells are axis-aligned boxes in a parameter space, stored as two arrays of
shape ``(N, m)``: box centers and half-widths. Three parameter spaces are
used:

* wall coordinates ``(Im z1, Re z2, Im z2, ..., Re zn, Im zn)`` of the flat
  wall ``{Re z1 = 0}``;
* the angle of the unit circle (``n = 1`` spheres);
* Hopf coordinates ``(eta, alpha, beta)`` of the unit 3-sphere,
  ``z = (cos(eta) e^{i alpha}, sin(eta) e^{i beta})``.

Every generator emits cells in lexicographic index order, which is the
tie-break order for certified minima.
"""

from __future__ import annotations

import math
from typing import Iterator, Optional, Tuple

import numpy as np

Cells = Tuple[np.ndarray, np.ndarray]

#: Number of cells generated per chunk by the wall grid iterator.
DEFAULT_CHUNK = 1 << 18


# ---------------------------------------------------------------------------
# Coordinate conversions
# ---------------------------------------------------------------------------


def to_real(z: np.ndarray) -> np.ndarray:
    """Embed complex points ``(N, n)`` as real points ``(N, 2n)``."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],), dtype=float)
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def wall_to_complex(coords: np.ndarray) -> np.ndarray:
    """Map wall coordinates ``(N, 2n - 1)`` to complex points ``(N, n)``."""
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    n = (coords.shape[1] + 1) // 2
    z = np.zeros((coords.shape[0], n), dtype=complex)
    z[:, 0] = 1j * coords[:, 0]
    if n > 1:
        z[:, 1:] = coords[:, 1::2] + 1j * coords[:, 2::2]
    return z


def hopf_to_complex(params: np.ndarray) -> np.ndarray:
    """Map Hopf coordinates ``(N, 3)`` to unit vectors in C^2."""
    params = np.atleast_2d(np.asarray(params, dtype=float))
    eta, alpha, beta = params[:, 0], params[:, 1], params[:, 2]
    return np.stack(
        [np.cos(eta) * np.exp(1j * alpha), np.sin(eta) * np.exp(1j * beta)], axis=1
    )


def circle_to_complex(params: np.ndarray) -> np.ndarray:
    """Map circle angles ``(N, 1)`` to unit complex numbers ``(N, 1)``."""
    params = np.atleast_2d(np.asarray(params, dtype=float))
    return np.exp(1j * params[:, :1])


# ---------------------------------------------------------------------------
# Wall grids
# ---------------------------------------------------------------------------


def wall_axis_count(radius: float, h: float) -> int:
    """Number of cells per wall axis for a patch of ``radius`` at step ``h``."""
    return max(1, int(math.ceil(2.0 * radius / h - 1e-12)))


def iter_wall_cells(
    n: int, radius: float, h: float, chunk: int = DEFAULT_CHUNK
) -> Iterator[Cells]:
    """Yield the cells of the wall grid whose bounding ball meets the patch.

    Centers sit at ``-radius + (i + 1/2) h`` along each of the ``2n - 1``
    real wall axes, so the grids at ``h`` and ``h / 2`` are nested.
    """
    m = 2 * n - 1
    count = wall_axis_count(radius, h)
    half_diag = 0.5 * h * math.sqrt(m)
    total = count**m
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        idx = np.stack(np.unravel_index(flat, (count,) * m), axis=1)
        centers = -radius + (idx + 0.5) * h
        keep = np.linalg.norm(centers, axis=1) - half_diag <= radius
        if np.any(keep):
            centers = centers[keep]
            yield centers, np.full_like(centers, 0.5 * h)


def wall_cell_radius(halfwidths: np.ndarray) -> np.ndarray:
    """Half-diagonal of wall boxes."""
    return np.linalg.norm(halfwidths, axis=1)


# ---------------------------------------------------------------------------
# Sphere grids (unit sphere, angular spacing)
# ---------------------------------------------------------------------------


def circle_cells(spacing: float, offset: float = 0.0) -> Cells:
    """Equal arcs of angular width at most ``spacing`` on the unit circle."""
    count = max(1, int(math.ceil(2.0 * math.pi / spacing - 1e-12)))
    width = 2.0 * math.pi / count
    centers = offset + (np.arange(count) + 0.5) * width
    return centers[:, None], np.full((count, 1), 0.5 * width)


def hopf_cells(
    spacing: float, alpha_offset: float = 0.0, beta_offset: float = 0.0
) -> Cells:
    """Hopf-coordinate boxes of the unit 3-sphere with angular size ``spacing``.

    Rings in ``eta`` carry a number of ``alpha`` and ``beta`` subdivisions
    proportional to ``cos(eta)`` and ``sin(eta)``, so the boxes have roughly
    even metric size.
    """
    n_eta = max(1, int(math.ceil(0.5 * math.pi / spacing - 1e-12)))
    d_eta = 0.5 * math.pi / n_eta
    centers = []
    halves = []
    for i in range(n_eta):
        eta = (i + 0.5) * d_eta
        n_a = max(1, int(math.ceil(2.0 * math.pi * math.cos(eta) / spacing - 1e-12)))
        n_b = max(1, int(math.ceil(2.0 * math.pi * math.sin(eta) / spacing - 1e-12)))
        wa = 2.0 * math.pi / n_a
        wb = 2.0 * math.pi / n_b
        a = alpha_offset + (np.arange(n_a) + 0.5) * wa
        b = beta_offset + (np.arange(n_b) + 0.5) * wb
        aa, bb = np.meshgrid(a, b, indexing="ij")
        ring = np.stack([np.full(aa.size, eta), aa.ravel(), bb.ravel()], axis=1)
        centers.append(ring)
        halves.append(np.tile([0.5 * d_eta, 0.5 * wa, 0.5 * wb], (ring.shape[0], 1)))
    return np.concatenate(centers), np.concatenate(halves)


def sphere_cells(n: int, spacing: float, offsets: Optional[np.ndarray] = None) -> Cells:
    """Cells of the unit sphere in C^n for ``n`` in ``{1, 2}``."""
    offsets = np.zeros(2) if offsets is None else np.asarray(offsets, dtype=float)
    if n == 1:
        return circle_cells(spacing, float(offsets[0]))
    if n == 2:
        return hopf_cells(spacing, float(offsets[0]), float(offsets[1]))
    raise ValueError(f"Sphere grids are available for n in {{1, 2}}, got n={n}")


def sphere_to_complex(params: np.ndarray) -> np.ndarray:
    """Map circle or Hopf parameters to unit vectors."""
    params = np.atleast_2d(params)
    return circle_to_complex(params) if params.shape[1] == 1 else hopf_to_complex(params)


def sphere_cell_radius(params: np.ndarray, halfwidths: np.ndarray) -> np.ndarray:
    """Upper bound on the chordal distance from a box center to its points.

    For arcs this is the chord ``2 sin(w/2)``; for Hopf boxes it is the length
    of the path that moves ``alpha``, then ``beta`` at the central ``eta``,
    then ``eta``.
    """
    params = np.atleast_2d(params)
    if params.shape[1] == 1:
        return 2.0 * np.sin(np.minimum(halfwidths[:, 0], math.pi) / 2.0)
    eta = params[:, 0]
    return (
        halfwidths[:, 0]
        + np.cos(eta) * np.minimum(halfwidths[:, 1], math.pi)
        + np.sin(eta) * np.minimum(halfwidths[:, 2], math.pi)
    )


# ---------------------------------------------------------------------------
# Refinement
# ---------------------------------------------------------------------------


def split_cells(centers: np.ndarray, halfwidths: np.ndarray) -> Cells:
    """Bisect every box along every axis, children in lexicographic order."""
    n_cells, m = centers.shape
    signs = np.array(np.meshgrid(*([[-1.0, 1.0]] * m), indexing="ij")).reshape(m, -1).T
    quarter = 0.5 * halfwidths
    child_centers = centers[:, None, :] + signs[None, :, :] * quarter[:, None, :]
    child_half = np.repeat(quarter[:, None, :], signs.shape[0], axis=1)
    return child_centers.reshape(-1, m), child_half.reshape(-1, m)
