"""qtransverse: certified quantitative transversality in the flat model.

Subpackages:

* :mod:`qtransverse.polycore`: holomorphic polynomials and exponential sums
* :mod:`qtransverse.levi`: hypersurface models and certified minima of ``T``
* :mod:`qtransverse.perturbation`: the F-map and the perturbation search
* :mod:`qtransverse.algvar`: containing hypersurfaces and tube volumes
* :mod:`qtransverse.nets`: separated nets and greedy colorings
* :mod:`qtransverse.pipeline`: the iterative construction on the sphere
* :mod:`qtransverse.lefmoves`: moves on Lefschetz words

The ``qtransverse`` console script (:mod:`qtransverse.cli`) drives all of
them from JSON configs and writes deterministic JSON reports.
"""

from __future__ import annotations

from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("qtransverse")
except PackageNotFoundError:  # pragma: no cover: running from a source tree without metadata
    __version__ = "0.0.0+unknown"

from . import algvar, config, core, lefmoves, levi, nets, perturbation, pipeline, polycore

__all__ = [
    "__version__",
    "algvar",
    "config",
    "core",
    "lefmoves",
    "levi",
    "nets",
    "perturbation",
    "pipeline",
    "polycore",
]
