"""Index pairings, projections and spectra on quantum projective spaces."""

import json

from . import _core
from ._core import (
    UncertifiedPairing,
    alternating_sum_identity,
    binomial,
    capconstr_count,
    multiplicities,
    qtrace,
    relation_residuals,
    spectrum_multiplicity,
)

__all__ = [
    "UncertifiedPairing",
    "alternating_sum_identity",
    "binomial",
    "capconstr_count",
    "commutator_norms",
    "multiplicities",
    "pairing",
    "pairing_matrix",
    "qtrace",
    "relation_residuals",
    "run",
    "spectrum_multiplicity",
    "summability",
    "verify_projection",
]


def pairing(n, k, N, q, cutoff=None):
    """<[mu_k], [P_{-N}]> on CP^n_q as a report dict."""
    return json.loads(_core.pairing_json(n, k, N, q, cutoff))


def pairing_matrix(n, q, cutoff=None):
    return json.loads(_core.pairing_matrix_json(n, q, cutoff))


def verify_projection(N, n):
    return json.loads(_core.projection_json(N, n))


def commutator_norms(n, i, j, q, cutoffs, d=0.0, seed=12345):
    return json.loads(_core.commutator_norms_json(n, i, j, q, list(cutoffs), d, seed))


def summability(n, d, s, cutoff):
    return json.loads(_core.summability_json(n, d, s, cutoff))


def run(command, n=1, k=1, N=1, q="1/2", cutoff=None, d=None, seed=12345, format="json"):
    """Runs a command-line command; returns (status, report, error)."""
    return _core.run(command, n, k, N, str(q), cutoff, d, seed, format)
