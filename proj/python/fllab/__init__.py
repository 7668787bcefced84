"""Orbital integrals on the unitary and linear sides over unramified p-adic fields.

Matrices and invariant points use the same JSON layout as the ``fl-lab`` CLI;
every function takes and returns plain dicts.
"""

import json

from . import _core
from ._core import Error, __version__

__all__ = [
    "Error",
    "__version__",
    "compare",
    "fourier_check",
    "invariants",
    "lemma1",
    "orbit",
    "represent",
    "verify",
]


def _encode(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def invariants(matrix, p=3, u=None, precision=48):
    """Characteristic polynomial, moments, q, rss flag and hermitian existence of a matrix."""
    return json.loads(_core.invariants(_encode(matrix), p=p, u=u, precision=precision))


def orbit(matrix, oracle=False, p=3, u=None, precision=48):
    """Orbital integral of the unit characteristic function at an rss matrix."""
    return json.loads(_core.orbit(_encode(matrix), oracle=oracle, p=p, u=u, precision=precision))


def represent(point, side="gl", p=3, u=None, precision=48):
    """Canonical matrix with the given invariants on side "u" or "gl"."""
    return json.loads(_core.represent(_encode(point), side=side, p=p, u=u, precision=precision))


def compare(point, p=3, u=None, precision=48):
    """Both orbital integrals at an invariant point."""
    return json.loads(_core.compare(_encode(point), p=p, u=u, precision=precision))


def verify(**kwargs):
    """Sampling campaign comparing the two sides; same report as ``fl-lab verify``."""
    return json.loads(_core.verify(**kwargs))


def lemma1(**kwargs):
    """Reduction check on unit-q samples; same report as ``fl-lab lemma1``."""
    return json.loads(_core.lemma1(**kwargs))


def fourier_check(**kwargs):
    """Exact Fourier and Weil identities on finite-level functions."""
    return json.loads(_core.fourier_check(**kwargs))
