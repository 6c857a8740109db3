"""Low-rank estimation via heteroskedastic PCA.

``hpca`` recovers the leading left singular subspace of a symmetric Gram
matrix whose diagonal is unreliable (heteroskedastic noise inflates it): the
diagonal is deleted, then iteratively reimputed from rank-``r`` truncations
until it stabilizes.  ``thpca`` runs ``hpca`` on each mode-wise Gram of an
order-3 tensor, projects onto the resulting Tucker subspace, and clips the
entries into ``[-tau2, tau1]``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .tensor_core import matricize, project_tucker

__all__ = ["HpcaConfig", "TuckerRanks", "RankDeficiencyWarning", "hpca", "thpca"]

# relative singular-value floor below which a subspace is reported degenerate
_RANK_EPS = 1e-12


class RankDeficiencyWarning(UserWarning):
    """The working matrix had numerical rank below the requested rank."""


@dataclass(frozen=True)
class HpcaConfig:
    """Iteration controls for the diagonal-reimputation loop.

    The loop stops once the relative change of the reimputed diagonal drops
    below ``rel_tolerance`` or after ``max_iterations`` steps.  The iteration
    converges geometrically, so a tolerance-based stop is robust; the original
    closed-form iteration count is ill-defined for small spectra.
    """

    max_iterations: int = 50
    rel_tolerance: float = 1e-6

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.rel_tolerance > 0:
            raise ValueError(f"rel_tolerance must be > 0, got {self.rel_tolerance}")


@dataclass(frozen=True)
class TuckerRanks:
    r1: int
    r2: int
    r3: int

    def __post_init__(self):
        for name, r in (("r1", self.r1), ("r2", self.r2), ("r3", self.r3)):
            if r < 1:
                raise ValueError(f"{name} must be a positive integer, got {r}")

    def validate_for(self, dims):
        for s, (r, p) in enumerate(zip((self.r1, self.r2, self.r3), dims), start=1):
            if r > p:
                raise ValueError(f"rank r{s}={r} exceeds mode-{s} dimension {p}")

    def as_tuple(self):
        return (self.r1, self.r2, self.r3)


def _ordered_eig(sym):
    """Eigen pairs of a symmetric matrix, eigenvalues descending.

    The target matrices here are PSD Grams, so the leading subspace lives in
    the positive spectrum; diagonal deletion introduces spurious *negative*
    eigenvalues that a magnitude-based truncation can latch onto and amplify.
    Ordering by signed eigenvalue keeps the truncation on the PSD branch.
    Ties resolve by the stable order of ``eigh``.
    """
    lam, vec = np.linalg.eigh(sym)
    order = np.argsort(-lam, kind="stable")
    return lam[order], vec[:, order]


def _fix_signs(u):
    """Flip column signs so the largest-|entry| of each column is positive."""
    idx = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[idx, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs


def hpca(sigma, r, cfg=None):
    """Heteroskedastic PCA: top-``r`` subspace of a Gram matrix with an
    untrusted diagonal.

    Starting from ``sigma`` with its diagonal zeroed, each step takes the
    rank-``r`` truncated SVD of the working matrix and copies that
    truncation's diagonal back in, iterating until the diagonal's relative
    change falls below ``cfg.rel_tolerance`` (or ``cfg.max_iterations``).
    Returns an ``n x r`` matrix with orthonormal, sign-fixed columns.

    Emits :class:`RankDeficiencyWarning` when the final working matrix has
    numerical rank below ``r``; the missing columns then come from the
    trailing eigenbasis and carry no signal.
    """
    cfg = cfg or HpcaConfig()
    sigma = np.asarray(sigma, dtype=np.float64)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise ValueError(f"sigma must be square, got shape {sigma.shape}")
    n = sigma.shape[0]
    if not 1 <= r <= n:
        raise ValueError(f"rank r={r} outside 1..{n}")
    if not np.all(np.isfinite(sigma)):
        raise ValueError("sigma contains non-finite entries")
    # absorb floating-point drift in Gram inputs
    work = 0.5 * (sigma + sigma.T)
    np.fill_diagonal(work, 0.0)

    diag_prev = np.zeros(n)
    for _ in range(cfg.max_iterations):
        lam, vec = _ordered_eig(work)
        top = vec[:, :r]
        # rank-r truncation of the symmetric working matrix
        diag_new = np.einsum("ij,j,ij->i", top, lam[:r], top)
        step = np.linalg.norm(diag_new - diag_prev)
        scale = np.linalg.norm(diag_prev)
        np.fill_diagonal(work, diag_new)
        diag_prev = diag_new
        if scale > 0 and step <= cfg.rel_tolerance * scale:
            break

    lam, vec = _ordered_eig(work)
    svals = np.maximum(lam, 0.0)
    if svals[0] <= 0 or svals[r - 1] < _RANK_EPS * svals[0]:
        warnings.warn(
            f"working matrix has numerical rank < {r}; trailing basis columns "
            "carry no signal",
            RankDeficiencyWarning,
            stacklevel=2,
        )
    return _fix_signs(vec[:, :r])


def thpca(a, ranks, tau1, tau2, cfg=None):
    """Tensor heteroskedastic PCA with entrywise truncation.

    For each mode ``s`` the ``hpca`` subspace of ``M_s(a) M_s(a)'`` at rank
    ``r_s`` is estimated; ``a`` is projected onto the resulting Tucker
    subspace and the projection is clipped to ``[-tau2, tau1]`` entrywise.
    ``tau1``/``tau2`` may be ``numpy.inf`` to disable a side.
    """
    cfg = cfg or HpcaConfig()
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 3:
        raise ValueError(f"tensor input expected, got ndim={a.ndim}")
    if not isinstance(ranks, TuckerRanks):
        ranks = TuckerRanks(*ranks)
    ranks.validate_for(a.shape)
    for name, tau in (("tau1", tau1), ("tau2", tau2)):
        if not tau >= 0:
            raise ValueError(f"{name} must be >= 0 (or +inf), got {tau}")

    factors = []
    for s, r in enumerate(ranks.as_tuple(), start=1):
        unfolded = matricize(a, s)
        gram = unfolded @ unfolded.T
        factors.append(hpca(gram, r, cfg))
    projected = project_tucker(a, *factors)
    return np.clip(projected, -tau2, tau1)
