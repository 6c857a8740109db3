"""Dense order-3 tensor arithmetic shared by the whole pipeline.

Tensors are plain ``numpy.ndarray`` objects with ``ndim == 3`` and 64-bit
float (or integer) entries.  Modes are numbered 1..3 as usual in the tensor
literature; time indices throughout the package are 1-based, with half-open
integer intervals ``(s, e]``.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "TensorSeries",
    "matricize",
    "dematricize",
    "mode_multiply",
    "inner",
    "frob_norm",
    "project_tucker",
]


def _as_tensor3(a, name="tensor"):
    a = np.asarray(a)
    if a.ndim != 3:
        raise ValueError(f"{name} must be a 3-dimensional array, got ndim={a.ndim}")
    if not np.issubdtype(a.dtype, np.number):
        raise ValueError(f"{name} must be numeric, got dtype={a.dtype}")
    if np.issubdtype(a.dtype, np.floating) and not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


class TensorSeries:
    """A time-indexed sequence of equally shaped order-3 tensors.

    Stored as one array of shape ``(T, p1, p2, p3)``.  Snapshots are
    addressed 1-based: ``series.snapshot(t)`` is the tensor observed at
    time ``t`` for ``t = 1..T``.
    """

    __slots__ = ("data",)

    def __init__(self, data):
        if isinstance(data, TensorSeries):
            data = data.data
        elif isinstance(data, (list, tuple)):
            data = np.stack([_as_tensor3(x) for x in data], axis=0)
        else:
            data = np.asarray(data)
        if data.ndim != 4:
            raise ValueError(
                f"series data must have shape (T, p1, p2, p3), got ndim={data.ndim}"
            )
        if data.shape[0] < 2:
            raise ValueError(f"series needs at least 2 snapshots, got T={data.shape[0]}")
        if not np.issubdtype(data.dtype, np.number):
            raise ValueError(f"series must be numeric, got dtype={data.dtype}")
        if np.issubdtype(data.dtype, np.floating) and not np.all(np.isfinite(data)):
            raise ValueError("series contains non-finite entries")
        self.data = data

    @property
    def horizon(self):
        """Number of snapshots T."""
        return self.data.shape[0]

    @property
    def shape(self):
        """Per-snapshot dims (p1, p2, p3)."""
        return self.data.shape[1:]

    def snapshot(self, t):
        """Snapshot at 1-based time t."""
        if not 1 <= t <= self.horizon:
            raise ValueError(f"time index {t} outside 1..{self.horizon}")
        return self.data[t - 1]

    def __len__(self):
        return self.horizon

    def __repr__(self):
        return f"TensorSeries(T={self.horizon}, shape={self.shape}, dtype={self.data.dtype})"


def matricize(a, mode):
    """Unfold an order-3 tensor into a matrix along the given mode.

    Mode 1 gives a ``p1 x (p2*p3)`` matrix with entry
    ``(i1, (i2-1)*p3 + i3) = a[i1, i2, i3]`` (1-based); modes 2 and 3 follow
    the cyclic pattern, producing ``p2 x (p3*p1)`` and ``p3 x (p1*p2)``.
    """
    a = _as_tensor3(a)
    p1, p2, p3 = a.shape
    if mode == 1:
        return a.reshape(p1, p2 * p3)
    if mode == 2:
        return np.transpose(a, (1, 2, 0)).reshape(p2, p3 * p1)
    if mode == 3:
        return np.transpose(a, (2, 0, 1)).reshape(p3, p1 * p2)
    raise ValueError(f"mode must be 1, 2 or 3, got {mode}")


def dematricize(m, dims, mode):
    """Inverse of :func:`matricize` for a known target shape."""
    m = np.asarray(m)
    p1, p2, p3 = dims
    if m.ndim != 2:
        raise ValueError(f"matrix input expected, got ndim={m.ndim}")
    if m.size != p1 * p2 * p3:
        raise ValueError(f"entry count {m.size} does not match dims {dims}")
    if mode == 1:
        return m.reshape(p1, p2, p3)
    if mode == 2:
        return np.transpose(m.reshape(p2, p3, p1), (2, 0, 1))
    if mode == 3:
        return np.transpose(m.reshape(p3, p1, p2), (1, 2, 0))
    raise ValueError(f"mode must be 1, 2 or 3, got {mode}")


def mode_multiply(a, m, mode):
    """Marginal multiplication: contract the mode-``mode`` index of ``a``
    against the columns of ``m``, replacing that dimension by ``m.shape[0]``.
    """
    a = _as_tensor3(a)
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"factor must be a matrix, got ndim={m.ndim}")
    if mode not in (1, 2, 3):
        raise ValueError(f"mode must be 1, 2 or 3, got {mode}")
    axis = mode - 1
    if m.shape[1] != a.shape[axis]:
        raise ValueError(
            f"factor has {m.shape[1]} columns but tensor mode {mode} has size {a.shape[axis]}"
        )
    out = np.tensordot(m, a, axes=([1], [axis]))
    # tensordot puts the new axis first; restore mode order
    return np.moveaxis(out, 0, axis)


def inner(a, b):
    """Entrywise inner product of two tensors of identical shape."""
    a = _as_tensor3(a, "a")
    b = _as_tensor3(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.vdot(a, b))


def frob_norm(a):
    """Frobenius norm, sqrt(inner(a, a))."""
    a = _as_tensor3(a)
    return float(np.linalg.norm(a.ravel()))


def project_tucker(a, u1, u2, u3):
    """Project onto the Tucker subspace spanned by the given factors.

    Computes ``a x_1 u1 u1' x_2 u2 u2' x_3 u3 u3'``.  Each ``u_s`` must have
    orthonormal columns (caller's contract) and row count equal to the
    corresponding mode size; under that contract the operation is an
    orthogonal projection, hence idempotent and norm non-increasing.
    """
    a = _as_tensor3(a)
    factors = []
    for s, u in enumerate((u1, u2, u3), start=1):
        u = np.asarray(u, dtype=np.float64)
        if u.ndim != 2:
            raise ValueError(f"factor {s} must be a matrix, got ndim={u.ndim}")
        if u.shape[0] != a.shape[s - 1]:
            raise ValueError(
                f"factor {s} has {u.shape[0]} rows but mode {s} has size {a.shape[s - 1]}"
            )
        if u.shape[1] > u.shape[0]:
            raise ValueError(f"factor {s} has more columns than rows")
        factors.append(u)
    # compress then expand: a x_s (U U') == ((a x_s U') x_s U)
    core = a.astype(np.float64, copy=False)
    for s, u in enumerate(factors, start=1):
        core = mode_multiply(core, u.T, s)
    out = core
    for s, u in enumerate(factors, start=1):
        out = mode_multiply(out, u, s)
    return out
