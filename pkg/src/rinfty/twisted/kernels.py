"""Hot loops of the finite-group oracle.

Every kernel has a numba version and a vectorized numpy version with the same
signature.  ``RINFTY_NUMBA=0`` selects numpy.
"""
from __future__ import annotations

import numpy as np

from .._accel import USE_NUMBA, njit


# -- numpy ---------------------------------------------------------------------

def twisted_labels_np(table: np.ndarray, inverse: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """label[x] = least element of {g x phi(g)^-1 : g}."""
    orbit = table[table, inverse[phi][:, None]]
    return orbit.min(axis=0)


def fixed_counts_np(table: np.ndarray, inverse: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """count[a] = #{x : a phi(x) a^-1 = x}."""
    m = table.shape[0]
    img = table[table[:, phi], inverse[:, None]]
    return (img == np.arange(m)[None, :]).sum(axis=1)


def conjugators_np(table, inverse, phi, x, targets):
    """For each y in targets, the least z with z^-1 x phi(z) = y, or -1."""
    m = table.shape[0]
    z = np.arange(m)
    vals = table[table[inverse[z], x], phi[z]]
    out = np.full(len(targets), -1, dtype=np.int64)
    for i, y in enumerate(targets):
        hit = np.nonzero(vals == y)[0]
        if len(hit):
            out[i] = hit[0]
    return out


# -- numba ---------------------------------------------------------------------

@njit
def _twisted_labels_nb(table, inverse, phi):
    m = table.shape[0]
    out = np.empty(m, dtype=np.int64)
    for x in range(m):
        best = m
        for g in range(m):
            y = table[table[g, x], inverse[phi[g]]]
            if y < best:
                best = y
        out[x] = best
    return out


@njit
def _fixed_counts_nb(table, inverse, phi):
    m = table.shape[0]
    out = np.zeros(m, dtype=np.int64)
    for a in range(m):
        ai = inverse[a]
        c = 0
        for x in range(m):
            if table[table[a, phi[x]], ai] == x:
                c += 1
        out[a] = c
    return out


@njit
def _conjugators_nb(table, inverse, phi, x, targets):
    m = table.shape[0]
    out = np.full(targets.shape[0], -1, dtype=np.int64)
    for i in range(targets.shape[0]):
        for z in range(m):
            if table[table[inverse[z], x], phi[z]] == targets[i]:
                out[i] = z
                break
    return out


def _as64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


if USE_NUMBA:
    def twisted_labels(table, inverse, phi):
        return _twisted_labels_nb(_as64(table), _as64(inverse), _as64(phi))

    def fixed_counts(table, inverse, phi):
        return _fixed_counts_nb(_as64(table), _as64(inverse), _as64(phi))

    def conjugators(table, inverse, phi, x, targets):
        return _conjugators_nb(_as64(table), _as64(inverse), _as64(phi), int(x), _as64(targets))
else:
    twisted_labels = twisted_labels_np
    fixed_counts = fixed_counts_np
    conjugators = conjugators_np
