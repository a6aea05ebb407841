"""Hot inner loop of the modular determinant: one Laplace level over dense
coefficient arrays, modulo a word-size prime.

Two interchangeable implementations are provided: a numba ``@njit`` kernel
and a pure-numpy fallback.  Selection is by environment: set
``WIDTHCERT_NO_NUMBA=1`` to force the numpy path (it is also used when numba
is not importable).  Both paths compute bit-identical results; the benchmark
in ``benchmarks/bench_det.py`` compares them.

Coefficients are residue pairs (a, b) representing a + b*sqrt(2); products
use (a1*a2 + 2*b1*b2, a1*b2 + b1*a2).  The caller guarantees
``k * nq * 3 * (p-1)^2 < 2^63`` so accumulators cannot overflow before the
single reduction per output slot.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("WIDTHCERT_NO_NUMBA", "").strip() not in ("", "0")

if not _DISABLED:
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - exercised only without numba
        HAVE_NUMBA = False
else:
    HAVE_NUMBA = False


def _level_pass_py(prev_a, prev_b, maps, coeff_a, coeff_b, src_rows, out_a, out_b, p):
    nsub, size_k = out_a.shape
    k = src_rows.shape[1]
    nq = maps.shape[1]
    for si in range(nsub):
        for r in range(size_k):
            acc_a = 0
            acc_b = 0
            for t in range(k):
                row = src_rows[si, t]
                for qi in range(nq):
                    ca = coeff_a[si, t, qi]
                    cb = coeff_b[si, t, qi]
                    if ca != 0 or cb != 0:
                        m = maps[r, qi]
                        sa = prev_a[row, m]
                        sb = prev_b[row, m]
                        acc_a += ca * sa + 2 * cb * sb
                        acc_b += ca * sb + cb * sa
            out_a[si, r] = acc_a % p
            out_b[si, r] = acc_b % p


if HAVE_NUMBA:
    _level_pass_numba = njit(cache=True)(_level_pass_py)


def _level_pass_numpy(prev_a, prev_b, maps, coeff_a, coeff_b, src_rows, out_a, out_b, p):
    # same accumulation, vectorized over the output axis; the sentinel map
    # entry points at the zero pad slot appended to every source row
    nsub, size_k = out_a.shape
    k = src_rows.shape[1]
    nq = maps.shape[1]
    for si in range(nsub):
        acc_a = np.zeros(size_k, dtype=np.int64)
        acc_b = np.zeros(size_k, dtype=np.int64)
        for t in range(k):
            row = src_rows[si, t]
            sa_row = prev_a[row]
            sb_row = prev_b[row]
            for qi in range(nq):
                ca = int(coeff_a[si, t, qi])
                cb = int(coeff_b[si, t, qi])
                if ca == 0 and cb == 0:
                    continue
                idx = maps[:, qi]
                sa = sa_row[idx]
                sb = sb_row[idx]
                acc_a += ca * sa + (2 * cb) * sb
                acc_b += ca * sb + cb * sa
        out_a[si] = acc_a % p
        out_b[si] = acc_b % p


def level_pass(prev_a, prev_b, maps, coeff_a, coeff_b, src_rows, out_a, out_b, p):
    """Accumulate one Laplace level.  Dispatches to numba when available."""
    k = src_rows.shape[1]
    nq = maps.shape[1]
    if k * nq * 3 * (p - 1) ** 2 >= 2**63:
        raise OverflowError("prime too large for overflow-free accumulation")
    if HAVE_NUMBA:
        _level_pass_numba(prev_a, prev_b, maps, coeff_a, coeff_b, src_rows, out_a, out_b, p)
    else:
        _level_pass_numpy(prev_a, prev_b, maps, coeff_a, coeff_b, src_rows, out_a, out_b, p)


def active_backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
