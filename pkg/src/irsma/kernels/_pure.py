"""Pure-numpy kernels: lattice enumeration and per-element descent.

Reference implementation of the backend contract; `irsma.kernels._fast` is
the compiled twin. Both must agree on candidate ordering and tie handling:

  * enumeration walks level vectors lexicographically (element 0 is the
    most significant digit) and keeps the first strict minimum, so the
    reported minimizer is the lexicographically smallest one;
  * the per-element scan evaluates all L levels in index order and replaces
    the incumbent only on a strict objective decrease.

Inputs are pre-conjugated cascaded vectors (cq = conj(q)), so a candidate's
effective channel is  sum_m cq[m] * table[level_m] + hd.
"""

from functools import lru_cache

import numpy as np

BACKEND_NAME = "pure"

_CHUNK = 1 << 16


def _digit_block(start: int, count: int, m: int, num_levels: int) -> np.ndarray:
    """Rows `start .. start+count` of the lexicographic level-vector list."""
    idx = np.arange(start, start + count, dtype=np.int64)
    digits = np.empty((count, m), dtype=np.int64)
    for col in range(m - 1, -1, -1):
        digits[:, col] = idx % num_levels
        idx //= num_levels
    return digits


@lru_cache(maxsize=8)
def _full_digits(m: int, num_levels: int) -> np.ndarray:
    # lattice small enough for one chunk; reused across realizations
    digits = _digit_block(0, num_levels**m, m, num_levels)
    digits.flags.writeable = False
    return digits


def _gains(digits: np.ndarray, table: np.ndarray, cq: np.ndarray, hd: complex) -> np.ndarray:
    s = table[digits] @ cq + hd
    return s.real**2 + s.imag**2


def _objective_block(digits, table, cq1, cq2, hd1, hd2, a1, a2):
    with np.errstate(divide="ignore"):
        if a1 != 0.0:
            values = a1 / _gains(digits, table, cq1, hd1)
            if a2 != 0.0:
                values = values + a2 / _gains(digits, table, cq2, hd2)
        elif a2 != 0.0:
            values = a2 / _gains(digits, table, cq2, hd2)
        else:
            values = np.zeros(digits.shape[0])
    return values


def evaluate_levels(levels, table, cq1, cq2, hd1, hd2, a1, a2) -> float:
    """Objective at a single level vector (kernel arithmetic)."""
    digits = np.asarray(levels, dtype=np.int64).reshape(1, -1)
    return float(_objective_block(digits, table, cq1, cq2, hd1, hd2, a1, a2)[0])


def enumerate_weighted_inverse(cq1, cq2, hd1, hd2, a1, a2, num_levels, table):
    """Scan all L^M level vectors; return (best_levels, best_value, evaluations)."""
    m = cq1.shape[0]
    total = num_levels**m
    best_value = np.inf
    best_index = 0
    evaluations = 0
    for start in range(0, total, _CHUNK):
        count = min(_CHUNK, total - start)
        if start == 0 and count == total:
            digits = _full_digits(m, num_levels)
        else:
            digits = _digit_block(start, count, m, num_levels)
        values = _objective_block(digits, table, cq1, cq2, hd1, hd2, a1, a2)
        evaluations += count
        i = int(np.argmin(values))
        if values[i] < best_value:
            best_value = float(values[i])
            best_index = start + i
    best_levels = _digit_block(best_index, 1, m, num_levels)[0]
    return best_levels, best_value, evaluations


def ao_sweeps(cq1, cq2, hd1, hd2, a1, a2, num_levels, table, start_levels,
              start_value, max_sweeps, rel_tol):
    """Cyclic one-element descent from `start_levels`.

    Each step recomputes the partial sum excluding element m, then scores
    all L levels of m at once. Returns (levels, per-sweep objective values,
    evaluations); exactly M*L evaluations per executed sweep.
    """
    m = cq1.shape[0]
    levels = np.array(start_levels, dtype=np.int64, copy=True)
    current = float(start_value)
    trace = []
    evaluations = 0
    for _ in range(max_sweeps):
        before = current
        for elem in range(m):
            phases = table[levels]
            others = np.arange(m) != elem
            cand1 = cand2 = None
            if a1 != 0.0:
                partial1 = cq1[others] @ phases[others] + hd1
                cand1 = partial1 + cq1[elem] * table
            if a2 != 0.0:
                partial2 = cq2[others] @ phases[others] + hd2
                cand2 = partial2 + cq2[elem] * table
            with np.errstate(divide="ignore"):
                if cand1 is not None:
                    values = a1 / (cand1.real**2 + cand1.imag**2)
                    if cand2 is not None:
                        values = values + a2 / (cand2.real**2 + cand2.imag**2)
                elif cand2 is not None:
                    values = a2 / (cand2.real**2 + cand2.imag**2)
                else:
                    values = np.zeros(num_levels)
            evaluations += num_levels
            best = int(np.argmin(values))
            # re-scoring the incumbent level is never an improvement; this
            # keeps fixed points exact despite float round-off in the scan
            if best != levels[elem] and values[best] < current:
                levels[elem] = best
                current = float(values[best])
        trace.append(current)
        if before - current <= rel_tol * before:
            break
    return levels, trace, evaluations
