"""NumPy implementations of the hot loops; used when the extension is absent.

Must stay behaviourally identical to ``_kernels.pyx`` (tests compare them).
"""
import numpy as np

_CHUNK = 4096


def _answer_index(codes, input_digits, offsets):
    n = input_digits.shape[1]
    shifts = offsets[None, :] + input_digits  # (I, n)
    bits = (codes[:, None, None] >> shifts[None, :, :]) & 1  # (S, I, n)
    place = (1 << np.arange(n - 1, -1, -1, dtype=np.int64))
    return bits @ place  # (S, I)


def payoff_block(table_flat, x_index, input_digits, offsets, start, stop):
    """Payoff of deterministic strategies ``start..stop-1`` on every listed input."""
    table_flat = np.asarray(table_flat, dtype=np.int8)
    x_index = np.asarray(x_index, dtype=np.int64)
    input_digits = np.asarray(input_digits, dtype=np.int64)
    offsets = np.asarray(offsets, dtype=np.int64)
    n = input_digits.shape[1]
    out = np.empty((stop - start, len(x_index)), dtype=np.int8)
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        codes = np.arange(lo, hi, dtype=np.int64)
        a_idx = _answer_index(codes, input_digits, offsets)
        out[lo - start:hi - start] = table_flat[(x_index << n)[None, :] + a_idx]
    return out


def best_response(table_flat, x_index, input_digits, offsets, weights, start, stop):
    """Return ``(code, score)`` maximising ``sum_j weights[j] * payoff(code, j)``.

    Ties go to the smallest code.  ``weights`` are int64 and the caller
    guarantees the score cannot overflow.
    """
    weights = np.asarray(weights, dtype=np.int64)
    best_code, best_score = -1, None
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        block = payoff_block(table_flat, x_index, input_digits, offsets, lo, hi).astype(np.int64)
        scores = block @ weights
        j = int(np.argmax(scores))
        if best_score is None or scores[j] > best_score:
            best_code, best_score = lo + j, int(scores[j])
    return best_code, best_score


def circle_moduli(coeffs, thetas):
    """``|sum_k coeffs[k] * exp(i k theta)|`` for each theta."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    thetas = np.asarray(thetas, dtype=np.float64)
    k = np.arange(len(coeffs))
    out = np.empty(len(thetas))
    step = max(1, 2**20 // max(1, len(coeffs)))
    for lo in range(0, len(thetas), step):
        th = thetas[lo:lo + step]
        out[lo:lo + step] = np.abs(np.exp(1j * np.outer(th, k)) @ coeffs)
    return out
