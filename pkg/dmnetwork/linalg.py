"""Dense complex matrix kernel.

Matrices are numpy ``complex128`` arrays in row-major order. Qubit 1 is the
most significant bit of a basis index, so ``|q1 q2 ... qN>`` sits at
``q1*2**(N-1) + ... + qN``; qubit indices in this package are 1-based.
"""

import logging
import math

import numpy as np

from dmnetwork import config
from dmnetwork.exceptions import (
    ConvergenceError,
    DimensionError,
    InvalidStateError,
    NotHermitianError,
)

logger = logging.getLogger(__name__)


def as_cmatrix(a):
    """Return ``a`` as a 2-D complex128 array, rejecting NaN/Inf entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("matrix has non-finite entries")
    return m


def _require_square(m, what="matrix"):
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{what} must be square, got {m.shape}")


def max_abs(a):
    """Max-abs norm, the ``||.||_max`` used by every tolerance check."""
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def matmul(a, b):
    """
    Checked matrix product ``a @ b``.

    Args:
        a: Left factor, any array-like convertible to a complex matrix
        b: Right factor

    Returns:
        np.ndarray: The complex128 product

    Raises:
        DimensionError: If the inner dimensions differ
    """
    a, b = as_cmatrix(a), as_cmatrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b):
    """
    Kronecker product with ``a`` on the most significant indices.

    Args:
        a: Operator on the leading qubits
        b: Operator on the trailing qubits

    Returns:
        np.ndarray: ``a (x) b`` of shape ``(ra*rb, ca*cb)``
    """
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def adjoint(a):
    """Conjugate transpose."""
    return as_cmatrix(a).conj().T


def trace(a):
    """
    Sum of the diagonal of a square matrix.

    Args:
        a: Square matrix

    Returns:
        complex: The trace
    """
    m = as_cmatrix(a)
    _require_square(m)
    return complex(np.trace(m))


def is_hermitian(a, tol=config.HERMITIAN_TOL):
    """True if ``a`` is square and ``||a - a^dagger||_max <= tol``."""
    m = np.asarray(a)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and max_abs(m - m.conj().T) <= tol


def is_unitary(a, tol=config.UNITARY_TOL):
    """True if ``a`` is square and ``||a a^dagger - 1||_max <= tol``."""
    m = np.asarray(a)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return max_abs(m @ m.conj().T - np.eye(m.shape[0])) <= tol


def _keep_permutation(qubit_count, keep):
    """Validate a 1-based keep set; return (sorted keep, axis permutation)."""
    keep = sorted(set(keep))
    if not keep:
        raise DimensionError("keep set is empty")
    if keep[0] < 1 or keep[-1] > qubit_count:
        raise DimensionError(f"keep set {keep} out of range for {qubit_count} qubits")
    traced = [q for q in range(qubit_count) if q + 1 not in keep]
    return keep, [q - 1 for q in keep] + traced


def partial_trace(rho, qubit_count, keep):
    """
    Trace out every qubit not in ``keep``.

    Args:
        rho: Operator on ``qubit_count`` qubits
        qubit_count (int): Number of qubits ``rho`` acts on
        keep: 1-based qubits to keep, in any order

    Returns:
        np.ndarray: Reduced operator on the kept qubits in ascending order

    Raises:
        DimensionError: If ``keep`` is empty or out of range, or ``rho`` has the wrong size
    """
    m = as_cmatrix(rho)
    dim = 2 ** qubit_count
    if m.shape != (dim, dim):
        raise DimensionError(f"operator shape {m.shape} does not match {qubit_count} qubits")
    keep, perm = _keep_permutation(qubit_count, keep)
    dk = 2 ** len(keep)
    dt = dim // dk
    tensor = m.reshape([2] * (2 * qubit_count))
    tensor = tensor.transpose(perm + [p + qubit_count for p in perm])
    return np.trace(tensor.reshape(dk, dt, dk, dt), axis1=1, axis2=3)


def partial_trace_pure(psi, qubit_count, keep):
    """
    Reduced operator of the pure state ``|psi><psi|`` without forming it.

    Args:
        psi: Amplitude vector of length ``2**qubit_count``
        qubit_count (int): Number of qubits
        keep: 1-based qubits to keep

    Returns:
        np.ndarray: Reduced operator on the kept qubits in ascending order
    """
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.size != 2 ** qubit_count:
        raise DimensionError(f"vector of length {v.size} does not match {qubit_count} qubits")
    keep, perm = _keep_permutation(qubit_count, keep)
    block = v.reshape([2] * qubit_count).transpose(perm).reshape(2 ** len(keep), -1)
    return block @ block.conj().T


def _off_diagonal_norm(m):
    return float(np.sqrt(np.sum(np.abs(m - np.diag(np.diag(m))) ** 2)))


def eig_hermitian(a):
    """Eigen-decompose a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of ``a[p, q]`` and then applies the
    classical real rotation that zeroes it. Sweeps stop once the off-diagonal
    Frobenius norm drops below ``JACOBI_OFF_TOL`` (scaled by ``max(1, ||a||_F)``).

    Returns:
        (eigenvalues, eigenvectors): real eigenvalues in descending order and
        the matching orthonormal eigenvectors as columns.
    """
    m = as_cmatrix(a)
    _require_square(m)
    if not is_hermitian(m):
        raise NotHermitianError(
            f"matrix deviates from Hermitian by {max_abs(m - m.conj().T):.3e}"
        )
    n = m.shape[0]
    work = 0.5 * (m + m.conj().T)
    vecs = np.eye(n, dtype=np.complex128)
    target = config.JACOBI_OFF_TOL * max(1.0, float(np.linalg.norm(work)))

    for sweep in range(config.JACOBI_MAX_SWEEPS + 1):
        if _off_diagonal_norm(work) <= target:
            break
        if sweep == config.JACOBI_MAX_SWEEPS:
            raise ConvergenceError(
                f"Jacobi did not converge in {config.JACOBI_MAX_SWEEPS} sweeps"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = np.conj(apq / r)
                theta = (work[q, q].real - work[p, p].real) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                g = np.array([[c, s], [-s * phase, c * phase]], dtype=np.complex128)
                idx = [p, q]
                work[:, idx] = work[:, idx] @ g
                work[idx, :] = g.conj().T @ work[idx, :]
                work[p, q] = work[q, p] = 0.0
                vecs[:, idx] = vecs[:, idx] @ g
    logger.debug("Jacobi converged on %dx%d after %d sweeps", n, n, sweep)

    vals = work.diagonal().real.copy()
    order = np.argsort(-vals, kind="stable")
    return vals[order], vecs[:, order]


def expm_from_eig(vals, vecs, t):
    """``V diag(exp(-i*lambda*t)) V^dagger`` for a precomputed decomposition."""
    return (vecs * np.exp(-1j * np.asarray(vals) * t)) @ vecs.conj().T


def expm_hermitian_scaled(h, t):
    """
    Unitary ``exp(-i h t)`` of a Hermitian ``h`` (hbar = 1).

    Args:
        h: Hermitian generator
        t (float): Time

    Returns:
        np.ndarray: The propagator, unitary within UNITARY_TOL
    """
    vals, vecs = eig_hermitian(h)
    return expm_from_eig(vals, vecs, t)


def _clamped_spectrum(a):
    vals, vecs = eig_hermitian(a)
    lowest = float(vals[-1])
    if lowest < -config.PSD_CLAMP:
        raise InvalidStateError(f"eigenvalue {lowest:.3e} below the PSD clamp")
    if lowest < 0.0:
        logger.debug("clamping eigenvalue %.3e to zero", lowest)
    return np.clip(vals, 0.0, None), vecs


def eigvals_psd(a):
    """Descending eigenvalues of a Hermitian PSD matrix, roundoff negatives clamped."""
    return _clamped_spectrum(a)[0]


def sqrtm_psd(a):
    """Hermitian PSD square root.

    Negatives down to ``-PSD_CLAMP`` are clamped and eigenvalues under the rank
    cutoff are dropped, so a projector comes back as itself rather than with
    sqrt(1e-17) noise on its null space.
    """
    vals, vecs = _clamped_spectrum(a)
    cutoff = config.RANK_CUTOFF * max(1.0, float(vals[0]))
    vals = np.where(vals <= cutoff, 0.0, vals)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T
