"""Brute-force Fock-space representation of the reading problem.

States are stored as sparse density matrices on a number basis truncated at
``dim`` photons per mode. The lossy thermal channel is realized by its
physical dilation: the signal mode meets a thermal ancilla on a beam splitter
and the ancilla is traced out. Spectral quantities (fidelity, Chernoff trace,
trace distance) are computed on the disjoint blocks of the operators
involved, which is exact because the blocks are decoupled.

States built here also carry a Gram factor ``F`` with ``rho = F F^dag``. The
singular values of ``F`` resolve eigenvalues far below machine epsilon
relative to the largest one, which matters for small fractional powers of
nearly rank-deficient states.

This module shares no code with the covariance-matrix formulas; it exists to
check them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.csgraph import connected_components

from .errors import DomainError, NumericalError, TruncationError

#: Default limit on the probability mass lost to truncation.
TRUNCATION_TOL = 1e-8

#: Eigenvalues in ``[-NEGATIVE_FLOOR, 0)`` are rounding noise and are zeroed.
NEGATIVE_FLOOR = 1e-10

#: Eigenvalues below ``RANK_RTOL * max`` of a dense block are treated as zero
#: when no Gram factor is available.
RANK_RTOL = 1e-14

HERMITIAN_TOL = 1e-12

_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Hermitian operator on one or two truncated modes.

    ``matrix`` is a sparse array of shape ``(dim**modes, dim**modes)`` in
    row-major mode order; ``entries`` gives the dense view. ``factor``, when
    present, is a sparse ``F`` with ``matrix = F F^dag``.
    """

    dim: int
    modes: int
    matrix: sparse.csr_array
    trace_deficit: float = 0.0
    factor: sparse.csr_array | None = None

    def __post_init__(self):
        if self.modes not in (1, 2):
            raise DomainError(f"modes must be 1 or 2, got {self.modes}")
        n = self.dim**self.modes
        if self.matrix.shape != (n, n):
            raise DomainError(f"matrix shape {self.matrix.shape} does not match dim={self.dim}")
        if self.factor is not None and self.factor.shape[0] != n:
            raise DomainError(f"factor has {self.factor.shape[0]} rows, expected {n}")
        skew = abs(self.matrix - self.matrix.conj().T)
        if skew.nnz and skew.max() > HERMITIAN_TOL:
            raise NumericalError(f"operator is not Hermitian (max deviation {skew.max():.3g})")

    @property
    def entries(self) -> np.ndarray:
        return self.matrix.toarray()

    @property
    def trace(self) -> float:
        return float(self.matrix.diagonal().sum().real)


def _state(dim, modes, factor, deficit, tol):
    """Normalized state ``F F^dag`` from an unnormalized factor."""
    if deficit >= tol:
        raise TruncationError(
            f"truncation lost {deficit:.3g} of the norm (tolerance {tol:.3g})",
            deficit=deficit, tol=tol, dim=dim,
        )
    factor = sparse.csr_array(factor, dtype=complex)
    factor.eliminate_zeros()
    factor = factor / math.sqrt(float(abs(factor.multiply(factor.conj())).sum()))
    matrix = factor @ factor.conj().T
    matrix = (matrix + matrix.conj().T) / 2
    return FockOperator(dim, modes, sparse.csr_array(matrix), float(deficit), sparse.csr_array(factor))


def _from_ket(psi, dim, modes, tol):
    weight = float(np.vdot(psi, psi).real)
    return _state(dim, modes, psi.reshape(-1, 1), 1.0 - weight, tol)


# -- state preparation ------------------------------------------------------

def tmsv_ket(ns: float, dim: int, *, tol: float = TRUNCATION_TOL) -> FockOperator:
    """Two-mode squeezed vacuum ``sum_n tanh^n / cosh |n, n>`` with ``sinh^2 = ns``.

    The truncated state is renormalized; the discarded weight is stored as
    ``trace_deficit``.
    """
    if ns < 0:
        raise DomainError(f"ns must be >= 0, got {ns}")
    n = np.arange(dim)
    coeff = (ns / (1.0 + ns)) ** (n / 2.0) / math.sqrt(1.0 + ns)
    psi = np.zeros((dim, dim))
    psi[n, n] = coeff
    return _from_ket(psi.reshape(-1), dim, 2, tol)


def coherent_ket(alpha: complex, dim: int, *, tol: float = TRUNCATION_TOL) -> FockOperator:
    """Single-mode coherent state ``|alpha>`` truncated at ``dim``."""
    n = np.arange(dim)
    mag = abs(alpha)
    if mag == 0:
        psi = (n == 0).astype(complex)
    else:
        log_fact = np.array([math.lgamma(k + 1.0) for k in n])
        amp = np.exp(-0.5 * mag**2 + n * math.log(mag) - 0.5 * log_fact)
        psi = amp * np.exp(1j * np.angle(alpha) * n)
    return _from_ket(psi, dim, 1, tol)


def thermal_probabilities(nb: float, dim: int) -> np.ndarray:
    """Photon-number distribution of a thermal mode, truncated (not renormalized)."""
    if nb < 0:
        raise DomainError(f"nb must be >= 0, got {nb}")
    n = np.arange(dim)
    if nb == 0:
        return (n == 0).astype(float)
    return (nb / (1.0 + nb)) ** n / (1.0 + nb)


def thermal_state(nb: float, dim: int, *, tol: float = TRUNCATION_TOL) -> FockOperator:
    """Single-mode thermal state with ``nb`` mean photons, renormalized."""
    p = thermal_probabilities(nb, dim)
    return _state(dim, 1, sparse.diags(np.sqrt(p)), 1.0 - p.sum(), tol)


def density_operator(matrix, dim: int, modes: int) -> FockOperator:
    """Wrap an explicit Hermitian matrix; spectral functions then use ``eigh``."""
    return FockOperator(dim, modes, sparse.csr_array(matrix, dtype=complex))


# -- beam splitter dilation -------------------------------------------------

def annihilation(dim: int) -> sparse.csr_array:
    return sparse.csr_array(sparse.diags(np.sqrt(np.arange(1, dim)), 1))


def _blocks(pattern):
    """Index sets of the connected components of a sparsity pattern.

    Indices whose row and column are empty are dropped.
    """
    pattern = sparse.csr_array(pattern)
    active = np.union1d(*pattern.nonzero())
    if active.size == 0:
        return []
    sub = pattern[active][:, active]
    n_comp, labels = connected_components(sub, directed=False)
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(n_comp + 1))
    return [active[order[bounds[k]:bounds[k + 1]]] for k in range(n_comp)]


def _assemble(pieces, n, dtype=complex):
    """Sparse ``n x n`` matrix from dense ``(idx, block)`` pieces on disjoint indices."""
    if not pieces:
        return sparse.csr_array((n, n), dtype=dtype)
    rows, cols, vals = [], [], []
    for idx, block in pieces:
        r_i, c_i = np.meshgrid(idx, idx, indexing="ij")
        rows.append(r_i.ravel())
        cols.append(c_i.ravel())
        vals.append(block.ravel())
    coo = sparse.coo_array(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    return sparse.csr_array(coo, dtype=dtype)


def beam_splitter(r: float, dim: int, dim_bath: int) -> sparse.csr_array:
    """Unitary on (mode, ancilla) with ``a -> sqrt(r) a + sqrt(1 - r) b``.

    Built as ``exp(theta (a^dag b - a b^dag))`` with ``cos theta = sqrt(r)``.
    The generator conserves total photon number, so the exponential is taken
    block by block; blocks with total photon number below the cutoffs are
    exact.
    """
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"reflectivity must lie in [0, 1], got {r}")
    size = dim * dim_bath
    theta = math.acos(math.sqrt(r))
    if theta == 0.0:
        return sparse.csr_array(sparse.identity(size))
    a = annihilation(dim)
    b = annihilation(dim_bath)
    # real antisymmetric generator, so the unitary is real orthogonal
    gen = sparse.csr_array(sparse.kron(a.T, b) - sparse.kron(a, b.T))
    pieces = [
        (idx, linalg.expm(theta * gen[idx][:, idx].toarray()))
        for idx in _blocks(abs(gen) + sparse.identity(size))
    ]
    return _assemble(pieces, size, dtype=float)


def _components(state: FockOperator):
    """Dense columns ``f_j`` with ``state = sum_j f_j f_j^dag``."""
    if state.factor is not None:
        f = sparse.csc_array(state.factor)
        return [f[:, [j]].toarray().ravel() for j in range(f.shape[1]) if f[:, [j]].nnz]
    out = []
    for idx, w, v in _spectra(state):
        for j in np.flatnonzero(w > 0):
            psi = np.zeros(state.matrix.shape[0], dtype=complex)
            psi[idx] = math.sqrt(w[j]) * v[:, j]
            out.append(psi)
    return out


def apply_loss(
    state: FockOperator,
    r: float,
    nb: float,
    dim_bath: int | None = None,
    *,
    mode: int = 0,
    tol: float = TRUNCATION_TOL,
) -> FockOperator:
    """Send one mode of ``state`` through the thermal-loss channel.

    The mode is mixed with a thermal ancilla of ``nb`` photons on a beam
    splitter of reflectivity ``r`` (the fraction kept), then the ancilla is
    traced out. ``r = 1`` returns ``state`` unchanged.

    Raises:
        TruncationError: if the estimated weight outside the exact part of
            the truncated dilation exceeds ``tol``.
    """
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"reflectivity must lie in [0, 1], got {r}")
    if nb < 0:
        raise DomainError(f"nb must be >= 0, got {nb}")
    if mode >= state.modes:
        raise DomainError(f"mode {mode} out of range for a {state.modes}-mode state")
    if r == 1.0:
        return state
    dim = state.dim
    dim_bath = dim if dim_bath is None else dim_bath
    p_bath = thermal_probabilities(nb, dim_bath)
    bath_tail = 1.0 - p_bath.sum()
    shape = (dim,) * state.modes
    rest = dim ** (state.modes - 1)

    # photon-number distribution of the transmitted mode, for the leak estimate
    diag = state.matrix.diagonal().real.reshape(shape)
    p_mode = np.moveaxis(diag, mode, 0).reshape(dim, rest).sum(axis=1)
    tail = np.append(np.cumsum(p_mode[::-1])[::-1], 0.0)  # tail[n] = P(photons >= n)
    # sectors of total photon number >= cut are clipped by the truncation
    cut = min(dim, dim_bath)
    leak = sum(p_bath[k] * tail[cut - k] for k in range(cut))
    deficit = state.trace_deficit + bath_tail + leak

    u = sparse.csc_array(beam_splitter(r, dim, dim_bath))
    # columns of u acting on |n>|k> for each occupied ancilla level k
    u_cols = {k: u[:, np.arange(dim) * dim_bath + k] for k in np.flatnonzero(p_bath)}
    columns = []
    for f in _components(state):
        x = np.moveaxis(f.reshape(shape), mode, 0).reshape(dim, rest)
        for k, uk in u_cols.items():
            y = (uk @ (math.sqrt(p_bath[k]) * x)).reshape(dim, dim_bath, rest)
            # one output column per ancilla outcome, rows back in mode order
            y = np.moveaxis(y, 1, -1).reshape(shape + (dim_bath,))
            y = np.moveaxis(y, 0, mode).reshape(-1, dim_bath)
            columns.append(sparse.csr_array(y))
    return _state(dim, state.modes, sparse.hstack(columns), deficit, tol)


# -- spectral quantities ----------------------------------------------------

def _check_pair(rho, sigma):
    if rho.dim != sigma.dim or rho.modes != sigma.modes:
        raise DomainError("operators live on different truncated spaces")


def _joint_blocks(*ops):
    pattern = abs(ops[0].matrix)
    for op in ops[1:]:
        pattern = pattern + abs(op.matrix)
    return _blocks(pattern)


def _factor_rows(op, idx):
    """Dense nonzero columns of the factor restricted to rows ``idx``."""
    f = sparse.csc_array(op.factor[idx])
    keep = np.flatnonzero(np.diff(f.indptr))
    return f[:, keep].toarray()


def _block_spectrum(op, idx):
    """Eigenvalues ``w > 0`` and eigenvectors of ``op`` on the rows ``idx``.

    With a Gram factor the eigenvalues are squared singular values, kept
    above the SVD noise level. Otherwise a dense ``eigh`` is used with the
    negative floor check and a relative rank cutoff.
    """
    if op.factor is not None:
        f = _factor_rows(op, idx)
        if f.size == 0:
            return np.zeros(0), np.zeros((len(idx), 0))
        v, sv, _ = linalg.svd(f, full_matrices=False)
        keep = sv > max(f.shape) * _EPS * sv[0]
        return sv[keep] ** 2, v[:, keep]
    block = op.matrix[idx][:, idx].toarray()
    w, v = np.linalg.eigh(block)
    if w.size and w.min() < -NEGATIVE_FLOOR:
        raise NumericalError(f"state has eigenvalue {w.min():.3g} below -{NEGATIVE_FLOOR:g}")
    keep = w > RANK_RTOL * abs(block).max()
    return w[keep], v[:, keep]


def _spectra(op):
    for idx in _joint_blocks(op):
        w, v = _block_spectrum(op, idx)
        yield idx, w, v


def chernoff_trace(rho: FockOperator, sigma: FockOperator, s: float) -> float:
    """``Tr(rho^s sigma^(1-s))`` from the spectra of both states."""
    _check_pair(rho, sigma)
    if not 0.0 < s < 1.0:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    total = 0.0
    for idx in _joint_blocks(rho, sigma):
        wa, va = _block_spectrum(rho, idx)
        wb, vb = _block_spectrum(sigma, idx)
        if wa.size and wb.size:
            overlap = np.abs(va.conj().T @ vb) ** 2
            total += (wa**s) @ overlap @ (wb ** (1.0 - s))
    return float(total)


def uhlmann_fidelity(rho: FockOperator, sigma: FockOperator) -> float:
    """Squared Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2``.

    With Gram factors ``rho = A A^dag`` and ``sigma = B B^dag`` this is the
    squared nuclear norm of ``A^dag B``, which avoids square roots of
    rounding noise.
    """
    _check_pair(rho, sigma)
    root_sum = 0.0
    for idx in _joint_blocks(rho, sigma):
        if rho.factor is not None and sigma.factor is not None:
            # compressed factors v sqrt(w) span the same Gram matrices
            wa, va = _block_spectrum(rho, idx)
            wb, vb = _block_spectrum(sigma, idx)
            if wa.size and wb.size:
                root_sum += linalg.svdvals((va * np.sqrt(wa)).conj().T @ (vb * np.sqrt(wb))).sum()
            continue
        wa, va = _block_spectrum(rho, idx)
        if not wa.size:
            continue
        b = sigma.matrix[idx][:, idx].toarray()
        sa = (va * np.sqrt(wa)) @ va.conj().T
        inner = sa @ b @ sa
        w = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
        if w.min() < -NEGATIVE_FLOOR:
            raise NumericalError(f"negative eigenvalue {w.min():.3g} in fidelity kernel")
        # rounding noise would otherwise enter at the square root of its size
        root_sum += np.sqrt(w[w > RANK_RTOL * max(w.max(), 0.0)]).sum()
    return float(root_sum**2)


def helstrom_error(rho: FockOperator, sigma: FockOperator) -> float:
    """Minimum error probability for equiprobable discrimination of two states."""
    _check_pair(rho, sigma)
    norm = 0.0
    for idx in _joint_blocks(rho, sigma):
        d = (rho.matrix[idx][:, idx] - sigma.matrix[idx][:, idx]).toarray()
        if np.any(d):
            norm += np.abs(np.linalg.eigvalsh(d)).sum()
    return 0.5 * (1.0 - 0.5 * norm)


def power_trace(rho: FockOperator, p: float) -> float:
    """``Tr rho^p`` for ``p > 0``."""
    if not p > 0:
        raise DomainError(f"p must be > 0, got {p}")
    return float(sum(np.sum(w**p) for _, w, _ in _spectra(rho)))


def normalized_power(rho: FockOperator, p: float) -> FockOperator:
    """``rho^p / Tr rho^p``."""
    if not p > 0:
        raise DomainError(f"p must be > 0, got {p}")
    pieces = [(idx, (v * w**p) @ v.conj().T) for idx, w, v in _spectra(rho)]
    out = _assemble(pieces, rho.matrix.shape[0])
    return FockOperator(rho.dim, rho.modes, out / out.diagonal().sum().real, rho.trace_deficit)


# -- moments ----------------------------------------------------------------

def _quadratures(dim, modes):
    a = annihilation(dim)
    q = a + a.T
    p = -1j * (a - a.T)
    eye = sparse.identity(dim)
    ops = []
    for k in range(modes):
        for x in (q, p):
            factors = [eye] * modes
            factors[k] = x
            op = factors[0]
            for f in factors[1:]:
                op = sparse.kron(op, f)
            ops.append(sparse.csr_array(op))
    return ops


def quadrature_moments(state: FockOperator):
    """Mean vector and covariance matrix in the vacuum-variance-1 convention.

    Products involving the top Fock level are inexact; the moments are only
    meaningful when that level is essentially unpopulated.
    """
    xs = _quadratures(state.dim, state.modes)
    rho = state.matrix

    def expect(op):
        return (rho @ op).diagonal().sum()

    mean = np.array([expect(x).real for x in xs])
    n = len(xs)
    cov = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            sym = 0.5 * (xs[i] @ xs[j] + xs[j] @ xs[i])
            cov[i, j] = cov[j, i] = expect(sym).real - mean[i] * mean[j]
    return mean, cov


def mean_photons(state: FockOperator, mode: int = 0) -> float:
    dim = state.dim
    diag = state.matrix.diagonal().real.reshape((dim,) * state.modes)
    marginal = np.moveaxis(diag, mode, 0).reshape(dim, -1).sum(axis=1)
    return float(np.arange(dim) @ marginal)
