"""Brute-force density-matrix oracle on a truncated Fock space.

Modes are ordered ``(i, v, i')`` and a basis state ``|n_i, n_v, n_c>`` has
flat index ``(n_i * d + n_v) * d + n_c``. Every optical element is the
dense matrix exponential of its truncated Hermitian generator, so this
module shares nothing with the covariance engine or the closed form.
"""

import math
from dataclasses import dataclass

import numpy as np

from .blackbody import bose_einstein_pmf
from .exceptions import CutoffGuardError, DomainError

DEFAULT_CUTOFF = 12
DEFAULT_MAX_DIM = 4096
PIPELINE_MODES = ("i", "v", "i'")
N_PIPELINE_MODES = 3

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-6
POSITIVITY_TOL = 1e-8
UNITARITY_TOL = 1e-8


def ladder_operators(d):
    """Truncated annihilation and creation matrices on levels 0..d-1."""
    if int(d) != d or d < 2:
        raise DomainError(f"Fock cutoff must be an integer >= 2, got {d!r}")
    a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1).astype(complex)
    return a, a.conj().T


def number_operator(d):
    return np.diag(np.arange(d, dtype=float))


def check_cutoff(d, n_modes=N_PIPELINE_MODES, max_dim=DEFAULT_MAX_DIM):
    if int(d) != d or d < 2:
        raise DomainError(f"Fock cutoff must be an integer >= 2, got {d!r}")
    dim = int(d) ** n_modes
    if dim > max_dim:
        raise CutoffGuardError(
            f"cutoff d={d} gives Hilbert-space dimension {dim} > limit {max_dim}"
            f" (largest allowed d is {int(round(max_dim ** (1 / n_modes)))})"
        )
    return int(d)


@dataclass(frozen=True, eq=False)
class TruncatedDensityMatrix:
    """Density matrix of ``n_modes`` modes each truncated to ``d`` levels."""

    rho: np.ndarray
    d: int
    n_modes: int
    truncation_loss: float = 0.0
    """Probability weight discarded when the input states were truncated."""

    @property
    def dim(self):
        return self.d ** self.n_modes

    def trace(self):
        return complex(np.trace(self.rho))

    def hermiticity_error(self):
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))

    def min_eigenvalue(self):
        return float(np.linalg.eigvalsh(0.5 * (self.rho + self.rho.conj().T)).min())

    def check(self, positivity=True):
        """Raise if the matrix is not Hermitian, unit trace and positive within tolerance."""
        herm = self.hermiticity_error()
        if herm > HERMITIAN_TOL:
            raise DomainError(f"density matrix not Hermitian (error {herm:.3e})")
        tr = self.trace()
        if abs(tr - 1) > TRACE_TOL:
            raise DomainError(f"density matrix trace {tr} differs from 1")
        if positivity:
            lowest = self.min_eigenvalue()
            if lowest < -POSITIVITY_TOL:
                raise DomainError(f"density matrix has eigenvalue {lowest:.3e}")

    def reduced(self, mode):
        """Partial trace onto a single mode."""
        shape = (self.d,) * self.n_modes
        t = self.rho.reshape(shape + shape)
        keep = mode
        others = [k for k in range(self.n_modes) if k != keep]
        letters = "abcdefgh"
        row = [letters[k] for k in range(self.n_modes)]
        col = [letters[k].upper() for k in range(self.n_modes)]
        for k in others:
            col[k] = row[k]
        spec = "".join(row) + "".join(col) + "->" + row[keep] + col[keep]
        return np.einsum(spec, t)


def thermal_density_matrix(n_th, d):
    """Diagonal thermal state on ``d`` levels, renormalized after truncation."""
    a, _ = ladder_operators(d)
    p = bose_einstein_pmf(n_th, np.arange(d))
    retained = float(p.sum())
    rho = np.diag(p / retained).astype(complex)
    return TruncatedDensityMatrix(rho, d, 1, truncation_loss=1.0 - retained)


def product_state(*states):
    """Tensor product of independent truncated states with equal cutoff."""
    d = states[0].d
    if any(s.d != d for s in states):
        raise DomainError("all factors must share one cutoff")
    rho = states[0].rho
    kept = 1.0 - states[0].truncation_loss
    for s in states[1:]:
        rho = np.kron(rho, s.rho)
        kept *= 1.0 - s.truncation_loss
    return TruncatedDensityMatrix(rho, d, sum(s.n_modes for s in states), truncation_loss=1.0 - kept)


def _expm_i_hermitian(generator, theta):
    """exp(i theta G) for Hermitian G via its eigendecomposition."""
    w, v = np.linalg.eigh(generator)
    return (v * np.exp(1j * theta * w)) @ v.conj().T


ELEMENT_KINDS = ("squeezer", "phase", "beamsplitter")


def local_unitary(kind, theta, d):
    """Unitary of one element on the modes it touches.

    ``squeezer``: exp[i theta (ab + a^dag b^dag)] on two modes.
    ``phase``: exp[i theta a^dag a] on one mode.
    ``beamsplitter``: exp[i theta (a c^dag + a^dag c)] on two modes.
    """
    a, ad = ladder_operators(d)
    if kind == "phase":
        return np.diag(np.exp(1j * theta * np.arange(d)))
    if kind == "squeezer":
        gen = np.kron(a, a) + np.kron(ad, ad)
    elif kind == "beamsplitter":
        gen = np.kron(a, ad) + np.kron(ad, a)
    else:
        raise DomainError(f"unknown element kind {kind!r}; expected one of {ELEMENT_KINDS}")
    if theta == 0:
        return np.eye(d * d, dtype=complex)
    return _expm_i_hermitian(gen, theta)


def _apply_local(op, modes, x, d, n_modes):
    """Left-multiply ``x`` (shape (d**n_modes, K)) by ``op`` acting on ``modes``."""
    k = x.shape[1]
    t = x.reshape((d,) * n_modes + (k,))
    t = np.moveaxis(t, modes, range(len(modes)))
    moved_shape = t.shape
    t = (op @ t.reshape(d ** len(modes), -1)).reshape(moved_shape)
    t = np.moveaxis(t, range(len(modes)), modes)
    return t.reshape(d**n_modes, k)


def element_unitary(kind, theta, modes, d, n_modes=N_PIPELINE_MODES):
    """Full ``d**n_modes`` square unitary of one element acting on ``modes``."""
    modes = tuple(modes)
    if len(set(modes)) != len(modes) or any(not 0 <= m < n_modes for m in modes):
        raise DomainError(f"invalid mode indices {modes} for {n_modes} modes")
    op = local_unitary(kind, theta, d)
    if op.shape[0] != d ** len(modes):
        raise DomainError(f"element {kind!r} acts on {int(round(math.log(op.shape[0], d)))} modes, got {modes}")
    return _apply_local(op, modes, np.eye(d**n_modes, dtype=complex), d, n_modes)


def unitarity_error(u):
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def pipeline_elements(xi, phi, kappa):
    """(kind, parameter, modes) for each element in propagation order."""
    return [
        ("squeezer", xi, (0, 1)),
        ("phase", phi, (0,)),
        ("beamsplitter", kappa, (0, 2)),
        ("squeezer", xi, (0, 1)),
    ]


def _validate_angles(kappa):
    if not 0.0 <= kappa <= math.pi / 2:
        raise DomainError(f"kappa must lie in [0, pi/2], got {kappa!r}")


def evolve_pipeline(params, d=DEFAULT_CUTOFF, max_dim=DEFAULT_MAX_DIM, phi=None):
    """Final three-mode density matrix, evolving rho -> U rho U^dag element by element.

    Trace and Hermiticity are checked after every element.
    """
    d = check_cutoff(d, N_PIPELINE_MODES, max_dim)
    _validate_angles(params.kappa)
    phi = params.phi if phi is None else phi
    vac = TruncatedDensityMatrix(np.diag([1.0] + [0.0] * (d - 1)).astype(complex), d, 1)
    state = product_state(thermal_density_matrix(params.n_th_i, d), vac, thermal_density_matrix(params.n_th_c, d))
    rho = state.rho
    trace0 = np.trace(rho).real
    for kind, theta, modes in pipeline_elements(params.xi, phi, params.kappa):
        op = local_unitary(kind, theta, d)
        half = _apply_local(op, modes, rho, d, N_PIPELINE_MODES)
        rho = _apply_local(op, modes, half.conj().T, d, N_PIPELINE_MODES).conj().T
        step = TruncatedDensityMatrix(rho, d, N_PIPELINE_MODES)
        if step.hermiticity_error() > HERMITIAN_TOL:
            raise DomainError(f"{kind} broke Hermiticity")
        if abs(step.trace() - trace0) > 1e-10:
            raise DomainError(f"{kind} changed the trace by {abs(step.trace() - trace0):.3e}")
    return TruncatedDensityMatrix(rho, d, N_PIPELINE_MODES, truncation_loss=state.truncation_loss)


def expectation_number(state, mode):
    """<n> of ``mode`` (an index, or a label in ``PIPELINE_MODES``)."""
    if isinstance(mode, str):
        if mode not in PIPELINE_MODES:
            raise DomainError(f"unknown mode {mode!r}")
        mode = PIPELINE_MODES.index(mode)
    if not 0 <= mode < state.n_modes:
        raise DomainError(f"mode index {mode} out of range for {state.n_modes} modes")
    diag = np.diagonal(state.rho)
    if np.max(np.abs(diag.imag), initial=0.0) > 1e-10:
        raise DomainError("density-matrix diagonal has a non-negligible imaginary part")
    n = _mode_numbers(state.d, state.n_modes, mode)
    value = float(np.dot(diag.real, n))
    return max(value, 0.0)


def _mode_numbers(d, n_modes, mode):
    """Photon number of ``mode`` for every flat basis index."""
    shape = (d,) * n_modes
    return np.indices(shape)[mode].reshape(-1).astype(float)


def n_visible(params, d=DEFAULT_CUTOFF, max_dim=DEFAULT_MAX_DIM, phi=None):
    """Visible-mode photon number from the evolved density matrix."""
    return expectation_number(evolve_pipeline(params, d, max_dim, phi), 1)


def pipeline_unitary(xi, phi, kappa, d):
    """Product of the four element unitaries on the full truncated space."""
    _validate_angles(kappa)
    u = np.eye(d**N_PIPELINE_MODES, dtype=complex)
    for kind, theta, modes in pipeline_elements(xi, phi, kappa):
        u = _apply_local(local_unitary(kind, theta, d), modes, u, d, N_PIPELINE_MODES)
    return u


def n_visible_batch(xi, phi, kappa, seeds, d=DEFAULT_CUTOFF, max_dim=DEFAULT_MAX_DIM):
    """Visible photon number for many ``(n_th_i, n_th_c)`` seeds sharing one element setting.

    The input state is diagonal, rho_0 = sum_k p_k |k><k|, so each Fock
    basis state is evolved once (a column of the pipeline unitary) and the
    output for any seed pair is the p-weighted sum of the per-column values.
    """
    d = check_cutoff(d, N_PIPELINE_MODES, max_dim)
    u = pipeline_unitary(xi, phi, kappa, d)
    n_v = _mode_numbers(d, N_PIPELINE_MODES, 1)
    per_column = n_v @ (np.abs(u) ** 2)
    levels = np.arange(d)
    vac = np.zeros(d)
    vac[0] = 1.0
    out = []
    for n_i, n_c in seeds:
        p_i = bose_einstein_pmf(n_i, levels)
        p_c = bose_einstein_pmf(n_c, levels)
        p0 = np.kron(np.kron(p_i / p_i.sum(), vac), p_c / p_c.sum())
        out.append(max(float(p0 @ per_column), 0.0))
    return out
