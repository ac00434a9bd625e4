"""Gaussian-state engine for the three-mode nonlinear interferometer.

Conventions
-----------
* Quadratures are ordered ``(x_1, p_1, x_2, p_2, ...)`` with
  ``x = (a + a^dag)/sqrt(2)`` and ``p = (a - a^dag)/(i sqrt(2))``, so the
  vacuum covariance is ``I/2``.
* An element with unitary ``U`` acts on the state as ``rho -> U rho U^dag``.
  Its symplectic matrix ``S`` is the Heisenberg map ``U^dag r U = S r``, so
  the covariance updates as ``S cov S^T``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

SYMMETRY_TOL = 1e-12
UNCERTAINTY_TOL = 1e-10
SYMPLECTIC_TOL = 1e-10

PIPELINE_MODES = ("i", "v", "i'")


def symplectic_form(n_modes):
    """The standard symplectic form for interleaved ``(x, p)`` ordering."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def is_symplectic(matrix, tol=SYMPLECTIC_TOL):
    matrix = np.asarray(matrix)
    omega = symplectic_form(matrix.shape[0] // 2)
    return bool(np.max(np.abs(matrix @ omega @ matrix.T - omega)) <= tol)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean vector and covariance matrix of ``len(labels)`` bosonic modes."""

    labels: tuple
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise DomainError(f"duplicate mode labels {labels}")
        n = 2 * len(labels)
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float)
        if mean.shape != (n,) or cov.shape != (n, n):
            raise DomainError(f"expected mean ({n},) and cov ({n}, {n}) for {len(labels)} modes")
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        self.check()

    @property
    def n_modes(self):
        return len(self.labels)

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"unknown mode {label!r}; state has {self.labels}") from None

    def check(self):
        """Raise if the covariance is not symmetric or violates the uncertainty relation."""
        asym = np.max(np.abs(self.cov - self.cov.T), initial=0.0)
        if asym > SYMMETRY_TOL:
            raise DomainError(f"covariance not symmetric (max asymmetry {asym:.3e})")
        bound = self.cov + 0.5j * symplectic_form(self.n_modes)
        lowest = np.linalg.eigvalsh(bound).min()
        if lowest < -UNCERTAINTY_TOL:
            raise DomainError(f"covariance violates the uncertainty relation (eigenvalue {lowest:.3e})")

    def purity_determinant(self):
        """det(2 cov): 1 for pure states, greater than 1 for mixed ones."""
        return float(np.linalg.det(2.0 * self.cov))

    def reduced(self, label):
        """Single-mode marginal of ``label``."""
        k = self.index(label)
        sl = slice(2 * k, 2 * k + 2)
        return GaussianState((label,), self.mean[sl], self.cov[sl, sl])


def vacuum_state(label="v"):
    return GaussianState((label,), np.zeros(2), 0.5 * np.eye(2))


def thermal_state(n_th, label="i"):
    """Single-mode thermal state with mean occupation ``n_th``."""
    n_th = float(n_th)
    if not math.isfinite(n_th) or n_th < 0:
        raise DomainError(f"n_th must be non-negative, got {n_th!r}")
    return GaussianState((label,), np.zeros(2), (n_th + 0.5) * np.eye(2))


def tensor(*states):
    """Product state of independent modes, labels concatenated in order."""
    labels = sum((s.labels for s in states), ())
    mean = np.concatenate([s.mean for s in states])
    n = len(mean)
    cov = np.zeros((n, n))
    k = 0
    for s in states:
        m = len(s.mean)
        cov[k:k + m, k:k + m] = s.cov
        k += m
    return GaussianState(labels, mean, cov)


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """Quadrature map of one optical element acting on the modes ``modes``."""

    matrix: np.ndarray
    modes: tuple
    description: str = ""

    def __post_init__(self):
        modes = tuple(self.modes)
        if len(set(modes)) != len(modes):
            raise DomainError(f"element acts on duplicate modes {modes}")
        matrix = np.array(self.matrix, dtype=float)
        if matrix.shape != (2 * len(modes), 2 * len(modes)):
            raise DomainError("symplectic matrix size does not match its modes")
        if not is_symplectic(matrix):
            raise DomainError(f"{self.description or 'transform'} is not symplectic")
        matrix.flags.writeable = False
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "matrix", matrix)

    def embed(self, labels):
        """The full ``2M x 2M`` matrix on the ordered modes ``labels``."""
        labels = tuple(labels)
        missing = [m for m in self.modes if m not in labels]
        if missing:
            raise DomainError(f"modes {missing} not present in state {labels}")
        full = np.eye(2 * len(labels))
        idx = np.concatenate([[2 * labels.index(m), 2 * labels.index(m) + 1] for m in self.modes])
        full[np.ix_(idx, idx)] = self.matrix
        return full


def _from_ladder_map(A, B):
    """Real symplectic matrix for ``a_j -> sum_k A_jk a_k + B_jk a_k^dag``."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    n = A.shape[0]
    # (x..., p...) block form first, then interleave
    block = np.block([
        [(A + B).real, -(A - B).imag],
        [(A + B).imag, (A - B).real],
    ])
    order = np.ravel(np.column_stack([np.arange(n), np.arange(n) + n]))
    return block[np.ix_(order, order)]


def two_mode_squeezer(xi, modes=("i", "v")):
    """Crystal exp[i xi (ab + a^dag b^dag)] on the pair ``modes``.

    Heisenberg map: a -> cosh(xi) a + i sinh(xi) b^dag, and the same with
    a and b exchanged.
    """
    xi = float(xi)
    if not math.isfinite(xi):
        raise DomainError("xi must be finite")
    ch, sh = math.cosh(xi), math.sinh(xi)
    A = np.diag([ch, ch])
    B = np.array([[0.0, 1j * sh], [1j * sh, 0.0]])
    return SymplecticTransform(_from_ladder_map(A, B), modes, f"squeezer(xi={xi})")


def phase_shifter(phi, mode="i"):
    """Phase shift exp[i phi a^dag a]; Heisenberg map a -> exp(i phi) a."""
    phi = float(phi)
    if not math.isfinite(phi):
        raise DomainError("phi must be finite")
    S = _from_ladder_map([[np.exp(1j * phi)]], [[0.0]])
    return SymplecticTransform(S, (mode,), f"phase(phi={phi})")


def beam_splitter(kappa, modes=("i", "i'")):
    """Beam splitter exp[i kappa (a c^dag + a^dag c)], transmissivity cos^2(kappa)."""
    kappa = float(kappa)
    if not (0.0 <= kappa <= math.pi / 2):
        raise DomainError(f"kappa must lie in [0, pi/2], got {kappa!r}")
    ct, st = math.cos(kappa), math.sin(kappa)
    A = np.array([[ct, 1j * st], [1j * st, ct]])
    return SymplecticTransform(_from_ladder_map(A, np.zeros((2, 2))), modes, f"beamsplitter(kappa={kappa})")


def apply(transform, state):
    """Evolve ``state`` through ``transform``; returns a new state."""
    S = transform.embed(state.labels)
    return GaussianState(state.labels, S @ state.mean, S @ state.cov @ S.T)


def mean_photon_number(state, label):
    """<a^dag a> of mode ``label``; rounding residue below 1e-10 is clamped to 0."""
    k = state.index(label)
    sxx, spp = state.cov[2 * k, 2 * k], state.cov[2 * k + 1, 2 * k + 1]
    x, p = state.mean[2 * k], state.mean[2 * k + 1]
    n = 0.5 * (sxx + spp) - 0.5 + 0.5 * (x * x + p * p)
    if n < 0:
        if n < -UNCERTAINTY_TOL:
            raise DomainError(f"negative photon number {n:.3e}")
        n = 0.0
    return float(n)


def input_state(n_th_i, n_th_c):
    """Thermal mode i, vacuum mode v and thermal mode i'."""
    return tensor(thermal_state(n_th_i, "i"), vacuum_state("v"), thermal_state(n_th_c, "i'"))


def pipeline_elements(xi, phi, kappa):
    return [
        two_mode_squeezer(xi, ("i", "v")),
        phase_shifter(phi, "i"),
        beam_splitter(kappa, ("i", "i'")),
        two_mode_squeezer(xi, ("i", "v")),
    ]


def evolve_pipeline(params, phi=None):
    """Final three-mode state for ``params`` (``phi`` overrides ``params.phi``)."""
    phi = params.phi if phi is None else phi
    state = input_state(params.n_th_i, params.n_th_c)
    for element in pipeline_elements(params.xi, phi, params.kappa):
        state = apply(element, state)
        if np.any(state.mean != 0):
            raise AssertionError("linear elements on zero-mean inputs must keep mean zero")
    return state


def n_visible(params, phi=None):
    """Mean photon number in the visible mode computed from the covariance."""
    return mean_photon_number(evolve_pipeline(params, phi), "v")
