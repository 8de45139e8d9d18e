"""Phase-profile optimization for the reflective surface.

The configured surface maximizes the total composite channel power

    f(theta) = sum_n |direct[n] + cascade[n, :] @ theta|^2

over unit-modulus coefficients.  The pipeline lifts f to a Hermitian quadratic
form over an extended vector [theta; t], relaxes the rank-one constraint to a
PSD matrix with unit diagonal, solves the relaxation by projected gradient
ascent on a low-rank Gram factor, and recovers a feasible phase vector through
Gaussian randomization followed by cyclic coordinate ascent.  An exhaustive
quantized search over tiny problems serves as the correctness oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import FrequencyChannel
from .validation import as_complex_array, check_rng, check_unit_modulus

_TINY = 1e-300
_MAX_BACKTRACKS = 60


@dataclass(frozen=True)
class QuadraticForm:
    """Hermitian PSD lift of the channel-power objective.

    ``matrix`` is (N+1) x (N+1); for any extended vector v = [theta; t] with
    |t| = 1, ``v^H matrix v`` equals the power objective restricted to the
    subcarriers in ``subcarrier_subset``, evaluated at theta de-rotated by t.
    """

    matrix: np.ndarray
    subcarrier_subset: np.ndarray

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=np.complex128)
        subset = np.asarray(self.subcarrier_subset, dtype=np.int64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("matrix must be square")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "subcarrier_subset", subset)

    def validate(self, herm_tol: float = 1e-12, psd_tol: float = 1e-9) -> np.ndarray:
        """Check Hermitian symmetry and positive semidefiniteness.

        Returns the eigenvalues (ascending) so callers can reuse them.
        """
        r = self.matrix
        scale = max(1.0, float(np.linalg.norm(r)))
        herm_dev = float(np.max(np.abs(r - r.conj().T)))
        if herm_dev > herm_tol * scale:
            raise ValueError(f"matrix is not Hermitian (deviation {herm_dev:.3e})")
        eigvals = np.linalg.eigvalsh(r)
        trace = float(np.trace(r).real)
        if eigvals[0] < -psd_tol * max(trace, _TINY):
            raise ValueError(
                f"matrix is not PSD (min eigenvalue {eigvals[0]:.3e}, trace {trace:.3e})"
            )
        return eigvals


@dataclass(frozen=True)
class SdrSolution:
    """Low-rank factor of the relaxed solution: V = gram_factor @ gram_factor^H."""

    gram_factor: np.ndarray
    objective: float
    iterations: int
    converged: bool


def composite_power(direct, cascade, theta) -> float:
    """Total composite channel power f(theta) over all subcarriers."""
    h = np.asarray(direct) + np.asarray(cascade) @ np.asarray(theta)
    return float(np.sum(np.abs(h) ** 2))


def composite_power_batch(direct, cascade, thetas) -> np.ndarray:
    """f(theta) for every column of an (N, M) candidate matrix at once."""
    h = np.asarray(direct)[:, None] + np.asarray(cascade) @ np.asarray(thetas)
    return np.sum(np.abs(h) ** 2, axis=0)


def unconfigured_phases(n_elements: int) -> np.ndarray:
    """Passive metal sheet: identical (zero) phase on every element."""
    if n_elements < 1:
        raise ValueError("n_elements must be >= 1")
    return np.ones(n_elements, dtype=np.complex128)


def uniform_subcarrier_subset(num_subcarriers: int, subset_size: int) -> np.ndarray:
    """Uniformly spaced subcarrier indices used to assemble the lift."""
    if not 1 <= subset_size <= num_subcarriers:
        raise ValueError("need 1 <= subset_size <= num_subcarriers")
    return np.floor(np.arange(subset_size) * num_subcarriers / subset_size).astype(np.int64)


def build_quadratic(freq: FrequencyChannel, subset_size: int) -> QuadraticForm:
    """Assemble the (N+1) x (N+1) Hermitian PSD lift of the power objective.

    For each selected subcarrier n, stack b_n = [cascade[n, :], direct[n]] and
    accumulate R = sum_n conj(b_n) b_n^T, which is B^H B for the row-stacked
    matrix B and therefore PSD by construction.
    """
    subset = uniform_subcarrier_subset(freq.num_subcarriers, subset_size)
    b = np.concatenate([freq.cascade[subset], freq.direct[subset, None]], axis=1)
    r = b.conj().T @ b
    r = 0.5 * (r + r.conj().T)  # force exact Hermitian symmetry
    return QuadraticForm(matrix=r, subcarrier_subset=subset)


def lifted_objective(quad: QuadraticForm, theta, rotation: complex = 1.0) -> float:
    """Evaluate v^H R v at the extended vector v = [theta * rotation; rotation]."""
    theta = as_complex_array(theta, "theta", ndim=1)
    v = np.concatenate([theta, [1.0]]) * rotation
    return float(np.real(np.vdot(v, quad.matrix @ v)))


def _normalize_rows(u: np.ndarray) -> np.ndarray:
    norms = np.sqrt(np.sum(np.abs(u) ** 2, axis=1))
    return u / np.maximum(norms, _TINY)[:, None]


def default_rank(dim: int) -> int:
    """Gram-factor rank at the over-parameterized low-rank threshold."""
    return int(math.ceil(math.sqrt(2.0 * dim)))


def sdr_solve(
    quad: QuadraticForm,
    rank: int | None = None,
    max_iter: int = 5000,
    tol: float = 1e-8,
    restarts: int = 3,
    random_state=None,
) -> SdrSolution:
    """Approximately maximize Tr(R V) over PSD V with unit diagonal.

    Works on the factorization V = U U^H with unit-norm rows of U, ascending
    the objective with projected gradient steps (Euclidean gradient 2 R U,
    base step 1/(2*||R||_2), halved until the step does not decrease the
    objective, rows re-normalized after every step).  Stops when the relative
    objective change drops below ``tol`` or after ``max_iter`` iterations;
    the best of ``restarts`` seeded starts is returned.  A run that hits the
    iteration cap is reported with ``converged=False`` rather than raised.
    """
    eigvals = quad.validate()
    r_matrix = quad.matrix
    dim = r_matrix.shape[0]
    factor_rank = default_rank(dim) if rank is None else int(rank)
    if factor_rank < 1:
        raise ValueError("rank must be >= 1")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    base_step = 1.0 / (2.0 * max(float(eigvals[-1]), _TINY))

    rng = check_rng(random_state)
    best: SdrSolution | None = None
    for child in rng.spawn(restarts):
        u = _normalize_rows(
            child.standard_normal((dim, factor_rank))
            + 1j * child.standard_normal((dim, factor_rank))
        )
        ru = r_matrix @ u
        obj = float(np.real(np.vdot(u, ru)))
        converged = False
        iterations = 0
        for iterations in range(1, max_iter + 1):
            grad = 2.0 * ru
            step = base_step
            accepted = False
            for _ in range(_MAX_BACKTRACKS):
                cand = _normalize_rows(u + step * grad)
                ru_cand = r_matrix @ cand
                obj_cand = float(np.real(np.vdot(cand, ru_cand)))
                if obj_cand >= obj:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                converged = True  # no ascent direction left: stationary point
                break
            rel_gain = (obj_cand - obj) / max(abs(obj), _TINY)
            u, ru, obj = cand, ru_cand, obj_cand
            if rel_gain < tol:
                converged = True
                break
        if best is None or obj > best.objective:
            best = SdrSolution(
                gram_factor=u, objective=obj, iterations=iterations, converged=converged
            )
    return best


def coordinate_ascent(
    theta0,
    freq: FrequencyChannel,
    max_passes: int = 50,
    tol: float = 1e-6,
    return_trace: bool = False,
):
    """Cyclic per-element phase refinement of the power objective.

    Each element in turn is set to its closed-form maximizer given the others:
    with u_n the composite response excluding element i, the optimum is
    theta_i = conj(s)/|s| for s = sum_n cascade[n, i] * conj(u_n) (skipped when
    s vanishes).  Stops when a full pass improves f by less than ``tol``
    (relative) or after ``max_passes`` passes.  The objective never decreases.
    """
    theta = check_unit_modulus(theta0).copy()
    direct, cascade = freq.direct, freq.cascade
    if theta.size != freq.num_elements:
        raise ValueError("theta0 length does not match the channel element count")
    composite = direct + cascade @ theta
    obj = float(np.sum(np.abs(composite) ** 2))
    trace = [obj]
    for _ in range(max_passes):
        for i in range(theta.size):
            col = cascade[:, i]
            without = composite - col * theta[i]
            s = np.vdot(without, col)  # sum_n cascade[n, i] * conj(u_n)
            mag = abs(s)
            if mag > 0.0:
                theta[i] = np.conj(s) / mag
            composite = without + col * theta[i]
        composite = direct + cascade @ theta  # resync against float drift
        new_obj = float(np.sum(np.abs(composite) ** 2))
        trace.append(new_obj)
        gain = (new_obj - obj) / max(abs(obj), _TINY)
        obj = new_obj
        if gain < tol:
            break
    if return_trace:
        return theta, np.asarray(trace)
    return theta


def randomize_extract(
    solution: SdrSolution,
    quad: QuadraticForm,
    freq: FrequencyChannel,
    num_samples: int = 1000,
    rng=None,
    ascent_passes: int = 50,
) -> np.ndarray:
    """Recover a unit-modulus phase vector from the relaxed solution.

    Draws ``num_samples`` vectors xi = U g with g standard complex Gaussian,
    turns each into a candidate by keeping only the element phases relative to
    the extension coordinate, and augments the candidate set with the
    unconfigured (all-ones) vector and a coordinate-ascent refinement of the
    best Gaussian draw.  Returns the candidate with the largest full-band
    power objective, so the result can never fall below the unconfigured
    baseline.
    """
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    u = solution.gram_factor
    n = freq.num_elements
    if u.shape[0] != n + 1 or quad.matrix.shape[0] != n + 1:
        raise ValueError("solution/quadratic dimensions do not match the channel")
    rng = check_rng(rng)
    g = (
        rng.standard_normal((u.shape[1], num_samples))
        + 1j * rng.standard_normal((u.shape[1], num_samples))
    ) / np.sqrt(2.0)
    xi = u @ g
    candidates = np.exp(1j * (np.angle(xi[:-1, :]) - np.angle(xi[-1, :])[None, :]))
    direct, cascade = freq.direct, freq.cascade
    objectives = composite_power_batch(direct, cascade, candidates)
    best_gauss = int(np.argmax(objectives))
    refined = coordinate_ascent(candidates[:, best_gauss], freq, max_passes=ascent_passes)
    ones = unconfigured_phases(n)
    finalists = np.column_stack([candidates[:, best_gauss], refined, ones])
    finalist_obj = composite_power_batch(direct, cascade, finalists)
    return finalists[:, int(np.argmax(finalist_obj))].copy()


def brute_force_phases(
    freq: FrequencyChannel, levels: int, budget: int = 10**6, chunk: int = 1 << 14
) -> np.ndarray:
    """Exhaustive search over quantized phases; the desk-scale oracle.

    Evaluates every theta with coefficients drawn from the ``levels``-th roots
    of unity and returns the maximizer of the power objective, breaking ties
    toward the lexicographically smallest phase-index tuple.  Refuses to run
    when levels**N exceeds ``budget``.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    n = freq.num_elements
    total = levels**n
    if total > budget:
        raise ValueError(f"levels**N = {total} exceeds the search budget {budget}")
    roots = np.exp(2j * np.pi * np.arange(levels) / levels)
    direct, cascade = freq.direct, freq.cascade
    best_val = -np.inf
    best_theta: np.ndarray | None = None
    # enumerate index tuples lexicographically, first element most significant
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        digits = np.empty((n, flat.size), dtype=np.int64)
        rem = flat
        for i in range(n - 1, -1, -1):
            digits[i] = rem % levels
            rem = rem // levels
        thetas = roots[digits]
        vals = composite_power_batch(direct, cascade, thetas)
        idx = int(np.argmax(vals))
        if vals[idx] > best_val:
            best_val = float(vals[idx])
            best_theta = thetas[:, idx].copy()
    return best_theta
