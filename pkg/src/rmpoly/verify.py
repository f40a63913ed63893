"""Numerical checks of the singular-value bounds behind the limit theorems.

Two kinds of check live here:

* deterministic theorem checks -- interlacing under low-rank perturbation
  (Thompson), singular value perturbation (Mirsky), submatrix interlacing,
  the Woodbury identity, and the singular-value range of a shifted block
  circulant.  These are exact statements; a check fails only beyond a
  relative slack of ``Tolerances.deterministic_slack``.
* probabilistic bound checks -- Monte Carlo sweeps confirming that sampled
  quantities respect high-probability bounds at pilot-calibrated constants:
  floors on the smallest singular values of shifted companion matrices,
  caps on their spectral norms, a floor on an intermediate singular value,
  and tail bounds for Gaussian matrix norms and smallest singular values of
  shifted rectangular Gaussians.

Margins follow one sign convention: >= 0 passes.  For an upper bound the
margin is (bound - observed); for a lower bound it is (observed - bound).
Checks covering several inequalities per trial record the worst (smallest)
margin of the trial.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularUpdateError, ValidationError
from .linalg import (log_abs_det, singular_values, spectral_norm,
                     woodbury_inverse)
from .matpoly import (RngStream, circulant_b_eigenvalues, circulant_matrix,
                      companion, complex_gaussian, sample_monic_gaussian)
from .tolerances import DEFAULT, Tolerances, rank_cutoff

__all__ = [
    "LemmaCheckConfig",
    "LemmaReport",
    "check_lowrank_interlacing",
    "check_mirsky",
    "check_submatrix_interlacing",
    "check_woodbury_identity",
    "check_circulant_shift_bounds",
    "sweep_lowrank_interlacing",
    "sweep_mirsky",
    "sweep_submatrix_interlacing",
    "sweep_woodbury_identity",
    "sweep_circulant_shift_bounds",
    "pseudoinverse_tail_bound",
    "mc_pseudoinverse_tail",
    "check_pinv_tail_domination",
    "gaussian_norm_tail",
    "beta_projection_check",
    "replacement_gap",
    "replacement_gap_prescaled",
    "tail_split_index",
    "tail_log_sum",
    "lemma_suite_grow_n",
    "lemma_suite_grow_k",
]


# ---------------------------------------------------------------------------
# Configuration and report types


@dataclass(frozen=True)
class LemmaCheckConfig:
    """Constants and sweep layout for the probabilistic lemma suites.

    ``sizes`` lists (n, k) cells; ``z`` is the spectral shift.  The
    remaining fields are the bound constants: floors scale like
    ``n**-(exponent_a + 2)`` and ``constant_t * k**-2``, the spectral-norm
    cap is ``constant_d`` (dimension-grown suite) or ``constant_r * sqrt(k)
    + 1 + |z|`` (degree-grown suite), and the intermediate-index floor uses
    ``constant_t * n**(epsilon - 1/2)`` at split index floor(kn -
    n**(1 - delta)).  Requires ``epsilon < 1/2 - delta``.
    """

    z: complex
    sizes: tuple
    trials: int = 200
    delta: float = 0.3
    epsilon: float = 0.1
    exponent_a: float = 1.0
    constant_t: float = 1e-3
    constant_d: float = 6.0
    constant_r: float = 3.0

    def __post_init__(self):
        if not 0.0 < self.delta < 0.5:
            raise ValidationError(f"delta must lie in (0, 1/2), got {self.delta}")
        if not 0.0 < self.epsilon < 0.5 - self.delta:
            raise ValidationError(
                f"epsilon must lie in (0, 1/2 - delta) = (0, {0.5 - self.delta}), "
                f"got {self.epsilon}")
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")
        if not self.sizes:
            raise ValidationError("sizes must be nonempty")
        for n, k in self.sizes:
            if n < 1 or k < 1:
                raise ValidationError(f"invalid size (n={n}, k={k})")
        if not 0.0 < self.constant_t <= 1.0:
            raise ValidationError(
                f"constant_t must lie in (0, 1], got {self.constant_t}")
        if self.constant_d <= 0 or self.constant_r <= 0 or self.exponent_a <= 0:
            raise ValidationError("constants d, r and exponent a must be positive")


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of one check family: margins per trial, >= 0 passes.

    ``violations`` is always the count of negative margins.
    ``fitted_exponent`` is a least-squares slope of log(median quantity)
    against log(size) when the sweep spans enough sizes, else None.
    """

    lemma_id: str
    per_trial_margins: tuple
    fitted_exponent: float | None = None
    violations: int = field(init=False, default=0)

    def __post_init__(self):
        margins = tuple(float(m) for m in self.per_trial_margins)
        object.__setattr__(self, "per_trial_margins", margins)
        object.__setattr__(self, "violations",
                           int(sum(1 for m in margins if m < 0)))

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_json_dict(self) -> dict:
        return {
            "lemma_id": self.lemma_id,
            "trials": len(self.per_trial_margins),
            "violations": self.violations,
            "min_margin": min(self.per_trial_margins),
            "fitted_exponent": self.fitted_exponent,
            "per_trial_margins": list(self.per_trial_margins),
        }


# ---------------------------------------------------------------------------
# Deterministic theorem checks (exact statements, slack-guarded)


def check_lowrank_interlacing(a, e, tol: Tolerances = DEFAULT) -> LemmaReport:
    """Interlacing under additive low-rank perturbation.

    With alpha = singular values of ``a``, beta = singular values of
    ``a + e`` and r = numerical rank of ``e``:
    ``alpha_i >= beta_{i+r}`` and ``beta_i >= alpha_{i+r}`` for all valid i.
    """
    alpha = singular_values(a)
    beta = singular_values(np.asarray(a) + np.asarray(e))
    se = singular_values(e)
    r = int(np.sum(se > rank_cutoff(np.asarray(e).shape, float(se[0]), tol)))
    slack = tol.deterministic_slack * max(alpha[0], beta[0], 1.0)
    margins = []
    for i in range(len(alpha) - r):
        margins.append(alpha[i] - beta[i + r] + slack)
        margins.append(beta[i] - alpha[i + r] + slack)
    if not margins:
        margins = [slack]  # perturbation rank saturates the dimension
    return LemmaReport("lowrank-interlacing", tuple(margins))


def check_mirsky(a, b, tol: Tolerances = DEFAULT) -> LemmaReport:
    """Singular values move by at most the spectral norm of the difference:
    ``max_i |sigma_i(a) - sigma_i(b)| <= ||a - b||``."""
    sa = singular_values(a)
    sb = singular_values(b)
    if sa.shape != sb.shape:
        raise ValidationError("sv perturbation check needs equal shapes")
    gap = float(np.max(np.abs(sa - sb)))
    norm = spectral_norm(np.asarray(a) - np.asarray(b))
    slack = tol.deterministic_slack * max(sa[0], sb[0], 1.0)
    return LemmaReport("mirsky-sv-perturbation", (norm - gap + slack,))


def check_submatrix_interlacing(a, rows, cols,
                                tol: Tolerances = DEFAULT) -> LemmaReport:
    """A p x q submatrix has no larger top singular value and no smaller
    min(p, q)-th one: ``||a|| >= ||b||`` and ``sigma_{min(p,q)}(a) >=
    sigma_min(b)``."""
    aa = np.asarray(a, dtype=np.complex128)
    rows = np.asarray(rows, dtype=int)
    cols = np.asarray(cols, dtype=int)
    if rows.size == 0 or cols.size == 0:
        raise ValidationError("row and column subsets must be nonempty")
    b = aa[np.ix_(rows, cols)]
    sa = singular_values(aa)
    sb = singular_values(b)
    slack = tol.deterministic_slack * max(sa[0], 1.0)
    small = min(b.shape)
    return LemmaReport("submatrix-interlacing",
                       (sa[0] - sb[0] + slack,
                        sa[small - 1] - sb[-1] + slack))


def check_woodbury_identity(a, u, v, tol: Tolerances = DEFAULT) -> LemmaReport:
    """Low-rank update inverse agrees with a true inverse of ``a + u v``.

    Verified through both inverse residuals ``||(a+uv) w - I||_F`` and
    ``||w (a+uv) - I||_F``, each normalized by ``||a+uv||_F ||w||_F`` so the
    margin is conditioning-free.
    """
    aa = np.asarray(a, dtype=np.complex128)
    w = woodbury_inverse(np.linalg.inv(aa), u, v)
    b = aa + np.asarray(u) @ np.asarray(v)
    scale = np.linalg.norm(b, "fro") * np.linalg.norm(w, "fro")
    eye = np.eye(b.shape[0])
    right = np.linalg.norm(b @ w - eye, "fro") / scale
    left = np.linalg.norm(w @ b - eye, "fro") / scale
    slack = tol.deterministic_slack
    return LemmaReport("woodbury-identity", (slack - right, slack - left))


def check_circulant_shift_bounds(n: int, k: int, z: complex,
                                 tol: Tolerances = DEFAULT) -> LemmaReport:
    """Singular values of (block circulant - z I) stay in
    ``[|1 - |z||, 1 + |z|]``.

    The shifted block circulant is normal with eigenvalues (root of unity -
    z), so every singular value is the modulus of such an eigenvalue.
    """
    s = singular_values(circulant_matrix(n, k) - z * np.eye(k * n))
    lo = abs(1.0 - abs(z))
    hi = 1.0 + abs(z)
    slack = tol.deterministic_slack * max(s[0], 1.0)
    margins = np.concatenate([s - lo + slack, hi - s + slack])
    return LemmaReport("circulant-shift-sv-range", tuple(margins))


# ---------------------------------------------------------------------------
# Deterministic sweeps: many random instances, worst margin per instance


def _min_margin(report: LemmaReport) -> float:
    return min(report.per_trial_margins)


def sweep_lowrank_interlacing(dim: int, instances: int, rng: RngStream,
                              rank: int = 1) -> LemmaReport:
    margins = []
    for i in range(instances):
        gg = rng.child(0, i).generator()
        a = complex_gaussian(gg, (dim, dim))
        u = complex_gaussian(gg, (dim, rank))
        v = complex_gaussian(gg, (rank, dim))
        margins.append(_min_margin(check_lowrank_interlacing(a, u @ v)))
    return LemmaReport("lowrank-interlacing", tuple(margins))


def sweep_mirsky(dim: int, instances: int,
                          rng: RngStream) -> LemmaReport:
    margins = []
    for i in range(instances):
        gg = rng.child(1, i).generator()
        a = complex_gaussian(gg, (dim, dim))
        b = complex_gaussian(gg, (dim, dim))
        margins.append(_min_margin(check_mirsky(a, b)))
    return LemmaReport("mirsky-sv-perturbation", tuple(margins))


def sweep_submatrix_interlacing(dim: int, instances: int,
                                rng: RngStream) -> LemmaReport:
    margins = []
    for i in range(instances):
        gg = rng.child(2, i).generator()
        a = complex_gaussian(gg, (dim, dim))
        p = int(gg.integers(1, dim + 1))
        q = int(gg.integers(1, dim + 1))
        rows = gg.choice(dim, size=p, replace=False)
        cols = gg.choice(dim, size=q, replace=False)
        margins.append(_min_margin(check_submatrix_interlacing(a, rows, cols)))
    return LemmaReport("submatrix-interlacing", tuple(margins))


def sweep_woodbury_identity(dim: int, instances: int, rng: RngStream,
                            rank: int = 1) -> LemmaReport:
    margins = []
    for i in range(instances):
        for attempt in range(100):
            gg = rng.child(3, i, attempt).generator()
            a = complex_gaussian(gg, (dim, dim))
            u = complex_gaussian(gg, (dim, rank))
            v = complex_gaussian(gg, (rank, dim))
            try:
                margins.append(_min_margin(check_woodbury_identity(a, u, v)))
                break
            except SingularUpdateError:
                continue  # precondition failed, redraw
        else:  # pragma: no cover - probability ~ 0
            raise ValidationError(
                "could not draw an invertible low-rank update in 100 tries")
    return LemmaReport("woodbury-identity", tuple(margins))


def sweep_circulant_shift_bounds(sizes, instances: int,
                                 rng: RngStream) -> LemmaReport:
    """Range check for random shifts z cycling over the given (n, k) sizes."""
    margins = []
    sizes = tuple(sizes)
    for i in range(instances):
        gg = rng.child(4, i).generator()
        n, k = sizes[i % len(sizes)]
        z = complex(gg.standard_normal(), gg.standard_normal())
        margins.append(_min_margin(check_circulant_shift_bounds(n, k, z)))
    return LemmaReport("circulant-shift-sv-range", tuple(margins))


# ---------------------------------------------------------------------------
# Rectangular Gaussian tail bounds


def pseudoinverse_tail_bound(n: int, big_n: int, tau: float) -> float:
    """Closed-form tail bound for the smallest singular value of a shifted
    rectangular Gaussian.

    For an n x N matrix ``R = R_D + G`` with deterministic ``R_D`` and i.i.d.
    complex Gaussian ``G`` of entry variance 1/n, with q = N - n + 1:

        P(sigma_n(R) <= tau) <= tau^(2q) / sqrt(2 pi) * (n N e^2)^q
                                 / q^(2q + 1/2).

    Evaluated in log space to avoid overflow for extreme parameters, and
    capped at 1 where the formula is vacuous.  The cap keeps the result a
    probability while preserving monotonicity in ``tau``.
    """
    if n < 1 or big_n < n:
        raise ValidationError(f"need 1 <= n <= N, got n={n}, N={big_n}")
    if tau < 0:
        raise ValidationError(f"tau must be >= 0, got {tau}")
    if tau == 0.0:
        return 0.0
    q = big_n - n + 1
    log_bound = (2 * q * math.log(tau)
                 - 0.5 * math.log(2.0 * math.pi)
                 + q * (math.log(n) + math.log(big_n) + 2.0)
                 - (2 * q + 0.5) * math.log(q))
    if log_bound >= 0.0:
        return 1.0
    return math.exp(log_bound)


def mc_pseudoinverse_tail(n: int, big_n: int, tau: float, r_deterministic,
                          trials: int, rng, chunk: int = 8192) -> float:
    """Empirical frequency of ``sigma_n(R_D + G) <= tau`` over i.i.d. draws.

    ``G`` has i.i.d. complex Gaussian entries of variance 1/n (matching the
    closed-form bound's convention).
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if tau < 0:
        raise ValidationError(f"tau must be >= 0, got {tau}")
    r_d = np.zeros((n, big_n), dtype=np.complex128) if r_deterministic is None \
        else np.asarray(r_deterministic, dtype=np.complex128)
    if r_d.shape != (n, big_n):
        raise ValidationError(
            f"r_deterministic has shape {r_d.shape}, expected ({n}, {big_n})")
    g = rng.generator() if isinstance(rng, RngStream) else rng
    hits = 0
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        batch = complex_gaussian(g, (m, n, big_n), variance=1.0 / n) + r_d
        smin = np.linalg.svd(batch, compute_uv=False)[:, -1]
        hits += int(np.sum(smin <= tau))
        done += m
    return hits / trials


def check_pinv_tail_domination(n: int, big_n: int, tau: float,
                               r_deterministic, trials: int,
                               rng) -> LemmaReport:
    """Monte Carlo frequency must not exceed the closed-form bound.

    The margin allows three binomial standard deviations of sampling slack
    on top of the bound.
    """
    bound = pseudoinverse_tail_bound(n, big_n, tau)
    freq = mc_pseudoinverse_tail(n, big_n, tau, r_deterministic, trials, rng)
    sd = math.sqrt(max(bound * (1.0 - min(bound, 1.0)), 1e-300) / trials)
    return LemmaReport("pinv-tail-domination", (bound + 3.0 * sd - freq,))


def gaussian_norm_tail(n: int, a_threshold: float, trials: int, rng,
                       chunk: int = 4096) -> float:
    """Frequency of ``||X|| > a_threshold * sqrt(n)`` for n x n standard
    complex Gaussian matrices (entry variance 1)."""
    if n < 1 or trials < 1:
        raise ValidationError("need n >= 1 and trials >= 1")
    g = rng.generator() if isinstance(rng, RngStream) else rng
    hits = 0
    done = 0
    thr = a_threshold * math.sqrt(n)
    while done < trials:
        m = min(chunk, trials - done)
        batch = complex_gaussian(g, (m, n, n), variance=1.0)
        top = np.linalg.svd(batch, compute_uv=False)[:, 0]
        hits += int(np.sum(top > thr))
        done += m
    return hits / trials


def beta_projection_check(big_n: int, trials: int, rng,
                          tol: Tolerances = DEFAULT) -> LemmaReport:
    """Squared modulus of one coordinate of a uniform unit vector in C^N
    follows ``P(|v_1|^2 <= lam) = 1 - (1 - lam)^(N-1)``.

    Checked by a one-sample KS test at twice the 1% critical value.
    """
    if big_n < 2:
        raise ValidationError("beta projection check needs N >= 2")
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    g = rng.generator() if isinstance(rng, RngStream) else rng
    vecs = complex_gaussian(g, (trials, big_n), variance=1.0)
    lam = np.sort(np.abs(vecs[:, 0]) ** 2
                  / np.sum(np.abs(vecs) ** 2, axis=1))
    cdf = 1.0 - (1.0 - lam) ** (big_n - 1)
    i = np.arange(1, trials + 1)
    stat = max(float(np.max(i / trials - cdf)),
               float(np.max(cdf - (i - 1) / trials)), 0.0)
    threshold = 2.0 * tol.ks_critical_1pct / math.sqrt(trials)
    return LemmaReport("unit-vector-projection-beta", (threshold - stat,))


# ---------------------------------------------------------------------------
# Log-determinant diagnostics


def _shifted(x, z: complex) -> np.ndarray:
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    return a - z * np.eye(a.shape[0])


def replacement_gap(a, b, z: complex, method: str = "svd") -> float:
    """Normalized log-determinant gap with internal ``m**-0.5`` scaling:

        (1/m) * (log|det(a/sqrt(m) - zI)| - log|det(b/sqrt(m) - zI)|).

    Use this form when ``a`` and ``b`` carry the raw (unscaled) entries.  A
    numerically singular shifted matrix makes the gap infinite; that is
    reported as ``inf`` with a warning, never dropped.
    """
    aa = np.asarray(a, dtype=np.complex128)
    bb = np.asarray(b, dtype=np.complex128)
    if aa.shape != bb.shape:
        raise ValidationError(
            f"replacement gap needs equal shapes, got {aa.shape} vs {bb.shape}")
    m = aa.shape[0]
    scale = 1.0 / math.sqrt(m)
    return replacement_gap_prescaled(scale * aa, scale * bb, z, method)


def replacement_gap_prescaled(a, b, z: complex, method: str = "svd") -> float:
    """Normalized log-determinant gap with no internal scaling:

        (1/m) * (log|det(a - zI)| - log|det(b - zI)|).

    Use this form when the matrices are already on the scale under study
    (for example a companion matrix against its block circulant, or
    matrices pre-multiplied by ``n**-0.5``).  Keeping both entry points
    explicit avoids double-scaling mistakes.
    """
    aa = np.asarray(a, dtype=np.complex128)
    bb = np.asarray(b, dtype=np.complex128)
    if aa.shape != bb.shape:
        raise ValidationError(
            f"replacement gap needs equal shapes, got {aa.shape} vs {bb.shape}")
    m = aa.shape[0]
    la = log_abs_det(_shifted(aa, z), method=method)
    lb = log_abs_det(_shifted(bb, z), method=method)
    if not (math.isfinite(la) and math.isfinite(lb)):
        warnings.warn("replacement gap hit a singular shifted matrix; "
                      "reporting an infinite gap", RuntimeWarning,
                      stacklevel=2)
        return math.inf
    return (la - lb) / m


def tail_split_index(n: int, k: int, delta: float) -> int:
    """Split index ``f = floor(kn - n**(1 - delta))`` for tail log sums.

    Requires ``f >= n``, which holds for all large n; too-small n is
    rejected rather than silently clamped.
    """
    if n < 1 or k < 1:
        raise ValidationError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    if not 0.0 < delta < 0.5:
        raise ValidationError(f"delta must lie in (0, 1/2), got {delta}")
    f = math.floor(k * n - n ** (1.0 - delta))
    if f < n:
        raise ValidationError(
            f"split index f = {f} < n = {n}; increase n (need kn - "
            f"n**(1 - delta) >= n)")
    return f


def tail_log_sum(x, z: complex, from_index: int, normalizer: float) -> float:
    """Normalized log sum over the smallest singular values:

        (1 / normalizer) * sum_{i >= from_index} log sigma_i(x - zI),

    with singular values indexed from 1 in descending order.  ``from_index
    = dim + 1`` gives the empty sum (0.0).  ``normalizer`` sets the
    averaging prefactor; convergence checks on companion matrices pass the
    full companion dimension ``k * n``.
    """
    a = _shifted(x, z)
    dim = a.shape[0]
    if not 1 <= from_index <= dim + 1:
        raise ValidationError(
            f"from_index must lie in [1, {dim + 1}], got {from_index}")
    if normalizer <= 0:
        raise ValidationError("normalizer must be positive")
    if from_index == dim + 1:
        return 0.0
    tail = singular_values(a)[from_index - 1:]
    if tail[-1] <= 0.0:
        warnings.warn("tail_log_sum hit an exactly singular shifted matrix",
                      RuntimeWarning, stacklevel=2)
        return -math.inf
    return float(np.sum(np.log(tail)) / normalizer)


# ---------------------------------------------------------------------------
# Probabilistic lemma suites


def _fit_exponent(sizes: np.ndarray, medians: np.ndarray) -> float | None:
    # Least-squares slope of log(median) against log(size).
    if len(set(sizes.tolist())) < 2 or np.any(medians <= 0):
        return None
    slope = np.polyfit(np.log(sizes.astype(float)), np.log(medians), 1)[0]
    return float(slope)


def lemma_suite_grow_n(cfg: LemmaCheckConfig, rng: RngStream) -> list:
    """Bound sweep for the dimension-growing regime.

    Per trial, with S_M = n**-0.5 * M - zI and S_E = n**-0.5 * (E_1 C^T) -
    zI (M the companion matrix of a sampled polynomial):

    * ``sigma-min-companion-floor``: sigma_kn(S_M) >= n**-(a+2)
    * ``sigma-min-lowrank-floor``:   sigma_kn(S_E) >= n**-(a+2)
    * ``spectral-norm-cap``:         max(sigma_1(S_M), sigma_1(S_E)) <= d
    * ``tail-index-floor``:          sigma_f(S_E) >= t * n**(epsilon - 1/2)
      with f = floor(kn - n**(1 - delta)).

    Needs z != 0 and k >= 2 for every size.
    """
    if cfg.z == 0:
        raise ValidationError(
            "dimension-grown suite needs a nonzero shift z: the smallest "
            "singular value floor degenerates at z = 0")
    for n, k in cfg.sizes:
        if k < 2:
            raise ValidationError(
                f"dimension-grown suite needs degree k >= 2, got k={k}")
        tail_split_index(n, k, cfg.delta)  # reject sizes with f(n) < n
    z = cfg.z
    floor_m, floor_e, cap, tail = [], [], [], []
    med_m, med_e, ns = [], [], []
    for s_idx, (n, k) in enumerate(cfg.sizes):
        kn = k * n
        f = tail_split_index(n, k, cfg.delta)
        sm_mins, se_mins = [], []
        n_floor = n ** -(cfg.exponent_a + 2.0)
        tail_floor = cfg.constant_t * n ** (cfg.epsilon - 0.5)
        scale = n ** -0.5
        eye = np.eye(kn)
        for t in range(cfg.trials):
            p = sample_monic_gaussian(n, k, rng.child(s_idx, t))
            sp = companion(p)
            e1ct = np.zeros((kn, kn), dtype=np.complex128)
            e1ct[:n, :] = sp.c_t
            sm = singular_values(scale * sp.m - z * eye)
            se = singular_values(scale * e1ct - z * eye)
            floor_m.append(sm[-1] - n_floor)
            floor_e.append(se[-1] - n_floor)
            cap.append(min(cfg.constant_d - sm[0], cfg.constant_d - se[0]))
            tail.append(se[f - 1] - tail_floor)
            sm_mins.append(sm[-1])
            se_mins.append(se[-1])
        ns.append(n)
        med_m.append(float(np.median(sm_mins)))
        med_e.append(float(np.median(se_mins)))
    ns = np.asarray(ns)
    return [
        LemmaReport("grow-n/sigma-min-companion-floor", tuple(floor_m),
                    fitted_exponent=_fit_exponent(ns, np.asarray(med_m))),
        LemmaReport("grow-n/sigma-min-lowrank-floor", tuple(floor_e),
                    fitted_exponent=_fit_exponent(ns, np.asarray(med_e))),
        LemmaReport("grow-n/spectral-norm-cap", tuple(cap)),
        LemmaReport("grow-n/tail-index-floor", tuple(tail)),
    ]


def lemma_suite_grow_k(cfg: LemmaCheckConfig, rng: RngStream,
                       tol: Tolerances = DEFAULT) -> list:
    """Bound sweep for the degree-growing regime.

    Per trial, with T = M - zI (companion matrix, unscaled):

    * ``top-sv-cap``:        sigma_1(T) <= r sqrt(k) + 1 + |z|
    * ``block-sv-floor``:    sigma_n(T) >= |1 - |z||            (deterministic)
    * ``sigma-min-floor``:   sigma_kn(T) >= t * k**-2
    * ``interlacing-chain``: sigma_{i+n}(B - zI) <= sigma_i(T) <=
      sigma_{i-n}(B - zI) for n < i <= kn - n, against the analytic
      singular values of the shifted block circulant  (deterministic).

    Needs |z| not in {0, 1} and k > 2 for every size.
    """
    az = abs(cfg.z)
    if az == 0.0 or az == 1.0:
        raise ValidationError(
            "degree-grown suite needs |z| distinct from 0 and 1: the "
            "shifted circulant floor |1 - |z|| vanishes on the unit circle "
            "and the origin is spectrally degenerate")
    for n, k in cfg.sizes:
        if k <= 2:
            raise ValidationError(
                f"degree-grown suite needs degree k > 2, got k={k}")
    z = cfg.z
    cap, floor_block, floor_min, chain = [], [], [], []
    med_min, ks = [], []
    for s_idx, (n, k) in enumerate(cfg.sizes):
        kn = k * n
        eye = np.eye(kn)
        sv_b = np.sort(np.abs(circulant_b_eigenvalues(n, k) - z))[::-1]
        cap_value = cfg.constant_r * math.sqrt(k) + 1.0 + az
        floor_value = cfg.constant_t / k ** 2
        mins = []
        for t in range(cfg.trials):
            p = sample_monic_gaussian(n, k, rng.child(s_idx, t))
            s = singular_values(companion(p).m - z * eye)
            slack = tol.deterministic_slack * max(s[0], 1.0)
            cap.append(cap_value - s[0])
            floor_block.append(s[n - 1] - abs(1.0 - az) + slack)
            floor_min.append(s[-1] - floor_value)
            idx = np.arange(n, kn - n)  # 0-based i-1 for n < i <= kn - n
            lower = np.min(s[idx] - sv_b[idx + n])
            upper = np.min(sv_b[idx - n] - s[idx])
            chain.append(min(lower, upper) + slack)
            mins.append(s[-1])
        ks.append(k)
        med_min.append(float(np.median(mins)))
    ks = np.asarray(ks)
    return [
        LemmaReport("grow-k/top-sv-cap", tuple(cap)),
        LemmaReport("grow-k/block-sv-floor", tuple(floor_block)),
        LemmaReport("grow-k/sigma-min-floor", tuple(floor_min),
                    fitted_exponent=_fit_exponent(ks, np.asarray(med_min))),
        LemmaReport("grow-k/interlacing-chain", tuple(chain)),
    ]
