"""Monic random matrix polynomials and their companion linearizations.

A degree-k matrix polynomial with n x n coefficients is

    P(x) = I_n x^k + C_{k-1} x^{k-1} + ... + C_1 x + C_0,

stored as the coefficient list ``C_0, ..., C_{k-1}`` with the leading
coefficient implicitly the identity.  Its kn finite eigenvalues are the
roots of ``det P(x)``, obtained here as the spectrum of the block companion
matrix

    M = [ -C_{k-1}  -C_{k-2}  ...  -C_1  -C_0 ]
        [   I_n        0      ...    0     0  ]
        [    0        I_n     ...    0     0  ]
        [   ...                             ]
        [    0         0      ...   I_n    0  ].

Two exact additive splittings of M drive the asymptotic diagnostics:

* ``companion``:       M = Z + E_1 C^T with Z the block down-shift,
  E_1^T = [I_n 0 ... 0], and C^T = -[C_{k-1} ... C_0].  The rank of the
  random part is at most n, which is what degree-growing arguments exploit.
* ``circulant_split``: M = B + E_1 Chat^T with B the block circulant
  (down-shift plus an identity corner block) whose spectrum is exactly the
  k-th roots of unity, each with multiplicity n.

Sampling convention: "standard complex Gaussian" means independent real and
imaginary parts, each N(0, 1/2), so E|X|^2 = 1.  All randomness flows
through ``RngStream`` so that any draw is addressable and reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .linalg import eigenvalues

__all__ = [
    "RngStream",
    "MatrixPolynomial",
    "sample_monic_gaussian",
    "evaluate",
    "CompanionSplitN",
    "CompanionSplitK",
    "companion",
    "circulant_split",
    "circulant_matrix",
    "circulant_b_eigenvalues",
    "finite_eigenvalues",
    "polynomial_to_json",
    "polynomial_from_json",
    "complex_gaussian",
]


@dataclass(frozen=True)
class RngStream:
    """Addressable random stream: a root seed plus a spawn-key path.

    Two streams with equal ``(seed, key)`` produce identical draws; children
    with distinct paths are statistically independent.  Built on numpy's
    ``SeedSequence`` spawn keys, giving each (suite, cell, trial) its own
    counter-based stream regardless of execution order.
    """

    seed: int
    key: tuple[int, ...] = ()

    def __post_init__(self):
        if self.seed < 0 or any(i < 0 for i in self.key):
            raise ValidationError("RngStream seed and key must be non-negative")

    def child(self, *indices: int) -> "RngStream":
        return RngStream(self.seed, self.key + tuple(int(i) for i in indices))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.key)
        return np.random.default_rng(ss)


def _generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise ValidationError(
        f"rng must be an RngStream or numpy Generator, got {type(rng)!r}")


def complex_gaussian(rng, shape, variance: float = 1.0) -> np.ndarray:
    """I.i.d. complex Gaussians with ``E|X|^2 = variance``.

    Real and imaginary parts are independent N(0, variance / 2).
    """
    if variance <= 0:
        raise ValidationError("variance must be positive")
    g = _generator(rng)
    parts = g.standard_normal(tuple(shape) + (2,))
    return (parts[..., 0] + 1j * parts[..., 1]) * np.sqrt(variance / 2.0)


@dataclass(eq=False)
class MatrixPolynomial:
    """Matrix polynomial with square coefficients ``C_0 ... C_{k-1}``.

    ``monic=True`` means the degree-k leading coefficient is the identity
    (the only regime the linearizations below support).  ``seed`` is
    provenance metadata recorded by the sampler, not part of the value.
    """

    n: int
    k: int
    coeffs: tuple
    monic: bool = True
    seed: int | None = field(default=None, compare=False)

    def __post_init__(self):
        self.coeffs = tuple(np.asarray(c, dtype=np.complex128)
                            for c in self.coeffs)
        if self.k != len(self.coeffs) or self.k < 1:
            raise ValidationError(
                f"degree k={self.k} does not match {len(self.coeffs)} "
                "coefficients (need k >= 1)")
        for j, c in enumerate(self.coeffs):
            if c.shape != (self.n, self.n):
                raise ValidationError(
                    f"coefficient {j} has shape {c.shape}, expected "
                    f"({self.n}, {self.n})")
            if not np.all(np.isfinite(c)):
                raise ValidationError(f"coefficient {j} has non-finite entries")
            c.setflags(write=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        return (self.n == other.n and self.k == other.k
                and self.monic == other.monic
                and all(np.array_equal(a, b)
                        for a, b in zip(self.coeffs, other.coeffs)))


def sample_monic_gaussian(n: int, k: int, rng) -> MatrixPolynomial:
    """Draw a monic polynomial with i.i.d. standard complex Gaussian entries.

    All k coefficient matrices are filled from a single flat draw in
    coefficient order ``C_0, ..., C_{k-1}``, row-major within each matrix,
    so the stream fully determines the polynomial.
    """
    if n < 1 or k < 1:
        raise ValidationError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    entries = complex_gaussian(rng, (k, n, n), variance=1.0)
    seed = rng.seed if isinstance(rng, RngStream) else None
    return MatrixPolynomial(n, k, tuple(entries), monic=True, seed=seed)


def evaluate(p: MatrixPolynomial, x: complex) -> np.ndarray:
    """Evaluate ``P(x)`` by Horner's scheme.

    For monic polynomials the leading term is ``I_n x^k``; a non-monic
    container evaluates just the stored coefficients (degree k-1).
    """
    n = p.n
    if p.monic:
        acc = np.eye(n, dtype=np.complex128)
        start = p.k - 1
    else:
        acc = np.array(p.coeffs[p.k - 1])
        start = p.k - 2
    for j in range(start, -1, -1):
        acc = acc * x + p.coeffs[j]
    return acc


def _require_monic(p: MatrixPolynomial, what: str) -> None:
    if not p.monic:
        raise ValidationError(
            f"{what} requires a monic polynomial (leading coefficient I_n)")


def _companion_dense(p: MatrixPolynomial) -> np.ndarray:
    n, k = p.n, p.k
    m = np.zeros((k * n, k * n), dtype=np.complex128)
    for j, c in enumerate(p.coeffs):
        # C_j occupies top block column k-1-j, negated.
        col = (k - 1 - j) * n
        m[:n, col:col + n] = -c
    for i in range(1, k):
        m[i * n:(i + 1) * n, (i - 1) * n:i * n] = np.eye(n)
    return m


@dataclass(frozen=True)
class CompanionSplitN:
    """Companion matrix with its low-rank split ``m = z_shift + e1 @ c_t``."""

    m: np.ndarray        # kn x kn companion
    z_shift: np.ndarray  # kn x kn block down-shift (nilpotent)
    e1: np.ndarray       # kn x n, identity in the top block
    c_t: np.ndarray      # n x kn, equal to -[C_{k-1} ... C_0]


def companion(p: MatrixPolynomial) -> CompanionSplitN:
    """Block companion linearization of a monic polynomial."""
    _require_monic(p, "companion linearization")
    n, k = p.n, p.k
    kn = k * n
    m = _companion_dense(p)
    z_shift = np.zeros((kn, kn), dtype=np.complex128)
    for i in range(1, k):
        z_shift[i * n:(i + 1) * n, (i - 1) * n:i * n] = np.eye(n)
    e1 = np.zeros((kn, n), dtype=np.complex128)
    e1[:n, :] = np.eye(n)
    c_t = m[:n, :].copy()
    for a in (m, z_shift, e1, c_t):
        a.setflags(write=False)
    return CompanionSplitN(m=m, z_shift=z_shift, e1=e1, c_t=c_t)


@dataclass(frozen=True)
class CompanionSplitK:
    """Companion matrix split against the block circulant: ``m = b + a``.

    ``b`` carries the block down-shift plus an identity corner block, so its
    spectrum is the k-th roots of unity (each multiplicity n); ``a = e1 @
    c_hat_t`` has rank at most n.
    """

    m: np.ndarray        # kn x kn companion
    b: np.ndarray        # kn x kn block circulant
    a: np.ndarray        # kn x kn, nonzero only in the top block row
    c_hat_t: np.ndarray  # n x kn: [-C_{k-1} ... -C_1  -(C_0 + I_n)]


def circulant_matrix(n: int, k: int) -> np.ndarray:
    """Block circulant B: identity blocks on the down-shift and top-right."""
    if n < 1 or k < 1:
        raise ValidationError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    kn = k * n
    b = np.zeros((kn, kn), dtype=np.complex128)
    for i in range(1, k):
        b[i * n:(i + 1) * n, (i - 1) * n:i * n] = np.eye(n)
    b[:n, (k - 1) * n:] = np.eye(n)
    return b


def circulant_split(p: MatrixPolynomial) -> CompanionSplitK:
    """Split the companion matrix against the block circulant (needs k >= 2).

    For k = 1 the circulant corner and the coefficient block collide, so the
    split is not defined.
    """
    _require_monic(p, "circulant split")
    if p.k < 2:
        raise ValidationError("circulant split requires degree k >= 2")
    n, k = p.n, p.k
    m = _companion_dense(p)
    b = circulant_matrix(n, k)
    c_hat_t = m[:n, :].copy()
    c_hat_t[:, (k - 1) * n:] -= np.eye(n)
    a = np.zeros_like(m)
    a[:n, :] = c_hat_t
    # The split is exact in the subtraction direction: m - b == a holds
    # bit-for-bit, since the corner diagonal of a is computed as exactly
    # that difference.  Re-adding (b + a) can round the corner diagonal by
    # one ulp of 1 -- float grids near -(c+1) are coarser than near -c --
    # so consumers needing bitwise m should use the stored m, never b + a.
    for arr in (m, b, a, c_hat_t):
        arr.setflags(write=False)
    return CompanionSplitK(m=m, b=b, a=a, c_hat_t=c_hat_t)


def circulant_b_eigenvalues(n: int, k: int) -> np.ndarray:
    """Spectrum of the block circulant: k-th roots of unity, multiplicity n."""
    if n < 1 or k < 1:
        raise ValidationError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    roots = np.exp(2j * np.pi * np.arange(k) / k)
    return np.repeat(roots, n)


def finite_eigenvalues(p: MatrixPolynomial) -> np.ndarray:
    """The kn finite eigenvalues of P: the spectrum of its companion matrix."""
    return eigenvalues(companion(p).m)


# ---------------------------------------------------------------------------
# JSON serialization
#
# Schema: {"n": int, "k": int, "seed": int|null,
#          "coeffs": [[[re, im], ...], ...]}
# with one row-major [re, im] list per coefficient, C_0 first.


def polynomial_to_json(p: MatrixPolynomial) -> str:
    coeffs = [[[float(z.real), float(z.imag)] for z in c.ravel()]
              for c in p.coeffs]
    doc = {"n": p.n, "k": p.k, "seed": p.seed, "coeffs": coeffs}
    return json.dumps(doc, indent=2) + "\n"


def polynomial_from_json(text: str) -> MatrixPolynomial:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid polynomial JSON: {exc}") from exc
    try:
        n, k = int(doc["n"]), int(doc["k"])
        raw = doc["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"polynomial JSON missing field: {exc}") from exc
    if len(raw) != k:
        raise ValidationError(
            f"polynomial JSON has {len(raw)} coefficients, expected k={k}")
    coeffs = []
    for j, flat in enumerate(raw):
        if len(flat) != n * n:
            raise ValidationError(
                f"coefficient {j} has {len(flat)} entries, expected {n * n}")
        arr = np.array([complex(re, im) for re, im in flat],
                       dtype=np.complex128).reshape(n, n)
        coeffs.append(arr)
    seed = doc.get("seed")
    return MatrixPolynomial(n, k, tuple(coeffs), monic=True,
                            seed=None if seed is None else int(seed))
