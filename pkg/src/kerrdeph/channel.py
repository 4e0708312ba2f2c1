"""The deformed dephasing channel, its complementary map, and Kraus forms.

The channel acts entrywise: N(rho)_{nm} = K_{n,m} rho_{nm} (Hadamard product
with the kernel), so diagonals pass through untouched.  The complementary
channel maps to the environment: N^c(rho) = sum_n rho_nn |c_n><c_n| with the
nonlinear coherent vectors c_n, and depends on the input diagonal only.

Kraus operators are diagonal in the Fock basis, (K_l)_{nn} = amplitude_l of
c_n, taken from the numerically normalized coherent vectors rather than any
printed prefactor; completeness is measured, not assumed.  A common phase
per l is dropped (pure gauge), so the stored operators are real.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .algebra import (ChannelParams, build_annihilator, build_k0,
                      max_dimension)
from .errors import (DimensionError, DomainError, InvalidStateError,
                     SingularityError, TruncationError)
from .kernel import (CoherentVector, KernelMatrix, _flat_logamp, _neg_logamp,
                     _pos_logamp, _tail_bound, coherent_vector, kernel_matrix,
                     mu, tau)

__all__ = [
    "DensityMatrix",
    "KrausSet",
    "apply",
    "complementary_apply",
    "complementary_spectrum",
    "kraus_set",
    "coherent_input_output",
    "gaussian_decomposition",
    "verify_gaussian_decomposition",
    "phase_covariance_residual",
]

#: Kraus-rank growth cap for lam>0 (number of retained environment levels)
KRAUS_CAP = 1_000_000


class DensityMatrix:
    """Complex Fock-basis matrix validated as a physical state.

    Invariants enforced at construction: Hermitian to 1e-12, unit trace to
    1e-12, smallest eigenvalue >= -1e-10.  Violations raise
    InvalidStateError naming the residual.
    """

    __slots__ = ("dim", "entries")

    def __init__(self, entries):
        entries = np.asarray(entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidStateError(f"state must be square, got shape {entries.shape}")
        herm = float(np.abs(entries - entries.conj().T).max())
        if herm > 1e-12:
            raise InvalidStateError(f"Hermiticity residual {herm:.3e} > 1e-12")
        tr = float(abs(entries.trace().real - 1.0) + abs(entries.trace().imag))
        if tr > 1e-12:
            raise InvalidStateError(f"trace residual {tr:.3e} > 1e-12")
        lo = float(np.linalg.eigvalsh((entries + entries.conj().T) / 2.0).min())
        if lo < -1e-10:
            raise InvalidStateError(f"min eigenvalue {lo:.3e} < -1e-10")
        self.dim = entries.shape[0]
        self.entries = entries

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def _entries(rho) -> np.ndarray:
    return np.asarray(getattr(rho, "entries", rho), dtype=complex)


def _as_state(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


@dataclass(frozen=True)
class KrausSet:
    """Diagonal real Kraus operators, stored as an (L, dim) table of diagonals."""

    dim: int
    diagonals: np.ndarray = field(repr=False)
    completeness_residual: float = 0.0

    def __len__(self):
        return self.diagonals.shape[0]

    def operators(self):
        """The dense dim x dim diagonal matrices K_l."""
        return [np.diag(d) for d in self.diagonals]


def apply(rho, p: ChannelParams) -> DensityMatrix:
    """Channel output: Hadamard product of the state with the kernel matrix."""
    state = _as_state(rho)
    K = kernel_matrix(p, state.dim).entries
    return DensityMatrix(K * state.entries)


def complementary_apply(rho, p: ChannelParams, env_dim: int | None = None,
                        tail_tol: float = 1e-13) -> DensityMatrix:
    """Environment output: sum_n rho_nn |c_n><c_n| in the environment basis.

    Depends on the input diagonal only.  The tight default tail tolerance
    keeps the output trace within the DensityMatrix invariant for lam > 0;
    unreachable tolerances raise TruncationError.
    """
    state = _as_state(rho)
    diag = np.real(np.diag(state.entries))
    vecs = [coherent_vector(n, p, env_dim=env_dim, tail_tol=tail_tol)
            for n in range(state.dim)]
    d = max(v.env_dim for v in vecs)
    out = np.zeros((d, d), dtype=complex)
    for w, v in zip(diag, vecs):
        a = np.zeros(d, dtype=complex)
        a[: v.env_dim] = v.amplitudes
        out += w * np.outer(a, a.conj())
    return DensityMatrix(out)


def complementary_spectrum(pvec, p: ChannelParams) -> np.ndarray:
    """Spectrum of the Gram matrix G_{mn} = sqrt(p_m p_n) K_{n,m}, descending.

    Equals the complementary-output spectrum for a diagonal input pvec; the
    Gram form is the symmetric similarity transform of the non-symmetric
    p-weighted kernel matrix, so the spectra coincide.
    """
    pvec = np.asarray(pvec, dtype=float)
    if pvec.ndim != 1 or abs(pvec.sum() - 1.0) > 1e-9 or pvec.min() < -1e-12:
        raise DomainError("pvec must be a probability vector")
    K = kernel_matrix(p, len(pvec)).entries
    root = np.sqrt(np.clip(pvec, 0.0, None))
    G = np.outer(root, root) * K
    q = np.linalg.eigvalsh(G)
    q = np.clip(q, 0.0, None)
    return np.sort(q)[::-1]


def _amp_table(p: ChannelParams, dim: int, L: int) -> np.ndarray:
    """Real amplitude table D[l, n] = amplitude_l of coherent_vector(n)."""
    ks = np.arange(L)
    D = np.empty((L, dim))
    for n in range(dim):
        if p.lam < 0:
            logmag, sign = _neg_logamp(tau(n, p), p, ks)
            ref = logmag.max()
            v = sign * np.exp(logmag - ref)
            D[:, n] = v / np.linalg.norm(v)
        elif p.lam > 0:
            D[:, n] = np.exp(_pos_logamp(tau(n, p), p, ks))
        else:
            D[:, n] = np.exp(_flat_logamp(mu(n, p), ks))
    return D


def kraus_set(p: ChannelParams, dim: int, env_dim: int | None = None) -> KrausSet:
    """Diagonal Kraus family reproducing the channel on dim Fock levels.

    lam < 0: L equals the forced finite dimension (exact family).
    lam >= 0: L grows by doubling until the measured completeness residual
    max_n |1 - sum_l (K_l)_nn^2| < 1e-8; cap env_dim (default 1e6).
    """
    bound = max_dimension(p)
    if bound is not None and dim > bound:
        raise DimensionError(f"dim {dim} exceeds the lam<0 space (dim {bound})")
    if p.lam < 0:
        D = _amp_table(p, dim, bound)
        resid = float(np.abs(1.0 - np.sum(D * D, axis=0)).max())
        return KrausSet(dim=dim, diagonals=D, completeness_residual=resid)

    cap = KRAUS_CAP if env_dim is None else env_dim
    L = min(64, cap)
    while True:
        D = _amp_table(p, dim, L)
        resid = float(np.abs(1.0 - np.sum(D * D, axis=0)).max())
        if resid < 1e-8:
            break
        if L >= cap:
            raise TruncationError(
                f"completeness residual {resid:.3e} at the Kraus cap L={L} "
                f"(gamma={p.gamma}, lam={p.lam}, dim={dim})"
            )
        L = min(2 * L, cap)
    # drop exactly-zero trailing operators (e.g. gamma=0 leaves only K_0)
    nonzero = np.nonzero(np.abs(D).max(axis=1) > 0.0)[0]
    last = int(nonzero[-1]) + 1 if len(nonzero) else 1
    return KrausSet(dim=dim, diagonals=D[:last], completeness_residual=resid)


def coherent_input_output(alpha: complex, p: ChannelParams,
                          dim: int | None = None) -> DensityMatrix:
    """Channel output on a coherent-state input |alpha><alpha|.

    The input projector is truncated (lam >= 0: at dim, which must keep the
    Poisson tail below 1e-10; auto-grown when dim=None) or projected onto
    the forced finite space (lam < 0), renormalized, and passed through the
    kernel Hadamard product.
    """
    alpha = complex(alpha)
    a2 = abs(alpha) ** 2

    def coeffs(d):
        c = np.empty(d, dtype=complex)
        c[0] = 1.0
        for k in range(1, d):
            c[k] = c[k - 1] * alpha / math.sqrt(k)
        return c * math.exp(-a2 / 2.0)

    bound = max_dimension(p)
    if bound is not None:
        d = bound if dim is None else min(dim, bound)
        c = coeffs(d)
    else:
        if dim is None:
            d = 16
            while True:
                ratio = a2 / d
                if a2 == 0.0:
                    tail = 0.0
                elif ratio >= 1.0:
                    tail = math.inf
                else:
                    log_term = -a2 + (d - 1) * math.log(a2) - math.lgamma(d)
                    tail = math.exp(log_term) * ratio / (1.0 - ratio)
                if tail < 1e-10:
                    break
                if d >= 4096:
                    raise TruncationError(
                        f"coherent tail will not reach 1e-10 by dim 4096 (|alpha|={abs(alpha):.3g})"
                    )
                d *= 2
            c = coeffs(d)
        else:
            d = dim
            c = coeffs(d)
            tail = 1.0 - float(np.sum(np.abs(c) ** 2))
            if tail > 1e-10:
                raise TruncationError(
                    f"coherent tail {tail:.3e} > 1e-10 at dim {d} (|alpha|={abs(alpha):.3g})"
                )
    c = c / np.linalg.norm(c)
    K = kernel_matrix(p, len(c)).entries
    return DensityMatrix(K * np.outer(c, c.conj()))


def gaussian_decomposition(beta: complex, lambda_alg: float):
    """Disentangling parameters (zeta, zeta0) of the deformed displacement.

    exp(beta A^dag - beta* A) = exp(zeta A^dag) exp(ln(zeta0) K0) exp(-zeta* A)
    with, for lambda_alg > 0,
        zeta  = (beta/|beta|) sqrt(2/lambda_alg) tanh(x),  x = sqrt(lambda_alg/2)|beta|
        zeta0 = cosh(x)^(-4/lambda_alg)
    and tan / cos^(4/|lambda_alg|) for lambda_alg < 0, valid on the principal
    chart x < pi/2 (SingularityError at or beyond the first tan singularity).
    """
    if lambda_alg == 0:
        raise DomainError("lambda_alg must be nonzero")
    beta = complex(beta)
    if beta == 0:
        return 0.0 + 0.0j, 1.0
    r = abs(beta)
    unit = beta / r
    x = math.sqrt(abs(lambda_alg) / 2.0) * r
    if lambda_alg > 0:
        zeta = unit * math.sqrt(2.0 / lambda_alg) * math.tanh(x)
        zeta0 = math.cosh(x) ** (-4.0 / lambda_alg)
    else:
        if x >= math.pi / 2.0 - 1e-9:
            raise SingularityError(
                f"x = sqrt(|lambda_alg|/2)|beta| = {x:.6g} is at/beyond the tan "
                f"singularity pi/2; the decomposition chart requires x < pi/2"
            )
        zeta = unit * math.sqrt(2.0 / abs(lambda_alg)) * math.tan(x)
        zeta0 = math.cos(x) ** (4.0 / abs(lambda_alg))
    return zeta, float(zeta0)


def verify_gaussian_decomposition(beta: complex, p: ChannelParams, dim: int,
                                  buffer: int = 50) -> float:
    """Max-abs residual of the decomposition identity on a dim x dim corner.

    lam > 0: both sides are built on a buffered space (dim + buffer) and
    compared on the corner, since a hard cutoff pollutes the edge rows of
    the two sides differently.  lam < 0: requires integer 2*omega/|lam| and
    verifies on the closed su(2) block (the algebra closes there exactly;
    the boundary f=0 state, when present, is not in the block).
    """
    lambda_alg = 2.0 * p.y
    zeta, zeta0 = gaussian_decomposition(beta, lambda_alg)
    if p.lam < 0:
        M = 2.0 * p.omega / abs(p.lam)
        if abs(M - round(M)) > 1e-9:
            raise DomainError(
                "closed-block verification requires integer 2*omega/|lam|; "
                f"got {M:.6g}"
            )
        M = int(round(M))
        if dim > M:
            raise DimensionError(f"corner dim {dim} exceeds the closed block (dim {M})")
        D = M
    else:
        D = dim + buffer
    a = build_annihilator(p, D).entries
    ad = a.T
    k0 = build_k0(p, D).entries
    beta = complex(beta)
    lhs = expm(beta * ad - np.conj(beta) * a)
    rhs = expm(zeta * ad) @ expm(math.log(zeta0) * k0) @ expm(-np.conj(zeta) * a)
    return float(np.abs((lhs - rhs)[:dim, :dim]).max())


def phase_covariance_residual(rho, theta: float, p: ChannelParams) -> float:
    """Max-abs difference of N(U rho U^dag) and U N(rho) U^dag, U = exp(i K0 theta)."""
    state = _as_state(rho)
    n = np.arange(state.dim)
    u = np.exp(1j * theta * (p.y * n + (1.0 + p.y) / 2.0))
    rotated = np.outer(u, u.conj()) * state.entries
    lhs = apply(DensityMatrix(rotated), p).entries
    rhs = np.outer(u, u.conj()) * apply(state, p).entries
    return float(np.abs(lhs - rhs).max())
