"""Brute-force ground truth for the deformed dephasing channel.

Everything here works directly from Definition-1 machinery: the dilation
unitary U = exp[-i sqrt(gamma) (A^dag A) x (B + B^dag)] built by dense
spectral decomposition, followed by exact partial traces.  No closed forms
enter; this module is the arbiter for every analytic convention.

Because A^dag A is diagonal in the Fock basis, U is block-diagonal over the
system index n, each block the environment exponential
exp(-i mu_n (B + B^dag)) with mu_n = sqrt(gamma) n (1 + y n).  Blocks are
computed via eigendecomposition of the real symmetric tridiagonal B + B^dag
(exactly unitary by construction).

For lam > 0 the environment is truncated; every public result carries a
convergence certificate from a dimension-doubling protocol.  For lam < 0
the space is finite and results are exact in one shot.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .algebra import ChannelParams, max_dimension
from .errors import ConvergenceError, DimensionError
from .kernel import CoherentVector, mu

__all__ = [
    "UnitaryDilation",
    "EvolveResult",
    "OracleKernelValue",
    "build_unitary",
    "evolve_and_trace",
    "evolve_and_trace_system",
    "kernel_oracle",
    "kernel_oracle_certified",
    "kernel_oracle_table",
    "displacement_apply",
]

#: hard cap on dim_s * dim_e for the fully assembled unitary
SIZE_CAP = 4096
#: default environment-dimension cap for doubling protocols
ENV_CAP = 4096
#: doubling protocols stop when successive outputs change less than this
CONV_TOL = 1e-8
#: first rung of the doubling ladder
ENV_START = 64


@dataclass(frozen=True)
class UnitaryDilation:
    """Dense dilation unitary with its unitarity certificate."""

    dim_s: int
    dim_e: int
    matrix: np.ndarray = field(repr=False)
    unitarity_residual: float = 0.0


@dataclass(frozen=True)
class EvolveResult:
    """Output of a brute-force evolution with its convergence certificate.

    change holds the per-entry absolute difference between the last two
    doubling rungs (zeros for the exact lam<0 single shot); converged is
    the all-entries verdict at CONV_TOL.
    """

    matrix: np.ndarray = field(repr=False)
    dim_e: int = 0
    converged: bool = True
    change: np.ndarray = field(default=None, repr=False)


@dataclass(frozen=True)
class OracleKernelValue:
    value: float
    dim_e: int
    converged: bool
    change: float


def _env_dim_for(p: ChannelParams, requested: int | None) -> int:
    """Forced finite dimension for lam<0, else the requested/cap value."""
    bound = max_dimension(p)
    if bound is not None:
        return bound if requested is None else min(requested, bound)
    return ENV_CAP if requested is None else requested


# one full doubling ladder (64..4096 is 7 rungs) must stay resident, or
# repeated evolutions at the same parameters recompute every eigensystem
@lru_cache(maxsize=8)
def _env_eigensystem(y: float, dim_e: int):
    """Eigendecomposition of B + B^dag (tridiagonal, off-diagonal sqrt(k f(k)^2))."""
    k = np.arange(1, dim_e)
    off = np.sqrt(k * np.maximum(1.0 + y * k, 0.0))
    theta, W = eigh_tridiagonal(np.zeros(dim_e), off)
    return theta, W


def _block(p: ChannelParams, n: int, dim_e: int) -> np.ndarray:
    """System-index-n block of the dilation: exp(-i mu_n (B+B^dag))."""
    theta, W = _env_eigensystem(p.y, dim_e)
    phase = np.exp(-1j * mu(n, p) * theta)
    return (W * phase) @ W.T


@lru_cache(maxsize=1024)
def _vacuum_column(y: float, mu_value: float, dim_e: int) -> np.ndarray:
    theta, W = _env_eigensystem(y, dim_e)
    return W @ (np.exp(-1j * mu_value * theta) * W[0, :])


def _block_column(p: ChannelParams, n: int, dim_e: int) -> np.ndarray:
    """Block n applied to the environment vacuum (state-independent, cached)."""
    return _vacuum_column(p.y, mu(n, p), dim_e)


def build_unitary(p: ChannelParams, dim_s: int, dim_e: int) -> UnitaryDilation:
    """Assemble the dense dim_s*dim_e unitary and report its unitarity residual."""
    if dim_s < 1 or dim_e < 1:
        raise DimensionError(f"dims must be >= 1, got ({dim_s}, {dim_e})")
    bound = max_dimension(p)
    if bound is not None and (dim_s > bound or dim_e > bound):
        raise DimensionError(
            f"dims ({dim_s}, {dim_e}) exceed the lam<0 space (dim {bound})"
        )
    if dim_s * dim_e > SIZE_CAP:
        raise DimensionError(
            f"dim_s*dim_e = {dim_s * dim_e} exceeds the size cap {SIZE_CAP}"
        )
    D = dim_s * dim_e
    U = np.zeros((D, D), dtype=complex)
    for n in range(dim_s):
        sl = slice(n * dim_e, (n + 1) * dim_e)
        U[sl, sl] = _block(p, n, dim_e)
    residual = float(np.abs(U.conj().T @ U - np.eye(D)).max())
    return UnitaryDilation(dim_s=dim_s, dim_e=dim_e, matrix=U, unitarity_residual=residual)


def _entries(rho) -> np.ndarray:
    return np.asarray(getattr(rho, "entries", rho), dtype=complex)


def _system_output(rho: np.ndarray, p: ChannelParams, dim_e: int) -> np.ndarray:
    """Tr_E[U (rho x |0><0|) U^dag] via block columns x_n = U_n |0>."""
    dim_s = rho.shape[0]
    X = np.column_stack([_block_column(p, n, dim_e) for n in range(dim_s)])
    G = X.conj().T @ X  # G[m, n] = <x_m, x_n>
    # output_{nm} = rho_{nm} <x_m, x_n>
    return rho * G.T


def evolve_and_trace(rho, p: ChannelParams, dim_s: int | None = None,
                     dim_e: int | None = None, tol: float = CONV_TOL,
                     strict: bool = True) -> EvolveResult:
    """Channel output by explicit dilation and exact environment trace.

    lam < 0: single exact shot on the forced finite environment.
    lam >= 0: environment dimension doubles from ENV_START until the output
    changes by less than tol entrywise (cap dim_e, default ENV_CAP); with
    strict=True non-convergence raises, otherwise the certificate in the
    returned EvolveResult reports per-entry changes.
    """
    rho = _entries(rho)
    if dim_s is None:
        dim_s = rho.shape[0]
    if rho.shape != (dim_s, dim_s):
        raise DimensionError(f"state shape {rho.shape} != ({dim_s}, {dim_s})")
    bound = max_dimension(p)
    if bound is not None and dim_s > bound:
        raise DimensionError(f"dim_s {dim_s} exceeds the lam<0 space (dim {bound})")

    if p.lam < 0:
        d = _env_dim_for(p, dim_e)
        out = _system_output(rho, p, d)
        return EvolveResult(matrix=out, dim_e=d, converged=True,
                            change=np.zeros_like(rho, dtype=float))

    cap = ENV_CAP if dim_e is None else dim_e
    d = min(ENV_START, cap)
    prev = _system_output(rho, p, d)
    change = np.full(rho.shape, np.inf)
    while d < cap:
        d = min(2 * d, cap)
        out = _system_output(rho, p, d)
        change = np.abs(out - prev)
        if change.max() < tol:
            return EvolveResult(matrix=out, dim_e=d, converged=True, change=change)
        prev = out
    if strict:
        raise ConvergenceError(
            f"environment doubling hit the cap {cap} with max change "
            f"{change.max():.3e} >= {tol:.1e} (gamma={p.gamma}, lam={p.lam})"
        )
    return EvolveResult(matrix=prev, dim_e=d, converged=False, change=change)


def evolve_and_trace_system(rho, p: ChannelParams, dim_s: int | None = None,
                            dim_e: int | None = None, tol: float = CONV_TOL,
                            strict: bool = True) -> EvolveResult:
    """Complementary output Tr_S[U (rho x |0><0|) U^dag] on the environment.

    Equals sum_n rho_nn |x_n><x_n| with x_n = U_n|0>; the doubling protocol
    compares successive outputs on their common (smaller) dimension.
    """
    rho = _entries(rho)
    if dim_s is None:
        dim_s = rho.shape[0]
    if rho.shape != (dim_s, dim_s):
        raise DimensionError(f"state shape {rho.shape} != ({dim_s}, {dim_s})")
    bound = max_dimension(p)
    if bound is not None and dim_s > bound:
        raise DimensionError(f"dim_s {dim_s} exceeds the lam<0 space (dim {bound})")
    diag = np.real(np.diag(rho))

    def env_out(d):
        X = np.column_stack([_block_column(p, n, d) for n in range(dim_s)])
        return (X * diag) @ X.conj().T

    if p.lam < 0:
        d = _env_dim_for(p, dim_e)
        out = env_out(d)
        return EvolveResult(matrix=out, dim_e=d, converged=True,
                            change=np.zeros((d, d)))

    cap = ENV_CAP if dim_e is None else dim_e
    d = min(ENV_START, cap)
    prev = env_out(d)
    change = np.full((d, d), np.inf)
    while d < cap:
        dprev, d = d, min(2 * d, cap)
        out = env_out(d)
        change = np.abs(out[:dprev, :dprev] - prev)
        if change.max() < tol:
            return EvolveResult(matrix=out, dim_e=d, converged=True, change=change)
        prev = out
    if strict:
        raise ConvergenceError(
            f"environment doubling hit the cap {cap} with max change "
            f"{change.max():.3e} >= {tol:.1e} (gamma={p.gamma}, lam={p.lam})"
        )
    return EvolveResult(matrix=prev, dim_e=d, converged=False, change=change)


def kernel_oracle_certified(n: int, m: int, p: ChannelParams,
                            dim_e: int | None = None,
                            tol: float = CONV_TOL) -> OracleKernelValue:
    """Kernel value <x_m, x_n> from dilation blocks, with certificate."""
    if p.lam < 0:
        d = _env_dim_for(p, dim_e)
        xn = _block_column(p, n, d)
        xm = _block_column(p, m, d)
        val = complex(xm.conj() @ xn)
        return OracleKernelValue(value=float(val.real), dim_e=d,
                                 converged=True, change=0.0)
    cap = ENV_CAP if dim_e is None else dim_e
    d = min(ENV_START, cap)

    def overlap(d_):
        xn = _block_column(p, n, d_)
        xm = _block_column(p, m, d_)
        return complex(xm.conj() @ xn).real

    prev = overlap(d)
    change = math.inf
    while d < cap:
        d = min(2 * d, cap)
        val = overlap(d)
        change = abs(val - prev)
        if change < tol:
            return OracleKernelValue(value=val, dim_e=d, converged=True,
                                     change=change)
        prev = val
    return OracleKernelValue(value=prev, dim_e=d, converged=False, change=change)


def kernel_oracle(n: int, m: int, p: ChannelParams,
                  dim_e: int | None = None, tol: float = CONV_TOL) -> float:
    """Brute-force kernel value; raises ConvergenceError at the cap."""
    res = kernel_oracle_certified(n, m, p, dim_e=dim_e, tol=tol)
    if not res.converged:
        raise ConvergenceError(
            f"kernel_oracle({n},{m}) not converged at cap {res.dim_e}: "
            f"last change {res.change:.3e} (gamma={p.gamma}, lam={p.lam})"
        )
    return res.value


def kernel_oracle_table(pairs, p: ChannelParams, dim_e: int | None = None,
                        tol: float = CONV_TOL):
    """Certified oracle values for many (n, m) pairs at once.

    All pairs share one generator eigendecomposition per doubling rung:
    <x_m, x_n> = <0| e^{i (mu_m - mu_n)(B+B^dag)} |0> because every block is
    an exponential of the same Hermitian matrix.  Returns a list of
    OracleKernelValue in the order of pairs.
    """
    pairs = list(pairs)
    deltas = np.array([mu(m, p) - mu(n, p) for (n, m) in pairs])

    def g_at(d):
        theta, W = _env_eigensystem(p.y, d)
        w2 = W[0, :] ** 2
        return (np.exp(1j * np.outer(deltas, theta)) @ w2).real

    if p.lam < 0:
        d = _env_dim_for(p, dim_e)
        vals = g_at(d)
        return [OracleKernelValue(float(v), d, True, 0.0) for v in vals]

    cap = ENV_CAP if dim_e is None else dim_e
    d = min(ENV_START, cap)
    prev = g_at(d)
    out = [None] * len(pairs)
    last_change = np.full(len(pairs), math.inf)
    while d < cap and any(r is None for r in out):
        d = min(2 * d, cap)
        vals = g_at(d)
        change = np.abs(vals - prev)
        for i in range(len(pairs)):
            if out[i] is None:
                last_change[i] = change[i]
                if change[i] < tol:
                    out[i] = OracleKernelValue(float(vals[i]), d, True,
                                               float(change[i]))
        prev = vals
    for i in range(len(pairs)):
        if out[i] is None:
            out[i] = OracleKernelValue(float(prev[i]), d, False,
                                       float(last_change[i]))
    return out


def displacement_apply(mu_value: complex, p: ChannelParams,
                       dim_e: int | None = None) -> CoherentVector:
    """exp(-i mu (B+B^dag)) |0> by spectral decomposition (complex mu allowed)."""
    d = _env_dim_for(p, dim_e)
    theta, W = _env_eigensystem(p.y, d)
    amps = W @ (np.exp(-1j * complex(mu_value) * theta) * W[0, :])
    tail = float(np.sum(np.abs(amps[-4:]) ** 2)) if p.lam >= 0 else 0.0
    return CoherentVector(env_dim=d, amplitudes=amps, tail_bound=tail)
