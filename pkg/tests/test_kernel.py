"""Closed-form kernel: exact limits, frozen reference values, revivals."""

import numpy as np
import pytest

from kerrdeph import (
    ChannelParams,
    DimensionError,
    coherent_vector,
    kernel_entry,
    kernel_map,
    kernel_matrix,
    mu,
    overlap_closed_form,
    overlap_series,
    tau,
    write_kernel_map_csv,
)

# kernel_oracle(0, 1, gamma=1, lam=0.5) at convergence tolerance 1e-8,
# frozen so a regression in the closed form is caught without re-running
# the dilation.
ORACLE_K01 = 0.398953861575677


def test_flat_kernel_is_gaussian_in_index_distance():
    for gamma in (0.1, 1.0, 10.0):
        p = ChannelParams(gamma=gamma, lam=0.0, omega=1.0)
        for n in range(0, 12, 3):
            for m in range(0, 12, 3):
                expected = np.exp(-gamma * (n - m) ** 2 / 2)
                assert abs(kernel_entry(n, m, p) - expected) < 1e-15


def test_frozen_oracle_value():
    p = ChannelParams(gamma=1.0, lam=0.5, omega=1.0)
    assert kernel_entry(0, 1, p) == pytest.approx(ORACLE_K01, abs=1e-12)


@pytest.mark.parametrize("lam", [-0.5, -0.1, 0.0, 0.2, 1.0])
def test_kernel_basic_invariants(lam):
    """Diagonal is exactly one, K is symmetric, and |K| <= 1."""
    p = ChannelParams(gamma=1.3, lam=lam, omega=1.0)
    dim = 5 if lam == -0.5 else 8
    K = kernel_matrix(p, dim).entries
    np.testing.assert_array_equal(np.diag(K), np.ones(dim))
    np.testing.assert_allclose(K, K.T, atol=1e-15)
    assert np.max(np.abs(K)) <= 1 + 1e-15


def test_zero_gamma_is_identity_channel():
    for lam in (-0.5, 0.0, 0.7):
        p = ChannelParams(gamma=0.0, lam=lam, omega=1.0)
        K = kernel_matrix(p, 4).entries
        np.testing.assert_array_equal(K, np.ones((4, 4)))


def test_kernel_matrix_matches_entries():
    p = ChannelParams(gamma=0.8, lam=0.4, omega=1.0)
    K = kernel_matrix(p, 6).entries
    for n in range(6):
        for m in range(6):
            assert K[n, m] == kernel_entry(n, m, p)


def test_mu_tau_values():
    p = ChannelParams(gamma=2.0, lam=0.5, omega=1.0)
    for n in range(6):
        assert mu(n, p) == pytest.approx(np.sqrt(2.0) * n * (1 + 0.25 * n))
        assert tau(n, p) == pytest.approx(np.sqrt(0.25) * mu(n, p))


def test_positive_branch_monotone_decay():
    """With lam > 0 the kernel decays monotonically in gamma."""
    values = []
    for gamma in (0.5, 1.0, 2.0, 4.0):
        p = ChannelParams(gamma=gamma, lam=0.5, omega=1.0)
        values.append(kernel_entry(0, 3, p))
    assert all(a > b > 0 for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("lam, period_s", [(-1.0, 4 * np.pi), (-0.5, 8 * np.pi)])
def test_negative_branch_revival(lam, period_s):
    """The finite-space kernel is periodic in s = sqrt(gamma |y|).

    All tau_n = s * n(1 - |y| n) return to themselves (mod 2 pi) when s
    advances by the commensurate period, so the whole kernel matrix does.
    """
    y = abs(lam) / 2
    dim = 3 if lam == -1.0 else 5
    gamma = 1.3
    gamma_rev = (np.sqrt(gamma * y) + period_s) ** 2 / y
    K1 = kernel_matrix(ChannelParams(gamma=gamma, lam=lam, omega=1.0), dim).entries
    K2 = kernel_matrix(ChannelParams(gamma=gamma_rev, lam=lam, omega=1.0), dim).entries
    np.testing.assert_allclose(K1, K2, atol=1e-8)
    # starting from gamma = 0 the revival is back to the identity channel
    full = ChannelParams(gamma=period_s**2 / y, lam=lam, omega=1.0)
    np.testing.assert_allclose(kernel_matrix(full, dim).entries, np.ones((dim, dim)),
                               atol=1e-8)


def test_half_period_is_phase_flip():
    """Half a period in s restores all coherences up to an alternating sign."""
    p = ChannelParams(gamma=8 * np.pi**2, lam=-1.0, omega=1.0)
    u = np.array([1.0, -1.0, 1.0])
    np.testing.assert_allclose(kernel_matrix(p, 3).entries, np.outer(u, u), atol=1e-8)


def test_kernel_entry_beyond_negative_bound():
    p = ChannelParams(gamma=1.0, lam=-0.5, omega=1.0)
    with pytest.raises(DimensionError):
        kernel_entry(0, 5, p)


class TestOverlap:
    ALPHAS = [0.5, 1.0, 2.5, 7.0]

    def test_closed_form_matches_series(self):
        rng = np.random.default_rng(42)
        for _ in range(25):
            z = rng.uniform(-0.7, 0.7) + 1j * rng.uniform(-0.7, 0.7)
            x, y = z, rng.uniform(0.2, 0.7)
            if abs(x * y) > 0.5:
                continue
            for alpha in self.ALPHAS:
                for sign in ("+", "-"):
                    closed = overlap_closed_form(x, y, alpha, sign)
                    series = overlap_series(x, y, alpha, sign, terms=200)
                    assert abs(closed - series) <= 1e-10 * max(1.0, abs(closed))

    def test_alpha_one_is_geometric(self):
        # (1 - xy)^{-1} is the plain geometric series
        val = overlap_closed_form(0.3, 0.5, 1.0, "-")
        assert val == pytest.approx(1 / (1 - 0.15))


def test_coherent_vector_normalization():
    p = ChannelParams(gamma=1.0, lam=0.3, omega=1.0)
    v = coherent_vector(2, p)
    assert abs(np.sum(np.abs(v.amplitudes) ** 2) - 1) < 1e-9

    q = ChannelParams(gamma=1.0, lam=-0.5, omega=1.0)
    w = coherent_vector(3, q)
    assert w.env_dim == 5
    assert abs(np.sum(np.abs(w.amplitudes) ** 2) - 1) < 1e-12


def test_kernel_map_rows_and_validity():
    rows = kernel_map([-2.0, 0.0, 0.5], [0.0, 1.0], n=0, m=2)
    assert len(rows) == 6
    by_key = {(r.lam, r.gamma): r for r in rows}
    assert by_key[(0.0, 1.0)].K == pytest.approx(np.exp(-2.0))
    # m=2 does not exist in the lam=-2 space (bound is 2)
    assert not by_key[(-2.0, 1.0)].valid
    assert by_key[(0.5, 0.0)].valid and by_key[(0.5, 0.0)].K == 1.0


def test_kernel_map_csv_round_trip(tmp_path):
    rows = kernel_map([0.0, 0.5], [0.5, 1.5], n=0, m=1)
    path = tmp_path / "map.csv"
    write_kernel_map_csv(rows, path)
    write_kernel_map_csv(rows, tmp_path / "map2.csv")
    assert path.read_bytes() == (tmp_path / "map2.csv").read_bytes()
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "lambda,gamma,n,m,K,valid"
    assert len(lines) == 5
