import math

import numpy as np
import pytest

from dsamp.corpus import (make_counterexample, make_shifted_sinc, make_sinc_sq_product,
                          make_tilde_f, sample_function)
from dsamp.lattice import Bandwidth, MultiIndex, TruncationWindow, enum_multi_indices, enum_window
from dsamp.reconstruct import (LatticeError, MissingChannelError, hermite1_eval,
                               hermite_nd_eval, legacy2d_eval, poly_term, reconstruct_grid,
                               wks_eval)
from dsamp.sampleio import SampleSet

PI = math.pi


def brute_series(samples, z, channels=None):
    """Independent reference summation using numpy's own sinc."""
    z = np.asarray(z, dtype=complex)
    sig = np.array(samples.sigma.sigma)
    ks = channels if channels is not None else [k.bits for k in enum_multi_indices(samples.dim)]
    total = 0.0 + 0.0j
    for m in enum_window(samples.tau):
        u = samples.theta * PI * np.array(m, dtype=float) / sig
        d = z - u
        if samples.theta == 1:
            kern = np.prod(np.sinc(sig * d / PI))
        else:
            kern = np.prod(np.sinc(sig * d / (2 * PI))) ** 2
        inner = 0.0 + 0.0j
        for kb in ks:
            v = samples.records[(MultiIndex(kb), m)]
            term = v
            for j, bit in enumerate(kb):
                if bit:
                    term = term * d[j]
            inner += term
        total += inner * kern
    return total


def test_poly_term_examples():
    assert poly_term(4.25, (0, 0), (9.0, 9.0)) == 4.25
    assert poly_term(3.0, (1, 0), (0.5, 7.0)) == 1.5
    assert poly_term(2.0, (1, 1), (0.0, 3.0)) == 0.0
    with pytest.raises(ValueError):
        poly_term(1.0, (1, 0), (0.5,))


def _zero_samples(n=1, theta=2, tau=2):
    sig = Bandwidth((PI,) * n)
    win = TruncationWindow((tau,) * n)
    ks = enum_multi_indices(n) if theta == 2 else [MultiIndex.zero(n)]
    records = {(k, m): 0.0 for k in ks for m in enum_window(win)}
    return SampleSet(sigma=sig, theta=theta, tau=win, p=1.0, value_kind="real", records=records)


def test_all_zero_samples_reconstruct_zero():
    assert wks_eval(_zero_samples(theta=1), 0.37) == 0.0
    assert hermite1_eval(_zero_samples(), 0.37) == 0.0
    assert hermite_nd_eval(_zero_samples(n=2), (0.37, 1.1)) == 0.0
    assert legacy2d_eval(_zero_samples(n=2), (0.37, 1.1)) == 0.0


def test_wks_interpolates_nodes_exactly():
    f = make_shifted_sinc(Bandwidth((1.7,)), (0.3,))
    s = sample_function(f, 1, (8,))
    for m in (-8, -3, 0, 5):
        u = PI * m / 1.7
        assert wks_eval(s, u) == s.value(MultiIndex((0,)), (m,))


def test_wks_converges_to_oracle():
    f = make_shifted_sinc(Bandwidth((PI,)), (0.0,))
    s = sample_function(f, 1, (256,))
    z = 0.3
    assert abs(wks_eval(s, z) - f.value((z,))) < 1e-3
    # a shift off the lattice makes the tail genuinely nonzero
    g = make_shifted_sinc(Bandwidth((PI,)), (0.3,))
    errs = []
    for tau in (64, 256):
        sg = sample_function(g, 1, (tau,))
        errs.append(abs(wks_eval(sg, 0.71) - g.value((0.71,))))
    assert errs[1] < errs[0]
    assert errs[1] < 1e-3


def test_wks_rejects_wrong_lattice():
    with pytest.raises(LatticeError):
        wks_eval(_zero_samples(theta=2), 0.0)


def test_hermite1_node_and_oracle():
    f = make_sinc_sq_product(Bandwidth((PI,)))
    s = sample_function(f, 2, (256,))
    assert hermite1_eval(s, 2.0) == s.value(MultiIndex((0,)), (1,))
    assert abs(hermite1_eval(s, 0.7) - f.value((0.7,))) < 1e-4
    g = make_shifted_sinc(Bandwidth((PI,)), (0.4,))
    sg = sample_function(g, 2, (128,))
    assert abs(hermite1_eval(sg, 0.7) - g.value((0.7,))) < 1e-2


def test_hermite1_requires_both_channels():
    f = make_sinc_sq_product(Bandwidth((PI,)))
    s = sample_function(f, 2, (4,), which_k=[(0,)])
    with pytest.raises(MissingChannelError) as exc:
        hermite1_eval(s, 0.2)
    assert "k=1" in str(exc.value)
    with pytest.raises(LatticeError):
        hermite1_eval(sample_function(f, 1, (4,)), 0.2)


def test_hermite_nd_matches_brute_force():
    f = make_shifted_sinc(Bandwidth((PI, 2.0)), (0.3, -0.4))
    s = sample_function(f, 2, (6, 5))
    for z in [(0.4, -1.3), (1.7, 0.2)]:
        got = hermite_nd_eval(s, z)
        ref = brute_series(s, z)
        assert got == pytest.approx(ref, rel=1e-12, abs=1e-15)


def test_hermite_nd_oracle_convergence_2d():
    f = make_sinc_sq_product(Bandwidth((PI, PI)))
    s = sample_function(f, 2, (64, 64))
    z = (0.4, -1.3)
    assert abs(hermite_nd_eval(s, z) - f.value(z)) < 1e-3


def test_hermite_nd_reconstructs_counterexample():
    # All three low channels vanish on the lattice, yet the full series
    # still recovers the function through the mixed channel.
    f = make_counterexample(Bandwidth((PI, PI)))
    errs = []
    for tau in (8, 16):
        s = sample_function(f, 2, (tau, tau))
        errs.append(max(abs(hermite_nd_eval(s, z) - f.value(z))
                        for z in [(0.5, 0.5), (1.0, -1.0), (0.25, 1.75)]))
    assert errs[1] < errs[0]
    assert errs[1] < 1e-4
    assert abs(f.value((1.0, 1.0))) > 1e-6


def test_hermite_nd_complex_query_points():
    f = make_shifted_sinc(Bandwidth((PI,)), (0.3,))
    s = sample_function(f, 2, (64,))
    for z in (0.4 + 0.3j, -1.2 - 0.5j):
        got = hermite_nd_eval(s, (z,))
        assert abs(got - f.value((z,))) < 1e-2


def test_hermite_nd_missing_channel_names_it():
    f = make_shifted_sinc(Bandwidth((PI, PI)), (0.3, 0.1))
    s = sample_function(f, 2, (3, 3), which_k=[(0, 0), (1, 0), (0, 1)])
    with pytest.raises(MissingChannelError) as exc:
        hermite_nd_eval(s, (0.5, 0.5))
    assert "k=11" in str(exc.value)


def test_legacy2d_zeroes_counterexample():
    f = make_counterexample(Bandwidth((PI, PI)))
    s = sample_function(f, 2, (8, 8))
    pts = [(x, y) for x in np.linspace(-2, 2, 7) for y in np.linspace(-2, 2, 7)]
    worst = max(abs(legacy2d_eval(s, z)) for z in pts)
    assert worst <= 1e-10
    assert max(abs(f.value(z)) for z in pts) > 1e-6
    u0 = (0.0, 0.0)
    assert legacy2d_eval(s, u0) == s.value(MultiIndex((0, 0)), (0, 0))


def test_legacy2d_rejects_other_dimensions():
    f = make_shifted_sinc(Bandwidth((PI,)), (0.3,))
    with pytest.raises(LatticeError):
        legacy2d_eval(sample_function(f, 2, (3,)), 0.1)


def test_legacy_residual_is_the_mixed_channel_series():
    for f in (make_shifted_sinc(Bandwidth((PI, PI)), (0.3, -0.4)),
              make_sinc_sq_product(Bandwidth((PI, PI)))):
        s = sample_function(f, 2, (8, 8))
        z = (0.4, -1.3)
        lhs = abs(legacy2d_eval(s, z) - hermite_nd_eval(s, z))
        rhs = abs(brute_series(s, z, channels=[(1, 1)]))
        assert lhs == pytest.approx(rhs, abs=1e-9)


def test_node_interpolation_all_methods_all_families():
    sig2 = Bandwidth((PI, PI))
    families = [make_sinc_sq_product(sig2), make_shifted_sinc(sig2, (0.3, -0.4)),
                make_counterexample(sig2), make_tilde_f(sig2, (1, 0))]
    for f in families:
        s2 = sample_function(f, 2, (3, 3))
        s1 = sample_function(f, 1, (3, 3))
        for m in [(-3, 2), (0, 0), (1, -1)]:
            u2 = 2 * PI * np.array(m) / np.array(sig2.sigma)
            u1 = PI * np.array(m) / np.array(sig2.sigma)
            stored2 = s2.value(MultiIndex((0, 0)), m)
            assert hermite_nd_eval(s2, u2) == stored2
            assert legacy2d_eval(s2, u2) == stored2
            assert wks_eval(s1, u1) == s1.value(MultiIndex((0, 0)), m)
    f1 = make_shifted_sinc(Bandwidth((PI,)), (0.25,))
    s = sample_function(f1, 2, (3,))
    for m in (-2, 0, 3):
        assert hermite1_eval(s, 2.0 * m) == s.value(MultiIndex((0,)), (m,))


def test_hermite_derivative_matching_at_nodes():
    # Finite differences of the reconstruction at an interior node recover
    # every stored derivative channel.
    f = make_shifted_sinc(Bandwidth((PI, PI)), (0.3, -0.4))
    s = sample_function(f, 2, (8, 8))
    h = 1e-4
    R = lambda x, y: hermite_nd_eval(s, (x, y)).real
    checks = {
        (0, 0): R(0.0, 0.0),
        (1, 0): (R(h, 0) - R(-h, 0)) / (2 * h),
        (0, 1): (R(0, h) - R(0, -h)) / (2 * h),
        (1, 1): (R(h, h) - R(h, -h) - R(-h, h) + R(-h, -h)) / (4 * h * h),
    }
    for kb, fd in checks.items():
        stored = s.value(MultiIndex(kb), (0, 0)).real
        assert abs(fd - stored) <= 1e-5 * (1.0 + abs(stored))


def test_absolute_convergence_tail_monotone():
    for sig, shift in ((Bandwidth((PI,)), (0.3,)), (Bandwidth((PI, PI)), (0.3, -0.4))):
        f = make_shifted_sinc(sig, shift)
        n = sig.dim
        z = np.full(n, 0.37)
        tails = []
        for tau in (8, 16, 32):
            s = sample_function(f, 2, (tau,) * n)
            tail = 0.0
            for m in enum_window(s.tau):
                if all(abs(mj) <= tau // 2 for mj in m):
                    continue
                u = 2 * PI * np.array(m, dtype=float) / np.array(sig.sigma)
                d = z - u
                kern = np.prod(np.sinc(np.array(sig.sigma) * d / (2 * PI))) ** 2
                inner = sum(abs(brute_series(
                    SampleSet(sigma=sig, theta=2, tau=TruncationWindow((0,) * n), p=1.0,
                              value_kind=s.value_kind,
                              records={(k, (0,) * n): s.records[(k, m)]
                                       for k in enum_multi_indices(n)}),
                    tuple(d), channels=[k.bits]))
                    for k in enum_multi_indices(n))
                tail += inner * abs(kern)
            tails.append(tail)
        assert tails[0] >= tails[1] >= tails[2]
        assert tails[2] < tails[0]


def test_linearity_of_reconstruction():
    sig = Bandwidth((PI, PI))
    f1 = make_shifted_sinc(sig, (0.3, -0.4))
    f2 = make_sinc_sq_product(sig)
    s1 = sample_function(f1, 2, (5, 5))
    s2 = sample_function(f2, 2, (5, 5))
    a, b = 2.5, -0.75
    combined = {key: a * s1.records[key] + b * s2.records[key] for key in s1.records}
    sc = SampleSet(sigma=sig, theta=2, tau=s1.tau, p=1.0, value_kind="real", records=combined)
    for z in [(0.4, -1.3), (1.1, 0.9)]:
        lhs = hermite_nd_eval(sc, z)
        rhs = a * hermite_nd_eval(s1, z) + b * hermite_nd_eval(s2, z)
        scale = abs(a) * abs(hermite_nd_eval(s1, z)) + abs(b) * abs(hermite_nd_eval(s2, z)) + 1.0
        assert abs(lhs - rhs) <= 1e-14 * scale


def test_axis_permutation_equivariance():
    sig = Bandwidth((PI, 2.0))
    f = make_shifted_sinc(sig, (0.3, -0.4))
    s = sample_function(f, 2, (4, 6))
    swapped = {(MultiIndex((k.bits[1], k.bits[0])), (m[1], m[0])): v
               for (k, m), v in s.records.items()}
    s_perm = SampleSet(sigma=Bandwidth((2.0, PI)), theta=2, tau=TruncationWindow((6, 4)),
                       p=s.p, value_kind=s.value_kind, records=swapped)
    for z in [(0.4, -1.3), (1.7, 0.2)]:
        direct = hermite_nd_eval(s, z)
        perm = hermite_nd_eval(s_perm, (z[1], z[0]))
        assert perm == pytest.approx(direct, rel=1e-13, abs=1e-16)


def test_drop_channel_behaviour():
    sig = Bandwidth((PI, PI))
    # dropping the only live channel of the counterexample zeroes the series
    f = make_counterexample(sig)
    s = sample_function(f, 2, (6, 6))
    assert abs(hermite_nd_eval(s, (0.5, 0.5), drop_channel=(1, 1))) <= 1e-10
    # dropping any channel breaks exactness for its witness function
    for kt in [(0, 0), (1, 0), (1, 1)]:
        ft = make_tilde_f(sig, kt)
        st = sample_function(ft, 2, (6, 6))
        z = (0.5, 0.25)
        dropped = hermite_nd_eval(st, z, drop_channel=kt)
        assert abs(dropped - ft.value(z)) > 1e-3
        # dropped + the dropped channel's own series = full series
        full = hermite_nd_eval(st, z)
        assert dropped + brute_series(st, z, channels=[kt]) == pytest.approx(full, rel=1e-10)


def test_reconstruct_grid_values_and_shape():
    f = make_shifted_sinc(Bandwidth((PI, PI)), (0.3, -0.4))
    s = sample_function(f, 2, (5, 5))
    axes = [np.linspace(-1, 1, 5).tolist(), np.linspace(-1, 1, 4).tolist()]
    vals = reconstruct_grid(s, "hermite-nd", axes)
    assert vals.shape == (5, 4)
    assert vals.dtype == np.float64
    for i, x in enumerate(axes[0]):
        for j, y in enumerate(axes[1]):
            assert vals[i, j] == hermite_nd_eval(s, (x, y)).real
    node_grid = [[0.0], [0.0]]
    v = reconstruct_grid(s, "hermite-nd", node_grid)
    assert v[0, 0] == s.value(MultiIndex((0, 0)), (0, 0)).real


def test_reconstruct_grid_oracle_error_small():
    f = make_sinc_sq_product(Bandwidth((PI, PI)))
    s = sample_function(f, 2, (64, 64))
    axes = [np.linspace(-2, 2, 11).tolist()] * 2
    vals = reconstruct_grid(s, "hermite-nd", axes)
    oracle = np.array([[f.value((x, y)) for y in axes[1]] for x in axes[0]])
    assert np.max(np.abs(vals - oracle)) < 1e-3


def test_complex_valued_samples():
    # engines accept complex-kind sample sets; results match the brute sum
    sig = Bandwidth((PI,))
    win = TruncationWindow((4,))
    rng = np.random.default_rng(53)
    records = {}
    for k in enum_multi_indices(1):
        for m in enum_window(win):
            records[(k, m)] = complex(rng.normal(), rng.normal())
    s = SampleSet(sigma=sig, theta=2, tau=win, p=2.0, value_kind="complex", records=records)
    z = 0.37
    got = hermite_nd_eval(s, z)
    assert got.imag != 0.0
    assert got == pytest.approx(brute_series(s, z), rel=1e-12)
    vals = reconstruct_grid(s, "hermite-nd", [[0.0, 0.37]])
    assert vals.dtype == np.complex128
    assert vals[1] == got


def test_reconstruct_grid_validation():
    f = make_shifted_sinc(Bandwidth((PI,)), (0.3,))
    s = sample_function(f, 2, (3,))
    with pytest.raises(ValueError):
        reconstruct_grid(s, "nope", [[0.0]])
    with pytest.raises(ValueError):
        reconstruct_grid(s, "hermite-nd", [[]])
    with pytest.raises(ValueError):
        reconstruct_grid(s, "hermite-nd", [[0.0], [0.0]])
    with pytest.raises(ValueError):
        reconstruct_grid(s, "hermite1", [[0.0]], drop_channel=(1,))
    with pytest.raises(LatticeError):
        reconstruct_grid(s, "wks", [[0.0]])
