import io

import numpy as np
import pytest

import skdrift as sk
from skdrift.integrators import _alpha_direct_batch, _em_batch, _underdamped_batch
from skdrift.limits import ito_drift_from_alpha

from conftest import zero_path


def _plain_spec(v0=0.0, force=0.0):
    return sk.DynamicsSpec(force=sk.constant(force), friction=sk.constant(1.0),
                           noise=sk.constant(1.0), domain=(-50.0, 50.0), x0=0.0, v0=v0)


# -- underdamped schemes ----------------------------------------------------

def test_velocity_decay_noise_free():
    # with no driving noise, v(t) = e^{-t} for gamma=m=1
    spec = _plain_spec(v0=1.0)
    path = zero_path(n_steps=10_000, dt=1e-4)
    euler = sk.integrate_underdamped(spec, 1.0, path, scheme="explicit-euler")
    expo = sk.integrate_underdamped(spec, 1.0, path, scheme="exponential")
    assert abs(euler.velocities[-1] - np.exp(-1)) < 1e-3
    # the exponential step is exact for frozen coefficients
    assert abs(expo.velocities[-1] - np.exp(-1)) < 1e-12


def test_relaxation_to_terminal_velocity():
    # F=1, gamma=1, m=1e-3: v -> F/gamma within t ~ 5m, x(1) ~ 1 within 1%
    spec = _plain_spec(force=1.0)
    path = zero_path(n_steps=10_000, dt=1e-4)
    traj = sk.integrate_underdamped(spec, 1e-3, path, scheme="exponential")
    assert abs(traj.velocities[-1] - 1.0) < 1e-6
    assert abs(traj.positions[-1] - 1.0) < 0.01
    k = int(5e-3 / path.dt)
    assert traj.velocities[k] > 0.99


def test_mass_sweep_approaches_limit_on_shared_path(einstein_spec):
    # smaller mass -> smaller sup-distance to the anti-Ito overdamped solution
    path = sk.sample_path(1.0, 20_000, seed=3)
    drift = ito_drift_from_alpha(einstein_spec, sk.constant(1.0))
    diff = sk.sk_diffusion(einstein_spec)
    limit = sk.integrate_ito(drift, diff, einstein_spec.x0, path, domain=einstein_spec.domain)
    sups = []
    for mass in (1e-1, 1e-2, 1e-3):
        traj = sk.integrate_underdamped(einstein_spec, mass, path)
        sups.append(np.max(np.abs(traj.positions - limit.positions)))
    assert sups[0] > sups[1] > sups[2]


def test_explicit_euler_stability_guard():
    spec = _plain_spec()
    path = zero_path(n_steps=10, dt=0.02)  # dt > m/(10 gamma) = 0.01
    with pytest.raises(sk.StabilityError) as exc:
        sk.integrate_underdamped(spec, 0.1, path, scheme="explicit-euler")
    assert "exponential" in str(exc.value)


def test_schemes_converge_to_each_other():
    # explicit-euler and exponential runs on the same path approach each
    # other at first order: halving dt halves the sup difference
    spec = _plain_spec()
    gaps = []
    for n in (1000, 2000):
        diffs = []
        for stream in range(8):
            fine = sk.sample_path(1.0, 2000, seed=17, stream=stream)
            path = sk.coarsen(fine, 2000 // n)
            euler = sk.integrate_underdamped(spec, 0.05, path, scheme="explicit-euler")
            expo = sk.integrate_underdamped(spec, 0.05, path, scheme="exponential")
            diffs.append(np.max(np.abs(euler.positions - expo.positions)))
        gaps.append(np.mean(diffs))
    assert 1.4 <= gaps[0] / gaps[1] <= 2.8


def test_integrators_are_pure(einstein_spec):
    path = sk.sample_path(1.0, 500, seed=11)
    a = sk.integrate_underdamped(einstein_spec, 0.05, path)
    b = sk.integrate_underdamped(einstein_spec, 0.05, path)
    assert np.array_equal(a.positions, b.positions)
    assert np.array_equal(a.velocities, b.velocities)


# -- Euler-Maruyama ----------------------------------------------------------

def test_em_reproduces_driving_path_exactly():
    path = sk.sample_path(1.0, 1000, seed=3)
    traj = sk.integrate_ito(sk.constant(0.0), sk.constant(1.0), 0.5, path)
    expected = np.empty(1001)
    expected[0] = acc = 0.5
    for i, dw in enumerate(path.increments):
        acc = acc + 0.0 + 1.0 * dw
        expected[i + 1] = acc
    assert np.array_equal(traj.positions, expected)


def test_em_deterministic_drift():
    path = zero_path(n_steps=100, dt=0.01)
    traj = sk.integrate_ito(sk.constant(1.0), sk.constant(0.0), 0.0, path)
    assert np.allclose(traj.positions, traj.times, rtol=0, atol=1e-12)


def test_em_strong_order_one_half():
    # dx = x dW against a shared fine-dt reference: fitted slope ~ 0.5
    ident = sk.ScalarField(lambda x: np.asarray(x, float),
                           lambda x: np.ones_like(np.asarray(x, float)))
    zero = sk.constant(0.0)
    n_ref, n_paths = 2 ** 13, 200
    dW = sk.sample_increments(1.0, n_ref, seed=29, streams=range(n_paths))
    ref, _, _ = _em_batch(zero, ident, 1.0, 1.0 / n_ref, dW)
    errs, dts = [], []
    for lev in (5, 6, 7, 8):
        n = 2 ** lev
        coarse = dW.reshape(n_paths, n, n_ref // n).sum(axis=2)
        pos, _, _ = _em_batch(zero, ident, 1.0, 1.0 / n, coarse)
        errs.append(np.abs(pos[:, -1] - ref[:, -1]).mean())
        dts.append(1.0 / n)
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    assert 0.3 <= slope <= 0.7, slope


def test_domain_exit_reports_first_step():
    # x = t on an exact binary grid: first point strictly above 0.5 is n=65
    path = zero_path(n_steps=100, dt=1.0 / 128.0)
    with pytest.raises(sk.DomainExitError) as exc:
        sk.integrate_ito(sk.constant(1.0), sk.constant(0.0), 0.0, path, domain=(-1.0, 0.5))
    err = exc.value
    assert err.step == 65
    assert err.time == pytest.approx(65.0 / 128.0)
    assert err.position > 0.5


# -- alpha conventions --------------------------------------------------------

def test_constant_diffusion_kills_alpha_dependence():
    path = sk.sample_path(1.0, 400, seed=5)
    base = None
    for alpha in (0.0, 0.5, 1.0, 2.0):
        for mode in ("converted", "direct"):
            traj = sk.integrate_alpha(sk.constant(0.1), sk.constant(2.0),
                                      sk.constant(alpha), 0.0, path, mode=mode)
            if base is None:
                base = traj.positions
            assert np.array_equal(base, traj.positions), (alpha, mode)


def test_alpha_zero_converted_is_bitwise_ito():
    path = sk.sample_path(1.0, 400, seed=6)
    sigma = sk.quadratic(1.0, 0.1)
    drift = sk.constant(0.05)
    a = sk.integrate_alpha(drift, sigma, sk.constant(0.0), 0.0, path, mode="converted")
    b = sk.integrate_ito(drift, sigma, 0.0, path)
    assert np.array_equal(a.positions, b.positions)


def test_alpha_modes_agree_in_mean():
    # b=0, sigma=1+x^2/10, alpha=1: terminal means of the two constructions
    # agree within 3 combined standard errors over 10^4 shared paths
    sigma = sk.quadratic(1.0, 0.1)
    alpha = sk.constant(1.0)
    zero = sk.constant(0.0)

    def conv_drift(x):
        return alpha(x) * sigma(x) * sigma.deriv(x)

    n_paths, n = 10_000, 1000
    dW = sk.sample_increments(1.0, n, seed=13, streams=range(n_paths))
    conv, _, _ = _em_batch(conv_drift, sigma, 0.0, 1.0 / n, dW)
    direct, _, _ = _alpha_direct_batch(zero, sigma, alpha, 0.0, 1.0 / n, dW)
    t1, t2 = conv[:, -1], direct[:, -1]
    se = np.hypot(t1.std(ddof=1), t2.std(ddof=1)) / np.sqrt(n_paths)
    assert abs(t1.mean() - t2.mean()) <= 3 * se


def test_alpha_half_matches_heun_oracle():
    # midpoint/Heun Stratonovich integrator as an independent oracle for the
    # alpha=1/2 convention, compared in ensemble mean at t_final
    sigma = sk.quadratic(1.0, 0.1)
    drift = sk.constant(0.1)
    n_paths, n = 4000, 100
    dt = 1.0 / n
    dW = sk.sample_increments(1.0, n, seed=23, streams=range(n_paths))

    x = np.zeros(n_paths)
    for k in range(n):
        dw = dW[:, k]
        x_pred = x + drift(x) * dt + sigma(x) * dw
        x = x + 0.5 * (drift(x) + drift(x_pred)) * dt + 0.5 * (sigma(x) + sigma(x_pred)) * dw
    heun_mean = x.mean()

    def half_drift(y):
        return drift(y) + 0.5 * sigma(y) * sigma.deriv(y)

    conv, _, _ = _em_batch(half_drift, sigma, 0.0, dt, dW)
    se = np.hypot(conv[:, -1].std(ddof=1), x.std(ddof=1)) / np.sqrt(n_paths)
    assert abs(conv[:, -1].mean() - heun_mean) <= 4 * se


def test_batch_matches_public_single_path(einstein_spec):
    # blocking is an implementation detail: row j of a batch equals the
    # public single-trajectory result bit for bit
    n = 300
    dW = sk.sample_increments(1.0, n, seed=31, streams=range(4))
    pos, vel, exit_step, _ = _underdamped_batch(einstein_spec, 0.01, 1.0 / n, dW,
                                                np.arange(n + 1), record_velocities=True)
    for j in range(4):
        path = sk.sample_path(1.0, n, seed=31, stream=j)
        traj = sk.integrate_underdamped(einstein_spec, 0.01, path)
        assert np.array_equal(traj.positions, pos[j])
        assert np.array_equal(traj.velocities, vel[j])
    assert np.all(exit_step == -1)


# -- trajectory plumbing -------------------------------------------------------

def test_trajectory_csv_roundtrip_fields():
    path = sk.sample_path(1.0, 4, seed=2)
    traj = sk.integrate_underdamped(_plain_spec(), 0.5, path, scheme="exponential")
    buf = io.StringIO()
    sk.dump_trajectory_csv(traj, buf)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0].startswith("# scheme=exponential,mass=0.5,seed=2")
    assert lines[1] == "n,t,x,v"
    assert len(lines) == 2 + 5
    row = lines[2].split(",")
    assert float(row[2]) == traj.positions[0]


def test_trajectory_subsample():
    path = sk.sample_path(1.0, 8, seed=2)
    traj = sk.integrate_ito(sk.constant(0.0), sk.constant(1.0), 0.0, path)
    sub = traj.subsample(4)
    assert len(sub.positions) == 3
    assert sub.positions[1] == traj.positions[4]
    assert sub.dt == pytest.approx(0.5)
    with pytest.raises(ValueError):
        traj.subsample(3)
