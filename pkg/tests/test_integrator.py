import numpy as np
import pytest

from _oracles import random_reduced
from epcharge.errors import StepUnderflow
from epcharge.integrator import (QuenchSchedule, integrate_full,
                                 integrate_quench, integrate_reduced)
from epcharge.model import PhysicalParams, ReducedParams, reduce, \
    reduction_diagnostics, separation_ratio
from epcharge.propagator import amplitudes, trajectory_closed_form
from epcharge.sweep import fit_log_slope


def three_mode_params(ratio: float, delta_r: float = 0.4,
                      eps_r: float = 1.0) -> PhysicalParams:
    """Fixed reduced model (gamma = 1.2) with an adjustable rate separation."""
    kappa_c, big_gamma = 0.2, 1.0
    dfast = kappa_c + 2.0 * big_gamma
    p = np.sqrt(dfast / (big_gamma * ratio))
    gamma_eff = p * p * big_gamma ** 2 / dfast
    delta = delta_r * gamma_eff
    return PhysicalParams(
        delta_a=delta, delta_b=-delta,
        kappa_a=0.0, kappa_b=0.0, kappa_c=kappa_c, Gamma=big_gamma,
        p_a=p, p_b=p, p_c_a=1.0, p_c_b=1.0,
        drive_eps=eps_r * gamma_eff,
    )


def test_undriven_reduced_stays_zero():
    r = ReducedParams(gamma_a=0.4, gamma_b=0.9, delta_r=1.1, eps_r=0.0)
    traj = integrate_reduced(r, 3.0, 0.05)
    assert np.all(traj.amps == 0)
    assert np.all(traj.energies == 0)
    assert np.all(traj.powers == 0)


def test_reduced_matches_closed_form_sampled_regimes():
    rng = np.random.default_rng(31)
    for _ in range(10):
        r = random_reduced(rng)
        traj = integrate_reduced(r, 6.0, 0.05)
        a_cf, b_cf = trajectory_closed_form(r, traj.times)
        err = np.max(
            np.abs(traj.amps - np.column_stack([a_cf, b_cf]))
            / (1.0 + np.abs(np.column_stack([a_cf, b_cf]))))
        assert err < 1e-6


def test_rk4_order_of_convergence():
    r = ReducedParams(gamma_a=1.2, gamma_b=1.0, delta_r=0.5, eps_r=1.0)
    t_end = 2.0
    errs = []
    for dt in (0.1, 0.05):
        traj = integrate_reduced(r, t_end, dt, auto_refine=False)
        _, b_cf = amplitudes(r, t_end)
        errs.append(abs(traj.amps[-1, 1] - b_cf))
    ratio = errs[0] / errs[1]
    assert 10.0 < ratio < 26.0  # fourth order: halving dt gains ~16x


def test_linearity_in_drive():
    r1 = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=0.2, eps_r=0.7)
    r2 = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=0.2, eps_r=1.4)
    t1 = integrate_reduced(r1, 4.0, 0.05, auto_refine=False)
    t2 = integrate_reduced(r2, 4.0, 0.05, auto_refine=False)
    assert np.allclose(2.0 * t1.amps, t2.amps, rtol=1e-12, atol=1e-14)
    assert np.allclose(4.0 * t1.energies, t2.energies, rtol=1e-12, atol=1e-14)


def test_restart_from_midpoint_is_identity():
    r = ReducedParams(gamma_a=0.8, gamma_b=0.3, delta_r=1.4, eps_r=1.1)
    whole = integrate_reduced(r, 4.0, 0.01, auto_refine=False)
    mid = len(whole.times) // 2
    state = (complex(whole.amps[mid, 0]), complex(whole.amps[mid, 1]))
    tail = integrate_reduced(r, 2.0, 0.01, init=state, auto_refine=False)
    err = np.max(np.abs(tail.amps - whole.amps[mid:]))
    assert err < 1e-9


def test_step_underflow():
    r = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=0.0, eps_r=1.0)
    with pytest.raises(StepUnderflow):
        integrate_reduced(r, 1.0, 5e-13)


def test_trajectory_times_strictly_increasing_enforced():
    r = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=0.0, eps_r=1.0)
    traj = integrate_reduced(r, 1.0, 0.1)
    assert np.all(np.diff(traj.times) > 0)
    assert traj.energies == pytest.approx(np.abs(traj.amps[:, 1]) ** 2)


def test_full_undriven_stays_zero():
    p = three_mode_params(10.0)
    p = PhysicalParams(**{**p.__dict__, "drive_eps": 0.0})
    traj = integrate_full(p, 5.0, 0.05)
    assert np.all(traj.amps == 0)


def test_full_model_approaches_reduced_closed_form():
    errors = {}
    for ratio in (10.0, 100.0):
        phys = three_mode_params(ratio)
        red = reduce(phys)
        assert separation_ratio(phys) == pytest.approx(ratio, rel=1e-12)
        t_phys = 5.0 / red.gamma_eff
        traj = integrate_full(phys, t_phys, 0.05)
        diag = reduction_diagnostics(phys)
        b_full = traj.amps[-1, 1] * np.exp(1j * diag.gauge_phase)
        dimless = ReducedParams(gamma_a=red.gamma_a, gamma_b=red.gamma_b,
                                delta_r=red.delta_r, eps_r=red.eps_r)
        _, b_cf = amplitudes(dimless, 5.0)
        errors[ratio] = abs(b_full - b_cf) / abs(b_cf)
    assert errors[100.0] < errors[10.0]
    assert errors[100.0] < 0.05


def test_full_model_error_halves_when_separation_doubles():
    errs = []
    for ratio in (25.0, 50.0):
        phys = three_mode_params(ratio)
        red = reduce(phys)
        traj = integrate_full(phys, 5.0 / red.gamma_eff, 0.05)
        dimless = ReducedParams(gamma_a=red.gamma_a, gamma_b=red.gamma_b,
                                delta_r=red.delta_r, eps_r=red.eps_r)
        _, b_cf = amplitudes(dimless, 5.0)
        errs.append(abs(traj.amps[-1, 1] - b_cf) / abs(b_cf))
    assert 1.5 < errs[0] / errs[1] < 3.0


def test_quench_single_segment_reduces_to_plain_integration():
    r = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=0.0, eps_r=1.0)
    schedule = QuenchSchedule(segments=((3.0, r),))
    quench = integrate_quench(schedule, dt=0.05)
    plain = integrate_reduced(r, 3.0, 0.05)
    assert np.array_equal(quench.times, plain.times)
    assert np.array_equal(quench.amps, plain.amps)


def test_quench_is_amplitude_continuous():
    broken = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=0.0, eps_r=1.0)
    unbroken = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=2.0, eps_r=1.0)
    schedule = QuenchSchedule(segments=((5.0, broken), (10.0, unbroken)))
    quench = integrate_quench(schedule, dt=0.01)
    first = integrate_reduced(broken, 5.0, 0.01)
    i_switch = quench.meta["segment_boundaries"][0]
    assert quench.times[i_switch] == pytest.approx(5.0, abs=1e-12)
    assert quench.amps[i_switch, 0] == first.amps[-1, 0]
    assert quench.amps[i_switch, 1] == first.amps[-1, 1]


def test_quench_halts_exponential_growth():
    broken = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=0.0, eps_r=1.0)
    unbroken = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=2.0, eps_r=1.0)
    schedule = QuenchSchedule(segments=((5.0, broken), (10.0, unbroken)))
    traj = integrate_quench(schedule, dt=0.01)
    i_switch = traj.meta["segment_boundaries"][0]
    # fit after one energy decay time (1 / gamma_b here)
    mask = traj.times >= 5.0 + 1.0 / unbroken.gamma_b
    slope = fit_log_slope(traj.times[mask], traj.energies[mask],
                          window_frac=1.0)
    assert slope <= 1e-6
    assert "overshoot_factor" in traj.meta
    from epcharge.spectral import eigensystem

    e_ss = (unbroken.eps_r / abs(eigensystem(unbroken).pi_lambda)) ** 2
    envelope = max(float(traj.energies[i_switch]), e_ss)
    assert traj.energies[i_switch:].max() <= \
        envelope * (1.0 + traj.meta["overshoot_factor"]) + 1e-12


def test_quench_switch_at_critical_time_hits_threshold():
    from epcharge.sweep import tcrit_curve

    curve = tcrit_curve(0.5, 1000.0, delta_r_range=(0.0, 0.0), n=1)
    t_crit = float(curve.t_exact[0])
    broken = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=0.0, eps_r=1.0)
    unbroken = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=2.0, eps_r=1.0)
    schedule = QuenchSchedule(segments=((t_crit, broken), (5.0, unbroken)))
    traj = integrate_quench(schedule, dt=0.002)
    i_switch = traj.meta["segment_boundaries"][0]
    assert traj.energies[i_switch] == pytest.approx(1000.0, rel=0.05)


def test_quench_schedule_validation():
    r = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=0.0, eps_r=1.0)
    with pytest.raises(ValueError):
        QuenchSchedule(segments=())
    with pytest.raises(ValueError):
        QuenchSchedule(segments=((0.0, r),))
    with pytest.raises(TypeError):
        QuenchSchedule(segments=((1.0, "nope"),))


def test_trajectory_csv_columns(tmp_path):
    r = ReducedParams(gamma_a=0.5, gamma_b=0.5, delta_r=0.0, eps_r=1.0)
    traj = integrate_reduced(r, 1.0, 0.25, auto_refine=False)
    path = tmp_path / "traj.csv"
    traj.write_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t,re_a,im_a,re_b,im_b,energy,power"
    assert len(lines) == 1 + len(traj.times)
    last = [float(x) for x in lines[-1].split(",")]
    assert last[0] == pytest.approx(1.0)
    assert last[5] == pytest.approx(traj.energies[-1], rel=1e-15)

    p = three_mode_params(10.0)
    full = integrate_full(p, 0.5, 0.1, auto_refine=False)
    path3 = tmp_path / "traj3.csv"
    full.write_csv(path3)
    header3 = path3.read_text().splitlines()[0]
    assert header3 == "t,re_a,im_a,re_b,im_b,re_c,im_c,energy,power"
