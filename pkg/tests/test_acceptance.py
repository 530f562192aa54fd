"""Top-level acceptance gate.

Nine numbered criteria, one test each, each printing a single PASS/FAIL line
(the default ``-rA`` summary shows the lines for passing criteria too).  Every
clause of a criterion is evaluated before the verdict so a failing criterion
still reports which clauses held.  Criteria 4 and 5 pin two published
threshold readouts that this implementation reproduces only approximately; the
faithful values are asserted in test_continuous.py and the discrepancy is
documented with the build notes, not masked here.
"""

import math

import numpy as np

from entweave.channels import (
    Unbounded,
    ad_channel,
    choi_state,
    compose,
    compose_signal_chain,
    eb_order,
    is_eb,
    pd_channel,
    superop_distance,
    unitary_channel,
)
from entweave.continuous import (
    SwitchedLine,
    concurrence_profile,
    eb_length,
    rotating_ad_liouvillian,
    rotating_pd_liouvillian,
    switched_line,
    trotter_gap,
)
from entweave.entanglement import concurrence, negativity
from entweave.optics import (
    alpha_for_eta,
    dif_map,
    hwp,
    identity_setup,
    m1_setup,
    m2_setup,
    mprime_setup,
    run_point,
    setup_map,
    sweep,
)
from entweave.qmath import (
    SIGMA_X,
    SIGMA_Z,
    maximally_entangled,
    partial_trace,
    projector,
)

from conftest import random_density


def _verdict(num: int, title: str, clauses: list[tuple[str, bool]]) -> None:
    ok = all(flag for _, flag in clauses)
    failed = [name for name, flag in clauses if not flag]
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title}"
    if failed:
        line += " -- failed: " + ", ".join(failed)
    print(line)
    assert ok, line


def _interrupted_pair(base, u_mat):
    u = unitary_channel(u_mat)
    u_dag = unitary_channel(u_mat.conj().T)
    return compose(u, base), compose(base, u_dag)


def test_criterion_1_semigroup():
    grid = np.linspace(0.0, 1.0, 10)
    worst_ad = max(superop_distance(compose(ad_channel(a), ad_channel(b)),
                                    ad_channel(a * b))
                   for a in grid for b in grid)
    worst_pd = max(superop_distance(compose(pd_channel(a), pd_channel(b)),
                                    pd_channel(a * b))
                   for a in grid for b in grid)
    _verdict(1, "one-parameter semigroup composition", [
        (f"ad worst {worst_ad:.2e}", worst_ad < 1e-12),
        (f"pd worst {worst_pd:.2e}", worst_pd < 1e-12),
    ])


def test_criterion_2_interrupt_resume_identity():
    phi, psi = _interrupted_pair(ad_channel(0.3), SIGMA_X)
    word = compose_signal_chain([psi, phi, psi, phi])  # operator order PhiPsiPhiPsi
    dist = superop_distance(word, ad_channel(0.3 ** 4))
    c = concurrence(choi_state(word)).value
    _verdict(2, "alternating damping word collapses to the product channel", [
        (f"superop distance {dist:.2e}", dist < 1e-12),
        (f"Choi concurrence {c:.10f}", abs(c - 0.09) < 1e-9),
        ("interrupt factor order 2", eb_order(phi) == 2),
        ("resume factor order 2", eb_order(psi) == 2),
        ("doubled interrupt breaks", is_eb(compose(phi, phi)).eb),
        ("doubled resume breaks", is_eb(compose(psi, psi)).eb),
    ])


def test_criterion_3_dephasing_pair():
    u_mat = (SIGMA_Z - SIGMA_X) / math.sqrt(2.0)
    phi, _ = _interrupted_pair(pd_channel(0.4), u_mat)
    # p sampled above the classification floor p^16 > 1e-9; below it the
    # tolerance-based verdict cannot distinguish tiny positive concurrence
    # from zero (documented in test_channels)
    orders_unbounded = all(isinstance(eb_order(pd_channel(p)), Unbounded)
                           for p in (0.4, 0.7, 0.97))
    _verdict(3, "dephasing with a diagonal reflection breaks at order two", [
        ("interrupted order 2", eb_order(phi) == 2),
        ("bare dephasing never breaks", orders_unbounded),
    ])


def test_criterion_4_single_line_thresholds():
    l_ad = eb_length(rotating_ad_liouvillian(1, 1.5, 1.0), 6.0)
    l_pd = eb_length(rotating_pd_liouvillian(1, 1.5, 1.0), 6.0)
    pure = eb_length(rotating_ad_liouvillian(1, 0.0, 1.0), 50.0)
    _verdict(4, "driven-line breaking lengths match the published readouts", [
        (f"AD length {l_ad:.4f} = 1.75 +/- 0.01", abs(l_ad - 1.75) <= 0.01),
        (f"PD length {l_pd:.4f} = 0.85 +/- 0.01", abs(l_pd - 0.85) <= 0.01),
        ("undriven line unbroken to 50", isinstance(pure, Unbounded)),
    ])


def test_criterion_5_switched_extension():
    ad1 = rotating_ad_liouvillian(1, 1.5, 1.0)
    ad2 = rotating_ad_liouvillian(2, 1.5, 1.0)
    pd1 = rotating_pd_liouvillian(1, 1.5, 1.0)
    pd2 = rotating_pd_liouvillian(2, 1.5, 1.0)
    lengths = {n: eb_length(SwitchedLine(ad1, ad2, 1.75 / n, label=f"n{n}"),
                            20.0)
               for n in (1, 2, 4, 8)}
    l_pd4 = eb_length(SwitchedLine(pd1, pd2, 0.85 / 4, label="pd4"), 8.0)
    seq = [lengths[n] for n in (1, 2, 4, 8)]
    _verdict(5, "switching extends the breaking length", [
        (f"AD n=2 length {lengths[2]:.4f} > 3.5", lengths[2] > 3.5),
        (f"PD n=4 length {l_pd4:.4f} > 1.7", l_pd4 > 1.7),
        ("strictly increasing in n", all(a < b for a, b in zip(seq, seq[1:]))),
    ])


def test_criterion_6_fine_switching_limit():
    ad1 = rotating_ad_liouvillian(1, 1.5, 1.0)
    ad2 = rotating_ad_liouvillian(2, 1.5, 1.0)
    line = switched_line(ad1, ad2, 6.0, 64)
    xs = np.linspace(0.0, 6.0, 61)
    pts = concurrence_profile(line, 6.0, 61)
    sup = max(abs(p.pre_clamp - math.exp(-x / 2.0)) for p, x in zip(pts, xs))
    gaps = [trotter_gap(switched_line(ad1, ad2, 4.0, n), 4.0)
            for n in (16, 32, 64, 128, 256)]
    halving = all(0.3 < b / a < 0.7 for a, b in zip(gaps, gaps[1:]))
    _verdict(6, "dense switching converges to the mean line", [
        (f"profile sup gap {sup:.4f} < 0.02", sup < 0.02),
        ("propagator gap halves per doubling", halving),
    ])


def test_criterion_7_bench_against_algebra():
    u = unitary_channel(hwp(math.pi / 4))
    chains = {
        "mprime": (mprime_setup(),
                   [ad_channel(0.3), u, u, ad_channel(0.09), u, u,
                    ad_channel(0.3)]),
        "m1": (m1_setup(), [u, ad_channel(0.3), u, ad_channel(0.3)]),
        "m2": (m2_setup(), [ad_channel(0.3), u, ad_channel(0.3), u]),
    }
    clauses = []
    for name, (setup, chain) in chains.items():
        total, _ = setup_map(setup)
        d = superop_distance(total.normalized(), compose_signal_chain(chain))
        clauses.append((f"{name} distance {d:.2e}", d < 1e-9))
    worst = max(superop_distance(dif_map(alpha_for_eta(e)).normalized(),
                                 ad_channel(e))
                for e in np.arange(0.1, 0.95, 0.1))
    clauses.append((f"single-stage closure worst {worst:.2e}", worst < 1e-10))
    _verdict(7, "optical bench reproduces the channel algebra", clauses)


def test_criterion_8_experiment_curves():
    pi4 = math.pi / 4
    m1_at = lambda th: run_point(m1_setup(theta=th))[0]
    ideal = sweep(mprime_setup(), "theta", -math.pi / 2, math.pi / 2, 361)
    cs = [p.concurrence for p in ideal]
    peak_angles = [round(ideal[i].angle, 9) for i in range(1, 360)
                   if cs[i] > cs[i - 1] and cs[i] >= cs[i + 1] and cs[i] > 1e-9]
    peak_ok = peak_angles == [round(-pi4, 9), round(pi4, 9)]
    w = 0.96
    eta_t = 0.0081
    coh = w * math.sqrt(eta_t) / 2.0
    p00 = w * (1 - eta_t) / 2.0 + (1 - w) * (2 - eta_t) / 4.0
    p11 = (1 - w) * eta_t / 4.0
    closed = 2.0 * max(0.0, coh - math.sqrt(p00 * p11))
    peak_val = max(cs)
    meas = sweep(mprime_setup(preset="measured"), "theta",
                 -math.pi / 2, math.pi / 2, 361)
    mc = [p.concurrence for p in meas]
    heights = sorted(mc[i] for i in range(1, 360)
                     if mc[i] > mc[i - 1] and mc[i] >= mc[i + 1]
                     and mc[i] > 1e-9)
    unequal = bool(heights) and heights[-1] - heights[0] > 1e-3
    c_meas = run_point(identity_setup(preset="measured"))[0]
    per_dif = 1.0 - (c_meas / 0.94) ** (1.0 / 3.0)
    _verdict(8, "sweep features: plateaus, peak placement, element asymmetry", [
        ("m1 zero at +pi/4", m1_at(pi4) <= 1e-9),
        ("m1 zero at -pi/4", m1_at(-pi4) <= 1e-9),
        ("m1 positive at 0", m1_at(0.0) > 1e-6),
        (f"restored peaks exactly at +/-pi/4 {peak_angles}", peak_ok),
        (f"peak {peak_val:.8f} vs closed form {closed:.8f}",
         abs(peak_val - closed) < 1e-6),
        (f"measured peak heights unequal "
         f"[{heights[0]:.6f}, {heights[-1]:.6f}]", unequal),
        (f"measured degradation {per_dif:.3f}/stage >= 1.3%", per_dif >= 0.013),
    ])


def test_criterion_9_measure_sanity(rng):
    agree = True
    for _ in range(500):
        rho = random_density(4, rng, rank=int(rng.integers(1, 5)))
        c = concurrence(rho).value
        n = negativity(rho)
        if (c > 1e-7) != (n > 1e-7):
            # borderline states may straddle the tolerance; require a real split
            if max(c, n) > 1e-6:
                agree = False
    omega_ok = abs(concurrence(projector(maximally_entangled())).value - 1.0) < 1e-12
    mixed_ok = concurrence(np.eye(4) / 4.0).value == 0.0
    cptp = []
    for ch in (ad_channel(0.3), pd_channel(0.4),
               compose(ad_channel(0.5), unitary_channel(SIGMA_X))):
        choi = np.asarray(choi_state(ch).matrix)
        w = np.linalg.eigvalsh(0.5 * (choi + choi.conj().T))
        marg = partial_trace(choi, (2, 2), keep=1)  # trace out the output slot
        cptp.append(w.min() > -1e-10
                    and np.allclose(marg, np.eye(2) / 2.0, atol=1e-10)
                    and abs(np.trace(choi).real - 1.0) < 1e-10)
    _verdict(9, "measure cross-checks and channel structure", [
        ("verdict agreement on 500 random states", agree),
        ("maximally entangled concurrence 1", omega_ok),
        ("maximally mixed concurrence 0", mixed_ok),
        ("Choi states are normalized CPTP duals", all(cptp)),
    ])
