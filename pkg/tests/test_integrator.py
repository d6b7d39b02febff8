import math

import numpy as np
import pytest

from kninstanton.corpus import CORPUS, regime
from kninstanton.errors import EventStop, InvalidParameters
from kninstanton.geometry import InstantonParams, delta_r
from kninstanton.horizons import block_chart
from kninstanton.integrals import P_of_r, TangentState, colat_Theta, radial_R
from kninstanton.integrator import (
    HAMILTONIAN_MODE,
    HORIZON,
    MINO_MODE,
    R_TURN,
    THETA_TURN,
    IntegratorOptions,
    final_state_agreement,
    integrate,
    integrate_hamiltonian,
    integrate_mino,
    round_trip,
)

SEEDS = [(reg, sd) for reg in CORPUS for sd in reg.seeds]
SEED_IDS = [f"{reg.name}-{sd.name}" for reg, sd in SEEDS]
MODES = (MINO_MODE, HAMILTONIAN_MODE)


def opts(params, mode, **kw):
    kw.setdefault("s_span", 1000.0 * params.M)
    return IntegratorOptions(mode=mode, **kw)


def R_scale(params, consts, r):
    Xi2 = params.Xi**2
    P = P_of_r(params, consts, r)
    return abs(delta_r(params, r)) * (abs(consts.q_mass) * r * r + abs(consts.K)) + Xi2 * P * P


def test_options_validate():
    with pytest.raises(InvalidParameters):
        IntegratorOptions(mode="Leapfrog")
    with pytest.raises(InvalidParameters):
        IntegratorOptions(rel_tol=0.0)
    with pytest.raises(InvalidParameters):
        IntegratorOptions(s_span=math.inf)


@pytest.mark.parametrize("mode", MODES)
def test_radial_seed_K_drift(mode):
    p = InstantonParams(1, 0, 0, 0)
    rec = integrate(p, 0.0, TangentState(4.0, math.pi / 2, vr=1.0), IntegratorOptions(mode=mode))
    assert rec.status == "ok"
    assert rec.final_s == pytest.approx(1000.0, rel=1e-12)
    assert rec.max_drift()["K"] <= 1e-9


def test_radial_seed_modes_agree():
    p = InstantonParams(1, 0, 0, 0)
    s = TangentState(4.0, math.pi / 2, vr=1.0)
    a = integrate(p, 0.0, s, IntegratorOptions(mode=MINO_MODE))
    b = integrate(p, 0.0, s, IntegratorOptions(mode=HAMILTONIAN_MODE))
    assert final_state_agreement(a, b) <= 1e-6


@pytest.mark.parametrize("reg,sd", SEEDS, ids=SEED_IDS)
@pytest.mark.parametrize("mode", MODES)
def test_corpus_drift(reg, sd, mode):
    rec = integrate(reg.params, sd.q_charge, sd.state, opts(reg.params, mode))
    assert rec.status == "ok"
    assert max(rec.max_drift().values()) <= 1e-8
    if sd.equatorial:
        assert np.max(np.abs(rec.samples[:, 3] - math.pi / 2)) <= 1e-9


@pytest.mark.parametrize("reg,sd", SEEDS, ids=SEED_IDS)
def test_corpus_modes_agree(reg, sd):
    a = integrate(reg.params, sd.q_charge, sd.state, opts(reg.params, MINO_MODE))
    b = integrate(reg.params, sd.q_charge, sd.state, opts(reg.params, HAMILTONIAN_MODE))
    assert a.final_s == pytest.approx(b.final_s, rel=1e-12)
    assert final_state_agreement(a, b) <= 1e-6


@pytest.mark.parametrize("reg,sd", SEEDS, ids=SEED_IDS)
@pytest.mark.parametrize("mode", MODES)
def test_corpus_round_trip(reg, sd, mode):
    _, back, dev = round_trip(reg.params, sd.q_charge, sd.state, opts(reg.params, mode))
    assert back.final_s == pytest.approx(0.0, abs=1e-9 * reg.params.M)
    assert dev <= 1e-6


def test_hamiltonian_cyclic_momenta_exact():
    reg = regime("ads_slow")
    sd = reg.seeds[0]
    rec = integrate_hamiltonian(reg.params, sd.q_charge, sd.state, opts(reg.params, HAMILTONIAN_MODE, s_span=4000.0))
    assert rec.status == "ok" and len(rec.samples) >= 1e4
    # p_phi and p_t have identically zero right-hand sides
    assert np.ptp(rec.raw[:, 6]) == 0.0 and np.ptp(rec.raw[:, 7]) == 0.0
    assert rec.max_drift()["E"] <= 1e-12 and rec.max_drift()["Lz"] <= 1e-12


def test_mino_constraint_residual():
    # the first-integral constraint is only kept to integration accuracy: use 1e-12 here
    for reg, sd in SEEDS:
        rec = integrate_mino(reg.params, sd.q_charge, sd.state, opts(reg.params, MINO_MODE, rel_tol=1e-12, abs_tol=1e-14))
        assert rec.status == "ok"
        assert float(np.max(rec.constraint_residuals)) <= 1e-8, f"{reg.name}/{sd.name}"


def test_halving_tolerance_reduces_drift():
    worst = []
    for rt in (1e-8, 5e-9, 2.5e-9, 1.25e-9):
        w = 0.0
        for reg, sd in SEEDS:
            for mode in MODES:
                rec = integrate(reg.params, sd.q_charge, sd.state, opts(reg.params, mode, rel_tol=rt, abs_tol=rt * 1e-2))
                w = max(w, max(rec.max_drift().values()))
        worst.append(w)
    assert all(b < a for a, b in zip(worst, worst[1:])), worst


def test_turning_points_are_roots_of_R():
    reg = regime("ads_slow")
    sd = reg.seeds[0]
    rec = integrate_mino(reg.params, sd.q_charge, sd.state, opts(reg.params, MINO_MODE))
    turns = [ev for ev in rec.events if ev.kind == R_TURN]
    assert len(turns) >= 2
    r = np.array([ev.r for ev in turns])
    # r reverses: successive turning points alternate between the two ends
    assert np.all(np.diff(np.sign(np.diff(r))) != 0) or len(turns) == 2
    c = rec.constants
    for ev in turns:
        assert abs(radial_R(reg.params, c, ev.r)) <= 1e-8 * R_scale(reg.params, c, ev.r)


def test_single_theta_turning():
    reg = regime("ads_slow")
    sd = reg.seeds[0]
    full = integrate_mino(reg.params, sd.q_charge, sd.state, opts(reg.params, MINO_MODE))
    turns = [ev for ev in full.events if ev.kind == THETA_TURN]
    # stop between the first and second turning point
    s_stop = 0.5 * (turns[0].s + turns[1].s)
    rec = integrate_mino(reg.params, sd.q_charge, sd.state, opts(reg.params, MINO_MODE, s_span=s_stop))
    kinds = [ev.kind for ev in rec.events]
    assert kinds.count(THETA_TURN) == 1
    ev = next(ev for ev in rec.events if ev.kind == THETA_TURN)
    Th = colat_Theta(reg.params, rec.constants, ev.theta)
    assert abs(Th) <= 1e-8 * (abs(rec.constants.K) + abs(rec.constants.q_mass) + 1.0)


@pytest.mark.parametrize("reg,sd", SEEDS, ids=SEED_IDS)
def test_no_horizon_events_inside_block(reg, sd):
    rec = integrate_mino(reg.params, sd.q_charge, sd.state, opts(reg.params, MINO_MODE))
    chart = block_chart(reg.params)
    assert len({chart.block_of(r) for r in rec.samples[:, 2]}) == 1
    assert not any(ev.kind == HORIZON for ev in rec.events)


def test_inbound_horizon_approach():
    p = InstantonParams(1, 0.3, 0.2, -0.3)
    r_plus = block_chart(p).roots.roots[-1]
    rec = integrate_hamiltonian(p, 0.0, TangentState(r_plus + 0.5, 1.0, vr=-0.5), IntegratorOptions(mode=HAMILTONIAN_MODE))
    assert rec.status == HORIZON
    assert rec.events[-1].kind == HORIZON
    assert rec.events[-1].r == pytest.approx(r_plus, abs=1e-4)
    assert np.all(rec.samples[:, 2] > r_plus)


def test_raise_on_stop():
    p = InstantonParams(1, 0.3, 0.2, -0.3)
    r_plus = block_chart(p).roots.roots[-1]
    o = IntegratorOptions(mode=HAMILTONIAN_MODE, raise_on_stop=True)
    with pytest.raises(EventStop) as info:
        integrate(p, 0.0, TangentState(r_plus + 0.5, 1.0, vr=-0.5), o)
    assert info.value.record.status == HORIZON
