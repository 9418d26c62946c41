import math

import pytest

import pqd


def test_version():
    assert pqd.__version__.count(".") == 2


def test_drude_lossless_is_real():
    eps = pqd.drude_epsilon(0.5)
    assert eps.imag == 0.0
    assert eps.real == pytest.approx(9.6 * (1.0 - 4.0))
    assert pqd.drude_epsilon(1.0) == 0.0


def test_dispersion_edges():
    (b1,) = pqd.trace_modes(modes=[1], k_points=200)
    kinds = sorted(e["kind"] for e in b1["band_edges"])
    assert kinds == ["maximum", "minimum"]
    assert len(b1["k_z"]) == len(b1["omega"]) == 200


def test_decay_and_noise():
    d = pqd.decay_trace(delta=0.2, t_max=5.0)
    assert d["population"][0] == 1.0
    assert d["cross_check"] < 1e-5
    om = pqd.symmetric_grid(0.05, 201)
    fano = pqd.noise_spectrum(om, delta=-0.01)
    jumps = pqd.detect_jumps(om, fano)
    assert len(jumps) == 2
    assert all(abs(abs(j) - 0.01) <= 5e-4 for j in jumps)


def test_markov_zero_frequency():
    a, b, c = 0.01, 0.1, 0.05
    closed = 1 - 2 * a * b * c * (a + b + c) / (a * b + b * c + c * a) ** 2
    assert pqd.markov_fano(a, b, c, 0.0) == pytest.approx(closed, abs=1e-14)


def test_retardation_decoupled():
    om = [-1.0, 0.0, 0.5]
    r = pqd.retarded_noise(om, coupled=False)
    for w, s in zip(om, r["fano"]):
        assert s == pytest.approx(pqd.markov_fano(1.0, 1.0, 2.0, w), abs=1e-8)


def test_phonon():
    cut = pqd.phonon_cutoffs("flexural", 2.0, 3)
    assert cut[1] == pytest.approx(math.pi, rel=1e-12)
    br = pqd.phonon_branches("dilatational", 2.0, 1.0, 3, [0.1 * i for i in range(41)])
    assert len(br) == 3


def test_errors_are_raised():
    with pytest.raises(pqd.Error):
        pqd.phonon_cutoffs("torsional")
    with pytest.raises(pqd.Error):
        pqd.decay_trace(kind="saddle")
