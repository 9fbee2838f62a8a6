import cmath
import math

import pytest

cslab = pytest.importorskip("cslab")


def test_commands_and_defaults():
    assert "wiener" in cslab.commands()
    d = cslab.defaults("overlap")
    assert d["hbar"] == "1" and d["dim"] == "64" and d["seed"] == "0"


def test_overlap_matches_fock_states():
    a = cslab.coherent_state(0.5, -0.3, dim=48)
    b = cslab.coherent_state(0.0, 1.0, dim=48)
    inner = sum(x.conjugate() * y for x, y in zip(a, b))
    assert abs(inner - cslab.overlap(0.5, -0.3, 0.0, 1.0)) < 1e-10
    assert abs(sum(abs(x) ** 2 for x in a) - 1) < 1e-12


def test_wiener_records():
    res = cslab.run("wiener", nu=[4, 8, 16], samples=2000, T=0.5)
    est = res.kind("estimate")
    assert [r["nu"] for r in est] == [4.0, 8.0, 16.0]
    for key in ("value_re", "value_im", "stderr", "samples", "steps", "seed"):
        assert key in est[0]
    again = cslab.run("wiener", nu=[4, 8, 16], samples=2000, T=0.5, workers=2)
    assert [r["value_re"] for r in again.kind("estimate")] == [r["value_re"] for r in est]


def test_classical_table():
    res = cslab.run("classical", T=0.2, record_every=50)
    cols = res.columns()
    assert set(cols["source-tag"]) == {"quantum", "classical"}
    assert float(cols["q"][0]) == pytest.approx(1.0)


def test_validation_error():
    with pytest.raises(cslab.ValidationError, match="0 <= zeta < 1"):
        cslab.run("rotsym-quantum", zeta=1.2)
    with pytest.raises(cslab.ValidationError):
        cslab.run("overlap", colour="red")
    with pytest.raises(cslab.Error):
        cslab.coherent_state(20.0, 0.0, dim=8)


def test_audit_fock():
    res = cslab.run("audit", suite="fock")
    assert not res.audit_failed
    assert all(r["pass"] for r in res.records)
