import copy
import json
import math
from fractions import Fraction

import pytest
from mpmath import mp

from lowerspec.cf import NonFinitenessCertificate, float_cross_check, make_pair, verify_certificate
from lowerspec.cf.pair import term_mp
from lowerspec.errors import NoRationalAngle, VerificationFailed
from lowerspec.schemas import SchemaError


def _reload(doc) -> NonFinitenessCertificate:
    return NonFinitenessCertificate.loads(json.dumps(doc))


def _fails(doc, check=None):
    with pytest.raises(VerificationFailed) as info:
        verify_certificate(_reload(doc))
    if check is not None:
        assert info.value.check == check
    return info.value


def test_main_example_structure(main_cert):
    c = main_cert
    assert (c.a, c.b, c.N, c.M, c.n0) == (6, 13, 3, 4, 1)
    assert (c.cf.a0,) + c.cf.quotients[:3] == (4, 7, 5, 7)
    assert c.cf.q(c.N) == 259 and len(str(c.cf.q(c.M))) == 784
    assert c.C_exp == 11 and c.materialized_steps == 0 and c.deferred_steps == 3
    assert c.pair.alpha_float == pytest.approx(-1 / math.tan(6 * math.pi / 13), rel=1e-15)
    assert c.pair.theta == pytest.approx(1.000234, abs=1e-6)
    assert abs(c.pair.theta - 1.0) < 0.05


def test_main_example_frozen_values(main_cert):
    c = main_cert
    assert float(c.delta_lower) == pytest.approx(0.000965250965, rel=1e-9)
    assert float(c.delta_global) == pytest.approx(2.0869242945e-12, rel=1e-9)
    assert c.c0 == pytest.approx(1.63726, rel=1e-4)
    assert c.lsr_floor == pytest.approx(3.0803176e-13, rel=1e-6)
    assert 0 < c.lsr_floor < math.pi * float(c.delta_global) / (c.c0 * c.b) * (1 + 1e-15)


def test_verify_main_example(main_cert):
    report = verify_certificate(main_cert, 1000)
    names = {n for n, _ in report.checks}
    assert {"structure", "congruence", "growth", "constant", "induction", "target", "pair",
            "first-bit", "claim", "second-bit", "recorded"} <= names
    assert report.min_margin > 0
    assert report.delta_lower >= report.delta_global > 0


def test_branch_below_q_n_uses_q_n(main_cert):
    # for n < q_N the witness is q_N itself
    q_n = main_cert.cf.q(main_cert.N)
    below = [w for w in main_cert.witness_table if w.n < q_n]
    assert below and all(w.q_index == main_cert.N for w in below)
    above = [w for w in main_cert.witness_table if w.n >= q_n]
    assert all(w.q_index > main_cert.N for w in above)


def test_json_round_trip(main_cert):
    doc = main_cert.to_json()
    again = _reload(doc)
    assert again.to_json() == doc
    verify_certificate(again, 300)


def test_tamper_each_quotient(main_cert):
    doc = main_cert.to_json()
    bad = copy.deepcopy(doc)
    bad["cf"]["a0"] = str(int(bad["cf"]["a0"]) - 1)
    _fails(bad)
    for i in range(len(doc["cf"]["quotients"])):
        bad = copy.deepcopy(doc)
        bad["cf"]["quotients"][i] = str(int(bad["cf"]["quotients"][i]) - 1)
        _fails(bad)


def test_zero_quotient_is_rejected(main_cert):
    bad = main_cert.to_json()
    bad["cf"]["quotients"][0] = "0"
    with pytest.raises(VerificationFailed) as info:
        _reload(bad)
    assert info.value.check == "quotients"


@pytest.mark.parametrize("field, value, check", [
    ("a", 5, "congruence"),
    ("C_exp", 12, "constant"),
    ("N", 2, "congruence"),
])
def test_tamper_scalars(main_cert, field, value, check):
    doc = main_cert.to_json()
    doc[field] = value
    _fails(doc, check)


def test_tamper_recorded_values(main_cert):
    doc = main_cert.to_json()
    doc["witness_table"][5]["q_index"] = 4
    _fails(doc, "witness-table")
    doc = main_cert.to_json()
    doc["delta_global"] = "1/1000"
    _fails(doc, "delta")
    doc = main_cert.to_json()
    doc["pair"]["theta_enclosure"] = {"lo": "1", "hi": "1"}
    _fails(doc, "pair")


def test_range_beyond_quotients(main_cert):
    with pytest.raises(VerificationFailed) as info:
        verify_certificate(main_cert, main_cert.cf.q(main_cert.M))
    assert info.value.check == "structure"


def test_schema_rejects_malformed(main_cert):
    doc = main_cert.to_json()
    doc["cf"]["quotients"][1] = "seven"
    with pytest.raises(SchemaError):
        _reload(doc)
    doc = main_cert.to_json()
    del doc["b"]
    with pytest.raises(SchemaError):
        _reload(doc)


def test_term_mp_against_direct_evaluation(main_cert):
    c = main_cert
    v = c.cf.convergent(c.M)
    with mp.workdps(900):
        theta = mp.pi * (mp.mpf(v.numerator) / v.denominator) / c.b
        alpha = -1 / mp.tan(mp.pi * 6 / 13)
        for n in (1, 2, 259):
            direct = abs(mp.cos(n * theta) + alpha * mp.sin(n * theta)) ** (mp.mpf(1) / (n + 1))
            assert abs(term_mp(c, n) - direct) < mp.mpf(10) ** -30
    assert float(term_mp(c, 1)) == pytest.approx(0.66175, abs=1e-5)
    assert float(term_mp(c, 259)) == pytest.approx(0.00096, abs=5e-6)


def test_float_cross_check(main_cert):
    x = float_cross_check(main_cert)
    assert x.ok and x.floor_ok and x.chain_decreasing and x.witness_ok
    assert [n for n, _ in x.chain] == [1, 259]
    assert x.scan.value >= main_cert.lsr_floor


def test_no_rational_angle():
    with pytest.raises(NoRationalAngle):
        make_pair(1, 1e6, "1.0", 2, eps=1e-3)
