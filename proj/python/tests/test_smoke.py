import json
import math
import random
from fractions import Fraction

import pytest

import boxlab


def test_pr_numbers():
    pr = boxlab.canonical("pr")
    cost = boxlab.communication_cost(pr)
    assert cost["c"] == 1
    assert cost["s"] == 0
    assert cost["eta"] == 1
    assert boxlab.unpredictability(pr) == Fraction(1, 2)
    assert boxlab.lambda_max(pr) == 4


def test_isotropic_cost():
    for k in range(11):
        v = Fraction(k, 10)
        assert boxlab.communication_cost(boxlab.isotropic(v))["c"] == max(0, 2 * v - 1)


def test_box_from_fractions_round_trip():
    entries = [Fraction(1, 4)] * 16
    box = boxlab.Box(entries)
    assert box == boxlab.canonical("noise")
    assert boxlab.Box.from_json(box.to_json()) == box
    assert box.entries() == entries


def test_invalid_box_raises():
    with pytest.raises(boxlab._boxlab.BoxlabError, match="NotNormalized"):
        boxlab.Box([Fraction(1, 4)] * 15 + [Fraction(1, 5)])


def test_nearest_rational_matches_limit_denominator():
    rng = random.Random(3)
    for _ in range(300):
        x = rng.uniform(-4, 4)
        n = rng.randint(1, 5000)
        expected = Fraction(x).limit_denominator(n)
        got = boxlab.nearest_rational(x, n)
        # limit_denominator breaks exact ties differently; distances must agree
        assert abs(got - Fraction(x)) == abs(expected - Fraction(x))
        assert got.denominator <= n


def test_tsirelson():
    box = boxlab.quantum_box([0, math.pi / 2, math.pi / 4, -math.pi / 4], 10**6)
    assert abs(float(boxlab.lambda_max(box)) - 2 * math.sqrt(2)) <= 4e-6


def test_samples_are_deterministic():
    a = boxlab.sample("oneway_slice", 9, 5)
    b = boxlab.sample("oneway_slice", 9, 5)
    assert a == b
    for box in a:
        assert boxlab.signal(box)[1] == 0


def test_cli_exit_codes():
    code, out, _ = boxlab.run_cli(["analyze", "--canonical", "pr"])
    assert code == 0
    assert json.loads(out)["flags"]["strongly_nonclassical"] is True
    assert boxlab.run_cli(["analyze", "--canonical", "nope"])[0] == 2
    assert boxlab.run_cli(["fuzz", "--family", "general", "--count", "3", "--inject-corrupt-sampler",
                           "--witness", "/dev/null"])[0] == 1


def test_fuzz_report():
    doc = json.loads(boxlab.fuzz_json("chsh16_mixture", 1, 50))
    assert doc["passed"] is True
    for counts in doc["per_property"].values():
        assert counts["checked"] == counts["held"] + counts["violated"]
