"""Smoke test for the Python bindings: python python/smoke_test.py"""

import json
import pathlib
import sys

import spinlift

EXAMPLES = pathlib.Path(__file__).resolve().parent.parent / "docs" / "examples"


def main():
    assert spinlift.version()
    assert "selftest" in spinlift.COMMANDS

    r = spinlift.report("pi1", {"datum": "PGL2"})
    assert r["invariant_factors"] == [2], r
    assert r["tool"] == "spinlift" and r["seed"] == 0

    text = (EXAMPLES / "pgl2_taut.json").read_text()
    spin = spinlift.report("spin", text)
    assert spin["lifts"] is False, spin

    h = spinlift.report("h2", {"group": "C2xC2", "coefficients": [2]})
    assert h["order"] == 8, h

    a = spinlift.run("keylemma", seed=3, trials=5)
    b = spinlift.run("keylemma", seed=3, trials=5)
    assert a == b
    assert json.loads(a)["failed"] == 0

    assert "pi1" in spinlift.run("pi1", {"datum": "SL3"}, format="text")

    for bad in ('{"datum": ', '{"datum": "XY7"}'):
        try:
            spinlift.run("pi1", bad)
        except spinlift.ValidationError as e:
            assert "<input>" in str(e)
        else:
            raise AssertionError("accepted " + bad)
    try:
        spinlift.run("h2", {"group": "C2", "coefficients": [2]}, bound=0)
    except ValueError as e:
        assert "SizeBoundExceeded" in str(e)
    else:
        raise AssertionError("bound 0 accepted")

    assert spinlift.selftest(seed=0)
    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
