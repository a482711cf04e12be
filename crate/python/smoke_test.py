"""Smoke test for the nker_py extension.

Build first:
    cargo build --release -p nker-py
    cp target/release/libnker_py.so python/nker_py.so
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import nker_py  # noqa: E402


def test_canonical():
    assert nker_py.canonical("Q8x C2 ^2 x C7") == "Q8 x C2^2 x C7"
    try:
        nker_py.canonical("Dic(")
    except ValueError as e:
        assert "col 5" in str(e)
    else:
        raise AssertionError("expected ValueError")


def test_analyze():
    rec = json.loads(nker_py.analyze("Q8 x C7"))
    assert rec["v"] == nker_py.SCHEMA_VERSION
    assert rec["status"] == "ok"
    assert rec["fingerprint"]["order"] == 56
    rational = [r for r in rec["reports"] if r["field"] == "Q"][0]
    assert rational["definitional"]["exact"]["order"] == 56, rational


def test_curated_and_suite():
    small = nker_py.curated(24)
    assert "Dic(3)" in small and "C4 x Q8" not in small
    ok, tap = nker_py.run_suite("en-pairing")
    assert ok and tap.startswith("TAP version 13")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print("ok", name)
