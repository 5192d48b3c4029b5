"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import pytest

from heunladder.acceptance import CRITERIA, run_one


@pytest.mark.parametrize("cid", [c[0] for c in CRITERIA], ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(cid, capsys):
    res = run_one(cid)
    with capsys.disabled():
        print("\n" + res.line() + f"  [anchor: {res.anchor}]")
    assert res.passed, f"{res.anchor}: {res.detail}"
