"""The eleven acceptance criteria, one test each, with a PASS/FAIL line per criterion."""
import pytest

from polarzoo.acceptance import CRITERIA


@pytest.mark.parametrize("name,check", CRITERIA, ids=[n.split()[0] for n, _ in CRITERIA])
def test_criterion(name, check, capsys):
    ok, detail = check()
    failed = [k for k, v in detail.get("parts", {}).items() if not v]
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {name}" + (f" failed: {failed}" if failed else ""))
    assert ok, detail
