"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

from __future__ import annotations

import pytest

from superpot import verify


@pytest.mark.parametrize("crit", verify.CRITERIA, ids=[f"criterion_{c.number}_{c.label}" for c in verify.CRITERIA])
def test_criterion(crit):
    c = crit()
    print(c.line())
    assert c.ok, c.line()
