"""Acceptance gate: one test per criterion, driving the shared registry."""

import pytest

from diskmech.acceptance import CHECKS


@pytest.mark.parametrize("check", CHECKS, ids=lambda c: c.ident)
def test_acceptance(check):
    result = check.run()
    print(f"[{'PASS' if result.passed else 'FAIL'}] {check.ident}: {result.detail}")
    assert result.passed, f"{check.ident}: {result.detail}"
