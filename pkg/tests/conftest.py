from __future__ import annotations

import os

import sympy
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def to_sympy(p):
    """Independent reading of a polynomial through its text form."""
    names = p.ring.names
    syms = {n: sympy.Symbol(n) for n in names}
    return sympy.expand(sympy.sympify(p.to_text().replace("^", "**"), locals=syms))


def sym_vars(ring):
    return [sympy.Symbol(n) for n in ring.names]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        ok, detail = RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
