import itertools
import sys
from pathlib import Path

from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from bfunp.polyalg import Poly, parse_poly  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def P(src, vars="x,y", p=7):
    return parse_poly(src, vars.split(","), p)


@st.composite
def polys(draw, ring, max_terms=4, max_exp=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        m = tuple(draw(st.integers(0, max_exp)) for _ in range(ring.nvars))
        terms[m] = draw(st.integers(1, ring.p - 1))
    return Poly(ring, terms)


def span_contains(vectors, target, p):
    """Whether ``target`` lies in the F_p-span of ``vectors`` (dicts), by plain elimination."""
    keys = sorted({k for v in vectors for k in v} | set(target))
    index = {k: i for i, k in enumerate(keys)}
    rows = []
    for v in vectors:
        row = [0] * len(keys)
        for k, c in v.items():
            row[index[k]] = c % p
        rows.append(row)
    pivots = []  # (col, row)
    for row in rows:
        for col, prow in pivots:
            if row[col]:
                c = row[col]
                row = [(a - c * b) % p for a, b in zip(row, prow)]
        lead = next((i for i, a in enumerate(row) if a), None)
        if lead is not None:
            inv = pow(row[lead], -1, p)
            row = [a * inv % p for a in row]
            pivots.append((lead, row))
    t = [0] * len(keys)
    for k, c in target.items():
        t[index[k]] = c % p
    for col, prow in pivots:
        if t[col]:
            c = t[col]
            t = [(a - c * b) % p for a, b in zip(t, prow)]
    return not any(t)


def monomials_up_to(nvars, degree):
    for m in itertools.product(range(degree + 1), repeat=nvars):
        if sum(m) <= degree:
            yield m


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", None) != "call":
                continue
            lines += [value for key, value in rep.user_properties if key == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: (int(s.split()[0].strip("[]")), s)):
            terminalreporter.write_line(line)
