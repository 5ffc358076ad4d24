from fractions import Fraction

import sympy
import pytest
from hypothesis import strategies as st

from qhat.pathalg import bondal_algebra
from qhat.repcore import Representation


@pytest.fixture(scope="session")
def alg():
    return bondal_algebra()


@pytest.fixture(scope="session")
def fs():
    from qhat.bondal import load_fixtures
    return load_fixtures()


_ALG = bondal_algebra()
small = st.integers(-2, 2)


def _matrix(draw, m, n):
    return sympy.Matrix(m, n, [draw(small) for _ in range(m * n)]) if m * n else sympy.zeros(m, n)


def _killing(draw, f, rows):
    """A random ``rows x f.rows`` matrix whose product with ``f`` vanishes."""
    if rows == 0 or f.rows == 0:
        return sympy.zeros(rows, f.rows)
    left = f.T.nullspace()
    out = sympy.zeros(rows, f.rows)
    for v in left:
        out += sympy.Matrix(rows, 1, [draw(small) for _ in range(rows)]) * v.T
    return out


@st.composite
def bondal_reps(draw, max_dim=2):
    d1, d2, d3 = (draw(st.integers(0, max_dim)) for _ in range(3))
    a1, b1 = _matrix(draw, d2, d1), _matrix(draw, d2, d1)
    b2 = _killing(draw, a1, d3)
    a2 = _killing(draw, b1, d3)
    maps = {k: [[v for v in m.row(i)] for i in range(m.rows)] if m.rows else []
            for k, m in (("a1", a1), ("b1", b1), ("a2", a2), ("b2", b2))}
    from qhat.linalg import Mat
    mats = {}
    for k, (m, n) in (("a1", (d2, d1)), ("b1", (d2, d1)), ("a2", (d3, d2)), ("b2", (d3, d2))):
        mats[k] = Mat([[Fraction(str(x)) for x in r] for r in maps[k]], ncols=n) if m else Mat.zeros(0, n)
    return Representation(_ALG, (d1, d2, d3), mats)
