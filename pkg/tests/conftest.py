from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from genquad.poly import Poly
from genquad.ratfunc import RatFunc

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=4)
nonzero_q = small_q.filter(lambda v: v != 0)


@st.composite
def polys(draw, max_degree=3, coeffs=small_q):
    return Poly(draw(st.lists(coeffs, min_size=0, max_size=max_degree + 1)))


@st.composite
def ratfuncs(draw, max_degree=2):
    num = draw(polys(max_degree))
    den = draw(polys(max_degree).filter(bool))
    return RatFunc(num, den)


@st.composite
def nonzero_polys(draw, max_degree=3):
    return draw(polys(max_degree).filter(bool))


def q(v) -> Fraction:
    return Fraction(v)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance")
        for key in sorted(results):
            terminalreporter.write_line(results[key])
