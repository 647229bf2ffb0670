from fractions import Fraction

from hypothesis import settings, strategies as st

from legendrian235.exact import RatFunc

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_ints = st.integers(min_value=-6, max_value=6)
fractions = st.builds(Fraction, st.integers(-30, 30), st.integers(1, 9))
nonzero_fractions = fractions.filter(lambda q: q != 0)


@st.composite
def polys(draw, names=("t", "c"), max_deg=2):
    """Small random polynomial in the given variables."""
    acc = RatFunc(0)
    for _ in range(draw(st.integers(1, 4))):
        term = RatFunc(draw(small_ints))
        for n in names:
            term = term * RatFunc.var(n) ** draw(st.integers(0, max_deg))
        acc = acc + term
    return acc


nonzero_polys = polys().filter(lambda p: not p.is_zero())


@st.composite
def ratfuncs(draw):
    return draw(polys()) / draw(nonzero_polys)


nonzero_ratfuncs = ratfuncs().filter(lambda x: not x.is_zero())
