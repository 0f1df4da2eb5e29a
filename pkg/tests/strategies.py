"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from pinchcert.exact import RadicalNumber, RationalInterval

BASIS = (1, 6, 11, 17, 66, 102, 187, 1122)

small_fractions = st.fractions(min_value=-50, max_value=50, max_denominator=60)
nonneg_fractions = st.fractions(min_value=0, max_value=60, max_denominator=60)


@st.composite
def radicals(draw, max_terms=4):
    keys = draw(st.lists(st.sampled_from(BASIS), max_size=max_terms, unique=True))
    return RadicalNumber({k: draw(small_fractions) for k in keys})


@st.composite
def intervals(draw):
    a, b = draw(small_fractions), draw(small_fractions)
    return RationalInterval(min(a, b), max(a, b))


@st.composite
def point_in(draw, interval):
    t = draw(st.fractions(min_value=0, max_value=1, max_denominator=40))
    return interval.lo + t * (interval.hi - interval.lo)


def frac(s) -> Fraction:
    return Fraction(s)
