from fractions import Fraction

from hypothesis import strategies as st

from painleve_blocks.exact import ExactScalar

small_ints = st.integers(min_value=-30, max_value=30)
denoms = st.integers(min_value=1, max_value=30)
rationals = st.builds(Fraction, small_ints, denoms)
nonzero_rationals = rationals.filter(bool)
scalars = st.builds(ExactScalar, rationals, rationals, rationals, rationals)
nonzero_scalars = scalars.filter(bool)


def _generic_sigma(f: Fraction) -> bool:
    return (2 * f).denominator != 1

sigmas = st.builds(Fraction, st.integers(1, 60), st.integers(3, 61)).filter(
    lambda s: s < 1 and _generic_sigma(s)
)
