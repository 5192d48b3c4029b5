from fractions import Fraction

from hypothesis import strategies as st

rationals = st.builds(Fraction, st.integers(-60, 60), st.integers(1, 25))
nonzero_rationals = rationals.filter(lambda x: x != 0)


def poly_coeffs(max_degree=6):
    return st.lists(rationals, min_size=0, max_size=max_degree + 1)
