"""Hypothesis strategies shared by the property tests."""
from hypothesis import strategies as st

from adicomp.rings import polynomial_ring

QX = polynomial_ring("QQ", ["x", "y"])
F3 = polynomial_ring("GF(3)", ["x", "y", "z"], "lex")


def polys(ring, max_terms=3, max_exp=3, coeff=3):
    nv = ring.nvars
    mono = st.tuples(*[st.integers(0, max_exp)] * nv)
    term = st.tuples(mono, st.integers(-coeff, coeff).filter(bool))

    def build(terms):
        out = ring.zero
        for m, c in terms:
            t = ring(c)
            for v, e in zip(ring.gens(), m):
                t = t * v ** e
            out = out + t
        return out

    return st.lists(term, min_size=1, max_size=max_terms).map(build)


def int_matrices(rows=2, cols=2, bound=12):
    return st.lists(st.lists(st.integers(-bound, bound), min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows)
