from __future__ import annotations

import random

import sympy
from hypothesis import given
from hypothesis import strategies as st

from superpot import linalg
from superpot.laurent import LaurentPoly
from superpot.scalars import GF, QQ, ExtensionField, UniPoly
from superpot.truncation import TruncatedLocalRing


def _random_sparse(rng, field, rows, cols, density=0.4):
    out = []
    for _ in range(cols):
        v = {}
        for i in range(rows):
            if rng.random() < density:
                c = field.random_element(rng)
                if c:
                    v[i] = c
        out.append(v)
    return out


def _echelon_rank(vectors, field):
    e = linalg.Echelon(field)
    for v in vectors:
        e.add(v)
    return len(e)


FIELDS = {
    "Q": QQ,
    "F2": GF(2),
    "F7": GF(7),
    "F3(i)": ExtensionField(GF(3), UniPoly(GF(3), [1, 0, 1]), "i"),
    "Q(cbrt4)": ExtensionField(QQ, UniPoly(QQ, [-4, 0, 0, 1]), "a"),
}


@given(st.integers(0, 10**6), st.sampled_from(sorted(FIELDS)))
def test_fast_rank_matches_echelon(s, name):
    F = FIELDS[name]
    rng = random.Random(s)
    vecs = _random_sparse(rng, F, rng.randint(1, 7), rng.randint(1, 7))
    # duplicate a combination so that rank deficiency is exercised
    if len(vecs) >= 2:
        a, b = vecs[0], vecs[1]
        comb = dict(a)
        for k, v in b.items():
            comb[k] = comb.get(k, F.zero) + v
        vecs.append({k: v for k, v in comb.items() if v})
    assert linalg.sparse_rank(vecs, F) == _echelon_rank(vecs, F)


@given(st.integers(0, 10**6))
def test_rational_rank_matches_sympy(s):
    rng = random.Random(s)
    rows, cols = rng.randint(1, 6), rng.randint(1, 6)
    M = [[QQ(rng.randint(-3, 3)) if rng.random() < 0.5 else QQ(0) for _ in range(cols)] for _ in range(rows)]
    vecs = [{i: M[i][j] for i in range(rows) if M[i][j]} for j in range(cols)]
    assert linalg.sparse_rank(vecs, QQ) == sympy.Matrix(M).rank()


@given(st.integers(0, 10**6))
def test_kernel_vectors_are_relations(s):
    rng = random.Random(s)
    F = GF(5)
    cols = _random_sparse(rng, F, 5, 6)
    kernel, _ = linalg.sparse_kernel(cols, F)
    assert len(kernel) == len(cols) - linalg.sparse_rank(cols, F)
    for rel in kernel:
        total = {}
        for j, c in rel.items():
            for i, v in cols[j].items():
                total[i] = total.get(i, F.zero) + c * v
        assert not any(total.values())


def test_truncated_ring_dimension_and_taylor():
    R = TruncatedLocalRing(QQ, 2, 4)
    assert R.dim == R.expected_dim() == 10
    W = LaurentPoly.parse("x + 1/x", ["x"])
    T = TruncatedLocalRing(QQ, 1, 5).laurent_image(W, (QQ(1),))
    assert T == {(0,): 2, (2,): 1, (3,): -1, (4,): 1}
