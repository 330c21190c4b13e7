import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from groupoid_graph.errors import PreconditionError
from groupoid_graph.reptheory import (
    FiniteGroup,
    character_table,
    conjugacy_classes,
    cyclic_group,
    direct_product,
    group_from_dict,
    hom_multiplicity,
    klein_four_group,
    permutation_character,
    permutation_group,
    restrict_character,
    symmetric_group,
    tensor_decompose,
    trivial_group,
)

SMALL_GROUPS = {
    "trivial": trivial_group,
    "Z2": lambda: cyclic_group(2),
    "Z3": lambda: cyclic_group(3),
    "Z4": lambda: cyclic_group(4),
    "Z6": lambda: cyclic_group(6),
    "V4": klein_four_group,
    "S3": lambda: symmetric_group(3),
    "D4": lambda: permutation_group([(1, 2, 3, 0), (3, 2, 1, 0)]),
    "Z2xZ4": lambda: direct_product(cyclic_group(2), cyclic_group(4)),
    "S4": lambda: symmetric_group(4),
    "A4": lambda: permutation_group([(1, 2, 0, 3), (1, 0, 3, 2)]),
}


def brute_classes(K):
    seen, out = set(), []
    for x in range(K.order):
        if x in seen:
            continue
        cls = {int(K.mul[K.mul[g, x], K.inverse[g]]) for g in range(K.order)}
        seen |= cls
        out.append(cls)
    return out


@pytest.mark.parametrize("name", sorted(SMALL_GROUPS))
def test_table_orthogonality_and_counts(name):
    K = SMALL_GROUPS[name]()
    T = character_table(K)
    assert T.n_irreps == len(brute_classes(K))
    assert sum(d * d for d in T.degrees) == K.order
    sizes = T.class_sizes
    gram = (T.values * sizes) @ T.values.conj().T / K.order
    assert np.allclose(gram, np.eye(T.n_irreps), atol=1e-9)
    # column orthogonality
    col = T.values.conj().T @ T.values
    assert np.allclose(col, np.diag(K.order / sizes), atol=1e-9)
    assert T.classes[0].elements == (K.identity,)
    assert np.allclose(T.values[0], 1)  # trivial character first


def test_cyclic_table_matches_roots_of_unity():
    # independent oracle: chi_j(k) = exp(2 pi i j k / n)
    n = 5
    T = character_table(cyclic_group(n))
    reps = [c.representative for c in T.classes]
    expected = {tuple(np.round(np.exp(2j * np.pi * j * np.array(reps) / n), 9)) for j in range(n)}
    got = {tuple(np.round(row, 9)) for row in T.values}
    assert got == expected


def test_s3_table_order_and_values():
    T = character_table(symmetric_group(3))
    assert T.degrees == (1, 1, 2)
    assert T.class_sizes.tolist() == [1, 3, 2]  # identity, transpositions, 3-cycles
    assert np.allclose(T.values, [[1, 1, 1], [1, -1, 1], [2, 0, -1]])


def test_s4_degrees():
    assert sorted(character_table(symmetric_group(4)).degrees) == [1, 1, 2, 3, 3]


def test_tensor_and_hom_multiplicity():
    T = character_table(symmetric_group(3))
    triv, sign, std = T.values
    assert tensor_decompose(std * std, T).tolist() == [1, 1, 1]
    assert hom_multiplicity(std + triv, std + triv, T) == 2
    assert tensor_decompose(triv + std, T).tolist() == [1, 0, 1]
    with pytest.raises(PreconditionError):
        tensor_decompose(triv - sign, T)


def test_permutation_character_of_s3_on_three_points():
    K = symmetric_group(3)
    T = character_table(K)
    perms = np.array([[int(c) - 1 for c in lab] for lab in K.labels])
    rho = permutation_character(T, perms)
    assert tensor_decompose(rho, T).tolist() == [1, 0, 1]


def test_restriction_to_transposition_subgroup():
    K = symmetric_group(3)
    T = character_table(K)
    # {id, (12)}: one-line "123", "213"
    sub, emb = K.subgroup([K.labels.index("123"), K.labels.index("213")])
    Ts = character_table(sub)
    res = [restrict_character(chi, T, Ts, emb) for chi in T.values]
    assert np.allclose(res[0], [1, 1]) and np.allclose(res[1], [1, -1]) and np.allclose(res[2], [2, 0])
    with pytest.raises(PreconditionError):
        restrict_character(T.values[0], T, Ts, np.array([0, 0]))


def test_group_from_dict_roundtrip():
    K = symmetric_group(3)
    K2 = group_from_dict(K.to_dict())
    assert np.array_equal(K.mul, K2.mul) and K2.validate() == []


def test_bad_group_table_reported():
    bad = FiniteGroup(np.array([[0, 1, 2], [1, 0, 2], [2, 2, 0]]))
    assert bad.validate()


def test_order_bound():
    with pytest.raises(PreconditionError):
        character_table(symmetric_group(4), order_bound=10)


@given(st.sampled_from(sorted(SMALL_GROUPS)), st.data())
def test_products_of_irreducibles_decompose(name, data):
    K = SMALL_GROUPS[name]()
    T = character_table(K)
    i = data.draw(st.integers(0, T.n_irreps - 1))
    j = data.draw(st.integers(0, T.n_irreps - 1))
    mult = tensor_decompose(T.values[i] * T.values[j], T)
    assert int(mult @ np.array(T.degrees)) == T.degrees[i] * T.degrees[j]
    # hom multiplicity is symmetric for genuine characters
    a, b = T.values[i] * T.values[j], T.values[j]
    assert hom_multiplicity(a, b, T) == hom_multiplicity(b, a, T)


@given(st.lists(st.permutations(range(4)), min_size=1, max_size=2))
def test_random_permutation_groups(gens):
    K = permutation_group(gens)
    assert K.validate() == []
    T = character_table(K)
    assert sum(d * d for d in T.degrees) == K.order
    classes = conjugacy_classes(K)
    assert sorted(len(c) for c in brute_classes(K)) == sorted(c.size for c in classes)
