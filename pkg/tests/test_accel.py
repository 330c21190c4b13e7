import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoid_graph import _accel
from groupoid_graph.instances import random_fuzz_action
from groupoid_graph.oracle import correspondence_crossed_product

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


def _corrupt(table, rng, k=1):
    t = table.copy()
    idx = np.argwhere(t >= 0)
    for i, j in idx[rng.choice(len(idx), size=min(k, len(idx)), replace=False)]:
        t[i, j] = rng.integers(int(table.max()) + 1)
    return t


@needs_numba
@settings(max_examples=30)
@given(st.integers(0, 2**31), st.booleans())
def test_associativity_parity(seed, corrupt):
    rng = np.random.default_rng(seed)
    G = random_fuzz_action(rng).groupoid
    table = _corrupt(G.compose, rng) if corrupt else G.compose
    a = _accel.first_assoc_violation(table, use_numba=True)
    b = _accel.first_assoc_violation(table, use_numba=False)
    assert a == b
    if not corrupt:
        assert a == _accel.NO_WITNESS


@needs_numba
@pytest.mark.parametrize("seed", range(8))
def test_module_and_bimodule_parity(seed):
    rng = np.random.default_rng(seed)
    M = correspondence_crossed_product(random_fuzz_action(rng, max_edges=8))
    mul = M.algebra.mul
    for left, right in [(M.left, M.right), (_corrupt(M.left, rng, 2), _corrupt(M.right, rng, 2))]:
        for rev, act in [(False, left), (True, right.T)]:
            assert _accel.first_module_violation(act, mul, reverse=rev, use_numba=True) == _accel.first_module_violation(
                act, mul, reverse=rev, use_numba=False
            )
        assert _accel.first_bimodule_violation(left, right, use_numba=True) == _accel.first_bimodule_violation(
            left, right, use_numba=False
        )


@given(st.integers(1, 12).flatmap(lambda n: st.lists(st.permutations(list(range(n))), min_size=1, max_size=3)))
def test_orbit_labels_parity_and_oracle(perms):
    perms = np.array(perms)
    n = perms.shape[1]
    # union-find free oracle: closure by repeated image
    expected = np.empty(n, dtype=np.int64)
    for x in range(n):
        seen, todo = {x}, [x]
        while todo:
            y = todo.pop()
            for p in perms:
                for z in (int(p[y]), int(np.flatnonzero(p == y)[0])):
                    if z not in seen:
                        seen.add(z)
                        todo.append(z)
        expected[x] = min(seen)
    assert np.array_equal(_accel.orbit_labels(perms, use_numba=False), expected)
    if _accel.HAVE_NUMBA:
        assert np.array_equal(_accel.orbit_labels(perms, use_numba=True), expected)


def test_env_flag_disables_numba_without_changing_outputs():
    code = "from groupoid_graph import _accel; print(_accel.USE_NUMBA)"
    env = dict(os.environ, GROUPOID_GRAPH_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "False"
    cmd = [sys.executable, "-m", "groupoid_graph.cli", "quotient-graph", "--fixture", "example-4.3", "--mode", "both"]
    slow = subprocess.run(cmd, env=env, capture_output=True, text=True)
    plain_env = {k: v for k, v in os.environ.items() if k != "GROUPOID_GRAPH_DISABLE_NUMBA"}
    fast = subprocess.run(cmd, env=plain_env, capture_output=True, text=True)
    assert slow.returncode == fast.returncode == 0
    assert slow.stdout == fast.stdout
    assert json.loads(slow.stdout)["outputs"]["sizes"] == [2, 2, 4]
