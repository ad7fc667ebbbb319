import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import tensor_pair
from triadic.analysis import check_closure_semisimplicial
from triadic.complex import DeltaSet, extract, face, faces, validate
from triadic.config import build
from triadic.integrator import integrate
from triadic.presets import get_preset


def test_empty_levels():
    ds = extract(np.zeros((4, 4)), np.zeros((4, 4, 4)), 0.5)
    assert ds.x0 == (0, 1, 2, 3) and ds.x1 == () and ds.x2 == ()
    assert ds.level(3) == () and ds.level(7) == ()
    with pytest.raises(ValueError):
        ds.level(-1)
    with pytest.raises(ValueError):
        extract(np.zeros((4, 4)), np.zeros((4, 4, 4)), 0.0)


def test_face_maps():
    assert face((3, 5, 8), 1) == (3, 8)
    assert face((3, 5, 8), 0) == (5, 8) and face((3, 5, 8), 2) == (3, 5)
    assert face((5, 9), 1) == 5 and face((5, 9), 0) == 9
    assert face(face((3, 5, 8), 1), 0) == 8 == face(face((3, 5, 8), 0), 0)
    with pytest.raises(IndexError):
        face((1, 2, 3), 3)
    with pytest.raises(IndexError):
        face((1, 2), -1)
    with pytest.raises(ValueError):
        face((1,), 0)


def test_degenerate_tuples_excluded():
    ds = extract(np.ones((3, 3)), np.ones((3, 3, 3)), 0.5)
    assert all(i != j for i, j in ds.x1)
    assert all(len(set(t)) == 3 for t in ds.x2)
    assert len(ds.x2) == 6 and len(ds.x1) == 6


def test_unoriented_stores_representatives():
    ds = extract(np.ones((4, 4)), np.ones((4, 4, 4)), 0.5, "unoriented")
    assert ds.x2 == tuple(itertools.combinations(range(4), 3))
    assert ds.x1 == tuple(itertools.combinations(range(4), 2))
    assert validate(ds).is_semisimplicial


def test_invalid_when_edge_missing():
    a1 = np.ones((3, 3))
    a1[0, 2] = 0.1
    a2 = np.zeros((3, 3, 3))
    a2[0, 1, 2] = 0.9
    rep = validate(extract(a1, a2, 0.5))
    assert not rep.is_semisimplicial
    assert rep.missing_faces == [((0, 1, 2), 1, (0, 2))]
    assert rep.identity_failures == []


def test_persistent_triad_complex():
    rc = build(get_preset("consensus-persistent"))
    traj = integrate(rc.spec, rc.initial, rc.plan)
    ds = extract(traj.a1(len(traj) - 1), traj.a2(len(traj) - 1), 0.5, "unoriented")
    assert (0, 1, 2) in ds.x2
    assert {(0, 1), (0, 2), (1, 2)} <= set(ds.x1)
    assert validate(ds).is_semisimplicial


@given(tensor_pair(), st.floats(0.1, 1.0), st.floats(0.0, 1.0))
def test_monotone_in_delta(pair, d, extra):
    a1, a2 = pair
    lo, hi = extract(a1, a2, d), extract(a1, a2, d + extra)
    assert set(hi.x1) <= set(lo.x1) and set(hi.x2) <= set(lo.x2)


@given(tensor_pair(), st.sampled_from([0.3, 0.5, 1.0]))
def test_validate_agrees_with_semisimplicial_check(pair, d):
    a1, a2 = pair
    ds = extract(a1, a2, d)
    rep = validate(ds)
    assert rep.is_semisimplicial == check_closure_semisimplicial(a1, a2, d).in_region
    assert rep.identity_failures == []
    for s in ds.x2:
        assert face(face(s, 1), 0) == face(face(s, 0), 0)
        assert len(faces(s)) == 3


def test_to_dict_carries_weights():
    a1 = np.full((3, 3), 0.7)
    a2 = np.zeros((3, 3, 3))
    a2[0, 1, 2] = 0.9
    d = extract(a1, a2, 0.5, "unoriented").to_dict()
    assert d["x2"] == [{"simplex": [0, 1, 2], "weight": 0.9}]
    assert d["flavor"] == "unoriented" and len(d["x1"]) == 3
    assert isinstance(extract(a1, a2, 0.5), DeltaSet)
