import pytest

from segrelc.algebra import Ring
from segrelc.groebner import Ideal, ModulePresentation
from segrelc.hilbert import HilbertSeries
from segrelc.resolution import (
    depth,
    ext_module,
    free_resolution,
    local_cohomology_series,
    local_cohomology_via_duality,
)


def cyclic(R, gens, twist=0):
    return ModulePresentation.cyclic(Ideal(R, gens), twist)


def test_koszul_resolution_of_residue_field():
    R = Ring(["x", "y"])
    res = free_resolution(cyclic(R, ["x", "y"]))
    assert res.betti_numbers() == [1, 2, 1]
    assert res.twists == [(0,), (-1, -1), (-2,)]
    assert res.composes_to_zero()


def test_hypersurface_resolutions():
    R = Ring(["x", "y"])
    res = free_resolution(cyclic(R, ["x*y"]))
    assert res.twists == [(0,), (-2,)]
    A = Ring(list("abcd"))
    res = free_resolution(cyclic(A, ["a*d - b*c"]))
    assert res.betti_numbers() == [1, 1] and res.twists[1] == (-2,)


def test_resolution_reproduces_hilbert_series():
    R = Ring(["x", "y", "z"])
    for gens in (["x^2", "x*y"], ["x*y", "y*z", "x*z"], ["x^2 - y*z", "x*y"]):
        M = cyclic(R, gens)
        res = free_resolution(M)
        assert res.composes_to_zero()
        assert res.hilbert_series() == Ideal(R, gens).hilbert_series()


def test_ext_examples():
    R = Ring(["x", "y"])
    assert ext_module(ModulePresentation.free(R), 0).hilbert_series() == HilbertSeries({0: 1}, 2)
    k = cyclic(R, ["x", "y"])
    assert ext_module(k, 2).hilbert_series() == HilbertSeries({-2: 1}, 0)
    assert ext_module(k, 0).is_zero() and ext_module(k, 1).is_zero()
    A = cyclic(R, ["x*y"])
    assert ext_module(A, 1).hilbert_series() == Ideal(R, ["x*y"]).hilbert_series().shift(-2)


def test_duality_top_cohomology_of_plane():
    R = Ring(["x", "y"])
    M = ModulePresentation.free(R)
    w = local_cohomology_via_duality(M, 2, (-6, 3))
    assert [w[l] for l in (-2, -3, -4)] == [1, 2, 3]
    assert all(w[l] == 0 for l in range(-1, 4))
    for i in (0, 1):
        assert not local_cohomology_via_duality(M, i, (-8, 8)).nonzero_degrees()


def test_duality_finite_length():
    X = Ring(["x"])
    M = cyclic(X, ["x^2"])
    w = local_cohomology_via_duality(M, 0, (-3, 4))
    assert w.dims == {-3: 0, -2: 0, -1: 0, 0: 1, 1: 1, 2: 0, 3: 0, 4: 0}
    assert not local_cohomology_via_duality(M, 1, (-3, 4)).nonzero_degrees()


@pytest.mark.parametrize(
    "names,gens",
    [
        (["x", "y"], []),
        (["x", "y"], ["x^2", "x*y"]),
        (["x", "y", "z"], ["x*y"]),
        (["x", "y", "z"], ["x^2", "x*y"]),
        (["x", "y", "z"], ["x*y", "y*z"]),
        (["x", "y", "z"], ["x", "y", "z"]),
    ],
)
def test_grothendieck_vanishing(names, gens):
    R = Ring(names)
    M = cyclic(R, gens)
    dim = Ideal(R, gens).dimension()
    dep = depth(M)
    series = local_cohomology_series(M)
    for i in range(len(names) + 1):
        s = series.get(i)
        nonzero = s is not None and not s.is_zero()
        if i < dep or i > dim:
            assert not nonzero
        if i in (dep, dim):
            assert nonzero
