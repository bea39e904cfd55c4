import math
import os

import numpy as np
import pytest

import dlf

CONFIGS = os.environ.get("DLF_CONFIG_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "configs"))


def test_square_family_matrices():
    basis = dlf.Basis({"kind": "fractional", "delta": 2}, N=1, a=1.0, b=3.0, nodes={"values": [1.0, 2.0]})
    assert basis.nodes == [1.0, 2.0]
    np.testing.assert_allclose(basis.d1(), [[-2 / 3, 2 / 3], [-4 / 3, 4 / 3]], atol=1e-14)
    np.testing.assert_allclose(basis.dm(2), [[-2 / 3, 2 / 3], [-2 / 3, 2 / 3]], atol=1e-12)
    assert np.abs(basis.dm(2) - basis.classical_power(2)).max() >= 0.2
    assert basis.weight(3.0) == 40.0


def test_kronecker_delta_and_partition():
    basis = dlf.Basis("rational", N=6, a=0.0, b=4.0)
    for i, xi in enumerate(basis.nodes):
        for j in range(basis.size):
            assert abs(basis.eval(j, xi) - (1.0 if i == j else 0.0)) <= 1e-12
    total = sum(basis.eval(j, 1.7) for j in range(basis.size))
    assert abs(total - 1.0) <= 1e-10


def test_interpolation_and_kron():
    basis = dlf.Basis("identity", N=16)
    u = dlf.interpolate(basis, [math.exp(x) for x in basis.nodes])
    assert abs(u(0.3) - math.exp(0.3)) < 1e-12
    assert dlf.kron([1, 2], [3, 4]) == [3, 4, 6, 8]


def test_solve_shipped_configs():
    sine = dlf.solve(os.path.join(CONFIGS, "sine_bvp.json"))
    assert sine["linear"] and sine["max_error"] < 1e-9
    riccati = dlf.solve(os.path.join(CONFIGS, "riccati_ivp.json"))
    assert not riccati["linear"] and riccati["iterations"] <= 20 and riccati["max_error"] < 1e-7
    poisson = dlf.solve(os.path.join(CONFIGS, "poisson2d.json"), N=[8, 8])
    assert poisson["interior_rows"] == 49 and poisson["unknowns"] == 81


def test_contour_check():
    basis = dlf.Basis("identity", N=4)
    row = dlf.contour_check(basis, "exp(x)", 0.3, center=0.0, radius=2.0)
    assert row["abs_discrepancy"] < 1e-10


def test_errors_carry_the_kind():
    with pytest.raises(dlf.DlfError, match="separation-violation"):
        dlf.Basis({"kind": "fractional", "delta": 2}, N=4, a=-1.0, b=1.0)
    with pytest.raises(dlf.DlfError, match="contour-ineligible"):
        dlf.contour_check(dlf.Basis({"kind": "fractional", "delta": 0.5}, N=4, a=0.5, b=1.5), "exp(x)", 1.0,
                          center=1.0, radius=0.7)
