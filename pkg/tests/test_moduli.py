"""Normal forms, fixed points, eigenvalue algebra, sigma coordinates."""

import pytest

from quadmod.errors import InvalidForm
from quadmod.moduli import (
    Conjugated,
    EigenvalueTriple,
    LambdaForm,
    MobiusMap,
    ModuliPoint,
    PerOneForm,
    eigenvalue_triple_of,
    eigenvalues_from_sigma,
    fixed_points_and_multipliers,
    lambda3_from_eq1,
    moduli_distance,
    per1_form_from_lambda,
    sigma_coordinates,
)
from quadmod.sampling import unit_disk_pairs
from quadmod.sphere import SpherePoint

from oracles import (
    apply_form,
    derivative_at_infinity_fd,
    derivative_fd,
    eq1_sum,
)


# --- the fixed-point eigenvalue relation -------------------------------------


def test_lambda3_frozen_values():
    # z^2 has multipliers (0, 0, 2): two superattracting points and one
    # repelling of eigenvalue exactly 2.
    assert lambda3_from_eq1(0.0, 0.0) == 2.0
    # symmetric pair (1/2, 1/2): 1/(1-l3) = 1 - 2 - 2 = -3, so l3 = 4/3.
    assert abs(lambda3_from_eq1(0.5, 0.5) - (4.0 / 3.0)) < 1e-15
    # conjugate pair (i/2, -i/2): the partial sum is 1.6, so l3 = 1 + 5/3.
    assert abs(lambda3_from_eq1(0.5j, -0.5j) - (8.0 / 3.0)) < 1e-14


@pytest.mark.parametrize("seed", [1, 2])
def test_lambda3_satisfies_relation(seed):
    l1s, l2s = unit_disk_pairs(seed, 0, 500)
    for l1, l2 in zip(map(complex, l1s), map(complex, l2s)):
        l3 = lambda3_from_eq1(l1, l2)
        assert abs(eq1_sum(l1, l2, l3) - 1.0) < 1e-12


def test_degenerate_pair_rejected():
    with pytest.raises(InvalidForm):
        LambdaForm(2.0, 0.5)
    with pytest.raises(InvalidForm):
        LambdaForm(1.0 + 1e-16, 1.0)


# --- fixed points and multipliers by differentiation -------------------------


def test_lambda_form_fixed_points():
    form = LambdaForm(0.3 + 0.1j, -0.2 + 0.4j)
    fps = fixed_points_and_multipliers(form)
    assert len(fps) == 3
    by_point = {0j: None, "inf": None, "z3": None}
    for fp in fps:
        assert fp.multiplicity == 1
        if fp.point.is_infinity:
            by_point["inf"] = fp
        elif fp.point.to_complex() == 0j:
            by_point[0j] = fp
        else:
            by_point["z3"] = fp
    assert abs(by_point[0j].eigenvalue - form.lambda1) < 1e-14
    assert abs(by_point["inf"].eigenvalue - form.lambda2) < 1e-14
    z3 = by_point["z3"].point.to_complex()
    # z3 = (1 - l1) / (1 - l2) is fixed
    assert abs(apply_form(form, z3) - z3) < 1e-13
    assert abs(by_point["z3"].eigenvalue - derivative_fd(form, z3)) < 1e-7
    # eigenvalue at infinity agrees with the 1/z-chart finite difference
    assert abs(by_point["inf"].eigenvalue - derivative_at_infinity_fd(form)) < 1e-7


def test_per1_form_fixed_points():
    b = 0.7 - 1.2j
    form = PerOneForm(b)
    fps = fixed_points_and_multipliers(form)
    inf = [fp for fp in fps if fp.point.is_infinity]
    fin = [fp for fp in fps if not fp.point.is_infinity]
    assert len(inf) == 1 and inf[0].multiplicity == 2
    assert abs(inf[0].eigenvalue - 1.0) < 1e-14
    assert len(fin) == 1 and fin[0].multiplicity == 1
    z = fin[0].point.to_complex()
    assert abs(z - (-1.0 / b)) < 1e-14
    assert abs(fin[0].eigenvalue - (1.0 - b * b)) < 1e-13
    assert abs(fin[0].eigenvalue - derivative_fd(form, z)) < 1e-6


def test_per1_form_zero_offset_totally_parabolic():
    fps = fixed_points_and_multipliers(PerOneForm(0.0))
    assert len(fps) == 1
    assert fps[0].point.is_infinity
    assert fps[0].multiplicity == 3
    assert fps[0].eigenvalue == 1.0


def test_lambda_form_parabolic_merge():
    # lambda1 = 1 merges the third fixed point with 0.
    form = LambdaForm(1.0, 0.5)
    fps = fixed_points_and_multipliers(form)
    mults = sorted(fp.multiplicity for fp in fps)
    assert mults == [1, 2]
    double = [fp for fp in fps if fp.multiplicity == 2][0]
    assert double.point.to_complex() == 0j
    assert abs(double.eigenvalue - 1.0) < 1e-14


def test_conjugation_preserves_eigenvalues():
    base = LambdaForm(0.4, 0.25j)
    mob = MobiusMap(2.0, 1.0 + 1j, 0.5j, 1.0)
    conj = Conjugated(base, mob)
    t0 = sorted(
        eigenvalue_triple_of(base).as_tuple(), key=lambda z: (round(z.real, 9), round(z.imag, 9))
    )
    t1 = sorted(
        eigenvalue_triple_of(conj).as_tuple(), key=lambda z: (round(z.real, 9), round(z.imag, 9))
    )
    for a, b in zip(t0, t1):
        assert abs(a - b) < 1e-10


def test_conjugated_evaluation_matches_oracle():
    base = LambdaForm(0.4, 0.25j)
    mob = MobiusMap(2.0, 1.0 + 1j, 0.5j, 1.0)
    conj = Conjugated(base, mob)
    from quadmod.dynamics import evaluate

    for z in (0.3 + 0.2j, -1.5j, 2.0 + 0.1j):
        got = evaluate(conj, SpherePoint.from_complex(z)).to_complex()
        want = apply_form(conj, z)
        assert abs(got - want) < 1e-10 * (1 + abs(want))


# --- Moebius maps -------------------------------------------------------------


def test_mobius_taking_to_zero_one_inf():
    m = MobiusMap.taking_to_zero_one_inf(2.0, 3.0, 4.0)
    assert m(SpherePoint.from_complex(2.0)).to_complex() == 0j
    assert abs(m(SpherePoint.from_complex(3.0)).to_complex() - 1.0) < 1e-15
    assert m(SpherePoint.from_complex(4.0)).is_infinity


def test_mobius_inverse_compose():
    m = MobiusMap(1.0 + 2j, 0.5, -1j, 3.0)
    minv = m.inverse()
    ident = m.compose(minv)
    for z in (0.0, 1.0, -2.5j, 0.3 + 0.7j):
        p = SpherePoint.from_complex(z)
        q = ident(p)
        assert abs(q.to_complex() - z) < 1e-12 * (1 + abs(z))


def test_mobius_taking_infinity_endpoints():
    m = MobiusMap.taking((0j, 1.0, SpherePoint.infinity()), (1j, 2.0, -1.0))
    assert abs(m(SpherePoint.zero()).to_complex() - 1j) < 1e-14
    assert abs(m(SpherePoint.from_complex(1.0)).to_complex() - 2.0) < 1e-14
    assert abs(m(SpherePoint.infinity()).to_complex() - (-1.0)) < 1e-14


# --- sigma coordinates --------------------------------------------------------


def test_sigma_frozen_values():
    # z^2 with triple (0, 0, 2): sigma1 = 2, sigma2 = 0, sigma3 = 0 = 2 - 2.
    pt = sigma_coordinates(EigenvalueTriple(0.0, 0.0, 2.0))
    assert pt.sigma1 == 2.0 and pt.sigma2 == 0.0


def test_sigma_rejects_inconsistent_triple():
    from quadmod.errors import InconsistentTriple

    with pytest.raises(InconsistentTriple):
        sigma_coordinates(EigenvalueTriple(0.5, 0.5, 0.5))


@pytest.mark.parametrize("seed", [3, 4])
def test_sigma_round_trip(seed):
    l1s, l2s = unit_disk_pairs(seed, 0, 200)
    for l1, l2 in zip(map(complex, l1s), map(complex, l2s)):
        l3 = lambda3_from_eq1(l1, l2)
        pt = sigma_coordinates(EigenvalueTriple(l1, l2, l3))
        back = eigenvalues_from_sigma(pt)
        want = sorted(
            (l1, l2, l3), key=lambda z: (z.real, z.imag)
        )
        got = sorted(back.as_tuple(), key=lambda z: (z.real, z.imag))
        for a, b in zip(want, got):
            assert abs(a - b) < 1e-9 * (1.0 + abs(a))


def test_sigma_of_per1_slice():
    # triple (1, 1, lam): sigma1 = 2 + lam, sigma2 = 1 + 2 lam.
    lam = 2.5 - 0.75j
    pt = sigma_coordinates(EigenvalueTriple(1.0, 1.0, lam))
    assert abs(pt.sigma1 - (2.0 + lam)) < 1e-15
    assert abs(pt.sigma2 - (1.0 + 2.0 * lam)) < 1e-15


def test_eigenvalues_from_sigma_per1():
    # The double root at 1 is only sqrt(machine-eps)-conditioned.
    lam = 3.0 + 2.0j
    triple = eigenvalues_from_sigma(ModuliPoint(2.0 + lam, 1.0 + 2.0 * lam))
    vals = sorted(triple.as_tuple(), key=lambda z: (z.real, z.imag))
    assert abs(vals[0] - 1.0) < 5e-8
    assert abs(vals[1] - 1.0) < 5e-8
    assert abs(vals[2] - lam) < 5e-8 * (1 + abs(lam))


# --- the parabolic slice parameterization -------------------------------------


def test_per1_form_from_lambda_round_trip():
    for lam in (0.5, -15.0, 2.0 + 3.0j, 1.0):
        form = per1_form_from_lambda(lam)
        b = complex(form.offset)
        assert abs((1.0 - b * b) - lam) < 1e-12 * (1.0 + abs(lam))


def test_moduli_distance_metric_basics():
    # Max metric on the two sigma coordinates.
    a = ModuliPoint(1.0, 2.0)
    b = ModuliPoint(1.5, 2.0 - 1j)
    assert moduli_distance(a, a) == 0.0
    assert moduli_distance(a, b) == moduli_distance(b, a)
    assert moduli_distance(a, b) == pytest.approx(1.0, rel=1e-15)
    c = ModuliPoint(1.0 + 3j, 2.0)
    assert moduli_distance(a, c) == pytest.approx(3.0, rel=1e-15)


def test_eigenvalue_triple_of_matches_components():
    form = LambdaForm(0.2 - 0.3j, 0.6)
    t = eigenvalue_triple_of(form)
    vals = sorted(t.as_tuple(), key=lambda z: (z.real, z.imag))
    expect = sorted(
        (0.2 - 0.3j, 0.6 + 0j, lambda3_from_eq1(0.2 - 0.3j, 0.6)),
        key=lambda z: (z.real, z.imag),
    )
    for a, b in zip(vals, expect):
        assert abs(a - b) < 1e-12


def test_cube_root_and_newton_polish_extremes():
    # Large eigenvalues round-trip through sigma coordinates too.
    l1, l2 = 0.1 + 0.2j, -0.95
    l3 = lambda3_from_eq1(l1, l2)
    pt = sigma_coordinates(EigenvalueTriple(l1, l2, l3))
    back = eigenvalues_from_sigma(pt)
    s = sorted(back.as_tuple(), key=lambda z: (z.real, z.imag))
    w = sorted((l1, l2 + 0j, l3), key=lambda z: (z.real, z.imag))
    for a, b in zip(s, w):
        assert abs(a - b) < 1e-9 * (1 + abs(b))
