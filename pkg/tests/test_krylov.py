import numpy as np
import pytest

from spectral_kit.domains import Disk, Ellipse, Interval, contains, \
    exterior_map, signed_margin
from spectral_kit.krylov import (MarkovFunction, arnoldi, fab_poly,
                                 fab_rational, fit_ellipse, gmres_fom,
                                 lens_asymptotic_factor, markov_discretize,
                                 markov_eval, markov_matfun, pade_markov,
                                 pade_matrix_bound, rational_krylov)
from spectral_kit.matrixcore import eval_poly, eval_rational, \
    matfun_reference, op_norm
from spectral_kit.numrange import numerical_radius, support_profile


def _random(n, rng, scale=1.0):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a * scale


# ---------------------------------------------------------------------------
# arnoldi

def test_arnoldi_eigenvector_breakdown():
    a = np.diag([2.0, -1.0, 0.5])
    b = np.array([0.0, 1.0, 0.0])
    dec = arnoldi(a, b, 3)
    assert dec.exact
    assert dec.order == 1
    assert abs(dec.h[0, 0] - (-1.0)) < 1e-12


def test_arnoldi_full_space_similarity():
    rng = np.random.default_rng(0)
    a = _random(6, rng)
    dec = arnoldi(a, rng.standard_normal(6), 6)
    got = np.sort_complex(np.linalg.eigvals(dec.h))
    want = np.sort_complex(np.linalg.eigvals(a))
    assert np.allclose(got, want, atol=1e-8)


def test_arnoldi_orthogonality_and_relation():
    rng = np.random.default_rng(1)
    a = _random(40, rng)
    b = rng.standard_normal(40)
    dec = arnoldi(a, b, 5)
    gram = dec.v.conj().T @ dec.v
    assert op_norm(gram - np.eye(5), 2) <= 1e-12
    # Arnoldi relation A V = V H + h_{m+1,m} v_{m+1} e_m^*
    lhs = a @ dec.v
    rhs = dec.v @ dec.h
    rhs[:, -1] += dec.next_h * dec.next_v
    assert np.linalg.norm(lhs - rhs, 2) <= 1e-10 * op_norm(a, 2)
    # H exactly Hessenberg by construction
    assert np.all(np.tril(dec.h, -2) == 0)


def test_arnoldi_rejects_zero_vector():
    with pytest.raises(ValueError):
        arnoldi(np.eye(3), np.zeros(3), 2)


# ---------------------------------------------------------------------------
# fab_poly

def test_fab_poly_polynomial_exact():
    rng = np.random.default_rng(2)
    a = _random(12, rng, 0.4)
    b = rng.standard_normal(12)

    coeffs = np.array([1.0, -2.0, 0.0, 0.5])  # degree 3

    def f(z):
        return 1.0 - 2.0 * z + 0.5 * z ** 3

    y, report = fab_poly(a, b, 4, f, e=Disk(0.0, 6.0))
    want = eval_poly(coeffs, a) @ b
    assert np.linalg.norm(y - want) <= 1e-10 * np.linalg.norm(want)


def test_fab_poly_exp_disk_bound():
    rng = np.random.default_rng(3)
    a = _random(10, rng)
    a *= 0.98 / numerical_radius(a)  # W(A) inside disk(0,1)
    b = rng.standard_normal(10)
    y, report = fab_poly(a, b, 8, np.exp, e=Disk(0.0, 1.0))
    err = np.linalg.norm(matfun_reference(a, np.exp) @ b - y) \
        / np.linalg.norm(b)
    assert report.contained
    # 4 * sum_{j>=8} 1/j! = 1.115e-4
    assert 1.0e-4 < report.bound_faber < 1.2e-4
    assert err <= report.bound_faber
    assert report.bound_crouzeix >= report.bound_faber


def test_fab_poly_full_space_exact():
    rng = np.random.default_rng(4)
    a = _random(6, rng, 0.5)
    b = rng.standard_normal(6)
    y, _ = fab_poly(a, b, 6, np.exp, e=Disk(0.0, 4.0))
    want = matfun_reference(a, np.exp) @ b
    assert np.linalg.norm(y - want) <= 1e-9 * np.linalg.norm(want)


def test_fab_poly_omits_bounds_outside_shape():
    rng = np.random.default_rng(5)
    a = _random(8, rng)
    b = rng.standard_normal(8)
    y, report = fab_poly(a, b, 3, np.exp, e=Disk(0.0, 1e-3))
    assert not report.contained
    assert report.bound_faber is None and report.bound_crouzeix is None
    assert np.all(np.isfinite(y))


def test_fab_poly_autofit_bound_holds():
    rng = np.random.default_rng(6)
    for _ in range(5):
        a = _random(8, rng, 0.6)
        b = rng.standard_normal(8)
        y, report = fab_poly(a, b, 6, np.exp)
        assert report.contained
        err = np.linalg.norm(matfun_reference(a, np.exp) @ b - y) \
            / np.linalg.norm(b)
        assert err <= report.bound_faber + 1e-12


# ---------------------------------------------------------------------------
# fit_ellipse

def test_fit_ellipse_contains_numerical_range():
    rng = np.random.default_rng(7)
    for _ in range(10):
        a = _random(6, rng)
        e = fit_ellipse(a)
        prof = support_profile(a, 97)
        emap = exterior_map(e)
        amaj = abs(emap.c1) + abs(emap.cm1)
        bmin = abs(emap.c1) - abs(emap.cm1)
        rot = 0.5 * (np.angle(emap.c1) + np.angle(emap.cm1))
        t = prof.thetas - rot
        h = np.real(np.exp(-1j * prof.thetas) * emap.c0) + np.sqrt(
            (amaj * np.cos(t)) ** 2 + (bmin * np.sin(t)) ** 2)
        assert np.max(prof.values - h) <= 1e-8


def test_fit_ellipse_hermitian_gives_interval():
    a = np.diag([0.0, 1.0, 3.0])
    e = fit_ellipse(a)
    assert e.kind == "interval"
    assert abs(e.z1 - 0.0) < 1e-6 and abs(e.z2 - 3.0) < 1e-6


def test_fit_ellipse_not_wasteful():
    # a disk-like numerical range should not be enclosed much larger
    a = np.array([[0.0, 2.0], [0.0, 0.0]])  # W(A) = disk(0,1)
    e = fit_ellipse(a)
    assert e.kind == "ellipse"
    assert e.a <= 1.02 and e.b <= 1.02


# ---------------------------------------------------------------------------
# rational_krylov

def test_rational_krylov_empty_poles_is_arnoldi_start():
    rng = np.random.default_rng(8)
    a = _random(5, rng)
    b = rng.standard_normal(5)
    dec = rational_krylov(a, b, [])
    ref = arnoldi(a, b, 1)
    assert dec.order == 1
    assert np.allclose(dec.v, ref.v, atol=1e-12)
    assert np.allclose(dec.h, ref.h, atol=1e-12)


def test_rational_krylov_inf_poles_match_arnoldi():
    rng = np.random.default_rng(9)
    a = _random(12, rng)
    b = rng.standard_normal(12)
    dec = rational_krylov(a, b, [np.inf] * 4)
    ref = arnoldi(a, b, 5)
    assert np.allclose(dec.v, ref.v, atol=1e-8)
    assert np.allclose(dec.h, ref.h, atol=1e-8)
    assert np.max(np.abs(np.tril(dec.h, -2))) < 1e-10


def test_rational_krylov_single_pole_span():
    rng = np.random.default_rng(10)
    a = _random(6, rng)
    b = rng.standard_normal(6).astype(complex)
    z1 = 5.0 + 2.0j
    dec = rational_krylov(a, b, [z1])
    w = np.linalg.solve(a - z1 * np.eye(6), b)
    stacked = np.column_stack([dec.v, b, w])
    rank = np.linalg.matrix_rank(stacked, tol=1e-8 * np.abs(stacked).max())
    assert dec.order == 2
    assert rank == 2


def test_rational_krylov_span_matches_definition():
    # q(A)^{-1} span{b, Ab, A^2 b} with mixed finite/infinite poles
    rng = np.random.default_rng(11)
    a = _random(7, rng)
    b = rng.standard_normal(7).astype(complex)
    poles = [4.0, np.inf, -3.0 + 1.0j]
    dec = rational_krylov(a, b, poles)
    qa = (a - 4.0 * np.eye(7)) @ (a - (-3.0 + 1.0j) * np.eye(7))
    kry = np.column_stack([np.linalg.matrix_power(a, j) @ b for j in range(4)])
    ref = np.linalg.solve(qa, kry)
    stacked = np.column_stack([dec.v, ref])
    rank = np.linalg.matrix_rank(stacked, tol=1e-8 * np.abs(stacked).max())
    assert dec.order == 4
    assert rank == 4
    gram = dec.v.conj().T @ dec.v
    assert op_norm(gram - np.eye(4), 2) <= 1e-10


def test_rational_krylov_pole_on_spectrum_errors():
    a = np.diag([1.0, 2.0, 3.0])
    with pytest.raises(RuntimeError, match="pole"):
        rational_krylov(a, np.ones(3), [2.0])


# ---------------------------------------------------------------------------
# Markov functions

def test_markov_eval_examples():
    f1 = MarkovFunction.from_atoms(0.0, [(-1.0, 1.0)])
    assert abs(markov_eval(f1, 1.0) - 0.5) < 1e-15
    f2 = MarkovFunction.from_atoms(0.0, [(-2.0, 1.0)])
    assert abs(markov_eval(f2, 0.0) - 0.5) < 1e-15
    f3 = MarkovFunction.from_atoms(0.0, [(-1.0, 1.0), (-3.0, 1.0)])
    assert abs(markov_eval(f3, 1.0) - 0.75) < 1e-15


def test_markov_eval_on_support_errors():
    f = MarkovFunction.from_atoms(0.0, [(-2.0, 1.0), (-1.0, 1.0)])
    with pytest.raises(ValueError):
        markov_eval(f, -1.5)


def test_markov_validation():
    with pytest.raises(ValueError):
        MarkovFunction(c=0.0, atoms=((-1.0, -2.0),), alpha=-2.0, beta=0.0)
    with pytest.raises(ValueError):
        MarkovFunction(c=0.0, atoms=((5.0, 1.0),), alpha=-2.0, beta=0.0)


def test_markov_discretize_log_kernel():
    # density 1 on [-3,-2]: f(z) = log((z+3)/(z+2))
    f = markov_discretize(lambda x: 1.0, -3.0, -2.0, 24)
    assert all(w > 0 for _, w in f.atoms)
    total = sum(w for _, w in f.atoms)
    assert abs(total - 1.0) < 5e-3
    want = np.log(4.0 / 3.0)
    assert abs(markov_eval(f, 1.0) - want) < 1e-3


# ---------------------------------------------------------------------------
# Pade

def test_pade_single_atom_exact():
    f = MarkovFunction.from_atoms(0.0, [(-2.0, 1.5)])
    pq = pade_markov(f, 0, 1)
    for z in [1.0, 0.5j, -0.2, 3.0 + 1.0j]:
        assert abs(pq(z) - markov_eval(f, z)) < 1e-12


def test_pade_m_atoms_exact_reproduction():
    f = MarkovFunction.from_atoms(0.5, [(-1.0, 0.3), (-2.0, 1.0), (-4.0, 0.7)])
    pq = pade_markov(f, 3, 3)  # [3|3] >= type (2,3) of f - c... numerator deg 3
    for z in [1.0, 0.5j, 2.0 - 1.0j]:
        assert abs(pq(z) - markov_eval(f, z)) < 1e-9


def test_pade_log_measure_roots_in_support():
    f = markov_discretize(lambda x: 1.0, -3.0, -2.0, 20)
    pq = pade_markov(f, 3, 4)
    roots = np.roots(np.asarray(pq.den)[::-1])
    assert np.max(np.abs(roots.imag)) < 1e-8
    assert np.all(roots.real > -3.0 - 1e-6)
    assert np.all(roots.real < -2.0 + 1e-6)


def test_pade_preconditions():
    f = MarkovFunction.from_atoms(0.0, [(-2.0, 1.0), (-1.0, 1.0)])
    with pytest.raises(ValueError, match="k >= m-1"):
        pade_markov(f, 0, 2)
    with pytest.raises(ValueError, match="limited to 8"):
        pade_markov(f, 9, 9)
    bad = MarkovFunction.from_atoms(0.0, [(-1.0, 1.0), (1.0, 1.0)])
    with pytest.raises(ValueError, match="expansion point"):
        pade_markov(bad, 1, 1)
    with pytest.raises(ValueError, match="degenerate"):
        pade_markov(MarkovFunction.from_atoms(0.0, [(-2.0, 1.0)]), 1, 2)


def test_pade_error_sign_from_integral_representation():
    # sign of (f - p/q)(z) for z > 0 is (-1)^(k+m+1): the representation has
    # z^(k+m+1)/q(z)^2 times an integral whose integrand keeps one sign
    rng = np.random.default_rng(12)
    for _ in range(100):
        n_atoms = int(rng.integers(3, 7))
        xs = -1.0 - 2.0 * rng.random(n_atoms)
        ws = 0.1 + rng.random(n_atoms)
        f = MarkovFunction.from_atoms(0.0, list(zip(xs, ws)))
        m = int(rng.integers(1, min(4, n_atoms) + 1))
        k = m - 1 + int(rng.integers(0, 3))
        pq = pade_markov(f, k, m)
        z = 0.1 + 3.0 * rng.random()
        diff = (markov_eval(f, z) - complex(pq(z))).real
        if abs(diff) > 1e-13:
            assert np.sign(diff) == (-1.0) ** (k + m + 1)


def test_pade_matrix_bound_exact_case():
    f = MarkovFunction.from_atoms(0.0, [(-2.0, 1.0)])
    pq = pade_markov(f, 0, 1)
    a = np.array([[0.0, 0.5], [0.0, 0.0]])
    diff, bound = pade_matrix_bound(f, pq, a)
    assert op_norm(diff, 2) <= 1e-12
    assert bound <= 1e-12


def test_pade_matrix_bound_seeded():
    rng = np.random.default_rng(13)
    a = np.array([[0.0, 0.5], [0.0, 0.0]])  # w(A) = 0.25
    for _ in range(50):
        n_atoms = int(rng.integers(2, 6))
        xs = -2.0 - rng.random(n_atoms)
        ws = 0.1 + rng.random(n_atoms)
        f = MarkovFunction.from_atoms(0.0, list(zip(xs, ws)))
        pq = pade_markov(f, 1, 2)
        diff, bound = pade_matrix_bound(f, pq, a)
        assert op_norm(diff, 2) <= bound + 1e-14


def test_pade_matrix_bound_normal_case():
    rng = np.random.default_rng(14)
    f = markov_discretize(lambda x: 1.0, -3.0, -2.0, 12)
    for _ in range(10):
        w = 0.5
        eigs = w * np.sqrt(rng.random(5)) * np.exp(2j * np.pi * rng.random(5))
        a = np.diag(eigs)
        pq = pade_markov(f, 2, 2)
        diff, bound = pade_matrix_bound(f, pq, a)
        assert op_norm(diff, 2) <= bound + 1e-14


def test_pade_matrix_bound_hypothesis():
    f = MarkovFunction.from_atoms(0.0, [(-0.1, 1.0)])
    pq = pade_markov(f, 0, 1)
    a = np.array([[0.0, 0.5], [0.0, 0.0]])  # w(A) = 0.25 > -beta
    with pytest.raises(ValueError, match="beta"):
        pade_matrix_bound(f, pq, a)


# ---------------------------------------------------------------------------
# fab_rational

def _log_fixture(rng, n=8):
    f = markov_discretize(lambda x: 1.0, -3.0, -2.0, 20)
    a = _random(n, rng)
    a *= 0.9 / numerical_radius(a)
    b = rng.standard_normal(n)
    return f, a, b


def test_fab_rational_matching_pole_exact():
    rng = np.random.default_rng(15)
    f = MarkovFunction.from_atoms(0.0, [(-2.0, 1.0)])
    a = _random(6, rng)
    a *= 0.8 / numerical_radius(a)
    b = rng.standard_normal(6)
    y, report = fab_rational(a, b, [-2.0], f, Disk(0.0, 1.0))
    want = markov_matfun(f, a) @ b
    assert np.linalg.norm(y - want) <= 1e-8 * np.linalg.norm(want)


def test_fab_rational_error_within_bound():
    rng = np.random.default_rng(16)
    f, a, b = _log_fixture(rng)
    want = markov_matfun(f, a) @ b
    for poles in ([np.inf, np.inf], [-2.5, np.inf, -3.0], [-2.0, -2.5]):
        y, report = fab_rational(a, b, poles, f, Disk(0.0, 1.0))
        err = np.linalg.norm(y - want) / np.linalg.norm(b)
        assert err <= report.error_bound + 1e-12


def test_fab_rational_pole_at_alpha_beats_polynomial():
    rng = np.random.default_rng(17)
    f, a, b = _log_fixture(rng)
    _, rep_free = fab_rational(a, b, [np.inf] * 3, f, Disk(0.0, 1.0))
    _, rep_pole = fab_rational(a, b, [-3.0] * 3, f, Disk(0.0, 1.0))
    assert rep_pole.error_bound < rep_free.error_bound


def test_fab_rational_polefree_consistent_with_fab_poly():
    rng = np.random.default_rng(18)
    f, a, b = _log_fixture(rng)
    _, rep = fab_rational(a, b, [np.inf] * 3, f, Disk(0.0, 1.0))
    _, rep_poly = fab_poly(a, b, 4, f, e=Disk(0.0, 1.0))
    ratio = rep.error_bound / rep_poly.bound_faber
    assert 0.1 < ratio < 10.0


def test_fab_rational_geometry_errors():
    rng = np.random.default_rng(19)
    f, a, b = _log_fixture(rng)
    with pytest.raises(ValueError, match="symmetric"):
        fab_rational(a, b, [np.inf], f, Ellipse(0.0, 1.2, 0.8, rotation=0.3))
    with pytest.raises(ValueError, match="intersects"):
        fab_rational(a, b, [np.inf], f, Disk(0.0, 2.5))
    with pytest.raises(ValueError, match="inside the shape"):
        fab_rational(a, b, [0.5], f, Disk(0.0, 1.0))
    big = 10.0 * a
    with pytest.raises(ValueError, match="not contained"):
        fab_rational(big, b, [np.inf], f, Disk(0.0, 1.0))


# ---------------------------------------------------------------------------
# GMRES / FOM

def test_gmres_identity_converges_immediately():
    b = np.array([1.0, 2.0, -1.0])
    res = gmres_fom(np.eye(3), b, m=2)
    assert res.residual_ratios[1] <= 1e-14


def test_lens_factor_half_cosine():
    a = np.array([[1.0, 2.0 / 3.0], [0.0, 1.0]])  # dist/w = 0.5
    lens = lens_asymptotic_factor(a)
    assert abs(lens - 2.0 * np.sin(np.pi / 10.0)) < 1e-9
    assert lens < np.sin(np.pi / 3.0)
    res = gmres_fom(a, np.array([1.0, 1.0]))
    assert res.lens_factor is not None
    assert abs(res.lens_factor - lens) < 1e-12


def test_lens_factor_requires_definite_part():
    with pytest.raises(ValueError):
        lens_asymptotic_factor(np.array([[-1.0, 0.0], [0.0, 1.0]]))


def test_gmres_bound_curves_closed_form():
    # E = disk(3,1): F_j(0) = (-3)^j, phi(0) = -3, dist(0,E) = 2
    rng = np.random.default_rng(20)
    g = _random(4, rng)
    a = 3.0 * np.eye(4) + 0.9 * g / op_norm(g, 2)
    b = rng.standard_normal(4)
    res = gmres_fom(a, b, m=3, e=Disk(3.0, 1.0))
    want_faber = [1.0, 2.0 / 3.0, 2.0 / 9.0, 2.0 / 27.0]
    assert np.allclose(res.gmres_faber, want_faber, atol=1e-12)
    want_asym = [(2 + 1 / 3.0) / 3.0 ** j for j in range(4)]
    assert np.allclose(res.gmres_asym, want_asym, atol=1e-12)
    want_fom = [4.0 / 3.0 ** j / 2.0 for j in range(4)]
    assert np.allclose(res.fom_curve, want_fom, atol=1e-12)


def test_gmres_residual_within_faber_curve():
    rng = np.random.default_rng(21)
    e = Ellipse(3.0, 1.5, 1.0)
    for _ in range(50):
        n = int(rng.integers(3, 8))
        g = _random(n, rng)
        a = 3.0 * np.eye(n) + (1.4 / numerical_radius(g)) * g
        b = rng.standard_normal(n)
        res = gmres_fom(a, b, m=n, e=e)
        assert np.all(res.residual_ratios[: len(res.gmres_faber)]
                      <= res.gmres_faber + 1e-8)


def test_gmres_residuals_nonincreasing_and_fom_full():
    rng = np.random.default_rng(22)
    a = 2.0 * np.eye(7) + _random(7, rng, 0.3)
    b = rng.standard_normal(7)
    res = gmres_fom(a, b, m=7)
    r = res.residual_ratios
    assert np.all(r[1:] <= r[:-1] + 1e-12)
    assert res.fom_errors[-1] <= 1e-8


def test_fom_breakdown_skipped_and_flagged():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    b = np.array([1.0, 0.0])
    res = gmres_fom(a, b, m=2)
    assert 1 in res.fom_skipped
    assert np.isnan(res.fom_errors[1])
    assert res.fom_errors[2] <= 1e-12


def test_gmres_curves_none_when_zero_inside():
    rng = np.random.default_rng(23)
    a = _random(4, rng)
    res = gmres_fom(a, rng.standard_normal(4), m=3, e=Disk(0.0, 10.0))
    assert res.gmres_faber is None and res.fom_curve is None
