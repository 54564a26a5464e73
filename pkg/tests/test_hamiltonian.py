import math

import numpy as np
import pytest

from nvsk import (constants, FieldEnvironment, build_hamiltonian, transition_frequencies_exact,
                  transition_frequencies_perturbative, reduce_to_pseudo_spin_half,
                  stark_zeeman_analysis, jacobi_eigh, DomainError, NotDiagonalError,
                  ValidationError)

K = constants()
GAM = K.gamma_hz_per_t


def freqs(env, nucleus="none"):
    return dict(transition_frequencies_exact(build_hamiltonian(env, nucleus)))


def test_zero_field_diag():
    h = build_hamiltonian(FieldEnvironment())
    assert np.allclose(h.matrix, np.diag([K.D, 0, K.D]))
    assert np.trace(h.matrix).real == pytest.approx(2 * K.D)
    assert h.basis == ((1,), (0,), (-1,))


def test_axial_diag():
    bz = 1e-3
    h = build_hamiltonian(FieldEnvironment(b_vec_T=(0, 0, bz)))
    assert np.allclose(h.matrix, np.diag([K.D + GAM * bz, 0, K.D - GAM * bz]), atol=1e-3)


def test_hermitian_dims():
    env = FieldEnvironment(b_vec_T=(1e-3, -2e-3, 3e-3), e_vec_Vpm=(1e5, 2e5, -3e5),
                           strain=(1e5, 2e5, 3e5, 4e5, 5e5))
    for nuc, n in (("none", 3), ("n14", 9), ("n15", 6)):
        h = build_hamiltonian(env, nuc)
        assert h.matrix.shape == (n, n)
        assert np.allclose(h.matrix, h.matrix.conj().T, rtol=0, atol=1e-12 * K.D)


def test_jacobi_matches_numpy():
    rng = np.random.default_rng(0)
    for n in (2, 3, 6, 9):
        for _ in range(20):
            a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            a = a + a.conj().T
            w, v = jacobi_eigh(a)
            assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-10)
            assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-10)
            assert np.allclose(a @ v, v * w, atol=1e-9)


def test_exact_frequencies():
    f = freqs(FieldEnvironment())
    assert f["nu_plus"] == pytest.approx(2.870e9) and f["nu_minus"] == pytest.approx(2.870e9)
    f = freqs(FieldEnvironment(b_vec_T=(0, 0, 1e-3)))
    assert f["nu_plus"] - K.D == pytest.approx(28.02e6, rel=1e-3)
    assert K.D - f["nu_minus"] == pytest.approx(28.02e6, rel=1e-3)


def test_exact_ordering_ascending():
    out = transition_frequencies_exact(build_hamiltonian(FieldEnvironment.polar(3e-3, 0.4)))
    vals = [v for _, v in out]
    assert vals == sorted(vals)


def test_n14_hyperfine_lines():
    out = transition_frequencies_exact(build_hamiltonian(FieldEnvironment(b_vec_T=(0, 0, 5e-4)), "n14"))
    assert len(out) == 6
    upper = sorted(v for lab, v in out if "ms+1" in lab)
    assert np.diff(upper) == pytest.approx([2.14e6, 2.14e6], rel=0.01)
    # independent oracle
    w = np.linalg.eigvalsh(build_hamiltonian(FieldEnvironment(b_vec_T=(0, 0, 5e-4)), "n14").matrix)
    all_diffs = np.abs(w[:, None] - w[None, :]).ravel()
    for _, v in out:
        assert np.min(np.abs(all_diffs - v)) < 1.0


def test_n15_two_lines():
    out = transition_frequencies_exact(build_hamiltonian(FieldEnvironment(b_vec_T=(0, 0, 5e-4)), "n15"))
    upper = sorted(v for lab, v in out if "ms+1" in lab)
    assert len(upper) == 2
    assert upper[1] - upper[0] == pytest.approx(3.03e6, rel=0.01)


def test_perturbative_basic():
    assert transition_frequencies_perturbative(0.0, 0.3) == (K.D, K.D)
    nup, num = transition_frequencies_perturbative(2e-3, 0.0)
    assert nup == pytest.approx(K.D + GAM * 2e-3, rel=1e-15)
    assert num == pytest.approx(K.D - GAM * 2e-3, rel=1e-15)
    with pytest.raises(DomainError):
        transition_frequencies_perturbative(1e-3, math.pi / 2)
    with pytest.raises(DomainError):
        transition_frequencies_perturbative(0.05, 0.1)


@pytest.mark.parametrize("b,th", [(2e-3, math.radians(30)), (3.57e-3, math.radians(54.7))])
def test_perturbative_vs_exact(b, th):
    nup, num = transition_frequencies_perturbative(b, th)
    f = freqs(FieldEnvironment.polar(b, th))
    x = GAM * b / K.D
    assert abs(nup - f["nu_plus"]) <= f["nu_plus"] * x ** 4
    assert abs(num - f["nu_minus"]) <= f["nu_minus"] * x ** 4


def test_axial_machine_precision():
    for b in np.linspace(0, 10e-3, 11):
        nup, num = transition_frequencies_perturbative(b, 0.0)
        f = freqs(FieldEnvironment(b_vec_T=(0, 0, b)))
        assert nup == pytest.approx(f["nu_plus"], rel=1e-14)
        assert num == pytest.approx(f["nu_minus"], rel=1e-14)


def test_reduce():
    h2 = reduce_to_pseudo_spin_half(build_hamiltonian(FieldEnvironment()))
    assert np.allclose(h2, np.diag([K.D / 2, -K.D / 2]))
    h2 = reduce_to_pseudo_spin_half(build_hamiltonian(FieldEnvironment(b_vec_T=(0, 0, 1e-3))), "plus")
    assert h2[0, 0].real - K.D / 2 == pytest.approx(14.01e6, rel=1e-3)
    h2 = reduce_to_pseudo_spin_half(build_hamiltonian(FieldEnvironment(b_vec_T=(0, 0, 1e-3))), "minus")
    assert K.D / 2 - h2[0, 0].real == pytest.approx(14.01e6, rel=1e-3)
    with pytest.raises(NotDiagonalError):
        reduce_to_pseudo_spin_half(build_hamiltonian(FieldEnvironment(b_vec_T=(5e-3, 0, 0))))


def test_stark_zeeman_limits():
    r = stark_zeeman_analysis(1e5, 0, 0)
    assert abs(r.dnu_dxi) == 1 and r.dnu_dbeta == 0
    r = stark_zeeman_analysis(0, 0, 1e6)
    assert abs(r.dnu_dbeta) == 1 and r.dnu_dxi == 0
    r = stark_zeeman_analysis(0, 0, 0)
    assert r.dnu_dxi ** 2 + r.dnu_dbeta ** 2 == 1


def test_stark_zeeman_series():
    beta = GAM * 3e-3
    assert beta == pytest.approx(84e6, rel=0.01)
    r = stark_zeeman_analysis(7e6, 0, beta)
    q = 7e6 / beta
    assert abs(r.dnu_dxi) == pytest.approx(q - 0.5 * q ** 3, rel=5e-3)
    assert abs(r.dnu_dxi) == pytest.approx(0.083, rel=0.01)
    assert math.tan(r.theta) == pytest.approx(q)
    assert r.nu_plus == pytest.approx(math.hypot(7e6, beta)) and r.nu_minus == -r.nu_plus


def test_stark_zeeman_matches_hamiltonian():
    # M_x strain plays the role of xi_perp in the full Hamiltonian
    xi, bz = 3e6, 1e-3
    env = FieldEnvironment(b_vec_T=(0, 0, bz), strain=(0, xi, 0, 0, 0))
    f = freqs(env)
    r = stark_zeeman_analysis(xi, 0, GAM * bz)
    assert f["nu_plus"] - K.D == pytest.approx(r.nu_plus, rel=1e-9)
    assert f["nu_minus"] - K.D == pytest.approx(r.nu_minus, rel=1e-9)


def test_field_guard():
    with pytest.raises(ValidationError):
        FieldEnvironment(b_vec_T=(0, 0, 2.0))
    with pytest.raises(ValidationError):
        FieldEnvironment(b_vec_T=(0, math.nan, 0))


def test_stark_zeeman_subnormal():
    r = stark_zeeman_analysis(0.0, 5e-324, 5e-324)
    assert r.dnu_dxi == pytest.approx(math.sqrt(0.5)) and r.dnu_dbeta == pytest.approx(math.sqrt(0.5))
