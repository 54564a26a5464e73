"""NV ground-state spin Hamiltonian (in Hz, H/h convention).

Electronic basis ordering is (m_s = +1, 0, -1). With a nitrogen nucleus
the basis is the Kronecker product (m_s, m_I), m_s slowest.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np

from .constants import constants, G_N14, G_N15
from .errors import DomainError, NotDiagonalError, NumericalError, ValidationError


class Nucleus(str, enum.Enum):
    NONE = "none"
    N14 = "n14"
    N15 = "n15"


class Branch(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


def spin_ops(s):
    """Return (Sx, Sy, Sz, m) for spin s, basis ordered m = s ... -s."""
    m = np.arange(s, -s - 1, -1, dtype=float)
    n = m.size
    sp = np.zeros((n, n), dtype=complex)
    for i in range(1, n):
        # <m+1| S+ |m>
        sp[i - 1, i] = math.sqrt(s * (s + 1) - m[i] * (m[i] + 1))
    sx = (sp + sp.conj().T) / 2
    sy = (sp - sp.conj().T) / 2j
    sz = np.diag(m).astype(complex)
    return sx, sy, sz, m


@dataclass(frozen=True)
class FieldEnvironment:
    """Fields in the NV frame: B (T), E (V/m) and strain (Mz, Mx, My, Nx, Ny) in Hz."""
    b_vec_T: tuple = (0.0, 0.0, 0.0)
    e_vec_Vpm: tuple = (0.0, 0.0, 0.0)
    strain: tuple = (0.0, 0.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        for name, n in (("b_vec_T", 3), ("e_vec_Vpm", 3), ("strain", 5)):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (n,):
                raise ValidationError(name, f"expected {n} components")
            if not np.all(np.isfinite(v)):
                raise ValidationError(name, "must be finite")
            object.__setattr__(self, name, tuple(float(x) for x in v))
        if math.hypot(*self.b_vec_T) > 1.0:
            raise ValidationError("b_vec_T", "|B| > 1 T, check units")

    @classmethod
    def polar(cls, b, theta, phi=0.0, **kw):
        st = math.sin(theta)
        return cls(b_vec_T=(b * st * math.cos(phi), b * st * math.sin(phi), b * math.cos(theta)), **kw)


@dataclass(frozen=True)
class SpinHamiltonian:
    matrix: np.ndarray
    basis: tuple
    nucleus: Nucleus = Nucleus.NONE

    @property
    def dim(self):
        return self.matrix.shape[0]


def build_hamiltonian(env, nucleus=Nucleus.NONE, d_perp_prime=0.0):
    """Assemble H/h in Hz.

    ``d_perp_prime`` couples E_x, E_y to the S_z-mixing terms next to
    N_x, N_y; no value is compiled for it, so it defaults to zero.
    """
    nucleus = Nucleus(nucleus)
    k = constants()
    sx, sy, sz, ms = spin_ops(1)
    bx, by, bz = env.b_vec_T
    ex, ey, ez = env.e_vec_Vpm
    mz, mx, my, nx, ny = env.strain
    gam = k.gamma_hz_per_t

    he = k.D * sz @ sz + gam * (bx * sx + by * sy + bz * sz)
    he = he + (k.d_par * ez + mz) * (sz @ sz)
    he = he + (k.d_perp * ex + mx) * (sy @ sy - sx @ sx)
    he = he + (k.d_perp * ey + my) * (sx @ sy + sy @ sx)
    he = he + (d_perp_prime * ex + nx) * (sx @ sz + sz @ sx)
    he = he + (d_perp_prime * ey + ny) * (sy @ sz + sz @ sy)

    if nucleus is Nucleus.NONE:
        h = 0.5 * (he + he.conj().T)
        return SpinHamiltonian(h, tuple((int(m),) for m in ms), nucleus)

    if nucleus is Nucleus.N14:
        spin_i, a_par, a_perp, quad, g_i = 1, k.A_par_14N, k.A_perp_14N, k.P_14N, G_N14
    else:
        spin_i, a_par, a_perp, quad, g_i = 0.5, k.A_par_15N, k.A_perp_15N, 0.0, G_N15
    ix, iy, iz, mi = spin_ops(spin_i)
    ni = mi.size
    one_s, one_i = np.eye(3), np.eye(ni)
    h = np.kron(he, one_i)
    h = h + a_par * np.kron(sz, iz) + a_perp * (np.kron(sx, ix) + np.kron(sy, iy))
    # quadrupole term, identically zero for I = 1/2
    h = h + quad * np.kron(one_s, iz @ iz - spin_i * (spin_i + 1) / 3 * one_i)
    gam_n = g_i * k.mu_N / k.h
    h = h - gam_n * np.kron(one_s, bx * ix + by * iy + bz * iz)
    h = 0.5 * (h + h.conj().T)
    basis = tuple((int(a), float(b)) for a in ms for b in mi)
    return SpinHamiltonian(h, basis, nucleus)


def _offdiag(a):
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigh(a, tol=1e-12, max_sweeps=60):
    """Cyclic Jacobi eigensolver for a small complex Hermitian matrix.

    Returns ascending eigenvalues and the matching eigenvector columns.
    Stops once the off-diagonal Frobenius norm drops below tol * ||A||.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if scale == 0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        if _offdiag(a) < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                alpha = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                d = aqq - app
                if abs(d) > 2e150 * mag:
                    t = mag / d
                else:
                    theta = d / (2 * mag)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(1 + theta * theta))
                c = 1 / math.sqrt(1 + t * t)
                s = t * c
                # U acts on the (p, q) plane; phase alpha removed first
                u = np.eye(n, dtype=complex)
                u[p, p] = c
                u[p, q] = s
                u[q, p] = -s * alpha.conjugate()
                u[q, q] = c * alpha.conjugate()
                a = u.conj().T @ a @ u
                v = v @ u
    else:
        if _offdiag(a) >= tol * scale:
            raise NumericalError("Jacobi sweeps did not converge")
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _electronic_labels(vecs):
    # assign |0>, |+1>, |-1> by largest overlap, greedily
    ov = np.abs(vecs) ** 2  # rows: basis (+1, 0, -1), cols: eigenstates
    labels = [None] * 3
    taken = set()
    for basis_idx in np.argsort(-ov.max(axis=1)):
        col = max((c for c in range(3) if c not in taken), key=lambda c: ov[basis_idx, c])
        labels[col] = (1, 0, -1)[basis_idx]
        taken.add(col)
    return labels


def transition_frequencies_exact(h):
    """Frequencies (Hz) of the magnetic-dipole transitions, ascending.

    Electronic case: ``nu_minus`` and ``nu_plus`` (|0> to |-1>, |+1>).
    Nuclear case: every Delta m_s = +-1, Delta m_I = 0 pair, labelled by
    the dominant basis state of each eigenvector.
    """
    w, vecs = jacobi_eigh(h.matrix, tol=1e-12)
    if h.nucleus is Nucleus.NONE:
        lab = _electronic_labels(vecs)
        e = {m: w[i] for i, m in enumerate(lab)}
        out = [("nu_plus", e[1] - e[0]), ("nu_minus", e[-1] - e[0])]
        return sorted(out, key=lambda t: t[1])
    dom = [h.basis[int(np.argmax(np.abs(vecs[:, i]) ** 2))] for i in range(len(w))]
    out = []
    for i, (msi, mii) in enumerate(dom):
        if msi != 0:
            continue
        for j, (msj, mij) in enumerate(dom):
            if abs(msj) == 1 and mij == mii:
                tag = f"ms0->ms{msj:+d} mI={mii:+g}"
                out.append((tag, abs(w[j] - w[i])))
    return sorted(out, key=lambda t: t[1])


def transition_frequencies_perturbative(b, theta_b):
    """Third-order series for (nu_plus, nu_minus) in Hz."""
    k = constants()
    x = k.gamma_hz_per_t * b / k.D
    if abs(x) >= 0.3:
        raise DomainError("gamma B / D must stay below 0.3 for the series")
    if x == 0:
        return k.D, k.D
    c, s = math.cos(theta_b), math.sin(theta_b)
    if abs(c) < 1e-15:
        raise DomainError("theta_B = pi/2: tan term diverges, use the exact solver")
    cubic = x ** 3 * (s ** 3 * (s / c) / 8 - 0.5 * s ** 2 * c)
    quad = 1.5 * x ** 2 * s ** 2
    return (k.D * (1 + x * c + quad + cubic), k.D * (1 - x * c + quad - cubic))


def reduce_to_pseudo_spin_half(h, branch=Branch.PLUS):
    """Two-level Hamiltonian for the |0>, |+-1> pair, offset removed.

    Returned in basis (|+-1>, |0>), i.e. diag(nu/2, -nu/2).
    """
    branch = Branch(branch)
    m = h.matrix
    if h.nucleus is not Nucleus.NONE or m.shape != (3, 3):
        raise NotDiagonalError("reduction needs the 3x3 electronic Hamiltonian")
    off = m - np.diag(np.diag(m))
    if np.max(np.abs(off)) >= 1e-6 * constants().D:
        raise NotDiagonalError("transverse terms too large for two-level reduction")
    e = np.diag(m).real
    idx = 0 if branch is Branch.PLUS else 2
    half = (e[idx] - e[1]) / 2
    return np.diag([half, -half]).astype(complex)


@dataclass(frozen=True)
class StarkZeeman:
    theta: float
    phi: float
    nu_plus: float
    nu_minus: float
    dnu_dxi: float
    dnu_dbeta: float

    @property
    def dnu_minus_dxi(self):
        return -self.dnu_dxi

    @property
    def dnu_minus_dbeta(self):
        return -self.dnu_dbeta


def stark_zeeman_analysis(xi_x, xi_y, beta_z):
    """Mixing angles, nu+- offsets from the common term, and nu+ derivatives.

    The minus branch has the opposite-signed derivatives. When both
    couplings vanish the Stark limit (d nu/d xi = 1) is returned.
    """
    xi = math.hypot(xi_x, xi_y)
    r = math.hypot(xi, beta_z)
    theta = math.atan2(xi, beta_z)
    phi = math.atan2(xi_y, xi_x)
    if r == 0:
        dxi, dbeta = 1.0, 0.0
    else:
        # rescale first; hypot of subnormals rounds r onto xi
        m = max(xi, abs(beta_z))
        u, v = xi / m, beta_z / m
        n = math.hypot(u, v)
        dxi, dbeta = u / n, v / n
    return StarkZeeman(theta, phi, r, -r, dxi, dbeta)
