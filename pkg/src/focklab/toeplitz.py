"""Toeplitz-operator compressions and their spectra.

assemble() produces the truncated matrix M[m, n] = int phi e_n conj(e_m) dlambda
for the first N basis elements. Pieces supported by closed forms (annular
sectors, origin-centered discs) are assembled analytically; off-center discs
go through a quadrature gram on the disc itself; sampled symbols use their own
grid. Radial symbols produce diagonal matrices via radial_assemble().

operator_norm() runs power iteration on M^2 with a deterministic start and a
hand-rolled cyclic Jacobi eigensolver as fallback, so norm certificates do not
depend on an external eigensolver.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .fock import FockFunction, weighted_basis_matrix
from .quadrature import RadialRule, gauss_legendre, integrate_region
from .regions import AnnularSector, Disc
from .special import gammainc_lower, gammainc_lower_int_prefix, log_factorial
from .symbols import RadialSymbol, SampledSymbol, SimpleSymbol

TWO_PI = 2.0 * math.pi

__all__ = [
    "HermitianMatrix",
    "assemble",
    "radial_assemble",
    "operator_norm",
    "top_eigenpair",
    "jacobi_eigenvalues",
    "rayleigh",
]


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """A square complex Hermitian matrix with JSON/CSV serialization."""

    data: np.ndarray

    def __post_init__(self):
        a = np.array(self.data, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError("matrix data must be square and nonempty")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "data", a)

    @property
    def dimension(self) -> int:
        return self.data.shape[0]

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.data - self.data.conj().T)))

    def to_json_dict(self) -> dict:
        flat = self.data.reshape(-1)
        return {
            "dimension": self.dimension,
            "entries": [[z.real, z.imag] for z in flat],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict) -> "HermitianMatrix":
        n = int(data["dimension"])
        entries = data["entries"]
        if len(entries) != n * n:
            raise ValueError("entry count does not match dimension")
        flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
        return cls(flat.reshape(n, n))

    @classmethod
    def from_json(cls, text: str) -> "HermitianMatrix":
        return cls.from_json_dict(json.loads(text))

    def write_csv(self, real_path, imag_path) -> None:
        np.savetxt(real_path, self.data.real, fmt="%.17g", delimiter=",")
        np.savetxt(imag_path, self.data.imag, fmt="%.17g", delimiter=",")


# ---------------------------------------------------------------------------
# assembly


def _sector_entries(region: AnnularSector, truncation: int) -> np.ndarray:
    """Closed-form compression of an annular-sector indicator.

    Entry (m, n) factors into an angular integral of e^{i(n-m)theta} and a
    radial incomplete-gamma increment at s = (n + m)/2:
        A_{n-m}/(2pi) * exp(lgamma(s+1) - (lf_n + lf_m)/2)
                      * (P(s+1, pi r_out^2) - P(s+1, pi r_in^2)).
    """
    n_idx = np.arange(truncation)
    x1 = math.pi * region.r_inner**2
    x2 = math.pi * region.r_outer**2

    if region.full_span:
        # Full annulus: angular integrals kill every off-diagonal entry and
        # the diagonal reduces to increments of integer incomplete gammas.
        diag = gammainc_lower_int_prefix(truncation, x2)
        if x1 > 0.0:
            diag = diag - gammainc_lower_int_prefix(truncation, x1)
        return np.diag(diag.astype(np.complex128))

    # Angular factors for k = -(N-1) .. N-1.
    ks = np.arange(-(truncation - 1), truncation)
    t1, t2 = region.theta_start, region.theta_end
    ang = np.empty(ks.size, dtype=complex)
    for i, k in enumerate(ks):
        if k == 0:
            ang[i] = t2 - t1
        else:
            ang[i] = (np.exp(1j * k * t2) - np.exp(1j * k * t1)) / (1j * k)

    # Radial factors for l = n + m = 0 .. 2N-2 (s = l/2).
    ls = np.arange(2 * truncation - 1)
    rad = np.array(
        [gammainc_lower(l / 2.0 + 1.0, x2) - gammainc_lower(l / 2.0 + 1.0, x1) for l in ls]
    )
    lgam = gammaln(ls / 2.0 + 1.0)

    lf = log_factorial(n_idx)
    ll = np.add.outer(n_idx, n_idx)          # ll[m, n] = m + n
    kk = -np.subtract.outer(n_idx, n_idx)    # kk[m, n] = n - m
    scale = np.exp(lgam[ll] - 0.5 * np.add.outer(lf, lf))
    return (ang[kk + truncation - 1] / TWO_PI) * scale * rad[ll]


def _disc_gram(region: Disc, truncation: int, radial_order: int,
               angular_order: int) -> np.ndarray:
    """Quadrature compression of an off-center disc indicator: Gauss-Legendre
    in the disc radius crossed with a uniform angular rule, evaluated through
    the weighted basis so no intermediate overflows."""
    rho, w_rho = gauss_legendre(radial_order, 0.0, region.radius)
    theta = TWO_PI * np.arange(angular_order) / angular_order
    z = region.center + rho[:, None] * np.exp(1j * theta[None, :])
    w = weighted_basis_matrix(truncation, z.reshape(-1))     # (N, Q)
    omega = np.repeat(w_rho * rho * (TWO_PI / angular_order), angular_order)
    return (np.conj(w) * omega) @ w.T


def assemble(
    symbol,
    truncation: int,
    *,
    radial_order: int | None = None,
    angular_order: int | None = None,
) -> HermitianMatrix:
    """Compress a symbol to the first `truncation` basis elements.

    SimpleSymbol pieces use closed forms where available (sectors and
    origin-centered discs) and a disc-adapted quadrature gram otherwise.
    SampledSymbol uses its own grid; the grid must resolve the requested
    truncation (radial count >= truncation, angular count >= 2*truncation - 1).
    RadialSymbol compressions are diagonal; use radial_assemble for those.
    """
    if truncation < 1:
        raise ValueError("truncation must be >= 1")

    if isinstance(symbol, RadialSymbol):
        raise TypeError("radial symbols produce diagonal compressions; use radial_assemble")

    if isinstance(symbol, SimpleSymbol):
        total = np.zeros((truncation, truncation), dtype=np.complex128)
        r_ord = radial_order if radial_order is not None else max(64, truncation + 8)
        a_ord = angular_order if angular_order is not None else max(128, 2 * truncation + 16)
        for region, coeff in symbol.pieces:
            if isinstance(region, AnnularSector):
                total += coeff * _sector_entries(region, truncation)
            elif region.center == 0:
                sector = AnnularSector(0.0, region.radius, 0.0, TWO_PI)
                total += coeff * _sector_entries(sector, truncation)
            else:
                total += coeff * _disc_gram(region, truncation, r_ord, a_ord)
        total = 0.5 * (total + total.conj().T)
        return HermitianMatrix(total)

    if isinstance(symbol, SampledSymbol):
        k_rad = symbol.rule.radial.count
        m_ang = symbol.rule.angular.count
        if truncation > k_rad:
            raise ValueError(
                f"truncation {truncation} exceeds the radial node count {k_rad}"
            )
        if m_ang < 2 * truncation - 1:
            raise ValueError(
                f"angular count {m_ang} cannot resolve truncation {truncation} "
                f"(need >= {2 * truncation - 1})"
            )
        n_idx = np.arange(truncation)
        lf = log_factorial(n_idx)
        t = symbol.rule.radial.nodes
        log_sw = np.log(symbol.rule.radial.scaled_weights)
        theta = symbol.rule.angular.nodes
        ks = np.arange(-(truncation - 1), truncation)
        ls = np.arange(2 * truncation - 1)

        # C[kidx, j] = sum_i v[j, i] e^{i k theta_i}
        e_mat = np.exp(1j * np.outer(theta, ks))             # (M, 2N-1)
        c_mat = (symbol.values @ e_mat).T                    # (2N-1, K)
        # T2w[l, j] = w_j t_j^{l/2} / Gamma(l/2 + 1), kept in log domain
        t2w = np.exp(
            0.5 * np.outer(ls, np.log(t)) - t[None, :] + log_sw[None, :]
            - gammaln(ls / 2.0 + 1.0)[:, None]
        )
        d_mat = t2w @ c_mat.T                                # (2N-1, 2N-1)

        ll = np.add.outer(n_idx, n_idx)
        kk = -np.subtract.outer(n_idx, n_idx)
        scale = np.exp(gammaln(ll / 2.0 + 1.0) - 0.5 * np.add.outer(lf, lf))
        total = scale * d_mat[ll, kk + truncation - 1] / m_ang
        total = 0.5 * (total + total.conj().T)
        return HermitianMatrix(total)

    raise TypeError(f"cannot assemble {type(symbol).__name__}")


def radial_assemble(
    symbol: RadialSymbol,
    truncation: int,
    *,
    rule: RadialRule | None = None,
    segment_order: int | None = None,
) -> HermitianMatrix:
    """Diagonal compression of a radial symbol.

    gamma_n = (1/n!) int_0^inf phi(sqrt(t/pi)) t^n e^{-t} dt. Profiles with
    unbounded support integrate on a Gauss-Laguerre rule; compactly supported
    profiles use composite Gauss-Legendre in r split at the profile
    breakpoints, so jumps never sit inside a panel and piecewise-polynomial
    profiles are integrated at spectral accuracy.
    """
    if not isinstance(symbol, RadialSymbol):
        raise TypeError("radial_assemble requires a RadialSymbol")
    if truncation < 1:
        raise ValueError("truncation must be >= 1")
    n_idx = np.arange(truncation)
    lf = log_factorial(n_idx)

    if symbol.kind == "gaussian":
        rul = rule if rule is not None else RadialRule.gauss_laguerre(max(80, 2 * truncation))
        t = rul.nodes
        vals = symbol.profile(rul.radii)
        # G[n, j] = w_j t_j^n / n!  via  exp(n ln t - t + ln sw - lf_n)
        g = np.exp(
            np.outer(n_idx, np.log(t)) - t[None, :]
            + np.log(rul.scaled_weights)[None, :] - lf[:, None]
        )
        gamma = g @ vals
    else:
        order = segment_order if segment_order is not None else max(64, truncation + 8)
        edges = [0.0] + [float(b) for b in symbol.breakpoints] + [symbol.support_radius]
        gamma = np.zeros(truncation)
        for a, b in zip(edges[:-1], edges[1:]):
            if b <= a:
                continue
            r, w = gauss_legendre(order, a, b)
            t = math.pi * r * r
            vals = symbol.profile(r)
            g = np.exp(np.outer(n_idx, np.log(t)) - t[None, :] - lf[:, None])
            gamma += g @ (w * TWO_PI * r * vals)

    return HermitianMatrix(np.diag(gamma.astype(np.complex128)))


# ---------------------------------------------------------------------------
# spectra


def _as_hermitian_array(matrix, tol: float = 1e-10) -> np.ndarray:
    a = matrix.data if isinstance(matrix, HermitianMatrix) else np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    defect = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
    return 0.5 * (a + a.conj().T)


def top_eigenpair(matrix, *, tol: float = 1e-12, max_iterations: int = 10000):
    """(lambda, v) for the eigenvalue of largest magnitude, by power iteration
    on M^2 from the deterministic all-ones start. Raises RuntimeError if the
    successive-estimate test never settles."""
    a = _as_hermitian_array(matrix)
    n = a.shape[0]
    if not np.any(a):
        v = np.zeros(n, dtype=np.complex128)
        v[0] = 1.0
        return 0.0, v

    v = np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128)
    kernel_restarts = 0
    prev = -1.0
    for _ in range(max_iterations):
        u = a @ v
        nu = float(np.linalg.norm(u))
        if nu == 0.0:
            # start vector sat in the kernel; restart from a basis vector
            v = np.zeros(n, dtype=np.complex128)
            v[kernel_restarts % n] = 1.0
            kernel_restarts += 1
            if kernel_restarts > n:
                return 0.0, v
            continue
        est = nu  # = sqrt(v^H M^2 v), nondecreasing along the iteration
        w = a @ u
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            v = u / nu
        else:
            v = w / nw
        if abs(est - prev) <= tol * max(1.0, est):
            lam = float(np.real(np.vdot(v, a @ v)))
            return lam, v
        prev = est
    raise RuntimeError("power iteration did not converge")


def jacobi_eigenvalues(matrix, *, tol: float = 1e-13, max_sweeps: int = 60) -> np.ndarray:
    """All eigenvalues (ascending) by cyclic complex Jacobi rotations.

    Each pivot (p, q) applies the unitary U = [[c, s e^{i phi}],
    [-s e^{-i phi}, c]] with phi = arg A[p,q], which zeroes the pivot exactly;
    sweeps stop when the off-diagonal Frobenius mass drops below tol times the
    full Frobenius norm.
    """
    a = _as_hermitian_array(matrix).copy()
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0].real])

    fro = float(np.linalg.norm(a))
    if fro == 0.0:
        return np.zeros(n)
    for _ in range(max_sweeps):
        off = math.sqrt(max(float(np.linalg.norm(a)) ** 2
                            - float(np.linalg.norm(np.diag(a))) ** 2, 0.0))
        if off <= tol * fro:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                beta = a[p, q]
                ab = abs(beta)
                if ab <= 1e-300:
                    continue
                phase = beta / ab
                alpha = a[p, p].real
                gamma = a[q, q].real
                tau = (gamma - alpha) / (2.0 * ab)
                if abs(tau) > 1e154:  # tau*tau would overflow; use 1st order
                    t = 0.5 / tau
                else:
                    sign = 1.0 if tau >= 0.0 else -1.0
                    t = sign / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c

                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * np.conj(phase) * row_p + c * row_q
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(phase) * col_q
                a[:, q] = s * phase * col_p + c * col_q
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                a[p, q] = 0.0
                a[q, p] = 0.0
    return np.sort(np.diag(a).real)


def operator_norm(matrix, *, tol: float = 1e-12, max_iterations: int = 10000,
                  method: str = "auto") -> float:
    """Spectral norm of a Hermitian matrix.

    method="power" runs power iteration on M^2 only; "jacobi" diagonalizes;
    "auto" tries power iteration and falls back to Jacobi (dimension <= 256)
    if it fails to settle.
    """
    a = _as_hermitian_array(matrix)
    if method not in ("auto", "power", "jacobi"):
        raise ValueError(f"unknown method: {method!r}")
    if method in ("auto", "power"):
        try:
            lam, _ = top_eigenpair(a, tol=tol, max_iterations=max_iterations)
            return abs(lam)
        except RuntimeError:
            if method == "power" or a.shape[0] > 256:
                raise
    eigs = jacobi_eigenvalues(a)
    return float(np.max(np.abs(eigs)))


# ---------------------------------------------------------------------------
# quadratic forms


def rayleigh(symbol, f: FockFunction, *, radial_order: int | None = None,
             angular_order: int | None = None) -> float:
    """int phi |f|^2 dlambda for a unit-normalized or general f.

    Region pieces integrate on region-adapted rules; radial profiles use
    breakpoint-aligned panels (or Gauss-Laguerre for the gaussian); sampled
    symbols are paired with their own grid.
    """
    n = f.truncation
    a_ord = angular_order if angular_order is not None else max(128, 2 * n + 16)

    if isinstance(symbol, SimpleSymbol):
        r_ord = radial_order if radial_order is not None else max(64, n + 8)
        total = 0.0
        for region, coeff in symbol.pieces:
            val = integrate_region(
                lambda z: np.abs(f.eval_weighted(z)) ** 2,
                region,
                radial_order=r_ord,
                angular_order=a_ord,
                include_weight=False,
            )
            total += coeff * float(val)
        return total

    if isinstance(symbol, RadialSymbol):
        theta = TWO_PI * np.arange(a_ord) / a_ord
        if symbol.kind == "gaussian":
            rul = RadialRule.gauss_laguerre(max(80, n + 16))
            z = rul.radii[:, None] * np.exp(1j * theta[None, :])
            mean_sq = np.mean(np.abs(f.eval_weighted(z)) ** 2, axis=1)
            return float(np.dot(rul.scaled_weights, symbol.profile(rul.radii) * mean_sq))
        order = radial_order if radial_order is not None else max(64, n + 8)
        edges = [0.0] + [float(b) for b in symbol.breakpoints] + [symbol.support_radius]
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            if b <= a:
                continue
            r, w = gauss_legendre(order, a, b)
            z = r[:, None] * np.exp(1j * theta[None, :])
            mean_sq = np.mean(np.abs(f.eval_weighted(z)) ** 2, axis=1)
            total += TWO_PI * float(np.dot(w * r, symbol.profile(r) * mean_sq))
        return total

    if isinstance(symbol, SampledSymbol):
        z = symbol.rule.grid()
        sq = np.abs(f.eval_weighted(z)) ** 2
        row = np.sum(symbol.values * sq, axis=1) / symbol.rule.angular.count
        return float(np.dot(symbol.rule.radial.scaled_weights, row))

    raise TypeError(f"cannot integrate against {type(symbol).__name__}")
