"""Hahn polynomials: exact evaluation, bispectral coefficients and sector fits.

The polynomials are normalized as

    Q_n(x; alpha, beta, N) = 3F2(-n, n+alpha+beta+1, -x; alpha+1, -N; 1)

so that ``Q_n(0) = 1``.  They satisfy the three-term recurrence in ``n``

    -x Q_n = A_n Q_{n+1} - (A_n + C_n) Q_n + C_n Q_{n-1}

and the difference equation in ``x``

    lambda_n Q_n(x) = B(x) Q_n(x+1) - (B(x) + D(x)) Q_n(x) + D(x) Q_n(x-1)

with ``lambda_n = n (n + alpha + beta + 1)``.

Inside an ``(H, L12, L34)`` sector, K1 has a linear spectrum and K2 a
quadratic one, so K2 in the K1 eigenbasis is an affine image of the
difference operator above (equivalently, the recurrence matrix of the dual
family).  :func:`fit_hahn_parameters` recovers ``(alpha, beta)`` and the
affine map from that matrix; :func:`match_overlaps` then compares the
Clebsch-Gordan overlaps with weighted, normalized ``Q_n(x)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, sqrt
from typing import List, Optional, Tuple, Union

import numpy as np

__all__ = [
    "HahnParams",
    "HahnFit",
    "OverlapReport",
    "FitAbsentError",
    "pochhammer",
    "hahn_eval",
    "recurrence_coeffs",
    "difference_coeffs",
    "eigenvalue",
    "weight",
    "norm",
    "difference_matrix",
    "recurrence_matrix",
    "fit_hahn_parameters",
    "match_overlaps",
]

Number = Union[int, Fraction, float]
FIT_TOL = 1e-6


def pochhammer(a: Number, k: int) -> Number:
    """Rising factorial ``(a)_k``."""
    out = Fraction(1) if not isinstance(a, float) else 1.0
    for j in range(k):
        out *= a + j
    return out


def _num(x):
    if isinstance(x, (Fraction, float)):
        return x
    return Fraction(x)


@dataclass(frozen=True)
class HahnParams:
    alpha: Number
    beta: Number
    N: int

    def __post_init__(self):
        if self.N < 0 or int(self.N) != self.N:
            raise ValueError(f"N must be a nonnegative integer, got {self.N}")
        object.__setattr__(self, "alpha", _num(self.alpha))
        object.__setattr__(self, "beta", _num(self.beta))

    @property
    def admissible(self) -> bool:
        """Positive weights on ``{0..N}``: both parameters above -1, or both below -N."""
        a, b, N = self.alpha, self.beta, self.N
        return (a > -1 and b > -1) or (a < -N and b < -N)

    def check(self) -> None:
        if not self.admissible:
            raise ValueError(f"inadmissible Hahn parameters {self}")


def hahn_eval(n: int, x: Number, p: HahnParams) -> Number:
    """``Q_n(x)`` as a terminating sum; exact for rational inputs."""
    if not 0 <= n <= p.N:
        raise ValueError(f"degree {n} outside 0..{p.N}")
    a, b, N = p.alpha, p.beta, p.N
    x = _num(x)
    total = 0
    term = Fraction(1) if not isinstance(a + b + x, float) else 1.0
    for k in range(n + 1):
        total += term
        # ratio of consecutive hypergeometric terms
        den = (a + 1 + k) * (-N + k) * (k + 1)
        if k < n:
            if den == 0:
                raise ZeroDivisionError(f"vanishing denominator at k={k} for {p}")
            term = term * (-n + k) * (n + a + b + 1 + k) * (-x + k) / den
    return total


def recurrence_coeffs(n: int, p: HahnParams) -> Tuple[Number, Number]:
    """``(A_n, C_n)`` of the recurrence in the degree."""
    p.check()
    a, b, N = p.alpha, p.beta, p.N
    s = a + b
    A = (n + s + 1) * (n + a + 1) * (N - n) / ((2 * n + s + 1) * (2 * n + s + 2))
    if n == 0:
        C = 0 * A
    else:
        C = n * (n + s + N + 1) * (n + b) / ((2 * n + s) * (2 * n + s + 1))
    return A, C


def difference_coeffs(x: Number, p: HahnParams) -> Tuple[Number, Number]:
    """``(B(x), D(x))`` of the difference equation in the variable."""
    p.check()
    a, b, N = p.alpha, p.beta, p.N
    x = _num(x)
    return (x + a + 1) * (x - N), x * (x - b - N - 1)


def eigenvalue(n: int, p: HahnParams) -> Number:
    return n * (n + p.alpha + p.beta + 1)


def weight(x: int, p: HahnParams) -> Number:
    """``binom(alpha+x, x) binom(beta+N-x, N-x)``."""
    a, b, N = p.alpha, p.beta, p.N
    return (pochhammer(a + 1, x) / factorial(x)
            * pochhammer(b + 1, N - x) / factorial(N - x))


def norm(n: int, p: HahnParams) -> Number:
    """``sum_x weight(x) Q_n(x)^2`` in closed form."""
    a, b, N = p.alpha, p.beta, p.N
    num = ((-1) ** n * pochhammer(n + a + b + 1, N + 1) * pochhammer(b + 1, n)
           * factorial(n))
    den = (2 * n + a + b + 1) * pochhammer(a + 1, n) * pochhammer(-N, n) * factorial(N)
    return num / den


def difference_matrix(p: HahnParams, symmetric: bool = True) -> np.ndarray:
    """Matrix of the difference operator on ``{0..N}`` (as floats).

    With ``symmetric`` the similarity by ``sqrt(weight)`` is applied, giving
    off-diagonals ``sign(B(x)) sqrt(B(x) D(x+1))``.
    """
    N = p.N
    m = np.zeros((N + 1, N + 1))
    for x in range(N + 1):
        B, D = difference_coeffs(x, p)
        m[x, x] = -float(B + D)
        if x < N:
            if symmetric:
                off = sqrt(float(B * difference_coeffs(x + 1, p)[1]))
                m[x, x + 1] = m[x + 1, x] = off if B > 0 else -off
            else:
                m[x, x + 1] = float(B)
        if x > 0 and not symmetric:
            m[x, x - 1] = float(D)
    return m


def recurrence_matrix(p: HahnParams) -> np.ndarray:
    """Symmetric Jacobi matrix of multiplication by ``x`` in the orthonormal basis."""
    N = p.N
    m = np.zeros((N + 1, N + 1))
    for n in range(N + 1):
        A, C = recurrence_coeffs(n, p)
        m[n, n] = float(A + C)
        if n < N:
            C_next = recurrence_coeffs(n + 1, p)[1]
            m[n, n + 1] = m[n + 1, n] = sqrt(float(A * C_next))
    return m


# ----------------------------------------------------------------------
# fitting


@dataclass
class HahnFit:
    """``J = scale * M + shift`` with ``M`` the difference operator or the recurrence matrix.

    ``form`` is ``"difference"`` (index is the variable ``x``, as for sector
    Jacobi matrices) or ``"recurrence"`` (index is the degree ``n``).
    ``reversed`` means matrix index ``i`` corresponds to ``x = N - i``.
    """

    params: HahnParams
    scale: float
    shift: float
    reversed: bool
    max_error: float
    form: str = "difference"

    def model(self) -> np.ndarray:
        """The fitted matrix, off-diagonals taken nonnegative."""
        base = difference_matrix if self.form == "difference" else recurrence_matrix
        m = self.scale * base(self.params)
        off = np.abs(np.diag(m, 1))
        m = np.diag(np.diag(m)) + np.diag(off, 1) + np.diag(off, -1)
        m += self.shift * np.eye(self.params.N + 1)
        return m[::-1, ::-1] if self.reversed else m


def _tridiagonal_parts(jacobi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    jacobi = np.asarray(jacobi)
    d = np.real(np.diag(jacobi)).astype(float)
    e = np.abs(np.diag(jacobi, 1)).astype(float)
    return d, e


def _fit_oriented(d: np.ndarray, e: np.ndarray, tol: float) -> List[Tuple[float, float, float, float, float]]:
    N = len(d) - 1
    s = -(d[2] - 2 * d[1] + d[0]) / 4
    if abs(s) < 1e-12:
        return []
    delta = -(d[1] - d[0]) / s - 2 + 2 * N
    # e_0^2 = s^2 N (alpha+1)(alpha+1 - 1 - delta + N), solved for u = alpha+1
    c = e[0] ** 2 / (s * s * N)
    bq = N - 1 - delta
    disc = bq * bq + 4 * c
    if disc < 0:
        return []
    out = []
    for u in {(-bq + sqrt(disc)) / 2, (-bq - sqrt(disc)) / 2}:
        alpha = u - 1
        beta = alpha - delta
        t = d[0] - s * N * (alpha + 1)
        err = _model_error(d, e, alpha, beta, s, t)
        if err is not None and err <= tol:
            out.append((alpha, beta, s, t, err))
    return out


def _model_error(d, e, alpha, beta, s, t) -> Optional[float]:
    N = len(d) - 1
    err = 0.0
    for x in range(N + 1):
        B = (x + alpha + 1) * (x - N)
        D = x * (x - beta - N - 1)
        err = max(err, abs(d[x] - (-s * (B + D) + t)))
        if x < N:
            prod = B * (x + 1) * (x + 1 - beta - N - 1)
            if prod < 0:
                return None
            err = max(err, abs(e[x] - abs(s) * sqrt(prod)))
    return err


def _recurrence_float(n, alpha, beta, N):
    s = alpha + beta
    A = (n + s + 1) * (n + alpha + 1) * (N - n) / ((2 * n + s + 1) * (2 * n + s + 2))
    C = 0.0 if n == 0 else n * (n + s + N + 1) * (n + beta) / ((2 * n + s) * (2 * n + s + 1))
    return A, C


def _fit_recurrence(d: np.ndarray, e: np.ndarray, tol: float) -> List[Tuple[float, float, float, float, float]]:
    """Fit ``J = s X + t`` with ``X`` the recurrence matrix; its spectrum is ``{0..N}``."""
    N = len(d) - 1
    w = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
    spacing = (w[-1] - w[0]) / N
    if spacing < 1e-12:
        return []
    out = []
    for s, t in ((spacing, w[0]), (-spacing, w[-1])):
        a0 = (d[0] - t) / s
        if abs(a0) < 1e-12 or abs(1 - a0 / N) < 1e-12:
            continue
        # a0 = (alpha+1) N / sigma and C_1 = (sigma+N)(1 - a0/N)/(sigma+1), sigma = alpha+beta+2
        r = (e[0] / s) ** 2 / a0 / (1 - a0 / N)
        if abs(1 - r) < 1e-12:
            continue
        sigma = (r - N) / (1 - r)
        alpha = a0 * sigma / N - 1
        beta = sigma - alpha - 2
        try:
            err = 0.0
            for n in range(N + 1):
                A, C = _recurrence_float(n, alpha, beta, N)
                err = max(err, abs(d[n] - (s * (A + C) + t)))
                if n < N:
                    prod = A * _recurrence_float(n + 1, alpha, beta, N)[1]
                    if prod < 0:
                        raise ZeroDivisionError
                    err = max(err, abs(e[n] - abs(s) * sqrt(prod)))
        except ZeroDivisionError:
            continue
        if err <= tol:
            out.append((alpha, beta, s, t, err))
    return out


def _snap(v: float, tol: float = 1e-7) -> Number:
    """Return a small-denominator Fraction when ``v`` is that close to one."""
    f = Fraction(v).limit_denominator(64)
    return f if abs(float(f) - v) <= tol else v


def fit_hahn_parameters(jacobi: np.ndarray, tol: float = FIT_TOL) -> Optional[HahnFit]:
    """Fit a tridiagonal matrix to an affine image of the Hahn difference operator.

    ``N`` is the matrix size minus one.  ``(alpha, beta, scale, shift)``
    come from the first three diagonal entries and the first off-diagonal
    and are then validated against every entry.  Both orientations of the
    variable are tried; they are related by ``alpha <-> beta`` and the
    lexicographically smaller pair is returned.  When no difference-form
    fit exists, the matrix is tried as an affine image of the recurrence
    matrix (linear spectrum).  ``None`` means no fit within ``tol``.
    """
    d, e = _tridiagonal_parts(jacobi)
    if len(d) < 3:
        raise ValueError("fitting needs a matrix of size >= 3")
    band = np.asarray(jacobi)
    i, j = np.indices(band.shape)
    if np.abs(band[np.abs(i - j) > 1]).max(initial=0.0) > tol:
        return None
    candidates = []
    for rev in (False, True):
        dd, ee = (d[::-1], e[::-1]) if rev else (d, e)
        for alpha, beta, s, t, err in _fit_oriented(dd, ee, tol):
            candidates.append(((alpha, beta), err, s, t, rev, "difference"))
    if not candidates:
        for alpha, beta, s, t, err in _fit_recurrence(d, e, tol):
            candidates.append(((alpha, beta), err, s, t, False, "recurrence"))
    if not candidates:
        return None
    # prefer the alpha, beta > -1 branch over its negative mirror
    candidates.sort(key=lambda c: (not (c[0][0] > -1 and c[0][1] > -1),
                                   round(c[0][0], 9), round(c[0][1], 9), c[1]))
    (alpha, beta), err, s, t, rev, form = candidates[0]
    params = HahnParams(_snap(alpha), _snap(beta), len(d) - 1)
    return HahnFit(params, s, t, rev, err, form)


@dataclass
class OverlapReport:
    label: tuple
    size: int
    fit: Optional[HahnFit]
    max_deviation: float


class FitAbsentError(RuntimeError):
    pass


def positive_gauge(tri: np.ndarray) -> np.ndarray:
    """Diagonal phases ``g`` making ``diag(g)^H T diag(g)`` have nonnegative off-diagonals."""
    n = tri.shape[0]
    g = np.ones(n, dtype=complex)
    for x in range(n - 1):
        t = tri[x, x + 1]
        g[x + 1] = g[x] * (np.conj(t) / abs(t) if abs(t) > 0 else 1.0)
    return g


def predicted_overlaps(fit: HahnFit, gauge: np.ndarray) -> np.ndarray:
    """Overlap matrix implied by a fit, in the gauge of the original Jacobi matrix.

    Column ``j`` is the eigenvector with the ``j``-th smallest eigenvalue.
    """
    p = fit.params
    N = p.N
    xs = range(N + 1)
    vec = np.zeros((N + 1, N + 1))
    for n in range(N + 1):
        h = float(norm(n, p))
        vec[:, n] = [sqrt(float(weight(x, p)) / h) * float(hahn_eval(n, x, p)) for x in xs]
    # the fitted matrix has nonnegative off-diagonals; move the model there
    model = fit.scale * difference_matrix(p)
    vec = vec * np.real(positive_gauge(model))[:, None]
    order = np.argsort([fit.scale * float(eigenvalue(n, p)) for n in range(N + 1)])
    vec = vec[:, order]
    if fit.reversed:
        vec = vec[::-1, :]
    return gauge[:, None] * vec


def match_overlaps(sector, fit: Optional[HahnFit] = None, tol: float = FIT_TOL) -> OverlapReport:
    """Compare a sector's Clebsch-Gordan overlaps with weighted Hahn polynomials."""
    from .fock import overlaps

    comp = overlaps(sector)
    if sector.size == 1:
        return OverlapReport(sector.label, 1, None, 0.0)
    if fit is None:
        if sector.size < 3:
            raise FitAbsentError(f"sector {sector.label} is too small to fit")
        fit = fit_hahn_parameters(sector.jacobi, tol)
    if fit is None:
        raise FitAbsentError(f"no Hahn fit for sector {sector.label}")
    if fit.form != "difference":
        raise FitAbsentError(f"sector {sector.label} fits only the recurrence form")
    g = positive_gauge(sector.jacobi)
    pred = predicted_overlaps(fit, g)
    dev = 0.0
    for j in range(comp.shape[1]):
        inner = np.vdot(pred[:, j], comp[:, j])
        phase = inner / abs(inner) if abs(inner) > 0 else 1.0
        dev = max(dev, float(np.abs(comp[:, j] - phase * pred[:, j]).max()))
    return OverlapReport(sector.label, sector.size, fit, dev)
