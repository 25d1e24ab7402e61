"""Truncated Fock-space oracle for the four-mode oscillator.

Two independent numeric routes live here:

* :func:`to_matrix` turns a normal-ordered :class:`WeylElement` into a sparse
  matrix by acting with each monomial on occupation states.
* :class:`FockBackend` feeds :func:`higgs_hahn.realizations.build_catalog`
  with truncated ladder matrices, so every named operator is rebuilt by plain
  matrix products.  Truncation only corrupts states that some ladder string
  pushes above the cutoff; :class:`FockOp` tracks the maximal number of
  creation operators in any string so residuals are taken on the safe
  subspace only.

The sector machinery decomposes an energy level into joint eigenspaces of
``(H, L12, L34)`` and works out the K1/K2 Leonard-pair data in each.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .hahn import positive_gauge
from .realizations import N_MODES, build_catalog, exact_catalog
from .scalars import GaussianRational, ParamPoly
from .weyl import WeylElement


__all__ = [
    "FockBasis",
    "LevelBasis",
    "FockOp",
    "FockBackend",
    "to_matrix",
    "numeric_catalog",
    "residual",
    "safe_indices",
    "Sector",
    "DegenerateSpectrumError",
    "sector_decompose",
    "jacobi_matrix",
    "overlaps",
    "phase_fix",
    "positive_gauge",
    "level_dimension",
    "EIGEN_TOL",
    "IDENTITY_TOL",
    "HERMITIAN_TOL",
]

EIGEN_TOL = 1e-10
IDENTITY_TOL = 1e-9
HERMITIAN_TOL = 1e-12


class _StateBasis:
    """Dense indexing of a sorted set of occupation tuples."""

    def __init__(self, states: np.ndarray, radix: int):
        self.states = np.asarray(states, dtype=np.int64)
        self.radix = radix
        self._codes = self._encode(self.states)
        if np.any(np.diff(self._codes) <= 0):
            order = np.argsort(self._codes)
            self.states = self.states[order]
            self._codes = self._codes[order]

    def _encode(self, states: np.ndarray) -> np.ndarray:
        code = np.zeros(len(states), dtype=np.int64)
        for i in range(states.shape[1]):
            code = code * self.radix + states[:, i]
        return code

    @property
    def dim(self) -> int:
        return len(self.states)

    def __len__(self):
        return self.dim

    def index_of(self, states: np.ndarray) -> np.ndarray:
        """Indices of ``states``; -1 for states outside the basis."""
        states = np.asarray(states, dtype=np.int64)
        out = np.full(len(states), -1, dtype=np.int64)
        inside = np.all((states >= 0) & (states < self.radix), axis=1)
        codes = self._encode(np.where(inside[:, None], states, 0))
        pos = np.searchsorted(self._codes, codes)
        pos = np.minimum(pos, len(self._codes) - 1)
        hit = inside & (self._codes[pos] == codes)
        out[hit] = pos[hit]
        return out

    def index(self, occupation: Sequence[int]) -> int:
        i = int(self.index_of(np.array([occupation]))[0])
        if i < 0:
            raise KeyError(f"state {tuple(occupation)} is not in the basis")
        return i


class FockBasis(_StateBasis):
    """All four-mode occupations with every ``n_i <= cutoff``."""

    def __init__(self, cutoff: int, n_modes: int = N_MODES):
        if cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        self.cutoff = cutoff
        self.n_modes = n_modes
        grid = np.indices((cutoff + 1,) * n_modes).reshape(n_modes, -1).T
        super().__init__(grid, cutoff + 1)


class LevelBasis(_StateBasis):
    """Occupations with fixed total quanta ``n``; invariant under number-conserving operators."""

    def __init__(self, quanta: int, n_modes: int = N_MODES):
        if quanta < 0:
            raise ValueError("quanta must be nonnegative")
        self.quanta = quanta
        self.n_modes = n_modes
        grid = np.indices((quanta + 1,) * n_modes).reshape(n_modes, -1).T
        super().__init__(grid[grid.sum(axis=1) == quanta], quanta + 1)


def level_dimension(energy: int) -> int:
    """Dimension of the ``H = energy`` eigenspace: ``C(E+1, 3)``."""
    return comb(energy + 1, 3)


def _scalar(c) -> complex:
    if isinstance(c, ParamPoly):
        return complex(c.constant())
    return complex(c)


def to_matrix(x: WeylElement, basis: _StateBasis) -> sp.csr_matrix:
    """Sparse matrix of a normal-ordered element, acting right to left.

    Each monomial lowers first and raises second; images leaving the basis
    are dropped.
    """
    if x.n_modes != basis.states.shape[1]:
        raise ValueError("mode-count mismatch between element and basis")
    states = basis.states
    top = int(states.max(initial=0)) + max(
        (max(m.raising) for m in x.terms), default=0) + 1
    # sqrt of falling factorials: table[n, k] = sqrt(n!/(n-k)!)
    table = np.zeros((top + 1, top + 1))
    table[:, 0] = 1.0
    for k in range(1, top + 1):
        n = np.arange(top + 1)
        table[:, k] = table[:, k - 1] * np.sqrt(np.clip(n - k + 1, 0, None))
    rows, cols, vals = [], [], []
    for m, c in x.terms.items():
        low = np.array(m.lowering)
        up = np.array(m.raising)
        ok = np.all(states >= low, axis=1)
        src = np.nonzero(ok)[0]
        mid = states[src] - low
        dst_states = mid + up
        dst = basis.index_of(dst_states)
        keep = dst >= 0
        src, mid, dst_states, dst = src[keep], mid[keep], dst_states[keep], dst[keep]
        amp = np.ones(len(src))
        for i in range(states.shape[1]):
            if low[i]:
                amp *= table[states[src, i], low[i]]
            if up[i]:
                amp *= table[dst_states[:, i], up[i]]
        rows.append(dst)
        cols.append(src)
        vals.append(amp * _scalar(c))
    if rows:
        rows, cols, vals = map(np.concatenate, (rows, cols, vals))
    return sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim),
                         dtype=complex)


class FockOp:
    """Truncated operator matrix plus the creation depth of its construction."""

    __slots__ = ("matrix", "raise_degree")

    def __init__(self, matrix, raise_degree: int = 0):
        self.matrix = sp.csr_matrix(matrix, dtype=complex)
        self.raise_degree = raise_degree

    def _identity(self, c) -> "FockOp":
        return FockOp(sp.identity(self.matrix.shape[0], dtype=complex,
                                  format="csr") * _scalar(c), 0)

    def _coerce(self, other) -> Optional["FockOp"]:
        if isinstance(other, FockOp):
            return other
        if isinstance(other, (int, Fraction, GaussianRational, ParamPoly, complex, float)):
            return self._identity(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FockOp(self.matrix + other.matrix,
                      max(self.raise_degree, other.raise_degree))

    __radd__ = __add__

    def __neg__(self):
        return FockOp(-self.matrix, self.raise_degree)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FockOp(self.matrix - other.matrix,
                      max(self.raise_degree, other.raise_degree))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FockOp):
            return FockOp(self.matrix @ other.matrix,
                          self.raise_degree + other.raise_degree)
        if self._coerce(other) is None:
            return NotImplemented
        return FockOp(self.matrix * _scalar(other), self.raise_degree)

    def __rmul__(self, other):
        if self._coerce(other) is None:
            return NotImplemented
        return FockOp(self.matrix * _scalar(other), self.raise_degree)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        out = self._identity(1)
        for _ in range(n):
            out = out * self
        return out


class FockBackend:
    """Truncated ladder matrices on a :class:`FockBasis`."""

    n_modes = N_MODES

    def __init__(self, cutoff: int):
        self.basis = FockBasis(cutoff)
        self.cutoff = cutoff
        self._ladders: Dict[Tuple[str, int], FockOp] = {}
        for i in range(1, N_MODES + 1):
            lower = WeylElement.annihilator(i, N_MODES)
            self._ladders["a", i] = FockOp(to_matrix(lower, self.basis), 0)
            self._ladders["ad", i] = FockOp(to_matrix(lower.adjoint(), self.basis), 1)

    def a(self, i: int) -> FockOp:
        return self._ladders["a", i]

    def ad(self, i: int) -> FockOp:
        return self._ladders["ad", i]

    def identity(self) -> FockOp:
        return FockOp(sp.identity(self.basis.dim, dtype=complex, format="csr"), 0)


_NUMERIC: Dict[int, object] = {}


def numeric_catalog(cutoff: int):
    """Catalog rebuilt by truncated matrix products (cached per cutoff)."""
    if cutoff not in _NUMERIC:
        _NUMERIC[cutoff] = build_catalog(FockBackend(cutoff))
    return _NUMERIC[cutoff]


def safe_indices(basis: FockBasis, depth: int) -> np.ndarray:
    """States with every occupation ``<= cutoff - depth``."""
    if depth > basis.cutoff:
        raise ValueError(f"operator depth {depth} exceeds cutoff {basis.cutoff}")
    return np.nonzero(np.all(basis.states <= basis.cutoff - depth, axis=1))[0]


def _max_abs_on(op: FockOp, basis: FockBasis) -> float:
    cols = safe_indices(basis, op.raise_degree)
    block = op.matrix[:, cols]
    return float(np.abs(block.data).max(initial=0.0))


def residual(identity, cutoff: int = 10, catalog=None) -> float:
    """Max-abs residual of an identity on the safe subspace of the truncated space.

    ``identity`` is an :class:`~higgs_hahn.identities.IdentityCheck`; its
    expression is evaluated on the numeric catalog, never on normal-ordered
    elements.
    """
    cat = catalog if catalog is not None else numeric_catalog(cutoff)
    value = identity.expr(cat)
    ops = value if isinstance(value, (list, tuple)) else [value]
    basis = cat.backend.basis
    try:
        return max(_max_abs_on(op, basis) for op in ops)
    except ValueError as exc:
        raise ValueError(f"{identity.name}: {exc}") from None


# ----------------------------------------------------------------------
# sectors


class DegenerateSpectrumError(RuntimeError):
    """A spectrum that must be simple inside a sector is not."""


@dataclass
class Sector:
    """Joint eigenspace of ``(H, L12, L34)`` with its K1/K2 eigendata.

    ``k1_basis`` and ``k2_basis`` are columns in the level basis, phase
    fixed; ``jacobi`` is K2 in the K1 eigenbasis (symmetrized).
    """

    energy: int
    m1: float
    m2: float
    basis: np.ndarray
    k1_values: np.ndarray
    k1_basis: np.ndarray
    jacobi: np.ndarray
    k2_values: np.ndarray
    k2_basis: np.ndarray
    level: LevelBasis = field(repr=False)

    @property
    def size(self) -> int:
        return self.basis.shape[1]

    @property
    def label(self) -> Tuple[int, float, float]:
        return (self.energy, self.m1, self.m2)


def phase_fix(vectors: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Rotate each column so its first non-negligible component is real positive."""
    out = np.array(vectors, dtype=complex)
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.nonzero(np.abs(col) > tol)[0]
        if len(nz):
            z = col[nz[0]]
            out[:, j] = col * (abs(z) / z)
    return out


def _off_band(m: np.ndarray) -> float:
    n = m.shape[0]
    if n < 3:
        return 0.0
    i, j = np.indices(m.shape)
    return float(np.abs(m[np.abs(i - j) > 1]).max())


def _clusters(values: np.ndarray, tol: float) -> List[np.ndarray]:
    order = np.argsort(values)
    groups, current = [], [order[0]]
    for a, b in zip(order[:-1], order[1:]):
        if values[b] - values[a] > tol:
            groups.append(np.array(current))
            current = []
        current.append(b)
    groups.append(np.array(current))
    return groups


def _split(vecs: np.ndarray, op: np.ndarray, tol: float):
    """Diagonalize ``op`` on span(vecs); yield (value, subspace) for each eigenvalue."""
    sub = vecs.conj().T @ op @ vecs
    w, u = np.linalg.eigh((sub + sub.conj().T) / 2)
    rotated = vecs @ u
    for grp in _clusters(w, tol):
        yield float(np.mean(w[grp])), rotated[:, grp]


def _simple_eigh(op: np.ndarray, what: str, label, gap: float = 1e-6):
    w, u = np.linalg.eigh((op + op.conj().T) / 2)
    if len(w) > 1 and np.min(np.diff(w)) < gap:
        raise DegenerateSpectrumError(f"{what} spectrum is degenerate in sector {label}: {w}")
    return w, u


_LEVEL_OPS: Dict[int, Dict[str, np.ndarray]] = {}


def _level_operators(quanta: int) -> Tuple[LevelBasis, Dict[str, np.ndarray]]:
    level = LevelBasis(quanta)
    if quanta not in _LEVEL_OPS:
        cat = exact_catalog()
        _LEVEL_OPS[quanta] = {name: to_matrix(cat[name], level).toarray()
                              for name in ("H", "L(1,2)", "L(3,4)", "K1", "K2")}
    return level, _LEVEL_OPS[quanta]


def sector_decompose(energy: int, basis: Optional[FockBasis] = None,
                     tol: float = EIGEN_TOL, seed: int = 0) -> List[Sector]:
    """All ``(H, L12, L34)`` sectors at ``H = energy``, sorted by ``(m1, m2)``.

    The number-conserving operators are represented exactly on the level
    space, so the only requirement on ``basis`` is that the level fits
    under its cutoff.
    """
    quanta = energy - 2
    if quanta < 0:
        raise ValueError("energy must be at least 2")
    if basis is not None and quanta > basis.cutoff:
        raise ValueError(f"energy level {energy} is clipped by cutoff {basis.cutoff}")
    level, ops = _level_operators(quanta)
    L12, L34, K1, K2, H = ops["L(1,2)"], ops["L(3,4)"], ops["K1"], ops["K2"], ops["H"]

    rng = np.random.default_rng(seed)
    c1, c2 = rng.uniform(0.5, 1.5, size=2)
    mixed = c1 * L12 + c2 * L34
    start = np.eye(level.dim, dtype=complex)
    sectors = []
    for _, coarse in _split(start, mixed, 1e-6):
        for m1, v1 in _split(coarse, L12, 1e-6):
            for m2, v in _split(v1, L34, 1e-6):
                sectors.append(_make_sector(energy, m1, m2, v, level, H, L12, L34,
                                            K1, K2, tol))
    sectors.sort(key=lambda s: (s.m1, s.m2))
    total = sum(s.size for s in sectors)
    if total != level_dimension(energy):
        raise RuntimeError(f"sector dimensions sum to {total}, expected "
                           f"{level_dimension(energy)}")
    return sectors


def _make_sector(energy, m1, m2, v, level, H, L12, L34, K1, K2, tol) -> Sector:
    m1 = round(2 * m1) / 2
    m2 = round(2 * m2) / 2
    q, _ = np.linalg.qr(v)
    for op, val, name in ((H, energy, "H"), (L12, m1, "L12"), (L34, m2, "L34")):
        res = np.abs(op @ q - val * q).max(initial=0.0)
        if res > tol:
            raise RuntimeError(f"eigen-residual {res:.2e} for {name} in sector "
                               f"{(energy, m1, m2)}")
    label = (energy, m1, m2)
    k1_vals, u = _simple_eigh(q.conj().T @ K1 @ q, "K1", label)
    k1_basis = phase_fix(q @ u)
    jac = k1_basis.conj().T @ K2 @ k1_basis
    jac = (jac + jac.conj().T) / 2
    k2_vals, w = _simple_eigh(jac, "K2", label)
    k2_basis = phase_fix(k1_basis @ w)
    return Sector(energy, m1, m2, q, k1_vals, k1_basis, jac, k2_vals, k2_basis, level)


@dataclass
class TridiagonalCheck:
    matrix: np.ndarray
    off_band: float
    dual_matrix: np.ndarray
    dual_off_band: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.off_band <= self.tol and self.dual_off_band <= self.tol


def jacobi_matrix(sector: Sector, tol: float = EIGEN_TOL) -> TridiagonalCheck:
    """K2 in the K1 eigenbasis, and the dual K1 in the K2 eigenbasis."""
    _, ops = _level_operators(sector.energy - 2)
    dual = sector.k2_basis.conj().T @ ops["K1"] @ sector.k2_basis
    dual = (dual + dual.conj().T) / 2
    return TridiagonalCheck(sector.jacobi, _off_band(sector.jacobi), dual,
                            _off_band(dual), tol)


def overlaps(sector: Sector) -> np.ndarray:
    """``O[x, n] = <K1 eigenvector x | K2 eigenvector n>``."""
    return sector.k1_basis.conj().T @ sector.k2_basis
