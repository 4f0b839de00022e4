"""Spin-space toolkit for one conduction electron and two spin-1/2 impurities.

The total spin Hilbert space is 8-dimensional, the product of the electron
spin with the two impurity spins.  Product-basis ordering is fixed once and
for all as

    index i = 4*e + 2*a + b,   e, a, b in {0 (up), 1 (down)},

where e, a, b are the projections of the electron, impurity 1 and impurity 2,
so the electron occupies the most significant bit.  All spin operators are
dimensionless (units of hbar).

Besides the operator set, this module builds the coupled basis
|s_e2; s, m> of simultaneous eigenvectors of the electron+impurity-2 pair
spin squared, the total spin squared and its z component.  The basis is
constructed by simultaneous diagonalization plus ladder operators, not from
coefficient tables, so the Clebsch-Gordan/6j routines have an independent
in-repo cross-check.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np
from sympy import Rational
from sympy.physics.wigner import clebsch_gordan as _sympy_cg
from sympy.physics.wigner import wigner_6j as _sympy_6j

from .errors import DomainError

NORM_TOL = 1e-12

# Pauli matrices; spin-1/2 operators are pauli/2.
_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}
_LOWER = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |up> -> |down>

_SLOTS = 3  # electron, impurity 1, impurity 2


def _embed(op: np.ndarray, slot: int) -> np.ndarray:
    """Embed a single-site 2x2 operator at the given slot (0 = electron)."""
    mats = [np.eye(2, dtype=complex)] * _SLOTS
    mats[slot] = op
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def _site_spin(slot: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return tuple(_embed(_PAULI[c] / 2.0, slot) for c in "xyz")


def _spin_dot(a, b) -> np.ndarray:
    return sum(ac @ bc for ac, bc in zip(a, b))


def _sq(components) -> np.ndarray:
    return sum(c @ c for c in components)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SpinOperatorSet:
    """8x8 matrices of the spin observables, in the product basis."""

    electron_dot_imp1: np.ndarray   # sigma . S_1
    electron_dot_imp2: np.ndarray   # sigma . S_2
    total_spin_sq: np.ndarray       # (sigma + S_1 + S_2)^2
    total_sz: np.ndarray
    pair_spin_sq: np.ndarray        # (S_1 + S_2)^2, impurities only
    electron_imp1_sq: np.ndarray    # (sigma + S_1)^2
    electron_imp2_sq: np.ndarray    # (sigma + S_2)^2

    def as_dict(self) -> dict[str, np.ndarray]:
        return {
            "electron_dot_imp1": self.electron_dot_imp1,
            "electron_dot_imp2": self.electron_dot_imp2,
            "total_spin_sq": self.total_spin_sq,
            "total_sz": self.total_sz,
            "pair_spin_sq": self.pair_spin_sq,
            "electron_imp1_sq": self.electron_imp1_sq,
            "electron_imp2_sq": self.electron_imp2_sq,
        }


@functools.lru_cache(maxsize=1)
def spin_operators() -> SpinOperatorSet:
    """Build (once) the full operator set; all matrices are read-only."""
    electron = _site_spin(0)
    imp1 = _site_spin(1)
    imp2 = _site_spin(2)
    total = tuple(e + a + b for e, a, b in zip(electron, imp1, imp2))
    pair = tuple(a + b for a, b in zip(imp1, imp2))
    e1 = tuple(e + a for e, a in zip(electron, imp1))
    e2 = tuple(e + b for e, b in zip(electron, imp2))
    ops = SpinOperatorSet(
        electron_dot_imp1=_readonly(_spin_dot(electron, imp1)),
        electron_dot_imp2=_readonly(_spin_dot(electron, imp2)),
        total_spin_sq=_readonly(_sq(total)),
        total_sz=_readonly(total[2]),
        pair_spin_sq=_readonly(_sq(pair)),
        electron_imp1_sq=_readonly(_sq(e1)),
        electron_imp2_sq=_readonly(_sq(e2)),
    )
    for name, mat in ops.as_dict().items():
        if np.max(np.abs(mat - mat.conj().T)) > NORM_TOL:
            raise AssertionError(f"operator {name} is not Hermitian")
    return ops


@functools.lru_cache(maxsize=1)
def total_lowering() -> np.ndarray:
    """Total spin lowering operator S_- = S_x - i S_y (sum over all spins)."""
    return _readonly(sum(_embed(_LOWER, slot) for slot in range(_SLOTS)))


@dataclass(frozen=True)
class SpinVector:
    """Normalized (by default) 8-component state over the product spin basis.

    Unnormalized vectors must be flagged explicitly with ``normalized=False``.
    """

    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        arr = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if arr.shape != (8,):
            raise DomainError(f"spin vector needs 8 amplitudes, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("spin vector amplitudes must be finite")
        if self.normalized and abs(np.vdot(arr, arr).real - 1.0) > NORM_TOL:
            raise DomainError(
                "vector is not normalized at 1e-12; pass normalized=False"
            )
        object.__setattr__(self, "amplitudes", _readonly(arr))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "SpinVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


_SPIN_CHARS = {"u": 0, "d": 1, "0": 0, "1": 1}


def product_ket(spins: str) -> SpinVector:
    """Basis ket from a 3-character string, e.g. ``'udu'`` = up, down, up."""
    cleaned = spins.replace(",", "").replace(" ", "").lower()
    if len(cleaned) != 3 or any(c not in _SPIN_CHARS for c in cleaned):
        raise DomainError(f"bad product ket {spins!r}; expected 3 of u/d")
    e, a, b = (_SPIN_CHARS[c] for c in cleaned)
    amps = np.zeros(8, dtype=complex)
    amps[4 * e + 2 * a + b] = 1.0
    return SpinVector(amps)


def compose_state(electron: Iterable[complex], impurities: Iterable[complex]) -> SpinVector:
    """Tensor an electron 2-vector with a two-impurity 4-vector."""
    el = np.asarray(list(electron), dtype=complex)
    imp = np.asarray(list(impurities), dtype=complex)
    if el.shape != (2,) or imp.shape != (4,):
        raise DomainError("need a 2-component electron and 4-component impurity state")
    amps = np.kron(el, imp)
    nrm = np.linalg.norm(amps)
    if nrm < 1e-300:
        raise DomainError("zero state")
    return SpinVector(amps / nrm)


class CoupledLabel(NamedTuple):
    s_e2: int
    s: float
    m: float


# Canonical ordering: the four s = 3/2 states (m descending), then the
# s_e2 = 0 doublet, then the s_e2 = 1 doublet.
COUPLED_LABELS: tuple[CoupledLabel, ...] = (
    CoupledLabel(1, 1.5, 1.5),
    CoupledLabel(1, 1.5, 0.5),
    CoupledLabel(1, 1.5, -0.5),
    CoupledLabel(1, 1.5, -1.5),
    CoupledLabel(0, 0.5, 0.5),
    CoupledLabel(0, 0.5, -0.5),
    CoupledLabel(1, 0.5, 0.5),
    CoupledLabel(1, 0.5, -0.5),
)


@dataclass(frozen=True)
class CoupledBasis:
    """Orthonormal coupled basis; column j of ``matrix`` is |labels[j]>."""

    labels: tuple[CoupledLabel, ...]
    matrix: np.ndarray

    def index(self, s_e2: int, s: float, m: float) -> int:
        return self.labels.index(CoupledLabel(int(s_e2), float(s), float(m)))

    def vector(self, s_e2: int, s: float, m: float) -> SpinVector:
        return SpinVector(self.matrix[:, self.index(s_e2, s, m)])

    def to_coupled(self, v) -> np.ndarray:
        """Coefficients <s_e2; s, m | v> in label order."""
        amps = v.amplitudes if isinstance(v, SpinVector) else np.asarray(v, dtype=complex)
        return self.matrix.conj().T @ amps

    def to_product(self, coeffs) -> np.ndarray:
        return self.matrix @ np.asarray(coeffs, dtype=complex)


def _first_sign_fixed(vec: np.ndarray) -> np.ndarray:
    """Flip the global sign so the first component above 1e-8 is positive."""
    for c in vec:
        if abs(c) > 1e-8:
            return vec if c.real > 0 else -vec
    raise AssertionError("zero eigenvector")


def _expect(op: np.ndarray, vec: np.ndarray) -> float:
    return float(np.real(np.vdot(vec, op @ vec)))


@functools.lru_cache(maxsize=1)
def coupled_basis() -> CoupledBasis:
    """Construct the coupled basis by simultaneous diagonalization.

    The three commuting observables are combined with incommensurate weights
    so a single Hermitian diagonalization splits all eight joint eigenspaces.
    Phases: the highest-m state of each multiplet has its first nonzero
    product-basis component real positive, and lower-m states follow by
    applying the total lowering operator, which reproduces the standard
    Condon-Shortley relative phases within each multiplet.
    """
    ops = spin_operators()
    combo = (
        100.0 * ops.electron_imp2_sq
        + 10.0 * ops.total_spin_sq
        + ops.total_sz
    ).real  # all three operators are real symmetric in the product basis
    _, vecs = np.linalg.eigh(combo)

    found: dict[CoupledLabel, np.ndarray] = {}
    for j in range(8):
        v = vecs[:, j].astype(complex)
        s_e2 = round((-1 + np.sqrt(1 + 4 * _expect(ops.electron_imp2_sq, v))) / 2)
        s2 = (-1 + np.sqrt(1 + 4 * _expect(ops.total_spin_sq, v))) / 2
        s = round(2 * s2) / 2
        m = round(2 * _expect(ops.total_sz, v)) / 2
        found[CoupledLabel(int(s_e2), s, m)] = v

    lower = total_lowering()
    columns: dict[CoupledLabel, np.ndarray] = {}
    for s_e2, s in ((1, 1.5), (0, 0.5), (1, 0.5)):
        vec = _first_sign_fixed(found[CoupledLabel(s_e2, s, s)])
        m = s
        columns[CoupledLabel(s_e2, s, m)] = vec
        while m > -s:
            vec = lower @ vec / np.sqrt(s * (s + 1) - m * (m - 1))
            m -= 1.0
            columns[CoupledLabel(s_e2, s, m)] = vec

    matrix = np.column_stack([columns[lab] for lab in COUPLED_LABELS])
    _validate_coupled(matrix, ops)
    return CoupledBasis(labels=COUPLED_LABELS, matrix=_readonly(matrix))


def _validate_coupled(matrix: np.ndarray, ops: SpinOperatorSet) -> None:
    gram = matrix.conj().T @ matrix
    if np.max(np.abs(gram - np.eye(8))) > NORM_TOL:
        raise AssertionError("coupled basis is not orthonormal")
    for j, lab in enumerate(COUPLED_LABELS):
        v = matrix[:, j]
        for op, val in (
            (ops.electron_imp2_sq, lab.s_e2 * (lab.s_e2 + 1)),
            (ops.total_spin_sq, lab.s * (lab.s + 1)),
            (ops.total_sz, lab.m),
        ):
            if np.linalg.norm(op @ v - val * v) > NORM_TOL:
                raise AssertionError(f"eigenvector residual too large for {lab}")
    # stretched state
    if abs(matrix[0, 0] - 1.0) > NORM_TOL:
        raise AssertionError("stretched state phase is off")
    # The equal-weight singlet construction must hold with positive
    # coefficients: 1/2 |0;1/2,m> + sqrt(3)/2 |1;1/2,m> is the electron
    # (up for m=+1/2, down for m=-1/2) times the impurity singlet.
    singlet = np.zeros(8, dtype=complex)
    singlet[0b001] = 1 / np.sqrt(2)   # |up, up, down>
    singlet[0b010] = -1 / np.sqrt(2)  # |up, down, up>
    combo_up = 0.5 * matrix[:, 4] + (np.sqrt(3) / 2) * matrix[:, 6]
    if np.linalg.norm(combo_up - singlet) > NORM_TOL:
        raise AssertionError("electron-up impurity-singlet identity violated")
    singlet_dn = np.zeros(8, dtype=complex)
    singlet_dn[0b101] = 1 / np.sqrt(2)
    singlet_dn[0b110] = -1 / np.sqrt(2)
    combo_dn = 0.5 * matrix[:, 5] + (np.sqrt(3) / 2) * matrix[:, 7]
    if np.linalg.norm(combo_dn - singlet_dn) > NORM_TOL:
        raise AssertionError("electron-down impurity-singlet identity violated")


def product_to_coupled(v: SpinVector) -> np.ndarray:
    """Coefficients <s_e2; s, m | v>, ordered as COUPLED_LABELS."""
    if not np.all(np.isfinite(np.asarray(v.amplitudes))):
        raise DomainError("non-finite amplitudes")
    return coupled_basis().to_coupled(v)


def coupled_to_product(coeffs) -> SpinVector:
    """Inverse basis change; round-trips with product_to_coupled."""
    amps = coupled_basis().to_product(coeffs)
    normalized = abs(np.vdot(amps, amps).real - 1.0) <= NORM_TOL
    return SpinVector(amps, normalized=normalized)


def _as_rational(value, name: str) -> Rational:
    doubled = 2 * float(value)
    if abs(doubled - round(doubled)) > 1e-9:
        raise DomainError(f"{name} must be integer or half-integer, got {value}")
    return Rational(int(round(doubled)), 2)


def clebsch_gordan(j1, m1, j2, m2, j_total, m_total) -> float:
    """Clebsch-Gordan coefficient <j1 m1; j2 m2 | j_total m_total>.

    Condon-Shortley phase convention.  Returns 0 for violated selection
    rules (m_total != m1 + m2, triangle condition, |m| > j); raises
    DomainError for non-half-integer or negative j inputs.
    """
    js = [_as_rational(j, n) for j, n in ((j1, "j1"), (j2, "j2"), (j_total, "j_total"))]
    ms = [_as_rational(m, n) for m, n in ((m1, "m1"), (m2, "m2"), (m_total, "m_total"))]
    if any(j < 0 for j in js):
        raise DomainError("angular momenta must be nonnegative")
    for j, m in zip(js, ms):
        if abs(m) > j or (j - m) % 1 != 0:
            return 0.0
    return float(_sympy_cg(js[0], js[1], js[2], ms[0], ms[1], ms[2]))


def wigner_6j(j1, j2, j3, j4, j5, j6) -> float:
    """Wigner 6j symbol {j1 j2 j3; j4 j5 j6}; 0 if any triad is invalid."""
    js = [_as_rational(j, f"j{i+1}") for i, j in enumerate((j1, j2, j3, j4, j5, j6))]
    if any(j < 0 for j in js):
        raise DomainError("angular momenta must be nonnegative")
    try:
        return float(_sympy_6j(*js))
    except ValueError:
        return 0.0


def coupling_scheme_overlap(s_e2: int, s_e1: int, s: float = 0.5) -> float:
    """Overlap between the two pairing schemes of the three spins.

    Bra: impurity 1 coupled with the (electron, impurity 2) pair of spin
    s_e2 to total s.  Ket: the (electron, impurity 1) pair of spin s_e1
    coupled with impurity 2 to the same total s.  The first phase undoes
    the reordering of the electron inside its pair, the second comes from
    the standard regrouping identity for three angular momenta.
    """
    if s_e2 not in (0, 1) or s_e1 not in (0, 1):
        raise DomainError("pair spins must be 0 or 1")
    reorder = (-1.0) ** (1 - s_e1)
    regroup = (-1.0) ** int(round(1.5 + s))
    return (
        reorder
        * regroup
        * np.sqrt((2 * s_e1 + 1) * (2 * s_e2 + 1))
        * wigner_6j(0.5, 0.5, s_e1, 0.5, s, s_e2)
    )


@functools.lru_cache(maxsize=1)
def recoupling_matrix_elements() -> np.ndarray:
    """Matrix <s_e2' | (sigma + S_1)^2 | s_e2> in the total-spin-1/2 sector.

    Computed by expanding each s_e2 state over the electron+impurity-1
    pairing scheme (where the operator is diagonal with eigenvalues
    s_e1 (s_e1 + 1)) via 6j recoupling.  Independent of m by construction.
    """
    overlap = np.array(
        [[coupling_scheme_overlap(s_e2, s_e1) for s_e1 in (0, 1)] for s_e2 in (0, 1)]
    )
    eigenvalues = np.array([0.0, 2.0])  # s_e1 (s_e1 + 1)
    return _readonly(overlap @ np.diag(eigenvalues) @ overlap.T)
