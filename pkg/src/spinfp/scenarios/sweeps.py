"""Grid evaluation of the scattering pipeline and CSV emission.

Output layout is deterministic: rows are emitted row-major over the grid
with the coupling u as the outermost axis, and all floating point values are
printed with 17 significant digits, so identical configs give byte-identical
files.  The data section carries no timestamps; the ``#`` header block echoes
the resolved configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..closed_form import DimensionlessParams
from ..errors import NumericError
from ..observables import scatter
from ..spin_algebra import coupled_basis
from ..waveguide_solver import scattering_matrices
from .config import SweepConfig
from .states import electron_state, incident_state, one_up_family, aligned_family

_KETS = ("uuu", "uud", "udu", "udd", "duu", "dud", "ddu", "ddd")
_AMP_COLUMNS = tuple(
    name for ket in _KETS for name in (f"re_t_{ket}", f"im_t_{ket}")
)
_PROB_TOL = 1e-12


@dataclass(frozen=True)
class SweepResult:
    """Computed table: header echo lines, column names and numeric rows."""

    header: tuple[str, ...]
    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]


def _check_probability(value: float, name: str) -> float:
    if not -_PROB_TOL <= value <= 1.0 + _PROB_TOL:
        raise NumericError(f"{name} = {value!r} outside [0, 1]")
    return value


def _amp_fields(product_amps: np.ndarray) -> tuple[float, ...]:
    out = []
    for a in product_amps:
        out.append(float(a.real))
        out.append(float(a.imag))
    return tuple(out)


def _point_row(chi, u: float, theta: float) -> tuple[float, ...]:
    state = scatter(chi, DimensionlessParams(u, theta))
    t_total = _check_probability(state.transmittivity, "T")
    t_up = _check_probability(state.transmitted_up, "T_up")
    t_down = _check_probability(state.transmitted_down, "T_down")
    return (
        theta, u, t_total, t_up, t_down,
        *_amp_fields(state.transmitted_product),
        state.reflectivity,
    )


def _theta_rows(cfg: SweepConfig) -> list[tuple[float, ...]]:
    chi = incident_state(cfg.electron_spin, cfg.impurity_state)
    return [
        _point_row(chi, u, theta)
        for u in cfg.u_values  # u is the outer axis
        for theta in cfg.theta_values
    ]


def _coupling_rows(cfg: SweepConfig) -> list[tuple[float, ...]]:
    chi = incident_state(cfg.electron_spin, cfg.impurity_state)
    return [_point_row(chi, u, cfg.fixed_theta) for u in cfg.u_values]


def _family_rows(cfg: SweepConfig) -> list[tuple[float, ...]]:
    family = cfg.impurity_state.split()[0]
    builder = one_up_family if family == "family2" else aligned_family
    electron = electron_state(cfg.electron_spin)
    basis = coupled_basis()
    rows = []
    for u in cfg.u_values:
        t_mat, r_mat = scattering_matrices(DimensionlessParams(u, cfg.fixed_theta))
        t_prod = basis.matrix @ t_mat @ basis.matrix.conj().T
        r_prod = basis.matrix @ r_mat @ basis.matrix.conj().T
        for vartheta in cfg.vartheta_values:
            for phi in cfg.phi_values:
                chi8 = np.kron(electron, builder(vartheta, phi))
                gamma = t_prod @ chi8
                rho = r_prod @ chi8
                t_total = _check_probability(float(np.real(np.vdot(gamma, gamma))), "T")
                t_up = _check_probability(
                    float(np.real(np.vdot(gamma[:4], gamma[:4]))), "T_up"
                )
                t_down = _check_probability(
                    float(np.real(np.vdot(gamma[4:], gamma[4:]))), "T_down"
                )
                rows.append(
                    (
                        vartheta, phi, u, t_total, t_up, t_down,
                        *_amp_fields(gamma),
                        float(np.real(np.vdot(rho, rho))),
                    )
                )
    return rows


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Evaluate the configured grid and return the result table."""
    if cfg.kind == "family":
        columns = ("vartheta", "phi", "u", "T", "T_up", "T_down", *_AMP_COLUMNS, "R")
        rows = _family_rows(cfg)
    else:
        columns = ("theta", "u", "T", "T_up", "T_down", *_AMP_COLUMNS, "R")
        rows = _theta_rows(cfg) if cfg.kind == "theta" else _coupling_rows(cfg)
    header = tuple(f"# {key} = {value}" for key, value in cfg.echo)
    return SweepResult(header=header, columns=columns, rows=tuple(rows))


def format_float(value: float) -> str:
    return format(value, ".17g")


def render_csv(result: SweepResult) -> str:
    lines = list(result.header)
    lines.append(",".join(result.columns))
    for row in result.rows:
        lines.append(",".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(result: SweepResult, path: str | Path) -> Path:
    """Write the table; identical results produce byte-identical files."""
    out = Path(path)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(render_csv(result), encoding="utf-8")
    return out
