"""Mini-language for spin-state specifications used in sweep configs.

Impurity pair states:
  * product kets: ``uu``, ``ud``, ``du``, ``dd`` (``u,d`` also accepted)
  * named Bell states: ``psi+``, ``psi-``
  * one-excitation family:  ``family2 theta=<rad> phi=<rad>``
        cos(theta)|ud> + e^{i phi} sin(theta)|du>
  * aligned family:         ``uu_dd theta=<rad> phi=<rad>``
        cos(theta)|uu> + e^{i phi} sin(theta)|dd>

Electron states: ``u`` / ``d`` (aliases ``up`` / ``down``) or two complex
amplitudes ``<alpha>,<beta>`` parsed by Python's complex(), e.g. ``0.6,0.8j``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import DomainError
from ..spin_algebra import SpinVector, compose_state

_KET_INDEX = {"uu": 0, "ud": 1, "du": 2, "dd": 3}


def one_up_family(mix: float, phase: float) -> np.ndarray:
    """Pair states with a single impurity excitation shared between sites."""
    out = np.zeros(4, dtype=complex)
    out[1] = math.cos(mix)
    out[2] = cmath.exp(1j * phase) * math.sin(mix)
    return out


def aligned_family(mix: float, phase: float) -> np.ndarray:
    """Pair states with both impurity spins aligned."""
    out = np.zeros(4, dtype=complex)
    out[0] = math.cos(mix)
    out[3] = cmath.exp(1j * phase) * math.sin(mix)
    return out


def bell_pair(sign: int) -> np.ndarray:
    out = np.zeros(4, dtype=complex)
    out[1] = 1.0 / math.sqrt(2.0)
    out[2] = sign / math.sqrt(2.0)
    return out


def _parse_family_args(tokens: list[str], spec: str) -> tuple[float, float]:
    values = {}
    for tok in tokens:
        key, _, raw = tok.partition("=")
        if key not in ("theta", "phi") or not raw:
            raise DomainError(f"bad family parameter {tok!r} in {spec!r}")
        try:
            values[key] = float(raw)
        except ValueError as exc:
            raise DomainError(f"bad number in {tok!r}") from exc
    missing = {"theta", "phi"} - values.keys()
    if missing:
        raise DomainError(f"missing {sorted(missing)} in {spec!r}")
    return values["theta"], values["phi"]


def impurity_state(spec: str) -> np.ndarray:
    """Parse an impurity pair specification into a normalized 4-vector."""
    text = spec.strip().lower()
    tokens = text.split()
    if not tokens:
        raise DomainError("empty impurity state spec")
    head = tokens[0]
    if head == "psi+":
        return bell_pair(+1)
    if head == "psi-":
        return bell_pair(-1)
    if head == "family2":
        return one_up_family(*_parse_family_args(tokens[1:], spec))
    if head == "uu_dd":
        return aligned_family(*_parse_family_args(tokens[1:], spec))
    ket = head.replace(",", "")
    if len(tokens) == 1 and ket in _KET_INDEX:
        out = np.zeros(4, dtype=complex)
        out[_KET_INDEX[ket]] = 1.0
        return out
    raise DomainError(f"unrecognized impurity state spec {spec!r}")


def electron_state(spec: str) -> np.ndarray:
    """Parse an electron spin specification into a normalized 2-vector."""
    text = spec.strip().lower()
    if text in ("u", "up"):
        return np.array([1.0, 0.0], dtype=complex)
    if text in ("d", "down"):
        return np.array([0.0, 1.0], dtype=complex)
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 2:
        try:
            amps = np.array([complex(parts[0]), complex(parts[1])])
        except ValueError as exc:
            raise DomainError(f"bad electron amplitudes {spec!r}") from exc
        nrm = np.linalg.norm(amps)
        if nrm < 1e-12:
            raise DomainError("electron state has zero norm")
        return amps / nrm
    raise DomainError(f"unrecognized electron spin spec {spec!r}")


def incident_state(electron_spec: str, impurity_spec: str) -> SpinVector:
    """Full 8-component incident state from the two specifications."""
    return compose_state(electron_state(electron_spec), impurity_state(impurity_spec))
