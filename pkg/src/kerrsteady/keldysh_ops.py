"""Doubled-space operators certifying the closed-form steady states.

The master equation is equivalent to a Schroedinger-like problem on two
Fock ladders.  In the "plus/minus" basis the generator is the difference
of two copies of the Hamiltonian plus loss couplings between them; a
50/50 mode-mixing rotation (followed by a parity flip on the second
mode) carries it to the "classical/quantum" basis, where it splits into
a part that strictly raises the quantum-mode excitation and a part that
never raises it.  In that basis the steady state is the closed-form
amplitude sequence sitting in the quantum-mode vacuum, so applying the
generator to the embedded sequence must give zero away from the
truncation edges.  steady_residual measures exactly that.

The two bases are built by independent transcriptions and related only
through the explicit mixing unitary, which makes the basis-equivalence
test a real check rather than a tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import BasisMismatch, CutoffTooSmall, InvalidParams
from .exact_linear import SteadyWavefunction
from .lindblad_oracle import fock_annihilation, hamiltonian_fock
from .model import ModelParams

CL_Q = "cl_q"
PLUS_MINUS = "plus_minus"
_BASES = (CL_Q, PLUS_MINUS)

_EMBED_DROP_TOL = 1e-13
# Rows within a few Fock indices of the classical-mode truncation edge
# pick up artifacts from the pair terms; the interior must stay clear.
_EDGE_MARGIN = 3


@dataclass
class OperatorMatrix:
    """Dense operator on the doubled Fock space with a basis tag.

    cutoffs = (first-mode cutoff, second-mode cutoff); the first tensor
    factor is the classical (or plus) mode.
    """

    entries: np.ndarray
    basis_tag: str
    cutoffs: tuple[int, int]

    def __post_init__(self) -> None:
        if self.basis_tag not in _BASES:
            raise InvalidParams(f"unknown basis tag {self.basis_tag!r}")
        if self.entries.shape != (self.dim, self.dim):
            raise InvalidParams(
                f"entries shape {self.entries.shape} inconsistent with cutoffs {self.cutoffs}"
            )

    @property
    def dim(self) -> int:
        return (self.cutoffs[0] + 1) * (self.cutoffs[1] + 1)


def _check_cutoffs(cutoffs: tuple[int, int]) -> tuple[int, int]:
    m1, m2 = int(cutoffs[0]), int(cutoffs[1])
    if m1 < 1 or m2 < 1:
        raise InvalidParams(f"mode cutoffs must be >= 1, got {cutoffs}")
    return m1, m2


def mode_annihilation(cutoffs: tuple[int, int], mode: int) -> np.ndarray:
    """Annihilation operator of one mode, lifted to the doubled space."""
    m1, m2 = _check_cutoffs(cutoffs)
    if mode == 0:
        return np.kron(fock_annihilation(m1), np.eye(m2 + 1, dtype=complex))
    if mode == 1:
        return np.kron(np.eye(m1 + 1, dtype=complex), fock_annihilation(m2))
    raise InvalidParams(f"mode must be 0 or 1, got {mode}")


def build_mode_operators(
    cutoffs: tuple[int, int], basis: str = CL_Q
) -> dict[str, OperatorMatrix]:
    """Annihilation operators of both modes, tagged with the basis.

    The matrices are the same ladder operators either way; the tag
    records which pair of modes the tensor factors mean.  Keys are
    "a_cl"/"a_q" in the cl_q basis and "a_plus"/"a_minus" in plus_minus.
    """
    m1, m2 = _check_cutoffs(cutoffs)
    if basis not in _BASES:
        raise InvalidParams(f"unknown basis tag {basis!r}")
    names = ("a_cl", "a_q") if basis == CL_Q else ("a_plus", "a_minus")
    return {
        names[0]: OperatorMatrix(mode_annihilation((m1, m2), 0), basis, (m1, m2)),
        names[1]: OperatorMatrix(mode_annihilation((m1, m2), 1), basis, (m1, m2)),
    }


def _clq_parts(
    params: ModelParams, cutoffs: tuple[int, int]
) -> tuple[np.ndarray, np.ndarray]:
    acl = mode_annihilation(cutoffs, 0)
    aq = mode_annihilation(cutoffs, 1)
    acld, aqd = acl.conj().T, aq.conj().T
    ncl, nq = acld @ acl, aqd @ aq
    eye = np.eye(acl.shape[0], dtype=complex)

    dc, chi, om = params.delta_c, params.chi, params.omega
    g, kap, lam = params.gamma, params.kappa, params.lambda_2ph
    sq2 = math.sqrt(2.0)

    up = (
        0.5 * (2.0 * dc - 1j * g) * (aqd @ acl)
        + chi * ((ncl + nq - eye) @ (aqd @ acl))
        + 1j * sq2 * om * aqd
        - 0.5j * kap * ((ncl - nq + eye) @ (aqd @ acl))
        + lam * (aqd @ acld)
    )
    down = (
        0.5 * (2.0 * dc + 1j * g) * (acld @ aq)
        + chi * ((ncl + nq - eye) @ (acld @ aq))
        - 1j * sq2 * om * aq
        + 0.5j * kap * ((acld @ aq) @ (ncl - nq + eye))
        - (1j * g * eye + 2j * kap * ncl) @ (aqd @ aq)
        + np.conj(lam) * (acl @ aq)
    )
    return up, down


def hamiltonian_parts_clq(
    params: ModelParams, cutoffs: tuple[int, int]
) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Quantum-mode raising and non-raising parts of the generator.

    The first part moves every excitation up exactly one quantum-mode
    level; the second never raises that level and kills any state in the
    quantum-mode vacuum.  Their sum is the full generator.
    """
    m1, m2 = _check_cutoffs(cutoffs)
    up, down = _clq_parts(params, (m1, m2))
    return (
        OperatorMatrix(up, CL_Q, (m1, m2)),
        OperatorMatrix(down, CL_Q, (m1, m2)),
    )


def _pm_matrix(params: ModelParams, cutoffs: tuple[int, int]) -> np.ndarray:
    m1, m2 = cutoffs
    hp = np.kron(hamiltonian_fock(params, m1), np.eye(m2 + 1, dtype=complex))
    hm = np.kron(np.eye(m1 + 1, dtype=complex), hamiltonian_fock(params, m2))
    ap = mode_annihilation(cutoffs, 0)
    am = mode_annihilation(cutoffs, 1)
    apd, amd = ap.conj().T, am.conj().T

    g, kap = params.gamma, params.kappa
    total = (
        hp
        - hm
        + 1j * g * (ap @ amd)
        - 0.5j * g * (apd @ ap + amd @ am)
    )
    if kap != 0.0:
        total = total + 1j * kap * (ap @ ap @ amd @ amd) - 0.5j * kap * (
            apd @ apd @ ap @ ap + amd @ amd @ am @ am
        )
    return total


def build_generalized_hamiltonian_clq(
    params: ModelParams, cutoffs: tuple[int, int]
) -> OperatorMatrix:
    """Full doubled-space generator in the classical/quantum basis."""
    m1, m2 = _check_cutoffs(cutoffs)
    up, down = _clq_parts(params, (m1, m2))
    return OperatorMatrix(up + down, CL_Q, (m1, m2))


def build_generalized_hamiltonian_pm(
    params: ModelParams, cutoffs: tuple[int, int]
) -> OperatorMatrix:
    """Full doubled-space generator in the plus/minus basis.

    Transcribed directly from the two-copy form, independently of the
    cl_q transcription; the two builders are tied together only by
    mixing_unitary, which the basis-equivalence test exploits.
    """
    m1, m2 = _check_cutoffs(cutoffs)
    return OperatorMatrix(_pm_matrix(params, (m1, m2)), PLUS_MINUS, (m1, m2))


def mixing_unitary(cutoffs: tuple[int, int]) -> np.ndarray:
    """Rotation carrying plus/minus operators to classical/quantum ones.

    A parity flip on the second mode composed with a 50/50 beam-splitter
    rotation.  Exact only on subspaces whose total photon number fits
    under both cutoffs; outside them the beam splitter leaks through the
    truncation.
    """
    m1, m2 = _check_cutoffs(cutoffs)
    b1 = mode_annihilation((m1, m2), 0)
    b2 = mode_annihilation((m1, m2), 1)
    parity2 = np.kron(
        np.eye(m1 + 1, dtype=complex),
        np.diag((-1.0) ** np.arange(m2 + 1)).astype(complex),
    )
    rotation = expm((math.pi / 4.0) * (b1.conj().T @ b2 - b1 @ b2.conj().T))
    return parity2 @ rotation


def convert_basis(op: OperatorMatrix, target: str) -> OperatorMatrix:
    """Rewrite an operator in the other basis via the mixing unitary."""
    if target not in _BASES:
        raise InvalidParams(f"unknown basis tag {target!r}")
    if op.basis_tag == target:
        return op
    w = mixing_unitary(op.cutoffs)
    if target == CL_Q:
        entries = w @ op.entries @ w.conj().T
    else:
        entries = w.conj().T @ op.entries @ w
    return OperatorMatrix(entries, target, op.cutoffs)


def q_grade_blocks(op: OperatorMatrix) -> dict[int, float]:
    """Largest matrix element per quantum-mode grade shift.

    Key d collects entries connecting quantum-mode level j to level
    j + d.  A purely raising operator puts all its weight at d = +1.
    """
    m1, m2 = op.cutoffs
    q_index = np.tile(np.arange(m2 + 1), m1 + 1)
    out: dict[int, float] = {}
    rows, cols = np.nonzero(np.abs(op.entries) > 0.0)
    for r, c in zip(rows, cols):
        d = int(q_index[r] - q_index[c])
        mag = abs(op.entries[r, c])
        if mag > out.get(d, 0.0):
            out[d] = mag
    return out


def embed_wavefunction(
    wavefunction: SteadyWavefunction,
    cutoffs: tuple[int, int],
    basis: str = CL_Q,
) -> np.ndarray:
    """Amplitude sequence as a doubled-space vector in the quantum vacuum."""
    if basis != CL_Q:
        raise BasisMismatch(
            "amplitude sequences live in the cl_q basis; convert operators "
            "to cl_q instead of embedding in plus_minus"
        )
    m1, m2 = _check_cutoffs(cutoffs)
    amps = wavefunction.amplitudes
    kept = amps[: m1 + 1]
    dropped = float(np.sum(np.abs(amps[m1 + 1 :]) ** 2))
    if dropped > _EMBED_DROP_TOL:
        raise CutoffTooSmall(
            f"embedding at classical cutoff {m1} would discard weight {dropped:.3e}"
        )
    padded = np.zeros(m1 + 1, dtype=complex)
    padded[: kept.size] = kept
    qvac = np.zeros(m2 + 1, dtype=complex)
    qvac[0] = 1.0
    return np.kron(padded, qvac)


def interior_projector(
    cutoffs: tuple[int, int], interior_cut: int
) -> np.ndarray:
    """Boolean mask of components below the classical-mode interior cut.

    The quantum mode needs no masking: the generator's image of a
    quantum-vacuum state has no support above quantum level one, far
    from that mode's edge at any sensible cutoff.
    """
    m1, m2 = _check_cutoffs(cutoffs)
    if interior_cut < 0 or interior_cut > m1 - _EDGE_MARGIN:
        raise InvalidParams(
            f"interior cut {interior_cut} must lie in [0, {m1 - _EDGE_MARGIN}]"
        )
    cl_ok = np.arange(m1 + 1) <= interior_cut
    return np.kron(cl_ok, np.ones(m2 + 1, dtype=bool))


@dataclass(frozen=True)
class ResidualReport:
    """Norm split of the generator image of an embedded steady state.

    residual_norm covers classical-mode components at or below
    interior_cut and should vanish to numerical precision for a true
    steady state; edge_norm collects the rest, which is dominated by
    truncation-edge artifacts and shrinks as the cutoff grows.
    """

    residual_norm: float
    edge_norm: float
    interior_cut: int


def steady_residual(
    hamiltonian: OperatorMatrix,
    psi: SteadyWavefunction,
    interior_cut: int,
) -> ResidualReport:
    """Apply the generator to an embedded steady state and split the norm.

    The wavefunction should fill the classical cutoff (compute it with a
    fixed truncation equal to that cutoff); a shorter sequence is padded
    with zeros, which shifts the effective truncation edge inward and
    leaks artifacts into the interior.
    """
    if hamiltonian.basis_tag != CL_Q:
        raise BasisMismatch(
            "steady_residual expects the cl_q basis; run the operator "
            "through convert_basis first"
        )
    vec = embed_wavefunction(psi, hamiltonian.cutoffs)
    mask = interior_projector(hamiltonian.cutoffs, interior_cut)
    image = hamiltonian.entries @ vec
    return ResidualReport(
        residual_norm=float(np.linalg.norm(image[mask])),
        edge_norm=float(np.linalg.norm(image[~mask])),
        interior_cut=int(interior_cut),
    )


def candidate_density_matrix(
    wavefunction: SteadyWavefunction, cl_cutoff: int, q_cutoff: int
) -> np.ndarray:
    """Vector components in the plus/minus basis arranged as a matrix.

    Exploratory diagnostic.  The arrangement is trace-normalized when
    possible but is not the steady density matrix in general; compare it
    against the Lindblad solution to see how the two objects differ.
    """
    vec = embed_wavefunction(wavefunction, (cl_cutoff, q_cutoff))
    w = mixing_unitary((cl_cutoff, q_cutoff))
    vpm = w.conj().T @ vec
    cand = vpm.reshape(cl_cutoff + 1, q_cutoff + 1)
    tr = complex(np.trace(cand))
    if abs(tr) > 1e-300:
        cand = cand / tr
    return cand
