"""Closed-form steady state of the coherently driven Kerr resonator.

The steady state is encoded by a wavefunction-like amplitude sequence on
the Fock ladder.  With the reduced drive ``epsilon`` and detuning-loss
ratio ``x`` (see model.derive_linear), the unnormalized amplitudes obey
the one-term recursion

    beta_m = sqrt(2/m) * epsilon / (x + m - 1) * beta_{m-1},    beta_0 = 1,

whose closed form is beta_m = (sqrt(2) epsilon)^m / (sqrt(m!) (x)_m) with
(x)_m the rising factorial.  The squared-amplitude sum equals the
generalized hypergeometric value 0F2(; conj(x), x; 2|epsilon|^2), and
normally ordered moments reduce to ratios of shifted 0F2 values.  Every
moment is computed along both routes, the hypergeometric ratio and the
direct amplitude sum, and the two must agree before a value is released.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CrossCheckFailure,
    DenominatorPole,
    InvalidParams,
    InvariantViolation,
    NonConvergence,
    UnsupportedModel,
)
from .model import LinearDerived, ModelParams, derive_linear
from .specfun import hyp0f2, hyp0f2_ratio, pochhammer

_POLE_GUARD = 1e-12
_TAIL_RUN = 3
_NORM_XCHECK_TOL = 1e-8
_MOMENT_XCHECK_TOL = 1e-9
_MAX_MOMENT_ORDER = 16

# Moments from the amplitude representation carry one factor sqrt(2) per
# operator order that the closed form does not; this rescaling removes it.
_AMP_MOMENT_SCALE = 0.5


@dataclass
class SteadyWavefunction:
    """Amplitude-sequence representation of a steady state.

    amplitudes holds the normalized sequence (unit squared sum) up to
    Fock index `truncation`.  norm_constant is the squared sum of the
    unnormalized recursion output, which doubles as the hypergeometric
    normalization value.  tail_mass is the normalized weight of the
    highest kept level, an upper-bound proxy for the discarded weight
    since the weights decay faster than geometrically once the stopping
    rule fires.
    """

    amplitudes: np.ndarray
    truncation: int
    norm_constant: float
    tail_mass: float
    converged: bool
    params: ModelParams | None = field(repr=False, default=None)


@dataclass(frozen=True)
class CorrelationResult:
    """One normally ordered moment <a^dag^l a^k> with its cross-check.

    value comes from the route documented by the producing function;
    crosscheck_gap is the absolute difference against the independent
    second route, already verified below tolerance (the producer raises
    CrossCheckFailure instead of returning otherwise).  truncation is the
    Fock depth of the amplitude sequence involved.
    """

    value: complex
    l: int
    k: int
    crosscheck_gap: float
    truncation: int


def _tail_rule_fired(weights: list[float], total: float, tail_tol: float) -> bool:
    """True when the trailing run of squared amplitudes is negligible."""
    if len(weights) < _TAIL_RUN + 1:
        return False
    return all(w <= tail_tol * total for w in weights[-_TAIL_RUN:])


def _raw_amplitudes(
    derived: LinearDerived,
    tail_tol: float,
    max_truncation: int,
    truncation: int | None,
) -> tuple[list[complex], bool]:
    """Run the recursion; return unnormalized amplitudes and convergence."""
    eps, x = derived.epsilon, derived.x
    betas = [complex(1.0)]
    weights = [1.0]
    total = 1.0
    limit = max_truncation if truncation is None else truncation
    converged = False
    m = 0
    while m < limit:
        m += 1
        denom = x + (m - 1)
        if abs(denom) < _POLE_GUARD * max(1.0, abs(x) + m):
            raise DenominatorPole(
                f"amplitude recursion denominator x + {m - 1} vanishes at x={x!r}"
            )
        betas.append(betas[-1] * math.sqrt(2.0 / m) * eps / denom)
        w = abs(betas[-1]) ** 2
        weights.append(w)
        total += w
        if truncation is None and _tail_rule_fired(weights, total, tail_tol):
            converged = True
            break
    if truncation is not None:
        converged = _tail_rule_fired(weights, total, tail_tol)
    if truncation is None and not converged:
        raise NonConvergence(
            f"amplitude tail not negligible by Fock index {max_truncation}"
        )
    return betas, converged


def wavefunction_linear(
    params: ModelParams,
    tail_tol: float = 1e-16,
    max_truncation: int = 4096,
    truncation: int | None = None,
) -> SteadyWavefunction:
    """Steady-state amplitude sequence for the linearly driven model.

    Parameters
    ----------
    params : ModelParams
        Must describe the linear model (no two-photon pump or loss).
    tail_tol : float
        Relative squared-amplitude level below which a run of
        consecutive levels counts as a negligible tail.
    max_truncation : int
        Abort with NonConvergence past this Fock index.
    truncation : int, optional
        Compute exactly this many levels instead of stopping adaptively.
        Useful when a fixed-size vector is needed downstream; `converged`
        then reports whether the tail rule held at that size.
    """
    if params.is_two_photon or params.kappa != 0.0:
        raise UnsupportedModel(
            "two-photon pump or loss present; use the two-photon solver"
        )
    derived = derive_linear(params)
    betas, converged = _raw_amplitudes(derived, tail_tol, max_truncation, truncation)

    amps = np.asarray(betas, dtype=complex)
    norm_series = float(np.sum(np.abs(amps) ** 2))
    w = 2.0 * abs(derived.epsilon) ** 2
    norm_hyper = hyp0f2(derived.x.conjugate(), derived.x, w).value
    if abs(norm_hyper.imag) > _NORM_XCHECK_TOL * abs(norm_hyper) or not math.isclose(
        norm_series, norm_hyper.real, rel_tol=_NORM_XCHECK_TOL
    ):
        raise CrossCheckFailure(
            "normalization mismatch between amplitude sum "
            f"{norm_series!r} and hypergeometric value {norm_hyper!r}"
        )
    return SteadyWavefunction(
        amplitudes=amps / math.sqrt(norm_series),
        truncation=len(betas) - 1,
        norm_constant=norm_series,
        tail_mass=float(abs(amps[-1]) ** 2 / norm_series),
        converged=converged,
        params=params,
    )


def amplitude_moment(wavefunction: SteadyWavefunction, l: int, k: int) -> complex:
    """Normally ordered moment <a^dag^l a^k> from the amplitude sequence.

    The sum sqrt((m+l)! (m+k)!) / m! over conj(c_{m+l}) c_{m+k}
    overcounts each operator order by sqrt(2), hence the rescaling.
    """
    if l < 0 or k < 0 or l > _MAX_MOMENT_ORDER or k > _MAX_MOMENT_ORDER:
        raise InvalidParams(
            f"moment orders must lie in [0, {_MAX_MOMENT_ORDER}], got l={l}, k={k}"
        )
    c = wavefunction.amplitudes
    top = len(c) - 1 - max(l, k)
    acc = complex(0.0)
    for m in range(top + 1):
        weight = math.exp(
            0.5 * (math.lgamma(m + l + 1) + math.lgamma(m + k + 1))
            - math.lgamma(m + 1)
        )
        acc += np.conj(c[m + l]) * c[m + k] * weight
    return acc * _AMP_MOMENT_SCALE ** ((l + k) / 2.0)


def correlation_linear(params: ModelParams, l: int, k: int) -> CorrelationResult:
    """Normally ordered moment <a^dag^l a^k> in closed form.

    The value is the hypergeometric-ratio expression; the amplitude-sum
    route is evaluated alongside it and a CrossCheckFailure is raised if
    the two drift apart.
    """
    if l < 0 or k < 0 or l > _MAX_MOMENT_ORDER or k > _MAX_MOMENT_ORDER:
        raise InvalidParams(
            f"moment orders must lie in [0, {_MAX_MOMENT_ORDER}], got l={l}, k={k}"
        )
    if params.is_two_photon or params.kappa != 0.0:
        raise UnsupportedModel(
            "two-photon pump or loss present; use the two-photon solver"
        )
    derived = derive_linear(params)
    eps, x = derived.epsilon, derived.x
    w = 2.0 * abs(eps) ** 2
    xc = x.conjugate()
    prefactor = (
        eps.conjugate() ** l * eps**k / (pochhammer(xc, l) * pochhammer(x, k))
    )
    value = prefactor * hyp0f2_ratio(xc + l, x + k, xc, x, w)

    wf = wavefunction_linear(params)
    check = amplitude_moment(wf, l, k)
    gap = abs(value - check)
    if gap > _MOMENT_XCHECK_TOL * max(abs(value), abs(check)) + 1e-14:
        raise CrossCheckFailure(
            f"moment l={l}, k={k} disagrees between hypergeometric route "
            f"{value!r} and amplitude route {check!r}"
        )
    return CorrelationResult(
        value=value, l=l, k=k, crosscheck_gap=gap, truncation=wf.truncation
    )


def photon_number_linear(params: ModelParams) -> float:
    """Steady-state photon number <a^dag a> for the linearly driven model."""
    value = correlation_linear(params, 1, 1).value
    if abs(value.imag) > 1e-9 * max(1.0, abs(value.real)):
        raise InvariantViolation(
            f"photon number acquired an imaginary part: {value!r}"
        )
    return value.real


@dataclass(frozen=True)
class ExactSweepRow:
    """One drive point of an exact sweep: occupation, field, and g2."""

    omega: float
    n: float
    amplitude: complex
    g2: float


def exact_drive_point(params: ModelParams, omega: float) -> ExactSweepRow:
    """Occupation, field, and g2 at one drive amplitude."""
    om = float(omega)
    if not math.isfinite(om) or om < 0.0:
        raise InvalidParams(f"drive values must be finite and >= 0, got {om!r}")
    at_om = params.replace(omega=om)
    n = photon_number_linear(at_om)
    amplitude = correlation_linear(at_om, 0, 1).value
    numerator = correlation_linear(at_om, 2, 2).value.real
    g2 = numerator / n**2 if n**2 > 0.0 else float("nan")
    return ExactSweepRow(omega=om, n=n, amplitude=amplitude, g2=g2)


def sweep_drive_exact(params: ModelParams, omega_grid) -> list[ExactSweepRow]:
    """Exact single-valued response across a drive grid, in grid order.

    Each row carries <a^dag a>, <a>, and the equal-time second-order
    coherence g2 = <a^dag^2 a^2> / <a^dag a>^2 (nan at zero drive, where
    the occupation vanishes).
    """
    return [exact_drive_point(params, om) for om in omega_grid]
