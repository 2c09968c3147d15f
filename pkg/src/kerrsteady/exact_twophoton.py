"""Closed-form steady state with a two-photon pump and two-photon loss.

After displacing by the pump-induced scale (model.derive_twophoton), the
steady-state amplitude at Fock index m is a terminating Gauss
hypergeometric polynomial,

    beta_m = (-lambda_disp)^m / sqrt(m!) * 2F1(-m, y; z; 2),

which is the production route here.  The same amplitudes obey a
three-term recursion,

    [(2 delta_c - i gamma) + (2 chi - i kappa)(m - 1)] sqrt(m) beta_m
        = -2i sqrt(2) omega beta_{m-1} - 2 lambda_2ph sqrt(m-1) beta_{m-2},

with beta_0 = 1, exposed as a separate operation so the two routes can
be compared elementwise.  Every production call additionally verifies
its low-lying amplitudes against the recursion before releasing values.

Moments come from amplitude sums; there is no compact ratio form as in
the linear model, so each moment is recomputed through the printed
normalization-and-sum arrangement fed by recursion amplitudes, and the
two results must agree before a value is released.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CrossCheckFailure,
    DenominatorPole,
    InvalidParams,
    InvariantViolation,
    NonConvergence,
    UnsupportedModel,
)
from .exact_linear import (
    CorrelationResult,
    SteadyWavefunction,
    _tail_rule_fired,
    amplitude_moment,
    correlation_linear,
    wavefunction_linear,
)
from .model import ModelParams, derive_twophoton
from .specfun import hyp2f1_terminating

_POLE_GUARD = 1e-12
_XCHECK_MAX_INDEX = 16
_XCHECK_AMP_FLOOR = 1e-12
_XCHECK_TOL = 1e-9
_MOMENT_XCHECK_TOL = 1e-9
_MAX_MOMENT_ORDER = 16


def _require_twophoton(params: ModelParams) -> None:
    if params.lambda_2ph == 0 and params.kappa > 0.0:
        raise UnsupportedModel(
            "two-photon loss without a two-photon pump is outside the "
            "closed-form family"
        )


def _recursion_amplitudes(
    params: ModelParams,
    tail_tol: float,
    max_truncation: int,
    truncation: int | None,
) -> tuple[list[complex], bool]:
    """Forward three-term recursion for the unnormalized amplitudes."""
    drive = -2j * math.sqrt(2.0) * params.omega
    diag0 = 2.0 * params.delta_c - 1j * params.gamma
    diag1 = 2.0 * params.chi - 1j * params.kappa
    pump = 2.0 * params.lambda_2ph

    betas = [complex(1.0)]
    weights = [1.0]
    total = 1.0
    limit = max_truncation if truncation is None else truncation
    converged = False
    m = 0
    while m < limit:
        m += 1
        coeff = diag0 + diag1 * (m - 1)
        if abs(coeff) < _POLE_GUARD * (abs(diag0) + abs(diag1) * m):
            raise DenominatorPole(
                f"three-term recursion coefficient vanishes at index {m}"
            )
        rhs = drive * betas[m - 1]
        if m >= 2:
            rhs -= pump * math.sqrt(m - 1.0) * betas[m - 2]
        betas.append(rhs / (math.sqrt(float(m)) * coeff))
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


def _closed_form_amplitudes(
    params: ModelParams,
    tail_tol: float,
    max_truncation: int,
    truncation: int | None,
) -> tuple[list[complex], bool]:
    """Unnormalized amplitudes from the polynomial closed form.

    The running prefactor (-lambda_disp)^m / sqrt(m!) decays fast enough
    that the product stays bounded, but the bare polynomial value can
    overflow once the index reaches several hundred; that surfaces as a
    NonConvergence pointing at the recursion route, which has no such
    ceiling.
    """
    derived = derive_twophoton(params)
    lam, y, z = derived.lambda_disp, derived.y, derived.z
    betas = [complex(1.0)]
    weights = [1.0]
    total = 1.0
    scale = complex(1.0)
    limit = max_truncation if truncation is None else truncation
    converged = False
    m = 0
    while m < limit:
        m += 1
        scale *= -lam / math.sqrt(float(m))
        value = scale * hyp2f1_terminating(m, y, z)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise NonConvergence(
                f"polynomial value overflowed at Fock index {m}; "
                "use wavefunction_via_three_term for this regime"
            )
        betas.append(value)
        w = abs(value) ** 2
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


def _spot_check_against_recursion(params: ModelParams, betas: list[complex]) -> None:
    """Compare low-lying closed-form output against the recursion route."""
    top = min(len(betas) - 1, _XCHECK_MAX_INDEX)
    reference, _ = _recursion_amplitudes(params, 0.0, top, top)
    peak = max(abs(b) for b in betas[: top + 1])
    for m in range(top + 1):
        if abs(betas[m]) < _XCHECK_AMP_FLOOR * peak:
            continue
        gap = abs(betas[m] - reference[m])
        if gap > _XCHECK_TOL * max(abs(betas[m]), abs(reference[m])):
            raise CrossCheckFailure(
                f"amplitude {m} disagrees between closed form {betas[m]!r} "
                f"and recursion {reference[m]!r}"
            )


def _package(
    params: ModelParams, betas: list[complex], converged: bool
) -> SteadyWavefunction:
    amps = np.asarray(betas, dtype=complex)
    norm = float(np.sum(np.abs(amps) ** 2))
    return SteadyWavefunction(
        amplitudes=amps / math.sqrt(norm),
        truncation=len(betas) - 1,
        norm_constant=norm,
        tail_mass=float(abs(amps[-1]) ** 2 / norm),
        converged=converged,
        params=params,
    )


def wavefunction_twophoton(
    params: ModelParams,
    tail_tol: float = 1e-16,
    max_truncation: int = 4096,
    truncation: int | None = None,
) -> SteadyWavefunction:
    """Steady-state amplitude sequence from the polynomial closed form.

    Falls back to the linear solver when the pump and two-photon loss are
    both absent; refuses two-photon loss without a pump, which has no
    closed form in this family.  Arguments mirror wavefunction_linear.
    Low-lying amplitudes are checked against the three-term recursion on
    every call.
    """
    if params.lambda_2ph == 0 and params.kappa == 0.0:
        return wavefunction_linear(
            params,
            tail_tol=tail_tol,
            max_truncation=max_truncation,
            truncation=truncation,
        )
    _require_twophoton(params)
    betas, converged = _closed_form_amplitudes(params, tail_tol, max_truncation, truncation)
    _spot_check_against_recursion(params, betas)
    return _package(params, betas, converged)


def wavefunction_via_three_term(
    params: ModelParams,
    tail_tol: float = 1e-16,
    max_truncation: int = 4096,
    truncation: int | None = None,
) -> SteadyWavefunction:
    """Steady-state amplitude sequence from the three-term recursion.

    Independent evaluation route kept separate from the closed form so
    the two can be compared elementwise.  With the pump and two-photon
    loss both absent the recursion degenerates term by term into the
    linear model's one-term recursion, so that family is accepted here
    (and produces the same amplitudes as wavefunction_linear); only
    two-photon loss without a pump is refused, as in the closed form.
    """
    _require_twophoton(params)
    betas, converged = _recursion_amplitudes(params, tail_tol, max_truncation, truncation)
    return _package(params, betas, converged)


def correlation_twophoton(params: ModelParams, l: int, k: int) -> CorrelationResult:
    """Normally ordered moment <a^dag^l a^k> for the two-photon model.

    The value is the amplitude sum over the closed-form wavefunction.
    The cross route recomputes it through the printed arrangement: the
    unnormalized sequence F_m = beta_m sqrt(m!) from the recursion,
    combined as sum_m F*_{m+l} F_{m+k} / m! over the norm sum_m |F_m|^2
    / m! and the 2^{-(l+k)/2} operator-scale factor.
    """
    if l < 0 or k < 0 or l > _MAX_MOMENT_ORDER or k > _MAX_MOMENT_ORDER:
        raise InvalidParams(
            f"moment orders must lie in [0, {_MAX_MOMENT_ORDER}], got l={l}, k={k}"
        )
    if params.lambda_2ph == 0 and params.kappa == 0.0:
        return correlation_linear(params, l, k)
    wf = wavefunction_twophoton(params)
    value = amplitude_moment(wf, l, k)

    betas, _ = _recursion_amplitudes(params, 0.0, wf.truncation, wf.truncation)
    seq = [b * math.exp(0.5 * math.lgamma(m + 1)) for m, b in enumerate(betas)]
    norm = sum(abs(f) ** 2 * math.exp(-math.lgamma(m + 1)) for m, f in enumerate(seq))
    acc = complex(0.0)
    for m in range(len(seq) - max(l, k)):
        acc += seq[m + l].conjugate() * seq[m + k] * math.exp(-math.lgamma(m + 1))
    check = acc / (norm * 2.0 ** ((l + k) / 2.0))

    gap = abs(value - check)
    if gap > _MOMENT_XCHECK_TOL * max(abs(value), abs(check)) + 1e-14:
        raise CrossCheckFailure(
            f"moment l={l}, k={k} disagrees between amplitude route "
            f"{value!r} and printed-form route {check!r}"
        )
    return CorrelationResult(
        value=value, l=l, k=k, crosscheck_gap=gap, truncation=wf.truncation
    )


def photon_number_twophoton(params: ModelParams) -> float:
    """Steady-state photon number <a^dag a> for the two-photon model."""
    value = correlation_twophoton(params, 1, 1).value
    if abs(value.imag) > 1e-9 * max(1.0, abs(value.real)):
        raise InvariantViolation(
            f"photon number acquired an imaginary part: {value!r}"
        )
    return value.real


@dataclass(frozen=True)
class ResonancePrediction:
    """Expected location and selection-rule status of one resonance.

    An n-photon resonance sits at delta_c / chi = -(n - 1).  Whether a
    drive can actually populate it: a coherent drive climbs the ladder
    one photon at a time and reaches every order, while a pure two-photon
    pump reaches only even orders.  With no drive at all nothing is
    reachable.
    """

    order: int
    detuning_over_chi: float
    allowed: bool


def resonance_predictions(n_max: int, params: ModelParams) -> list[ResonancePrediction]:
    """Selection-rule table for resonance orders 1 through n_max."""
    if n_max < 1:
        raise InvalidParams(f"n_max must be >= 1, got {n_max}")
    out = []
    for order in range(1, n_max + 1):
        allowed = params.omega != 0.0 or (order % 2 == 0 and params.lambda_2ph != 0)
        out.append(
            ResonancePrediction(
                order=order,
                detuning_over_chi=-float(order - 1),
                allowed=allowed,
            )
        )
    return out


@dataclass
class ResonanceScan:
    """Detuning sweep of the photon number with strict-peak flags.

    detunings holds absolute delta_c values as swept; photon_numbers and
    g2 are the exact steady-state responses per point.
    """

    detunings: np.ndarray
    photon_numbers: np.ndarray
    g2: np.ndarray
    peak_indices: tuple[int, ...]

    @property
    def peak_detunings(self) -> np.ndarray:
        return self.detunings[list(self.peak_indices)]


def strict_local_maxima(values) -> tuple[int, ...]:
    """Indices that strictly beat both neighbors; endpoints never count."""
    arr = np.asarray(values, dtype=float)
    return tuple(
        i
        for i in range(1, arr.size - 1)
        if arr[i] > arr[i - 1] and arr[i] > arr[i + 1]
    )


def scan_point(params: ModelParams, delta_c: float) -> tuple[float, float]:
    """Photon number and g2 at one detuning, from the production route.

    Moments here are bulk-evaluated from the production wavefunction
    (which still spot-checks its amplitudes per call); the moment-level
    dual route lives in correlation_twophoton.
    """
    wf = wavefunction_twophoton(params.replace(delta_c=float(delta_c)))
    n = amplitude_moment(wf, 1, 1).real
    pair = amplitude_moment(wf, 2, 2).real
    return n, (pair / n**2 if n > 0.0 else float("nan"))


def resonance_scan(params: ModelParams, detunings) -> ResonanceScan:
    """Sweep the detuning and locate photon-number maxima.

    Each grid value replaces params.delta_c; everything else is held
    fixed.  A maximum must strictly beat both neighbors, so plateaus and
    endpoints never count.
    """
    grid = np.asarray(detunings, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise InvalidParams("detuning grid must be one-dimensional with >= 3 points")
    numbers = np.empty(grid.size)
    coherence = np.empty(grid.size)
    for i, d in enumerate(grid):
        numbers[i], coherence[i] = scan_point(params, float(d))
    return ResonanceScan(
        detunings=grid,
        photon_numbers=numbers,
        g2=coherence,
        peak_indices=strict_local_maxima(numbers),
    )
