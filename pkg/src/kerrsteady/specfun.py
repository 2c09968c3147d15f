"""Scalar special functions backing the closed-form steady-state solvers.

Everything here works on plain Python complex numbers.  The four public
entry points are

* :func:`log_gamma`, the principal-branch complex log-gamma,
* :func:`pochhammer`, rising factorials evaluated by direct product,
* :func:`hyp0f2`, the generalized hypergeometric series 0F2(; b1, b2; z),
* :func:`hyp2f1_terminating`, the terminating Gauss sum 2F1(-m, y; z; 2).

The 0F2 series appears in normalization constants and correlation functions
of the coherently driven model; the terminating 2F1 at argument 2 builds the
displaced-frame wavefunction of the two-photon model.  Both are summed
directly with compensated accumulation because the argument-2 Gauss sum
cancels severely for large order m.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DenominatorPole, InvalidParams, NonConvergence, PoleError

_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_2PI = math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

_POLE_GUARD = 1e-12
_SERIES_TOL = 1e-16
_SERIES_CAP = 100_000
_CONSECUTIVE_SMALL = 5
_UNDERFLOW_FLOOR = 1e-300
_OVERFLOW_CEIL = 1e300


@dataclass
class SeriesResult:
    """Value of a truncated series together with convergence evidence.

    Attributes
    ----------
    value : complex
        Partial sum at termination.
    terms_used : int
        Number of terms accumulated.
    converged : bool
        True when the small-term exit fired, False when the term cap did.
    tail_estimate : float
        Largest relative magnitude |term| / |partial sum| among the final
        run of small terms; an upper-bound proxy for the discarded tail.
    """

    value: complex
    terms_used: int
    converged: bool
    tail_estimate: float


def _check_finite(name: str, value: complex) -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise InvalidParams(f"{name} must be finite, got {value!r}")
    return value


def log_gamma(z: complex) -> complex:
    """Principal-branch log-gamma of a complex argument.

    Lanczos approximation (g = 7, nine coefficients) on Re z >= 1/2 and
    the reflection formula below, arranged so the result follows the
    standard analytic continuation of log Gamma rather than log composed
    with Gamma.  Relative accuracy is about 1e-15 for |z| <= 200.

    Raises
    ------
    PoleError
        If z lies within 1e-12 of a pole (a nonpositive integer).
    """
    z = _check_finite("z", z)
    if z.real < 0.5:
        nearest = round(z.real)
        if nearest <= 0 and abs(complex(z.real - nearest, z.imag)) < _POLE_GUARD:
            raise PoleError(f"log_gamma pole at nonpositive integer near z={z!r}")
        if z.imag < 0.0:
            return log_gamma(z.conjugate()).conjugate()
        return _LOG_PI - _log_sin_pi_upper(z) - _lanczos(1.0 - z)
    return _lanczos(z)


def _lanczos(z: complex) -> complex:
    acc = _LANCZOS_COEF[0] + 0j
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z - 1.0 + i)
    t = z + (_LANCZOS_G - 0.5)
    return 0.5 * _LOG_2PI + (z - 0.5) * cmath.log(t) - t + cmath.log(acc)


def _log_sin_pi_upper(z: complex) -> complex:
    # Valid for Im z >= 0: factor out exp(-i pi z) so nothing overflows and
    # the branch tracks the continuation used by standard lgamma tables.
    return -1j * cmath.pi * z + cmath.log((cmath.exp(2j * cmath.pi * z) - 1.0) / 2j)


def pochhammer(x: complex, m: int) -> complex:
    """Rising factorial (x)_m = x (x+1) ... (x+m-1) by direct product.

    The direct product stays exact at negative integer x where a
    gamma-function quotient would hit poles; (x)_0 = 1 identically.
    """
    if not isinstance(m, int) or m < 0:
        raise InvalidParams(f"pochhammer order must be a nonnegative integer, got {m!r}")
    x = _check_finite("x", x)
    acc = 1.0 + 0j
    for j in range(m):
        acc *= x + j
    return acc


def hyp0f2(b1: complex, b2: complex, z: complex) -> SeriesResult:
    """Generalized hypergeometric series 0F2(; b1, b2; z).

    Terms are accumulated until the last five each satisfy
    |term| / |partial sum| < 1e-16, with a hard cap of 1e5 terms.  The
    series converges for every finite z (factorial-cubed denominators),
    so the cap only fires for astronomically large |z|.

    Raises
    ------
    DenominatorPole
        If b1 or b2 sits within 1e-12 of a nonpositive integer, or a
        running Pochhammer factor underflows below 1e-300.
    NonConvergence
        If the term cap fires first or the partial sum leaves the double
        range.
    """
    b1 = _check_finite("b1", b1)
    b2 = _check_finite("b2", b2)
    z = _check_finite("z", z)
    for name, b in (("b1", b1), ("b2", b2)):
        nearest = round(b.real)
        if nearest <= 0 and abs(complex(b.real - nearest, b.imag)) < _POLE_GUARD:
            raise DenominatorPole(
                f"hyp0f2 parameter {name}={b!r} within {_POLE_GUARD} of a nonpositive integer"
            )
    if z == 0:
        return SeriesResult(1.0 + 0j, 1, True, 0.0)

    total = 1.0 + 0j
    comp = 0.0 + 0j
    term = 1.0 + 0j
    small_run = 0
    tail = 1.0
    for m in range(_SERIES_CAP):
        denom = (b1 + m) * (b2 + m) * (m + 1)
        if abs(denom) < _UNDERFLOW_FLOOR:
            raise DenominatorPole(f"hyp0f2 denominator underflow at term {m + 1}")
        term = term * z / denom
        # Kahan step
        yv = term - comp
        tv = total + yv
        comp = (tv - total) - yv
        total = tv
        if abs(total) > _OVERFLOW_CEIL:
            raise NonConvergence("hyp0f2 partial sum exceeds double range")
        rel = abs(term) / max(abs(total), _UNDERFLOW_FLOOR)
        if rel < _SERIES_TOL:
            small_run += 1
            tail = max(tail if small_run > 1 else 0.0, rel)
            if small_run >= _CONSECUTIVE_SMALL:
                return SeriesResult(total, m + 2, True, tail)
        else:
            small_run = 0
            tail = rel
    raise NonConvergence(f"hyp0f2 did not converge within {_SERIES_CAP} terms")


def hyp0f2_ratio(
    bn1: complex, bn2: complex, bd1: complex, bd2: complex, z: complex
) -> complex:
    """Ratio 0F2(; bn1, bn2; z) / 0F2(; bd1, bd2; z) with joint rescaling.

    Both series are summed in lockstep and both partial sums are divided
    by a common factor whenever either grows past 1e250, so the ratio is
    available even where the individual series overflow doubles.  Used by
    the correlation formulas, whose value is always such a ratio.
    """
    for name, b in (("bn1", bn1), ("bn2", bn2), ("bd1", bd1), ("bd2", bd2)):
        b = _check_finite(name, b)
        nearest = round(b.real)
        if nearest <= 0 and abs(complex(b.real - nearest, b.imag)) < _POLE_GUARD:
            raise DenominatorPole(
                f"hyp0f2_ratio parameter {name}={b!r} within {_POLE_GUARD} of a nonpositive integer"
            )
    z = _check_finite("z", z)

    num = 1.0 + 0j
    den = 1.0 + 0j
    tn = 1.0 + 0j
    td = 1.0 + 0j
    small_run = 0
    for m in range(_SERIES_CAP):
        dn = (bn1 + m) * (bn2 + m) * (m + 1)
        dd = (bd1 + m) * (bd2 + m) * (m + 1)
        if min(abs(dn), abs(dd)) < _UNDERFLOW_FLOOR:
            raise DenominatorPole(f"hyp0f2_ratio denominator underflow at term {m + 1}")
        tn = tn * z / dn
        td = td * z / dd
        num += tn
        den += td
        scale = max(abs(num), abs(den), abs(tn), abs(td))
        if scale > 1e250:
            num /= scale
            den /= scale
            tn /= scale
            td /= scale
        rel = max(abs(tn), abs(td)) / max(abs(num), abs(den), _UNDERFLOW_FLOOR)
        if rel < _SERIES_TOL:
            small_run += 1
            if small_run >= _CONSECUTIVE_SMALL:
                break
        else:
            small_run = 0
    else:
        raise NonConvergence(f"hyp0f2_ratio did not converge within {_SERIES_CAP} terms")
    if abs(den) < _UNDERFLOW_FLOOR:
        raise DenominatorPole("hyp0f2_ratio denominator series summed to zero")
    return num / den


# Compensated double-double kernel for the terminating Gauss sum.  Values
# are (hi, lo) pairs with |lo| <= ulp(hi)/2, giving about 32 significant
# digits; complex quantities carry one pair per component.  Plain Kahan
# compensation of the running sum is not enough here because the terms
# themselves, formed in doubles, carry O(eps * |term|) rounding while the
# absolute-term mass grows like 3^m: by m = 30 that wipes out the result.
# Forming the terms with error-free transformations pushes the wall to
# m ~ 65, far past every order the solvers request.

_SPLITTER = 134217729.0  # 2**27 + 1, Veltkamp splitting constant


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ca = _SPLITTER * a
    ah = ca - (ca - a)
    al = a - ah
    cb = _SPLITTER * b
    bh = cb - (cb - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    s, e = _two_sum(x[0], y[0])
    e += x[1] + y[1]
    hi, lo = _two_sum(s, e)
    return hi, lo


def _dd_mul(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    p, e = _two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    hi, lo = _two_sum(p, e)
    return hi, lo


def _dd_div(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    q0 = x[0] / y[0]
    p, e = _two_prod(q0, y[0])
    r_hi = x[0] - p
    r_lo = x[1] - e - q0 * y[1]
    q1 = (r_hi + r_lo) / y[0]
    hi, lo = _two_sum(q0, q1)
    return hi, lo


def _cdd_add(x, y):
    return _dd_add(x[0], y[0]), _dd_add(x[1], y[1])


def _cdd_mul(x, y):
    re = _dd_add(_dd_mul(x[0], y[0]), _dd_mul((-x[1][0], -x[1][1]), y[1]))
    im = _dd_add(_dd_mul(x[0], y[1]), _dd_mul(x[1], y[0]))
    return re, im


def _cdd_div(x, w):
    # conjugate trick; w arrives as a complex double-double
    conj_w = (w[0], (-w[1][0], -w[1][1]))
    num = _cdd_mul(x, conj_w)
    den = _dd_add(_dd_mul(w[0], w[0]), _dd_mul(w[1], w[1]))
    return _dd_div(num[0], den), _dd_div(num[1], den)


def hyp2f1_terminating(m: int, y: complex, z: complex) -> complex:
    """Terminating Gauss sum 2F1(-m, y; z; 2), exactly m + 1 terms.

    At argument 2 the terms alternate in sign and grow before they shrink;
    their absolute mass reaches about 3^m while the sum stays of order one,
    so every digit of cancellation must be paid for in working precision.
    Terms and the running sum are therefore carried in compensated
    double-double arithmetic, which holds the result to near full double
    accuracy for every order the steady-state solvers use (m well below
    the ~65 where even 32 digits run out in the worst case y = z).

    Raises
    ------
    DenominatorPole
        If (z)_n vanishes for some n <= m (z a nonpositive integer above
        -m) or underflows below 1e-300.
    """
    if not isinstance(m, int) or m < 0:
        raise InvalidParams(f"hyp2f1_terminating order must be a nonnegative integer, got {m!r}")
    y = _check_finite("y", y)
    z = _check_finite("z", z)

    one = (1.0, 0.0)
    zero = (0.0, 0.0)
    total = (one, zero)
    term = (one, zero)
    poch_z = 1.0 + 0j
    for n in range(1, m + 1):
        j = float(n - 1)
        poch_z *= z + (n - 1)
        if abs(poch_z) < _UNDERFLOW_FLOOR:
            raise DenominatorPole(
                f"hyp2f1_terminating: (z)_{n} vanished or underflowed for z={z!r}"
            )
        # every shifted parameter enters as an exact double-double so the
        # term recurrence never touches ordinary rounding
        yj = (_two_sum(y.real, j), (y.imag, 0.0))
        zj = (_two_sum(z.real, j), (z.imag, 0.0))
        term = _cdd_mul(term, ((float(2 * (n - 1 - m)), 0.0), zero))
        term = (_dd_div(term[0], (float(n), 0.0)), _dd_div(term[1], (float(n), 0.0)))
        term = _cdd_mul(term, yj)
        term = _cdd_div(term, zj)
        total = _cdd_add(total, term)
    return complex(total[0][0] + total[0][1], total[1][0] + total[1][1])
