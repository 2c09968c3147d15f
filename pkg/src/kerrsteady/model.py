"""Model parameters and the derived quantities the solvers consume.

The physical system is a single-mode Kerr resonator with coherent drive,
one-photon loss, and optionally two-photon drive and loss.  In a frame
rotating at the drive frequency the Hamiltonian is

    H = delta_c a^dag a + chi a^dag^2 a^2 + i omega (a^dag - a)
        + (lambda_2ph / 2) a^dag^2 + (lambda_2ph^* / 2) a^2

and the master equation adds the dissipators gamma D[a] and kappa D[a^2].

All frequencies share one unit; only ratios matter, which
:func:`params_from_dict` exploits for config files that specify, say,
delta_c / chi directly.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
from dataclasses import dataclass

from .errors import InvalidParams

_ABS_KEYS = ("delta_c", "chi", "omega", "gamma", "lambda_re", "lambda_im", "kappa")


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the driven-dissipative Kerr resonator.

    Attributes
    ----------
    delta_c : float
        Cavity detuning from the drive frame.
    chi : float
        Kerr nonlinearity.
    omega : float
        Coherent (one-photon) drive amplitude.
    gamma : float
        One-photon loss rate, strictly positive.
    lambda_2ph : complex
        Two-photon drive amplitude; zero for the coherently driven model.
    kappa : float
        Two-photon loss rate, nonnegative.
    """

    delta_c: float
    chi: float
    omega: float
    gamma: float
    lambda_2ph: complex = 0j
    kappa: float = 0.0

    def __post_init__(self):
        for name in ("delta_c", "chi", "omega", "gamma", "kappa"):
            v = getattr(self, name)
            try:
                v = float(v)
            except (TypeError, ValueError):
                raise InvalidParams(f"{name} must be a finite real number, got {v!r}") from None
            if not math.isfinite(v):
                raise InvalidParams(f"{name} must be a finite real number, got {v!r}")
            object.__setattr__(self, name, v)
        lam = complex(self.lambda_2ph)
        if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
            raise InvalidParams(f"lambda_2ph must be finite, got {self.lambda_2ph!r}")
        object.__setattr__(self, "lambda_2ph", lam)
        if self.gamma <= 0.0:
            raise InvalidParams(f"gamma must be > 0, got {self.gamma}")
        if self.kappa < 0.0:
            raise InvalidParams(f"kappa must be >= 0, got {self.kappa}")

    @property
    def is_two_photon(self) -> bool:
        """True when either two-photon term is switched on."""
        return self.lambda_2ph != 0 or self.kappa != 0.0

    def replace(self, **kw) -> "ModelParams":
        return dataclasses.replace(self, **kw)

    def to_dict(self) -> dict:
        """Flat config-file form; params_from_dict inverts it exactly."""
        return {
            "delta_c": self.delta_c,
            "chi": self.chi,
            "omega": self.omega,
            "gamma": self.gamma,
            "lambda_re": self.lambda_2ph.real,
            "lambda_im": self.lambda_2ph.imag,
            "kappa": self.kappa,
        }


@dataclass(frozen=True)
class LinearDerived:
    """Derived inputs of the coherently driven closed form.

    epsilon = -i omega / chi and x = (2 delta_c - i gamma) / (2 chi); the
    steady-state amplitudes are beta_m = (sqrt(2) epsilon)^m / (sqrt(m!) (x)_m).
    """

    epsilon: complex
    x: complex


@dataclass(frozen=True)
class TwoPhotonDerived:
    """Derived inputs of the two-photon closed form.

    lambda_disp = i sqrt(2 lambda_2ph / (2 chi - i kappa)) (principal square
    root), and the Gauss-sum parameters

        y = (-2i sqrt(2) omega + lambda_disp (2 delta_c - i gamma))
            / (2 lambda_disp (2 chi - i kappa)),
        z = (2 delta_c - i gamma) / (2 chi - i kappa).

    For omega = 0, y = z / 2 exactly, which kills every odd amplitude.
    """

    lambda_disp: complex
    y: complex
    z: complex


def derive_linear(params: ModelParams) -> LinearDerived:
    """Map physical parameters to the closed-form inputs (epsilon, x)."""
    if params.chi == 0.0:
        raise InvalidParams("derive_linear requires chi != 0")
    epsilon = -1j * params.omega / params.chi
    x = (2.0 * params.delta_c - 1j * params.gamma) / (2.0 * params.chi)
    return LinearDerived(epsilon=epsilon, x=x)


def derive_twophoton(params: ModelParams) -> TwoPhotonDerived:
    """Map physical parameters to the displaced-frame inputs (lambda_disp, y, z).

    Requires a nonzero two-photon drive; the pure two-photon-loss model
    (lambda_2ph = 0, kappa > 0) has no displaced closed form here and is
    rejected upstream.  chi = 0 is fine as long as kappa > 0 keeps the
    combination 2 chi - i kappa away from zero.
    """
    if params.chi == 0.0 and params.kappa == 0.0:
        raise InvalidParams("derive_twophoton requires 2*chi - i*kappa != 0")
    if params.lambda_2ph == 0:
        raise InvalidParams("derive_twophoton requires lambda_2ph != 0")
    denom = 2.0 * params.chi - 1j * params.kappa
    disp = 1j * cmath.sqrt(2.0 * params.lambda_2ph / denom)
    y = (-2j * math.sqrt(2.0) * params.omega + disp * (2.0 * params.delta_c - 1j * params.gamma)) / (
        2.0 * disp * denom
    )
    z = (2.0 * params.delta_c - 1j * params.gamma) / denom
    return TwoPhotonDerived(lambda_disp=disp, y=y, z=z)


def params_from_dict(raw: dict) -> ModelParams:
    """Build :class:`ModelParams` from a flat config mapping.

    Two key styles are accepted and may not be mixed for the same
    quantity.  Absolute keys give frequencies directly::

        {"delta_c": 5.0, "chi": -0.25, "omega": 4.0, "gamma": 1.0}

    Ratio keys divide by a declared anchor, either gamma or chi.  The
    anchor's own absolute value defaults to 1::

        {"unit": "chi", "delta_c_over_chi": -1.0, "gamma_over_chi": 0.1,
         "kappa_over_chi": 0.1, "lambda_re_over_chi": 0.2}

    Unknown keys raise InvalidParams so config typos fail loudly.
    """
    if not isinstance(raw, dict):
        raise InvalidParams(f"config must be a mapping, got {type(raw).__name__}")
    d = dict(raw)
    unit = d.pop("unit", None)
    if unit is None:
        return _params_from_absolute(d)
    if unit not in ("gamma", "chi"):
        raise InvalidParams(f"unit must be 'gamma' or 'chi', got {unit!r}")

    anchor = d.pop(unit, 1.0)
    if not isinstance(anchor, (int, float)) or not math.isfinite(anchor) or anchor == 0:
        raise InvalidParams(f"anchor {unit} must be finite and nonzero, got {anchor!r}")
    suffix = f"_over_{unit}"
    values = {unit: float(anchor)}
    for key, val in d.items():
        if not key.endswith(suffix):
            raise InvalidParams(
                f"key {key!r} is not valid in ratio mode (expected *{suffix})"
            )
        base = key[: -len(suffix)]
        if base not in _ABS_KEYS or base == unit:
            raise InvalidParams(f"unknown or conflicting ratio key {key!r}")
        if not isinstance(val, (int, float)) or not math.isfinite(val):
            raise InvalidParams(f"{key} must be finite, got {val!r}")
        values[base] = float(val) * float(anchor)
    return _params_from_absolute(values)


def _params_from_absolute(d: dict) -> ModelParams:
    unknown = set(d) - set(_ABS_KEYS)
    if unknown:
        raise InvalidParams(f"unknown config keys: {sorted(unknown)}")
    for key, val in d.items():
        if not isinstance(val, (int, float)) or not math.isfinite(val):
            raise InvalidParams(f"{key} must be finite, got {val!r}")
    missing = {"delta_c", "chi", "gamma"} - set(d)
    if missing:
        raise InvalidParams(f"missing required config keys: {sorted(missing)}")
    return ModelParams(
        delta_c=float(d["delta_c"]),
        chi=float(d["chi"]),
        omega=float(d.get("omega", 0.0)),
        gamma=float(d["gamma"]),
        lambda_2ph=complex(float(d.get("lambda_re", 0.0)), float(d.get("lambda_im", 0.0))),
        kappa=float(d.get("kappa", 0.0)),
    )
