"""Admissible pair-potential families and their Gaussian-superposition measures.

Every potential here can be written as a superposition of Gaussians,

    f(r) = integral_0^inf exp(-r^2 t) rho(t) dt,

and the lattice-energy machinery only ever touches ``rho``.  Four
families are supported:

* ``riesz``: inverse power law ``r**-s``,
* ``yukawa``: screened Coulomb ``v * exp(-kappa r) / r``,
* ``double-yukawa``: difference of two Yukawa terms, normalized so the
  potential well sits at ``r = 1`` with depth ``-1``,
* ``yukawa-coulomb``: the limiting member with an unscreened attractive
  tail; its lattice sum only exists against a uniform neutralizing
  background, which the energy module applies.

For the normalized families the free parameters are ``(v1, kappa1)``
(double Yukawa) or ``kappa1`` alone (Yukawa-Coulomb); the remaining
parameters are derived once at construction and stored, since they sit
inside the innermost quadrature loops.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np
from scipy.special import gamma as _gamma

from .errors import ParameterDomainError

RIESZ = "riesz"
YUKAWA = "yukawa"
DOUBLE_YUKAWA = "double-yukawa"
YUKAWA_COULOMB = "yukawa-coulomb"

FAMILIES = (RIESZ, YUKAWA, DOUBLE_YUKAWA, YUKAWA_COULOMB)

#: Construction-time bound on the normalization residuals |f(1)+1|, |f'(1)|.
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class PotentialSpec:
    """One member of a potential family, with derived parameters attached."""

    family: str
    s: Optional[float] = None
    kappa: Optional[float] = None
    v: Optional[float] = None
    v1: Optional[float] = None
    kappa1: Optional[float] = None
    v2: Optional[float] = None
    kappa2: Optional[float] = None
    needs_background: bool = False
    norm_residuals: Optional[tuple] = None

    def to_json(self) -> str:
        data = {k: v for k, v in asdict(self).items() if v is not None and k != "norm_residuals"}
        if not data.get("needs_background"):
            data.pop("needs_background", None)
        return json.dumps(data)


def spec_from_json(text: str) -> PotentialSpec:
    """Rebuild a spec from its JSON form, re-deriving dependent parameters."""
    data = json.loads(text)
    family = data.get("family")
    if family == RIESZ:
        return riesz(data["s"])
    if family == YUKAWA:
        return yukawa(data["kappa"], data.get("v", 1.0))
    if family == DOUBLE_YUKAWA:
        return derive_double_yukawa(data["v1"], data["kappa1"])
    if family == YUKAWA_COULOMB:
        return derive_yukawa_coulomb(data["kappa1"])
    raise ParameterDomainError(f"unknown potential family {family!r}")


def riesz(s: float) -> PotentialSpec:
    if s <= 0:
        raise ParameterDomainError(f"Riesz exponent must be positive, got {s}")
    return PotentialSpec(family=RIESZ, s=float(s))


def yukawa(kappa: float, v: float = 1.0) -> PotentialSpec:
    if kappa <= 0:
        raise ParameterDomainError(f"Yukawa screening kappa must be positive, got {kappa}")
    if v <= 0:
        raise ParameterDomainError(f"Yukawa strength v must be positive, got {v}")
    return PotentialSpec(family=YUKAWA, kappa=float(kappa), v=float(v))


def derive_double_yukawa(v1: float, kappa1: float) -> PotentialSpec:
    """Double Yukawa member with well at r=1 of depth -1.

    The admissible region is ``v1 > exp(kappa1)/kappa1``; on its border
    the screening of the attractive term vanishes.
    """
    if kappa1 <= 0:
        raise ParameterDomainError(f"kappa1 must be positive, got {kappa1}")
    bound = math.exp(kappa1) / kappa1
    if not v1 > bound:
        raise ParameterDomainError(
            f"v1={v1} must exceed exp(kappa1)/kappa1={bound:.12g} for kappa1={kappa1}"
        )
    ek = math.exp(kappa1)
    kappa2 = (kappa1 * v1 - ek) / (v1 + ek)
    v2 = math.exp(kappa2 - kappa1) * (1.0 + kappa1) * v1 / (1.0 + kappa2)
    spec = PotentialSpec(
        family=DOUBLE_YUKAWA,
        v1=float(v1),
        kappa1=float(kappa1),
        v2=v2,
        kappa2=kappa2,
        norm_residuals=_normalization_residuals(v1, kappa1, v2, kappa2),
    )
    _check_normalization(spec)
    return spec


def derive_yukawa_coulomb(kappa1: float) -> PotentialSpec:
    """Yukawa-Coulomb member; the single parameter fixes both strengths."""
    if kappa1 <= 0:
        raise ParameterDomainError(f"kappa1 must be positive, got {kappa1}")
    v1 = math.exp(kappa1) / kappa1
    v2 = (1.0 + kappa1) / kappa1
    spec = PotentialSpec(
        family=YUKAWA_COULOMB,
        v1=v1,
        kappa1=float(kappa1),
        v2=v2,
        kappa2=0.0,
        needs_background=True,
        norm_residuals=_normalization_residuals(v1, kappa1, v2, 0.0),
    )
    _check_normalization(spec)
    return spec


def _normalization_residuals(v1, k1, v2, k2):
    f1 = v1 * math.exp(-k1) - v2 * math.exp(-k2)
    # analytic derivative of v*exp(-k r)/r at r=1: -v exp(-k) (k + 1)
    fp1 = -v1 * math.exp(-k1) * (k1 + 1.0) + v2 * math.exp(-k2) * (k2 + 1.0)
    return (f1 + 1.0, fp1)


def _check_normalization(spec: PotentialSpec):
    r1, r2 = spec.norm_residuals
    if abs(r1) > NORMALIZATION_TOL or abs(r2) > NORMALIZATION_TOL:
        raise ParameterDomainError(
            f"normalization residuals too large for {spec.family}: "
            f"f(1)+1={r1:.3e}, f'(1)={r2:.3e}"
        )


def potential_value(spec: PotentialSpec, r):
    """Point value f(r); the Yukawa-Coulomb case returns the bare pair term."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ParameterDomainError("separation r must be positive")
    if spec.family == RIESZ:
        return r ** (-spec.s)
    if spec.family == YUKAWA:
        return spec.v * np.exp(-spec.kappa * r) / r
    if spec.family == DOUBLE_YUKAWA:
        return (spec.v1 * np.exp(-spec.kappa1 * r) - spec.v2 * np.exp(-spec.kappa2 * r)) / r
    if spec.family == YUKAWA_COULOMB:
        return (spec.v1 * np.exp(-spec.kappa1 * r) - spec.v2) / r
    raise ParameterDomainError(f"unknown family {spec.family!r}")


def measure_density(spec: PotentialSpec, t):
    """Density rho(t) of the Gaussian-superposition measure.

    The strength factors (v, v1, v2) are included, so that numerically
    integrating ``exp(-r^2 t) * rho(t)`` reproduces ``potential_value``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ParameterDomainError("measure argument t must be positive")
    if spec.family == RIESZ:
        return t ** (spec.s / 2.0 - 1.0) / _gamma(spec.s / 2.0)
    root = np.sqrt(np.pi * t)
    if spec.family == YUKAWA:
        return spec.v * np.exp(-spec.kappa**2 / (4.0 * t)) / root
    if spec.family == DOUBLE_YUKAWA:
        return (
            spec.v1 * np.exp(-spec.kappa1**2 / (4.0 * t))
            - spec.v2 * np.exp(-spec.kappa2**2 / (4.0 * t))
        ) / root
    if spec.family == YUKAWA_COULOMB:
        return (spec.v1 * np.exp(-spec.kappa1**2 / (4.0 * t)) - spec.v2) / root
    raise ParameterDomainError(f"unknown family {spec.family!r}")


def sign_change_threshold(spec: PotentialSpec) -> float:
    """Where the double-Yukawa measure density turns positive:
    rho < 0 exactly on (0, (kappa1^2-kappa2^2) / (4 ln(v1/v2)))."""
    if spec.family != DOUBLE_YUKAWA:
        raise ParameterDomainError("sign-change threshold applies to double-yukawa only")
    return (spec.kappa1**2 - spec.kappa2**2) / (4.0 * math.log(spec.v1 / spec.v2))


# ---------------------------------------------------------------------------
# quadrature-facing helpers
# ---------------------------------------------------------------------------


def laplace_pairs(spec: PotentialSpec):
    """Signed (strength, kappa) pairs of the exponential measure terms."""
    if spec.family == YUKAWA:
        return ((spec.v, spec.kappa),)
    if spec.family in (DOUBLE_YUKAWA, YUKAWA_COULOMB):
        return ((spec.v1, spec.kappa1), (-spec.v2, spec.kappa2))
    raise ParameterDomainError(f"{spec.family} has no finite exponential-term list")


def front_factor(spec: PotentialSpec, area: float) -> float:
    """Prefactor of the reduced integrals (the 1/2 of the energy included)."""
    if spec.family == RIESZ:
        return 0.5 / (_gamma(spec.s / 2.0) * area ** (spec.s / 2.0))
    return 0.5 / math.sqrt(math.pi * area)


def tail_scale(spec: PotentialSpec, area: float) -> float:
    """Decay-shaping scale p = max(kappa^2 A / 4) passed to the grid builder."""
    if spec.family == RIESZ:
        return 0.0
    return max(k * k for _, k in laplace_pairs(spec)) * area / 4.0


def weight_direct(spec: PotentialSpec, area: float, u: np.ndarray) -> np.ndarray:
    """Measure weight against a self-transforming bracket, direct side.

    For exponential families this is ``sum_i s_i v_i exp(-p_i/u) / sqrt(u)``
    with ``p_i = kappa_i^2 A / 4``; the double-Yukawa pair is combined in a
    cancellation-free form so that nearly equal strengths (the large-v1
    regime) lose no precision.
    """
    if spec.family == RIESZ:
        return u ** (spec.s / 2.0 - 1.0)
    rsq = np.sqrt(u)
    if spec.family == YUKAWA:
        p = spec.kappa**2 * area / 4.0
        return spec.v * np.exp(-p / u) / rsq
    p1 = spec.kappa1**2 * area / 4.0
    p2 = spec.kappa2**2 * area / 4.0
    return np.exp(-p2 / u) * (spec.v1 * np.expm1((p2 - p1) / u) + _strength_gap(spec)) / rsq


def weight_transformed(spec: PotentialSpec, area: float, u: np.ndarray) -> np.ndarray:
    """Measure weight on the (0, split) part mapped through t -> pi^2/t."""
    if spec.family == RIESZ:
        return math.pi ** (spec.s - 1.0) * u ** (-spec.s / 2.0)
    rsq = np.sqrt(u)
    pi2 = math.pi**2
    if spec.family == YUKAWA:
        c = spec.kappa**2 * area / (4.0 * pi2)
        return spec.v * np.exp(-c * u) / rsq
    c1 = spec.kappa1**2 * area / (4.0 * pi2)
    c2 = spec.kappa2**2 * area / (4.0 * pi2)
    return np.exp(-c2 * u) * (spec.v1 * np.expm1((c2 - c1) * u) + _strength_gap(spec)) / rsq


def _strength_gap(spec: PotentialSpec) -> float:
    """v1 - v2 without cancellation; vanishes linearly as kappa2 -> kappa1."""
    dk = spec.kappa2 - spec.kappa1
    return spec.v1 * (dk - (1.0 + spec.kappa1) * math.expm1(dk)) / (1.0 + spec.kappa2)
