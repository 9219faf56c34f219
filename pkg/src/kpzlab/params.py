"""Model parameters, derived constants, and the symmetric six-vertex mapping.

The stochastic six-vertex model is parametrized by turn probabilities
(delta1, delta2) and boundary densities (b1, b2); the ASEP by jump rates
(L, R).  Derived quantities (q, kappa, beta_i, scaling constants) are stored
at construction and re-checked by validate().
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

_REL_TOL = 1e-12


class ParameterDomainError(ValueError):
    """A model parameter violates its defining inequality."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParameterDomainError(msg)


@dataclass(frozen=True)
class SixVertexParams:
    """Stochastic six-vertex parameters with all derived constants."""

    delta1: float
    delta2: float
    b1: float
    b2: float
    q: float = field(init=False)
    kappa: float = field(init=False)
    beta1: float = field(init=False)
    beta2: float = field(init=False)
    translation_invariant: bool = field(init=False)

    def __post_init__(self) -> None:
        _require(0.0 < self.delta1, f"need 0 < delta1, got delta1={self.delta1}")
        _require(
            self.delta1 < self.delta2, f"need delta1 < delta2, got {self.delta1} >= {self.delta2}"
        )
        _require(self.delta2 < 1.0, f"need delta2 < 1, got delta2={self.delta2}")
        _require(0.0 < self.b1 < 1.0, f"need b1 in (0,1), got b1={self.b1}")
        _require(0.0 < self.b2 < 1.0, f"need b2 in (0,1), got b2={self.b2}")
        object.__setattr__(self, "q", self.delta1 / self.delta2)
        object.__setattr__(self, "kappa", (1.0 - self.delta1) / (1.0 - self.delta2))
        object.__setattr__(self, "beta1", self.b1 / (1.0 - self.b1))
        object.__setattr__(self, "beta2", self.b2 / (1.0 - self.b2))
        object.__setattr__(
            self,
            "translation_invariant",
            abs(self.beta1 - self.kappa * self.beta2) <= _REL_TOL * self.beta1,
        )

    def validate(self) -> None:
        """Re-derive stored fields and compare to 1e-12 (cheap invariant check)."""
        assert 0.0 < self.q < 1.0 and self.kappa > 1.0
        for name, value in (
            ("q", self.delta1 / self.delta2),
            ("kappa", (1.0 - self.delta1) / (1.0 - self.delta2)),
            ("beta1", self.b1 / (1.0 - self.b1)),
            ("beta2", self.b2 / (1.0 - self.b2)),
        ):
            stored = getattr(self, name)
            assert abs(stored - value) <= _REL_TOL * max(1.0, abs(value)), name


@dataclass(frozen=True)
class ASEPParams:
    """ASEP jump rates and boundary densities; q = L/R."""

    L: float
    R: float
    b1: float
    b2: float
    q: float = field(init=False)

    def __post_init__(self) -> None:
        _require(self.L >= 0.0, f"need L >= 0, got L={self.L}")
        _require(self.R > self.L, f"need R > L, got R={self.R}, L={self.L}")
        _require(0.0 <= self.b1 <= 1.0, f"need b1 in [0,1], got {self.b1}")
        _require(0.0 <= self.b2 <= 1.0, f"need b2 in [0,1], got {self.b2}")
        object.__setattr__(self, "q", self.L / self.R)

    @property
    def stationary(self) -> bool:
        return self.b1 == self.b2


def derive_six_vertex(delta1: float, delta2: float, b1: float, b2: float) -> SixVertexParams:
    """Construct six-vertex parameters, populating all derived fields."""
    return SixVertexParams(delta1, delta2, b1, b2)


def translation_invariant_b2(delta1: float, delta2: float, b1: float) -> float:
    """The unique b2 with beta2 = beta1/kappa, i.e. b2 = beta1/(kappa + beta1)."""
    _require(0.0 < delta1 < delta2 < 1.0, "need 0 < delta1 < delta2 < 1")
    _require(0.0 < b1 < 1.0, f"need b1 in (0,1), got {b1}")
    kappa = (1.0 - delta1) / (1.0 - delta2)
    beta1 = b1 / (1.0 - b1)
    return beta1 / (kappa + beta1)


@dataclass(frozen=True)
class ScalingConstants:
    """Characteristic direction, current density, and fluctuation scales.

    The leading-order (c = 0) values of the centering/direction constants,
    plus the constants entering the six-vertex fluctuation theorem
    (Lambda_i, lattice direction (x_dir, y_dir), varsigma, F_height).
    Conventions: `eta` is the characteristic space/time slope, `m` the
    current density so that the observable concentrates at m*T, `F` the
    T^{1/3} fluctuation scale of the determinant-side variable.
    """

    model: str  # "asep" | "vertex"
    b: float
    chi: float
    F: float
    eta: float
    m: float
    Lambda: float | None = None
    theta: float | None = None
    rho: float | None = None
    Lambda1: float | None = None
    Lambda2: float | None = None
    x_dir: float | None = None
    y_dir: float | None = None
    varsigma: float | None = None
    F_height: float | None = None

    def eta_at(self, c: float, T: float) -> float:
        """Direction including the c-correction at finite T."""
        if self.model == "asep":
            return self.eta + 2.0 * c * self.chi ** (1.0 / 3.0) / T ** (1.0 / 3.0)
        return self.eta + 2.0 * self.rho * self.Lambda * c / T ** (1.0 / 3.0)

    def m_at(self, c: float, T: float) -> float:
        """Centering density including the c-correction at finite T."""
        if self.model == "asep":
            return self.m - 2.0 * self.b * self.chi ** (1.0 / 3.0) * c / T ** (1.0 / 3.0)
        return self.m - 2.0 * self.rho * self.b * c / T ** (1.0 / 3.0)

    def x_of_T(self, T: float, c: float = 0.0, rounded: bool = True) -> float:
        """Characteristic position eta*T (observable slot), floored by default."""
        x = self.eta_at(c, T) * T
        return math.floor(x) if rounded else x


def scaling_constants(params: SixVertexParams | ASEPParams, b: float | None = None) -> ScalingConstants:
    """Scaling constants of the stationary point (ASEP b1=b2, vertex beta1=kappa*beta2)."""
    if isinstance(params, ASEPParams):
        if b is None:
            _require(params.stationary, "ASEP scaling constants need b1 = b2 (stationary)")
            b = params.b1
        chi = b * (1.0 - b)
        return ScalingConstants(
            model="asep",
            b=b,
            chi=chi,
            F=chi ** (2.0 / 3.0),
            eta=1.0 - 2.0 * b,
            m=b * b,
        )

    _require(
        params.translation_invariant,
        "six-vertex scaling constants need beta1 = kappa*beta2 (translation-invariant)",
    )
    if b is None:
        b = params.b1
    kappa = params.kappa
    chi = b * (1.0 - b)
    Lam = b + kappa * (1.0 - b)
    theta = Lam * Lam / kappa
    rho = (1.0 - 1.0 / kappa) ** (2.0 / 3.0) * kappa ** (-1.0 / 3.0) * chi ** (1.0 / 3.0) * Lam ** (1.0 / 3.0)
    F = Lam ** (-1.0 / 3.0) * (kappa - 1.0) ** (1.0 / 3.0) * chi ** (2.0 / 3.0)
    b1, b2 = params.b1, params.b2
    chi1 = b1 * (1.0 - b1)
    chi2 = b2 * (1.0 - b2)
    Lambda1 = b1 + kappa * (1.0 - b1)
    Lambda2 = b2 + (1.0 - b2) / kappa
    x_dir = Lambda1 * (1.0 - params.delta2)
    y_dir = Lambda2 * (1.0 - params.delta1)
    d21 = params.delta2 - params.delta1
    varsigma = (
        2.0
        * d21 ** (2.0 / 3.0)
        * (chi1 * chi2) ** (1.0 / 6.0)
        / math.sqrt((1.0 - params.delta1) * (1.0 - params.delta2))
    )
    # height-scale constant; equals F * y_dir^{1/3}
    F_height = (d21 * chi1 * chi2) ** (1.0 / 3.0)
    return ScalingConstants(
        model="vertex",
        b=b,
        chi=chi,
        F=F,
        eta=theta,
        m=b * b * (1.0 - 1.0 / kappa),
        Lambda=Lam,
        theta=theta,
        rho=rho,
        Lambda1=Lambda1,
        Lambda2=Lambda2,
        x_dir=x_dir,
        y_dir=y_dir,
        varsigma=varsigma,
        F_height=F_height,
    )


@dataclass(frozen=True)
class FerroWeights:
    """Symmetric six-vertex weights (a, a, b, b, c, c) in the ferroelectric phase."""

    a: float
    b: float
    c: float
    Delta: float = field(init=False)

    def __post_init__(self) -> None:
        _require(self.a > 0 and self.b > 0 and self.c > 0, "weights must be positive")
        Delta = (self.a**2 + self.b**2 - self.c**2) / (2.0 * self.a * self.b)
        object.__setattr__(self, "Delta", Delta)


class MappingDomainError(ParameterDomainError):
    """The ferroelectric mapping requires Delta > 1 and a > b."""


def ferro_to_stochastic(w: FerroWeights) -> tuple[float, float]:
    """Turn probabilities (delta1, delta2) of the stochastic model conjugate to w."""
    if w.Delta <= 1.0:
        raise MappingDomainError(f"need Delta > 1 (ferroelectric), got Delta={w.Delta}")
    if w.a <= w.b:
        raise MappingDomainError(f"need a > b, got a={w.a}, b={w.b}")
    root = math.sqrt(w.Delta**2 - 1.0)
    ratio = w.b / w.a
    return ratio * (w.Delta - root), ratio * (w.Delta + root)


def stochastic_to_ferro(delta1: float, delta2: float) -> FerroWeights:
    """Inverse mapping normalized to a = 1 (any normalization is conjugate-equivalent)."""
    _require(0.0 < delta1 < delta2 < 1.0, "need 0 < delta1 < delta2 < 1")
    c_sq = 1.0 + delta1 * delta2 - delta1 - delta2
    if c_sq <= 0.0:
        raise MappingDomainError(f"nonpositive c^2 = {c_sq}; point is outside the mapped phase")
    return FerroWeights(a=1.0, b=math.sqrt(delta1 * delta2), c=math.sqrt(c_sq))


def free_energy(w: FerroWeights, h: float, v: float) -> float:
    """Free energy per site of the translation-invariant measure with slope (h, v)."""
    if w.Delta <= 1.0 or w.a <= w.b:
        raise MappingDomainError("free energy formula needs Delta > 1 and a > b")
    _require(0.0 < h < 1.0 and 0.0 < v < 1.0, "slopes must lie in (0,1)")
    return (h - v) * math.log(w.Delta - math.sqrt(w.Delta**2 - 1.0)) - math.log(w.a)
