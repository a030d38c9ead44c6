"""Complex gamma function, Gamma_R / Gamma_C, and gamma-product expressions.

``Gamma_R(s) = pi^{-s/2} Gamma(s/2)`` and ``Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exact_algebra import GaussianRational

__all__ = [
    "GammaPoleError",
    "PinchedContourError",
    "gamma_complex",
    "loggamma_complex",
    "loggamma_array",
    "eval_gamma_R",
    "eval_gamma_C",
    "GammaFactor",
    "GammaExpr",
    "LFactorSpec",
    "l_factor",
    "l_factor_expr",
    "barnes_first",
    "barnes_second",
    "barnes_first_integrand",
    "barnes_second_integrand",
    "separating_abscissa",
    "gamma_rational_part",
    "PiDecomposition",
    "has_pole",
]


class GammaPoleError(ArithmeticError):
    """Evaluation at a pole of a gamma factor."""


class PinchedContourError(ValueError):
    """No vertical path separates the two families of poles."""


# Lanczos approximation, g = 671/128 with 14 terms (double-precision set).
_LANCZOS_G = 671.0 / 128.0
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COEF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = 2.5066282746310005
_LOG_PI = math.log(math.pi)


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def _loggamma_right(z: complex) -> complex:
    """log Gamma(z) for Re z >= 1/2 (principal-ish branch, exp is exact)."""
    tmp = z + _LANCZOS_G
    tmp = (z + 0.5) * cmath.log(tmp) - tmp
    ser = _LANCZOS_C0
    y = z
    for c in _LANCZOS_COEF:
        y = y + 1.0
        ser += c / y
    return tmp + cmath.log(_SQRT_2PI * ser / z)


def loggamma_complex(z: complex) -> complex:
    """A logarithm of Gamma(z); the imaginary part is defined modulo 2 pi."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise GammaPoleError(f"Gamma has a pole at {z.real:g}")
    if z.real >= 0.5:
        return _loggamma_right(z)
    # reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    return _LOG_PI - _log_sin_pi(z) - _loggamma_right(1.0 - z)


def _log_sin_pi(z: complex) -> complex:
    y = z.imag
    if abs(y) < 20.0:
        return cmath.log(cmath.sin(math.pi * z))
    # sin(pi z) = e^{-i pi z}(e^{2 i pi z} - 1) / (2i) for y > 0; mirror for y < 0
    if y > 0:
        return -1j * math.pi * z + cmath.log((cmath.exp(2j * math.pi * z) - 1) / 2j)
    return 1j * math.pi * z + cmath.log((1 - cmath.exp(-2j * math.pi * z)) / 2j)


def gamma_complex(z: complex) -> complex:
    """Gamma(z) for complex z; poles raise GammaPoleError, overflow OverflowError."""
    lg = loggamma_complex(z)
    if lg.real > 709.0:
        raise OverflowError(f"Gamma({z}) overflows double precision")
    return cmath.exp(lg)


def loggamma_array(z: np.ndarray) -> np.ndarray:
    """Vectorized log Gamma (no pole checks; callers keep away from poles)."""
    from . import _kernels

    return _kernels.loggamma(np.asarray(z, dtype=np.complex128))


def eval_gamma_R(s: complex) -> complex:
    s = complex(s)
    if _is_nonpositive_integer(s / 2):
        raise GammaPoleError(f"Gamma_R has a pole at {s.real:g}")
    return cmath.exp(-s / 2 * _LOG_PI + loggamma_complex(s / 2))


def eval_gamma_C(s: complex) -> complex:
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise GammaPoleError(f"Gamma_C has a pole at {s.real:g}")
    return 2.0 * cmath.exp(-s * math.log(2 * math.pi) + loggamma_complex(s))


# ---------------------------------------------------------------------------
# Symbolic products


Number = Union[int, Fraction, GaussianRational, complex, float]


def _as_exact(x) -> Optional[GaussianRational]:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    return None


@dataclass(frozen=True)
class GammaFactor:
    kind: str  # "R" or "C"
    shift: Number
    exponent: int = 1

    def __post_init__(self):
        if self.kind not in ("R", "C"):
            raise ValueError("kind must be 'R' or 'C'")

    def argument(self, s):
        ex_s, ex_shift = _as_exact(s), _as_exact(self.shift)
        if ex_s is not None and ex_shift is not None:
            return ex_s + ex_shift
        return complex(s) + complex(self.shift)

    def pole_at(self, s) -> bool:
        """Exact pole test (positive exponent, exact shift and point only)."""
        arg = self.argument(s)
        if not isinstance(arg, GaussianRational) or not arg.is_real():
            return False
        x = arg.re
        if self.kind == "R":
            x = x / 2
        return x.denominator == 1 and x <= 0

    def evaluate(self, s) -> complex:
        arg = complex(self.argument(s))
        f = eval_gamma_R if self.kind == "R" else eval_gamma_C
        return f(arg) ** self.exponent


@dataclass(frozen=True)
class GammaExpr:
    factors: Tuple[GammaFactor, ...]
    prefactor: Number = 1

    @staticmethod
    def of(*factors: Tuple[str, Number, int], prefactor: Number = 1) -> "GammaExpr":
        return GammaExpr(tuple(GammaFactor(*f) for f in factors), prefactor)

    def __mul__(self, other: "GammaExpr") -> "GammaExpr":
        p1, p2 = self.prefactor, other.prefactor
        e1, e2 = _as_exact(p1), _as_exact(p2)
        pref = e1 * e2 if (e1 is not None and e2 is not None) else complex(p1) * complex(p2)
        return GammaExpr(self.factors + other.factors, pref)

    def poles(self, s) -> List[GammaFactor]:
        return [f for f in self.factors if f.exponent > 0 and f.pole_at(s)]

    def has_pole(self, s) -> bool:
        return bool(self.poles(s))

    def evaluate(self, s=0) -> complex:
        bad = self.poles(s)
        if bad:
            raise GammaPoleError(f"pole of Gamma_{bad[0].kind}(s + {bad[0].shift}) at s = {s}")
        val = complex(self.prefactor)
        for f in self.factors:
            if f.exponent < 0 and f.pole_at(s):
                return 0j
            val *= f.evaluate(s)
        return val

    __call__ = evaluate

    def degree(self) -> int:
        """Number of Gamma_R-equivalents (Gamma_C counts twice)."""
        return sum((1 if f.kind == "R" else 2) * f.exponent for f in self.factors)


def has_pole(expr: GammaExpr, s) -> bool:
    return expr.has_pole(s)


# L-factors --------------------------------------------------------------------


@dataclass(frozen=True)
class LFactorSpec:
    """kind in {"RS_GL3xGL2", "adjoint_GL3", "std_GL2"}.

    ``twist`` is added to s (the central twist (w_Sigma + w_Pi)/2 for RS).
    """

    kind: str
    ell: int = 0
    kappa: int = 0
    twist: Fraction = Fraction(0)


def l_factor_expr(spec: LFactorSpec) -> GammaExpr:
    t = Fraction(spec.twist)
    if spec.kind == "RS_GL3xGL2":
        ell, k = spec.ell, spec.kappa
        return GammaExpr.of(
            ("C", t + Fraction(ell + k, 2) - 1, 1),
            ("C", t + Fraction(ell - k, 2), 1),
            ("C", t + Fraction(k - 1, 2), 1),
        )
    if spec.kind == "adjoint_GL3":
        ell = spec.ell
        return GammaExpr.of(
            ("R", t, 1),
            ("C", t, 1),
            ("C", t + ell - 1, 1),
            ("C", t + Fraction(ell - 1, 2), 2),
        )
    if spec.kind == "std_GL2":
        return GammaExpr.of(("C", t + Fraction(spec.kappa - 1, 2), 1))
    raise ValueError(f"unknown L-factor kind {spec.kind!r}")


def l_factor(spec: LFactorSpec, s) -> complex:
    return l_factor_expr(spec).evaluate(s)


# Barnes lemmas ----------------------------------------------------------------


def separating_abscissa(left: Sequence[complex], right: Sequence[complex]) -> float:
    """Midpoint abscissa c with Re(s + a) > 0 for a in ``left`` and Re(-s + b) > 0 for b in ``right``.

    ``left`` holds the shifts of the Gamma_R(s + a) factors, ``right`` those of
    Gamma_R(-s + b).
    """
    lo = max(-complex(a).real for a in left)
    hi = min(complex(b).real for b in right)
    if not lo < hi:
        raise PinchedContourError("pinched contour: no vertical path separates the poles")
    return 0.5 * (lo + hi)


def _gr(x: complex) -> complex:
    return eval_gamma_R(x)


def barnes_first(a, b, c, d) -> complex:
    """Closed form of the first lemma."""
    separating_abscissa([a, b], [c, d])
    a, b, c, d = (complex(x) for x in (a, b, c, d))
    return 2 * _gr(a + c) * _gr(a + d) * _gr(b + c) * _gr(b + d) / _gr(a + b + c + d)


def barnes_second(a, b, c, d, e) -> complex:
    """Closed form of the second lemma."""
    separating_abscissa([a, b, c], [d, e])
    a, b, c, d, e = (complex(x) for x in (a, b, c, d, e))
    num = _gr(a + d) * _gr(a + e) * _gr(b + d) * _gr(b + e) * _gr(c + d) * _gr(c + e)
    den = _gr(b + c + d + e) * _gr(a + c + d + e) * _gr(a + b + d + e)
    return 2 * num / den


def _lgr(z: np.ndarray) -> np.ndarray:
    return -0.5 * z * _LOG_PI + loggamma_array(0.5 * z)


def barnes_first_integrand(s: np.ndarray, a, b, c, d) -> np.ndarray:
    s = np.asarray(s, dtype=np.complex128)
    a, b, c, d = (complex(x) for x in (a, b, c, d))
    return np.exp(_lgr(s + a) + _lgr(s + b) + _lgr(-s + c) + _lgr(-s + d))


def barnes_second_integrand(s: np.ndarray, a, b, c, d, e) -> np.ndarray:
    s = np.asarray(s, dtype=np.complex128)
    a, b, c, d, e = (complex(x) for x in (a, b, c, d, e))
    tot = a + b + c + d + e
    return np.exp(_lgr(s + a) + _lgr(s + b) + _lgr(s + c) + _lgr(-s + d) + _lgr(-s + e) - _lgr(s + tot))


# Exact pi-power extraction -----------------------------------------------------


@dataclass(frozen=True)
class PiDecomposition:
    """value = rational * pi^pi_exponent * 2^(sqrt2_parity / 2).

    ``sqrt_pi_parity`` records whether half-integer Gamma arguments
    contributed an odd number of sqrt(pi) factors (pi_exponent is then a
    half-integer).
    """

    rational: Fraction
    pi_exponent: Fraction
    sqrt_pi_parity: bool
    sqrt2_parity: bool = False

    def __float__(self) -> float:
        v = float(self.rational) * math.pi ** float(self.pi_exponent)
        return v * math.sqrt(2) if self.sqrt2_parity else v


def _gamma_exact(x: Fraction) -> Tuple[Fraction, Fraction]:
    """Gamma(x) = r * pi^k for x a positive integer or half-integer."""
    if x <= 0 or (2 * x).denominator != 1:
        raise ValueError(f"Gamma({x}) has no closed form of the supported type")
    if x.denominator == 1:
        return Fraction(math.factorial(int(x) - 1)), Fraction(0)
    # Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
    n = int(x - Fraction(1, 2))
    return Fraction(math.factorial(2 * n), 4 ** n * math.factorial(n)), Fraction(1, 2)


def gamma_rational_part(expr: GammaExpr, s=0) -> PiDecomposition:
    """Exact decomposition of a real-rational gamma product at a rational point."""
    pref = _as_exact(expr.prefactor)
    if pref is None or not pref.is_real():
        raise ValueError("prefactor must be an exact rational")
    rational = pref.re
    pi_exp = Fraction(0)
    two_exp = Fraction(0)
    for f in expr.factors:
        arg = f.argument(GaussianRational(Fraction(s)) if not isinstance(s, GaussianRational) else s)
        if not isinstance(arg, GaussianRational) or not arg.is_real():
            raise ValueError("argument is not an exact rational")
        x = arg.re
        e = f.exponent
        if f.kind == "R":
            r, k = _gamma_exact(x / 2)
            k = k - x / 2
        else:
            r, k = _gamma_exact(x)
            k = k - x
            rational *= Fraction(2) ** e
            two_exp -= x * e
        rational *= r ** e
        pi_exp += k * e
    # 2^{two_exp}: integer part into the rational, half part into sqrt2
    whole = math.floor(two_exp)
    rational *= Fraction(2) ** whole
    sqrt2 = (two_exp - whole) != 0
    if sqrt2 and (two_exp - whole) != Fraction(1, 2):
        raise ValueError("power of 2 is not a half-integer")
    return PiDecomposition(rational, pi_exp, pi_exp.denominator != 1, sqrt2)
