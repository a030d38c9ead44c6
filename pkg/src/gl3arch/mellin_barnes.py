"""Vertical-line contour integrals and Whittaker function evaluators.

GL(3) torus values come from a double Mellin-Barnes integral over two vertical
lines.  The integrand factors as ``A(t1) * H(t1 + t2) * B(t2)``, so on uniform
t-nodes the kernel is a diagonally scaled Hankel matrix and the values on a
whole log-grid of (a1, a2) are one matrix product ``E1 @ G @ E2^T``.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import struct
import threading
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import _kernels
from .exact_algebra import GaussianRational

LOG_PI = math.log(math.pi)
LOG_2PI = math.log(2 * math.pi)


class QuadratureError(RuntimeError):
    """Truncation or convergence diagnostics failed."""


class ContourError(ValueError):
    """The contour violates the pole margin (pinched or too close)."""


class GridError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Contours


@dataclass(frozen=True)
class ContourSpec:
    c: float = 1.0
    T: float = 60.0
    N: int = 2400
    rule: str = "trapezoid"
    pole_margin: float = 0.25

    def __post_init__(self):
        if self.N <= 0 or self.N % 2:
            raise ValueError("N must be a positive even integer")
        if not self.T > 0:
            raise ValueError("T must be positive")
        if self.rule not in ("trapezoid", "gauss-legendre-panels"):
            raise ValueError(f"unknown rule {self.rule!r}")

    def nodes(self) -> Tuple[np.ndarray, np.ndarray]:
        """Nodes t and weights w with sum w f(t) ~ int_{-T}^{T} f dt."""
        if self.rule == "trapezoid":
            t = np.linspace(-self.T, self.T, self.N + 1)
            h = 2 * self.T / self.N
            w = np.full(t.shape, h)
            w[0] = w[-1] = h / 2
            return t, w
        panels = self.N // 16 if self.N >= 16 else 1
        x, wx = np.polynomial.legendre.leggauss(16)
        edges = np.linspace(-self.T, self.T, panels + 1)
        t = np.concatenate([0.5 * (b - a) * x + 0.5 * (a + b) for a, b in zip(edges[:-1], edges[1:])])
        w = np.concatenate([0.5 * (b - a) * wx for a, b in zip(edges[:-1], edges[1:])])
        return t, w

    def halved(self) -> "ContourSpec":
        return ContourSpec(self.c, self.T, self.N // 2 if (self.N // 2) % 2 == 0 else self.N // 2 + 1, self.rule, self.pole_margin)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ContourResult:
    value: complex
    error_estimate: float
    tail_ratio: float
    richardson: float

    def __complex__(self):
        return complex(self.value)


TAIL_TOLERANCE = 1e-14


def contour_integral(f: Callable[[np.ndarray], np.ndarray], spec: ContourSpec = ContourSpec(),
                     tail_tolerance: float = TAIL_TOLERANCE) -> ContourResult:
    """Approximate int_L f(s) ds / (2 pi i) along Re s = c, |Im s| <= T.

    ``f`` takes an array of complex s and returns values.  The error
    estimate combines the endpoint tail bound and the N vs N/2 difference.
    """
    t, w = spec.nodes()
    vals = np.asarray(f(spec.c + 1j * t), dtype=np.complex128)
    total = complex(np.sum(w * vals)) / (2 * math.pi)
    peak = float(np.max(np.abs(vals))) if vals.size else 0.0
    if peak == 0.0:
        return ContourResult(0j, 0.0, 0.0, 0.0)
    ends = max(abs(vals[0]), abs(vals[-1]))
    tail_ratio = ends / peak
    if tail_ratio > tail_tolerance:
        raise QuadratureError(f"truncation insufficient: endpoint/peak = {tail_ratio:.3e}")
    half = spec.halved()
    th, wh = half.nodes()
    coarse = complex(np.sum(wh * np.asarray(f(spec.c + 1j * th), dtype=np.complex128))) / (2 * math.pi)
    rich = abs(total - coarse)
    # endpoint tail bound: geometric decay beyond T at the observed rate
    tail_bound = ends * 2 * spec.T / (2 * math.pi)
    return ContourResult(total, rich + tail_bound, tail_ratio, rich)


# ---------------------------------------------------------------------------
# Whittaker specs


@dataclass(frozen=True)
class WhittakerSpec:
    """GL3: ell, w, epsilon and a monomial index j = (j1, j2, j3) or an
    SO(3) index i.  GL2: kappa, w, sign."""

    group: str
    ell: int = 0
    w: int = 0
    epsilon: int = 1
    j: Optional[Tuple[int, int, int]] = None
    i: Optional[int] = None
    kappa: int = 0
    sign: int = 1

    def __post_init__(self):
        if self.group == "GL3":
            if self.ell < 3 or self.ell % 2 == 0:
                raise ValueError("ell must be odd and >= 3")
            if self.w % 2:
                raise ValueError("w must be even")
            if self.epsilon not in (1, -1):
                raise ValueError("epsilon must be +1 or -1")
            if (self.j is None) == (self.i is None):
                raise ValueError("give exactly one of j and i")
            if self.j is not None:
                j = tuple(int(x) for x in self.j)
                if len(j) != 3 or min(j) < 0 or sum(j) != self.ell:
                    raise ValueError("j must be non-negative with j1 + j2 + j3 = ell")
                object.__setattr__(self, "j", j)
            elif not -self.ell <= self.i <= self.ell:
                raise ValueError("i out of range")
        elif self.group == "GL2":
            if self.kappa < 2:
                raise ValueError("kappa must be >= 2")
            if (self.kappa - self.w) % 2:
                raise ValueError("kappa and w must have the same parity")
            if self.sign not in (1, -1):
                raise ValueError("sign must be +1 or -1")
        else:
            raise ValueError("group must be GL3 or GL2")

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["j"] is not None:
            d["j"] = list(d["j"])
        return d


def monomial_expansion(ell: int, i: int) -> Dict[Tuple[int, int, int], complex]:
    """v_(ell; i) as a combination of monomial indices (no quadric reduction)."""
    from .rep_theory import so3_module

    raw = so3_module(ell).monomial_expansion(i)
    return {tuple(k): complex(v) for k, v in raw.items()}


# ---------------------------------------------------------------------------
# GL(3) kernel


def _log_gamma_R(z):
    return -0.5 * z * LOG_PI + _kernels.loggamma(0.5 * z)


def _log_gamma_C(z):
    return math.log(2.0) - z * LOG_2PI + _kernels.loggamma(z)


def check_pole_margin(ell: int, j: Tuple[int, int, int], c1: float, c2: float, margin: float) -> None:
    for c, jj in ((c1, j[0]), (c2, j[2])):
        rightmost = max(-(ell - 1) / 2.0, -float(jj))
        if c - rightmost < margin:
            raise ContourError(f"pinched contour: abscissa {c} is within {margin} of the pole at {rightmost}")


class GL3Kernel:
    """Kernel matrix G[k, l] on the t-nodes of both lines for one monomial index."""

    def __init__(self, ell: int, j: Tuple[int, int, int], contour: ContourSpec, c2: Optional[float] = None):
        if contour.rule != "trapezoid":
            raise ValueError("the Hankel factorisation needs uniform nodes")
        self.ell, self.j, self.contour = ell, tuple(j), contour
        self.c1 = contour.c
        self.c2 = contour.c if c2 is None else c2
        check_pole_margin(ell, self.j, self.c1, self.c2, contour.pole_margin)
        t, w = contour.nodes()
        self.t, self.w = t, w
        n = t.shape[0]
        h = 2 * contour.T / contour.N
        s1 = self.c1 + 1j * t
        s2 = self.c2 + 1j * t
        j1, _, j3 = self.j
        la = _log_gamma_C(s1 + (ell - 1) / 2.0) + _log_gamma_R(s1 + j1)
        lb = _log_gamma_C(s2 + (ell - 1) / 2.0) + _log_gamma_R(s2 + j3)
        tsum = -2 * contour.T + h * np.arange(2 * n - 1)
        lh = -_log_gamma_R(self.c1 + self.c2 + 1j * tsum + j1 + j3)
        self.a = np.exp(la) * w
        self.b = np.exp(lb) * w
        self.hsym = np.exp(lh)
        self.G = _kernels.hankel_kernel(self.a, self.hsym, self.b)
        mags = np.abs(self.G)
        self.peak = float(mags.max())
        edge = max(mags[0, :].max(), mags[-1, :].max(), mags[:, 0].max(), mags[:, -1].max())
        self.tail_ratio = float(edge / self.peak) if self.peak else 0.0

    def evaluate(self, u1: np.ndarray, u2: np.ndarray, stride: int = 1) -> np.ndarray:
        """Raw double integral (no sqrt(-1) or central prefactor) on u1 x u2."""
        u1 = np.asarray(u1, dtype=float)
        u2 = np.asarray(u2, dtype=float)
        t = self.t[::stride]
        # subsampled nodes carry stride-times larger trapezoid weights
        G = self.G[::stride, ::stride] * (stride * stride)
        e1 = np.exp(-1j * np.outer(u1, t))
        e2 = np.exp(-1j * np.outer(t, u2))
        core = (e1 @ G) @ e2
        scale1 = np.exp((1.0 - self.c1) * u1)
        scale2 = np.exp((1.0 - self.c2) * u2)
        return core * np.outer(scale1, scale2) / (4 * math.pi ** 2)


_KERNEL_CACHE: Dict[tuple, GL3Kernel] = {}
_KERNEL_LOCK = threading.Lock()


def gl3_kernel(ell: int, j: Tuple[int, int, int], contour: ContourSpec, c2: Optional[float] = None) -> GL3Kernel:
    key = (ell, tuple(j), contour, c2)
    with _KERNEL_LOCK:
        k = _KERNEL_CACHE.get(key)
    if k is None:
        k = GL3Kernel(ell, j, contour, c2)
        with _KERNEL_LOCK:
            if len(_KERNEL_CACHE) > 16:
                _KERNEL_CACHE.clear()
            _KERNEL_CACHE[key] = k
    return k


def clear_kernel_cache() -> None:
    with _KERNEL_LOCK:
        _KERNEL_CACHE.clear()


@dataclass
class WhittakerEvaluation:
    values: np.ndarray
    tail_ratio: float
    richardson: float


def whittaker_gl3_grid(spec: WhittakerSpec, u1: Sequence[float], u2: Sequence[float],
                       contour: ContourSpec = ContourSpec(), c2: Optional[float] = None,
                       check: bool = True) -> WhittakerEvaluation:
    """Values W(diag(a1 a2, a2, 1)) at a1 = e^{u1}, a2 = e^{u2} (outer grid)."""
    if spec.group != "GL3":
        raise ValueError("GL3 spec expected")
    u1 = np.atleast_1d(np.asarray(u1, dtype=float))
    u2 = np.atleast_1d(np.asarray(u2, dtype=float))
    terms = {spec.j: 1.0 + 0j} if spec.j is not None else monomial_expansion(spec.ell, spec.i)
    total = np.zeros((u1.size, u2.size), dtype=np.complex128)
    coarse = np.zeros_like(total)
    tail = 0.0
    for j, coef in sorted(terms.items()):
        k = gl3_kernel(spec.ell, j, contour, c2)
        tail = max(tail, k.tail_ratio)
        pref = coef * (1j) ** ((j[0] - j[2]) % 4)
        total += pref * k.evaluate(u1, u2)
        if check:
            coarse += pref * k.evaluate(u1, u2, stride=2)
    central = np.exp(0.5 * spec.w * np.add.outer(u1, 2 * u2))
    total *= central
    if check:
        coarse *= central
        scale = float(np.max(np.abs(total))) or 1.0
        rich = float(np.max(np.abs(total - coarse))) / scale
    else:
        rich = float("nan")
    if tail > TAIL_TOLERANCE:
        raise QuadratureError(f"truncation insufficient: kernel edge/peak = {tail:.3e}")
    return WhittakerEvaluation(total, tail, rich)


def whittaker_gl3(spec: WhittakerSpec, a1: float, a2: float, contour: ContourSpec = ContourSpec()) -> complex:
    """W(diag(a1 a2, a2, 1)) for a1, a2 > 0."""
    if not (a1 > 0 and a2 > 0):
        raise ValueError("a1 and a2 must be positive")
    ev = whittaker_gl3_grid(spec, [math.log(a1)], [math.log(a2)], contour, check=False)
    return complex(ev.values[0, 0])


def whittaker_gl2(kappa: int, w: int, sign: int, a: float) -> float:
    """W^sign(diag(a, 1)) including the |a|^{w/2} twist."""
    if a == 0:
        raise ValueError("a must be nonzero")
    if sign * a <= 0:
        return 0.0
    x = abs(a)
    return x ** (kappa / 2.0) * x ** (w / 2.0) * math.exp(-2 * math.pi * x)


# ---------------------------------------------------------------------------
# Grids


@dataclass(frozen=True)
class GridGeometry:
    """Log-uniform grid: u in [lo, hi] with n points per axis."""

    u1_lo: float = -5.0
    u1_hi: float = 4.0
    n1: int = 120
    u2_lo: float = -5.0
    u2_hi: float = 4.0
    n2: int = 120

    def __post_init__(self):
        if self.n1 < 2 or self.n2 < 2 or not (self.u1_hi > self.u1_lo and self.u2_hi > self.u2_lo):
            raise GridError("empty geometry")

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.u1_lo, self.u1_hi, self.n1), np.linspace(self.u2_lo, self.u2_hi, self.n2))

    @staticmethod
    def with_step(u1: Tuple[float, float], u2: Tuple[float, float], h: float) -> "GridGeometry":
        n1 = int(round((u1[1] - u1[0]) / h)) + 1
        n2 = int(round((u2[1] - u2[0]) / h)) + 1
        return GridGeometry(u1[0], u1[0] + (n1 - 1) * h, n1, u2[0], u2[0] + (n2 - 1) * h, n2)

    def to_dict(self) -> dict:
        return asdict(self)


INTERP_ORDER = 9  # points per axis in the Lagrange stencil


def _lagrange_weights(x: float, lo: float, step: float, n: int, m: int) -> Tuple[int, np.ndarray]:
    pos = (x - lo) / step
    start = int(math.floor(pos)) - (m // 2 - 1) if m % 2 == 0 else int(round(pos)) - m // 2
    start = min(max(start, 0), n - m)
    nodes = start + np.arange(m)
    d = pos - nodes
    if np.any(d == 0):
        w = (d == 0).astype(float)
        return start, w
    # barycentric weights of equispaced nodes: (-1)^k C(m-1, k)
    bw = np.array([(-1) ** k * math.comb(m - 1, k) for k in range(m)], dtype=float)
    w = bw / d
    return start, w / w.sum()


@dataclass
class WhittakerGrid:
    spec: WhittakerSpec
    geometry: GridGeometry
    contour: ContourSpec
    values: np.ndarray
    interp_order: int = INTERP_ORDER
    self_test: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values.setflags(write=False)

    def axes(self):
        return self.geometry.axes()

    def interpolate(self, a1: float, a2: float) -> complex:
        g = self.geometry
        u1, u2 = math.log(a1), math.log(a2)
        if not (g.u1_lo <= u1 <= g.u1_hi and g.u2_lo <= u2 <= g.u2_hi):
            raise GridError("point outside the grid geometry")
        m = min(self.interp_order, g.n1, g.n2)
        s1, w1 = _lagrange_weights(u1, g.u1_lo, (g.u1_hi - g.u1_lo) / (g.n1 - 1), g.n1, m)
        s2, w2 = _lagrange_weights(u2, g.u2_lo, (g.u2_hi - g.u2_lo) / (g.n2 - 1), g.n2, m)
        block = self.values[s1:s1 + m, s2:s2 + m]
        return complex(w1 @ block @ w2)

    def header(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "geometry": self.geometry.to_dict(),
            "contour": self.contour.to_dict(),
            "interp_order": self.interp_order,
        }


def build_grid(spec: WhittakerSpec, geometry: GridGeometry = GridGeometry(), contour: ContourSpec = ContourSpec(),
               probes: int = 50, probe_tol: float = 1e-8, seed: int = 0, c2: Optional[float] = None) -> WhittakerGrid:
    """Evaluate on the grid and run the interpolation self-test.

    The probe error is measured relative to the largest grid magnitude, since
    W spans many orders of magnitude across the window.
    """
    u1, u2 = geometry.axes()
    ev = whittaker_gl3_grid(spec, u1, u2, contour, c2=c2, check=False)
    grid = WhittakerGrid(spec, geometry, contour, ev.values)
    report = {"probes": probes, "tolerance": probe_tol, "tail_ratio": ev.tail_ratio}
    if probes:
        rng = np.random.default_rng(seed)
        p1 = rng.uniform(geometry.u1_lo, geometry.u1_hi, probes)
        p2 = rng.uniform(geometry.u2_lo, geometry.u2_hi, probes)
        direct = np.array([whittaker_gl3_grid(spec, [x], [y], contour, c2=c2, check=False).values[0, 0]
                           for x, y in zip(p1, p2)])
        interp = np.array([grid.interpolate(math.exp(x), math.exp(y)) for x, y in zip(p1, p2)])
        scale = float(np.max(np.abs(ev.values))) or 1.0
        err = float(np.max(np.abs(direct - interp))) / scale
        report["max_scaled_error"] = err
        report["passed"] = err <= probe_tol
        if err > probe_tol:
            raise GridError(f"probe self-test failed: scaled error {err:.3e} > {probe_tol:.1e}")
    grid.self_test = report
    return grid


# Cache file format ------------------------------------------------------------

MAGIC = b"GL3WGRD\x00"
FORMAT_VERSION = 1


def _canonical_header(header: dict) -> bytes:
    return json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")


def grid_key(spec: WhittakerSpec, geometry: GridGeometry, contour: ContourSpec) -> str:
    h = {"spec": spec.to_dict(), "geometry": geometry.to_dict(), "contour": contour.to_dict(), "v": FORMAT_VERSION}
    return hashlib.sha256(_canonical_header(h)).hexdigest()[:24]


def save_grid(grid: WhittakerGrid, path: Union[str, Path]) -> Path:
    """Write the grid: magic, u32 version, u32 header length, JSON header,
    zero padding to a multiple of 8, then little-endian float64 (re, im)
    pairs in row-major order."""
    path = Path(path)
    header = _canonical_header(grid.header())
    pre = MAGIC + struct.pack("<II", FORMAT_VERSION, len(header)) + header
    pad = (-len(pre)) % 8
    data = np.empty(grid.values.shape + (2,), dtype="<f8")
    data[..., 0] = grid.values.real
    data[..., 1] = grid.values.imag
    tmp = path.with_suffix(path.suffix + ".tmp")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(tmp, "wb") as fh:
        fh.write(pre + b"\x00" * pad)
        fh.write(np.ascontiguousarray(data).tobytes(order="C"))
    os.replace(tmp, path)
    return path


def load_grid(path: Union[str, Path]) -> WhittakerGrid:
    raw = Path(path).read_bytes()
    if raw[:8] != MAGIC:
        raise GridError("not a Whittaker grid file")
    version, hlen = struct.unpack("<II", raw[8:16])
    if version != FORMAT_VERSION:
        raise GridError(f"unsupported grid format version {version}")
    header = json.loads(raw[16:16 + hlen].decode("utf-8"))
    off = 16 + hlen
    off += (-off) % 8
    spec_d = dict(header["spec"])
    if spec_d.get("j") is not None:
        spec_d["j"] = tuple(spec_d["j"])
    spec = WhittakerSpec(**spec_d)
    geometry = GridGeometry(**header["geometry"])
    contour = ContourSpec(**header["contour"])
    n = geometry.n1 * geometry.n2 * 2
    arr = np.frombuffer(raw, dtype="<f8", count=n, offset=off).reshape(geometry.n1, geometry.n2, 2)
    values = arr[..., 0] + 1j * arr[..., 1]
    return WhittakerGrid(spec, geometry, contour, values, header.get("interp_order", INTERP_ORDER))


def default_cache_dir() -> Path:
    env = os.environ.get("GL3ARCH_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "gl3arch"


def cached_grid(spec: WhittakerSpec, geometry: GridGeometry, contour: ContourSpec = ContourSpec(),
                cache_dir: Optional[Union[str, Path]] = None, probes: int = 0, c2: Optional[float] = None) -> WhittakerGrid:
    """Load the grid from the cache directory or build and store it."""
    if c2 is not None and c2 != contour.c:
        return build_grid(spec, geometry, contour, probes=probes, c2=c2)
    directory = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path = directory / f"{grid_key(spec, geometry, contour)}.w3g"
    if path.exists():
        try:
            return load_grid(path)
        except (GridError, ValueError, KeyError, struct.error):
            pass
    grid = build_grid(spec, geometry, contour, probes=probes)
    try:
        save_grid(grid, path)
    except OSError:
        pass
    return grid
