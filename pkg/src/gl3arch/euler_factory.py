"""Formal Satake-parameter calculus for unramified Euler factors.

A parameter is a multiset of Laurent monomials alpha^a beta^b, stored as a
Counter over exponent pairs.  Two Euler factors prod (1 - gamma T)^{-1}
agree as rational functions in T exactly when their multisets agree.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterable, List, Tuple

from .gamma_engine import GammaExpr, LFactorSpec, l_factor_expr
from .reports import FAIL, PASS, Report

Monomial = Tuple[int, int]


@dataclass(frozen=True)
class SatakeMultiset:
    counts: Tuple[Tuple[Monomial, int], ...]

    @staticmethod
    def of(monomials: Iterable[Monomial]) -> "SatakeMultiset":
        c = Counter(tuple(map(int, m)) for m in monomials)
        return SatakeMultiset._from_counter(c)

    @staticmethod
    def _from_counter(c: Counter) -> "SatakeMultiset":
        return SatakeMultiset(tuple(sorted((k, v) for k, v in c.items() if v > 0)))

    @property
    def counter(self) -> Counter:
        return Counter(dict(self.counts))

    def __len__(self) -> int:
        return sum(v for _, v in self.counts)

    def elements(self) -> List[Monomial]:
        return sorted(self.counter.elements())

    def __add__(self, other: "SatakeMultiset") -> "SatakeMultiset":
        """Disjoint union: product of Euler factors."""
        return SatakeMultiset._from_counter(self.counter + other.counter)

    def tensor(self, other: "SatakeMultiset") -> "SatakeMultiset":
        c: Counter = Counter()
        for (a, m), (b, n) in product(self.counts, other.counts):
            c[(a[0] + b[0], a[1] + b[1])] += m * n
        return SatakeMultiset._from_counter(c)

    __mul__ = tensor

    def dual(self) -> "SatakeMultiset":
        return SatakeMultiset._from_counter(Counter({(-a, -b): v for (a, b), v in self.counts}))

    def twist(self, k: int) -> "SatakeMultiset":
        """Multiply every monomial by (alpha beta)^k."""
        return SatakeMultiset._from_counter(Counter({(a + k, b + k): v for (a, b), v in self.counts}))

    def diff(self, other: "SatakeMultiset") -> Dict[str, List[Monomial]]:
        a, b = self.counter, other.counter
        return {"only_left": sorted((a - b).elements()), "only_right": sorted((b - a).elements())}

    def elementary_symmetric(self) -> List[Counter]:
        """e_k of the monomials, as Laurent polynomials in alpha, beta."""
        e: List[Counter] = [Counter({(0, 0): 1})]
        for mono in self.elements():
            nxt = [Counter(x) for x in e] + [Counter()]
            for k, poly in enumerate(e):
                for (a, b), v in poly.items():
                    nxt[k + 1][(a + mono[0], b + mono[1])] += v
            e = [Counter({k: v for k, v in p.items() if v}) for p in nxt]
        return e

    def to_list(self) -> List[List[int]]:
        return [list(m) for m in self.elements()]


STANDARD = SatakeMultiset.of([(1, 0), (0, 1)])
TRIVIAL = SatakeMultiset.of([(0, 0)])


def sym_power(S: SatakeMultiset, k: int) -> SatakeMultiset:
    """Sym^k of a two-element parameter {alpha, beta}."""
    els = S.elements()
    if len(els) != 2:
        raise ValueError("sym_power expects a two-element parameter")
    if k < 0:
        raise ValueError("k must be non-negative")
    (a1, b1), (a2, b2) = els
    return SatakeMultiset.of([(i * a1 + (k - i) * a2, i * b1 + (k - i) * b2) for i in range(k + 1)])


def equal_by_symmetric_functions(S: SatakeMultiset, T: SatakeMultiset) -> bool:
    """Equality through the coefficients of prod (1 - gamma X)."""
    return S.elementary_symmetric() == T.elementary_symmetric()


def _sym2_x_sym2() -> Tuple[SatakeMultiset, SatakeMultiset, List[Tuple[str, SatakeMultiset]]]:
    sym2 = sym_power(STANDARD, 2)
    left = sym2 * sym2.dual()
    parts = [("Sym4 twisted by -2", sym_power(STANDARD, 4).twist(-2)),
             ("Sym2 twisted by -1", sym2.twist(-1)),
             ("trivial", TRIVIAL)]
    return left, _union(parts), parts


def _triple_product() -> Tuple[SatakeMultiset, SatakeMultiset, List[Tuple[str, SatakeMultiset]]]:
    left = STANDARD * STANDARD * STANDARD
    parts = [("Sym2 x std", sym_power(STANDARD, 2) * STANDARD),
             ("std twisted by 1", STANDARD.twist(1))]
    return left, _union(parts), parts


def _union(parts) -> SatakeMultiset:
    out = SatakeMultiset.of([])
    for _, p in parts:
        out = out + p
    return out


IDENTITIES: Dict[str, Callable] = {"sym2_x_sym2": _sym2_x_sym2, "triple_product": _triple_product}


@dataclass(frozen=True)
class FactorizationResult:
    identity: str
    equal: bool
    equal_symmetric: bool
    left: SatakeMultiset
    right: SatakeMultiset
    diff: Dict[str, List[Monomial]]
    perturbed: bool = False

    @property
    def consistent(self) -> bool:
        return self.equal == self.equal_symmetric

    def to_report(self) -> Report:
        arch = archimedean_degree_check() if self.identity == "sym2_x_sym2" else None
        ok = self.equal and self.consistent and (arch is None or arch["ok"])
        params = {"id": self.identity, "perturbed": self.perturbed}
        diag = {"left": self.left.to_list(), "right": self.right.to_list(), "diff": self.diff,
                "symmetric_function_check": self.equal_symmetric}
        if arch is not None:
            diag["archimedean"] = arch
        return Report("factorization", params, len(self.left), len(self.right),
                      float(len(self.diff["only_left"]) + len(self.diff["only_right"])),
                      PASS if ok else FAIL, diag)


def check_factorization(identity: str, drop: int = -1) -> FactorizationResult:
    """Compare both sides; ``drop`` >= 0 removes that monomial of the right
    side (a negative control)."""
    if identity not in IDENTITIES:
        raise ValueError(f"unknown identity {identity!r}; known: {sorted(IDENTITIES)}")
    left, right, _ = IDENTITIES[identity]()
    if drop >= 0:
        els = right.elements()
        right = SatakeMultiset.of(els[:drop] + els[drop + 1:])
    return FactorizationResult(identity, left == right, equal_by_symmetric_functions(left, right),
                               left, right, left.diff(right), drop >= 0)


def gamma_r_shifts(expr: GammaExpr) -> Counter:
    """Multiset of Gamma_R shifts, using Gamma_C(s + a) = Gamma_R(s + a) Gamma_R(s + a + 1)."""
    c: Counter = Counter()
    for f in expr.factors:
        shifts = [f.shift] if f.kind == "R" else [f.shift, f.shift + 1]
        for a in shifts:
            c[Fraction(a)] += f.exponent
    return Counter({k: v for k, v in c.items() if v})


def archimedean_sym2_pieces(kappa: int) -> Dict[str, GammaExpr]:
    """Gamma factors of the three pieces for Pi_infinity = D_kappa.

    The one-dimensional constituent of Sym^{2k} (x) det^{-k} is sgn^k, which
    fixes the Gamma_R shifts 0 (Sym^4) and 1 (Sym^2).
    """
    k1 = kappa - 1
    return {
        "Sym4": GammaExpr.of(("C", 2 * k1, 1), ("C", k1, 1), ("R", 0, 1)),
        "Sym2": GammaExpr.of(("C", k1, 1), ("R", 1, 1)),
        "trivial": GammaExpr.of(("R", 0, 1)),
    }


def archimedean_degree_check(kappa: int = 3) -> dict:
    """3 x 3 = 5 + 3 + 1 at the level of gamma factors.

    Sym^2 of D_kappa has the GL3 type with l = 2 kappa - 1, so the left side
    is the adjoint-type factor for that l.
    """
    left = l_factor_expr(LFactorSpec("adjoint_GL3", 2 * kappa - 1))
    pieces = archimedean_sym2_pieces(kappa)
    right: Counter = Counter()
    for e in pieces.values():
        right.update(gamma_r_shifts(e))
    degrees = {name: e.degree() for name, e in pieces.items()}
    same = gamma_r_shifts(left) == right
    return {"kappa": kappa, "left_degree": left.degree(), "right_degrees": degrees,
            "gamma_factors_match": same,
            "ok": same and left.degree() == 9 and sorted(degrees.values()) == [1, 3, 5]}
