"""Named check suites returning :class:`~gl3arch.reports.Report` lists.

Each suite is a pure function of its arguments.
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from . import rep_theory as rt
from .exact_algebra import GaussianRational, I
from .gamma_engine import (barnes_first, barnes_first_integrand, barnes_second, barnes_second_integrand,
                           separating_abscissa)
from .mellin_barnes import ContourSpec, contour_integral
from .reports import FAIL, PASS, Report

PAIRING_ANCHORS = (
    ("s(X0^X-2, Y+)", (0, -2), "+", GaussianRational(8)),
    ("s(X0^X2, Y-)", (0, 2), "-", GaussianRational(-8)),
)
S5_ANCHOR = ("s5(X0^X-1^X-2, X1^X2)", (0, -1, -2), (1, 2), GaussianRational(0, -4))


def _exact(lemma: str, params: dict, ok: bool, diagnostics: Optional[dict] = None,
           numeric=None, target=None) -> Report:
    return Report(lemma, params, numeric, target, 0.0 if ok else 1.0, PASS if ok else FAIL, diagnostics or {})


class _CorruptedSO3:
    """V_ell with v_0 replaced by 2 v_0: a deliberately wrong basis."""

    def __init__(self, V):
        self._V = V

    def v(self, i):
        return self._V.v(i).scale(GaussianRational(2)) if i == 0 else self._V.v(i)

    def lie_act(self, X, p):
        return self._V.lie_act(X, p)


def pairing_anchor_reports() -> List[Report]:
    out = []
    for name, (a, b), y, want in PAIRING_ANCHORS:
        got = rt.pairing_s(rt.WedgeCochain.basis("gl3", a, b), rt.WedgeCochain.basis("gl2", y))
        out.append(_exact("pairing_anchor", {"pairing": name}, got == want, numeric=got, target=want))
    name, top, bot, want = S5_ANCHOR
    got = rt.pairing_s5(rt.WedgeCochain.basis("gl3", *top), rt.WedgeCochain.basis("gl3", *bot))
    out.append(_exact("pairing_anchor", {"pairing": name}, got == want, numeric=got, target=want))
    return out


def rep_suite(max_ell: int = 9, corrupt_basis: bool = False) -> List[Report]:
    """All exact representation-theoretic identities up to ``max_ell``."""
    reports: List[Report] = []
    for ell in range(0, max_ell + 1):
        V = rt.so3_module(ell)
        module = _CorruptedSO3(V) if (corrupt_basis and ell >= 1) else None
        res = rt.so3_action_check(ell, module)
        reports.append(_exact("so3_action", {"ell": ell}, all(res.values()), res))
        reports.append(_exact("invariant_vector", {"ell": ell}, rt.invariant_vector_check(ell)))
    res = rt.adjoint_action_check()
    reports.append(_exact("adjoint_action", {}, all(res.values()), res))
    for ell in range(3, max_ell + 1, 2):
        reports.append(_exact("so3_bilinear", {"ell": ell}, rt.lie_bilinear_check(ell)))
    for ell, w in ((3, 0), (5, 0), (5, 2)):
        if ell > max_ell:
            continue
        for degree in (2, 3):
            res = rt.relation_check(ell, w, degree)
            hw = rt.seed_is_highest_weight(ell, w, degree)
            reports.append(_exact("relation", {"ell": ell, "w": w, "degree": degree},
                                  all(res.values()) and hw,
                                  {"terms": {str(k): v for k, v in res.items()}, "highest_weight": hw}))
    for ell in (3, 5, 7):
        if ell > max_ell:
            continue
        mu = rt.sigma_weight(ell, 0)
        for sign in (1, -1):
            ok, _ = rt.rationality_check_ad(mu, sign)
            # the unconjugated action is the negative control (vacuous on the trivial module)
            raw_ok, _ = rt.rationality_check_ad(mu, sign, conjugate=False)
            reports.append(_exact("rationality", {"ell": ell, "mu": [mu.mu1, mu.mu2, mu.mu3], "sign": sign},
                                  ok and (not raw_ok or mu.weyl_dimension() == 1),
                                  {"conjugated_rational": ok, "raw_rational": raw_ok}))
    for kappa in range(2, 7):
        total, closed, coeff = rt.poincare_constants_gl2(kappa, kappa % 2)
        reports.append(_exact("poincare_constants", {"kappa": kappa, "w_pi": kappa % 2},
                              total == closed and coeff == I * 8,
                              {"sum": total, "closed_form": closed, "top_form_coefficient": coeff}))
    reports.extend(pairing_anchor_reports())
    for ell in (3, 5):
        if ell > max_ell:
            continue
        res = rt.adjoint_termwise_check(ell, 0)
        reports.append(_exact("adjoint_termwise", {"ell": ell, "w": 0}, all(res.values()),
                              {str(k): v for k, v in res.items()}))
    for name, k in rt.SAMPLE_ROTATIONS.items():
        reports.append(_exact("wedge_equivariance", {"rotation": name}, rt.wedge_group_equivariance(k)))
    return reports


def random_barnes_parameters(n: int = 20, seed: int = 0):
    """n tuples, alternating first (4 shifts) and second (5 shifts) lemma."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n):
        size = 4 if k % 2 == 0 else 5
        re = rng.uniform(0.2, 2.0, size)
        im = rng.uniform(-1.0, 1.0, size)
        out.append(tuple(complex(a, b) for a, b in zip(re, im)))
    return out


def barnes_report(params, contour: ContourSpec = ContourSpec(), tol: float = 1e-8) -> Report:
    if len(params) == 4:
        a, b, c, d = params
        c0 = separating_abscissa([a, b], [c, d])
        closed = barnes_first(*params)
        res = contour_integral(lambda s: barnes_first_integrand(s, *params), ContourSpec(
            c0, contour.T, contour.N, contour.rule, contour.pole_margin))
        lemma = "barnes_first"
    else:
        a, b, c, d, e = params
        c0 = separating_abscissa([a, b, c], [d, e])
        closed = barnes_second(*params)
        res = contour_integral(lambda s: barnes_second_integrand(s, *params), ContourSpec(
            c0, contour.T, contour.N, contour.rule, contour.pole_margin))
        lemma = "barnes_second"
    dev = abs(res.value - closed) / abs(closed)
    diag = {"abscissa": c0, "tail_ratio": res.tail_ratio, "richardson": res.richardson,
            "error_estimate": res.error_estimate, "tolerance": tol}
    return Report(lemma, {"shifts": list(params)}, res.value, closed, dev, PASS if dev <= tol else FAIL, diag)


def barnes_suite(n: int = 20, seed: int = 0, contour: ContourSpec = ContourSpec(),
                 tol: float = 1e-8) -> List[Report]:
    return [barnes_report(p, contour, tol) for p in random_barnes_parameters(n, seed)]
