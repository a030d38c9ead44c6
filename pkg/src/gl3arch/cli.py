"""Command-line entry point.

Exit codes: 0 all checks pass, 1 mathematical mismatch, 2 quadrature
diagnostics failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence

from . import _kernels
from .euler_factory import IDENTITIES, check_factorization
from .mellin_barnes import (ContourError, ContourSpec, GridError, GridGeometry, QuadratureError, WhittakerSpec,
                            cached_grid, whittaker_gl3)
from .reports import QUADRATURE_FAILURE, Report, document, dumps, format_text
from .suites import barnes_suite, rep_suite
from .zeta_verify import (QuadConfig, adjoint_cohomology_pairing, adjoint_pairing, critical_set,
                          criticality_check, rs_cohomology_pairing, rs_zeta)

EXIT_OK, EXIT_MISMATCH, EXIT_QUADRATURE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


@dataclass
class RunConfig:
    T: float = 60.0
    nodes: int = 2400
    pole_margin: float = 0.25
    grid: float = 0.1
    tol: Optional[float] = None
    format: str = "json"
    out: Optional[str] = None
    jobs: int = 1
    cache_dir: Optional[str] = None
    backend: str = field(default_factory=_kernels.backend)

    def contour(self, c: float = 1.0) -> ContourSpec:
        return ContourSpec(c=c, T=self.T, N=self.nodes, pole_margin=self.pole_margin)

    def quad(self) -> QuadConfig:
        return QuadConfig(h=self.grid, contour=self.contour())

    def tolerance(self, default: float) -> float:
        return default if self.tol is None else self.tol

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("format")
        d.pop("jobs")  # parallelism does not change results
        return d


# ---------------------------------------------------------------------------
# report producers


Task = Callable[[], List[Report]]


def _guard(task: Task, label: dict) -> Task:
    def run() -> List[Report]:
        try:
            return task()
        except (QuadratureError, ContourError) as exc:
            return [Report("quadrature", label, None, None, None, QUADRATURE_FAILURE, {"error": str(exc)})]
    return run


def _tasks_rep(a, cfg: RunConfig) -> List[Task]:
    return [lambda: rep_suite(a.max_ell, corrupt_basis=a.corrupt_basis)]


def _tasks_barnes(a, cfg: RunConfig) -> List[Task]:
    return [lambda: barnes_suite(a.count, a.seed, cfg.contour(), cfg.tolerance(1e-8))]


def _rs_s_values(a) -> List[float]:
    return a.s if a.s else [1.5]


def _tasks_rs(a, cfg: RunConfig) -> List[Task]:
    _need(a, "ell", "kappa")
    out = []
    for s in _rs_s_values(a):
        def t(s=s):
            return [rs_zeta(a.ell, a.kappa, a.w_sigma, _w_pi(a), a.epsilon, s, cfg.quad(),
                            cfg.tolerance(1e-6)).to_report()]
        out.append(_guard(t, {"lemma": "rs_zeta", "s": s}))
    return out


def _tasks_adjoint(a, cfg: RunConfig) -> List[Task]:
    _need(a, "ell")
    return [_guard(lambda: [adjoint_pairing(a.ell, cfg.quad(), cfg.tolerance(1e-4)).to_report()],
                   {"lemma": "adjoint_pairing", "ell": a.ell})]


def _tasks_membership(a, cfg: RunConfig) -> List[Task]:
    _need(a, "ell")
    if a.kappa is None:
        return [_guard(lambda: [adjoint_cohomology_pairing(a.ell, cfg.quad(), tol=cfg.tolerance(1e-6)).to_report()],
                       {"lemma": "adjoint_membership", "ell": a.ell})]
    w_pi = _w_pi(a)
    ms = a.m if a.m else critical_set(a.ell, a.kappa, a.w_sigma, w_pi)
    tasks: List[Task] = [lambda: [criticality_check(a.ell, a.kappa, a.w_sigma, w_pi, 6)]]
    for m in ms:
        for sign in (1, -1):
            def t(m=m, sign=sign):
                return [rs_cohomology_pairing(a.ell, a.kappa, a.w_sigma, w_pi, a.epsilon, m, sign, cfg.quad(),
                                              tol=cfg.tolerance(1e-6)).to_report()]
            tasks.append(_guard(t, {"lemma": "rs_membership", "m": m, "sign": sign}))
    return tasks


def _tasks_factorization(a, cfg: RunConfig) -> List[Task]:
    ids = [a.id] if a.id else sorted(IDENTITIES)
    return [lambda i=i: [check_factorization(i, a.drop).to_report()] for i in ids]


def _tasks_all(a, cfg: RunConfig) -> List[Task]:
    """The acceptance sequence with default parameters."""
    quad = cfg.quad()
    tasks: List[Task] = [lambda: rep_suite(9), lambda: barnes_suite(20, 0, cfg.contour(), cfg.tolerance(1e-8))]
    for ell, kappa, s in ((5, 3, 1.5), (7, 3, 2.5), (7, 5, 1.5)):
        tasks.append(_guard(lambda ell=ell, kappa=kappa, s=s: [
            rs_zeta(ell, kappa, 0, None, 1, s, quad, cfg.tolerance(1e-6)).to_report()], {"lemma": "rs_zeta"}))
    adj = {}
    for ell in (3, 5):
        def t(ell=ell):
            rep = adjoint_pairing(ell, quad, cfg.tolerance(1e-4))
            adj[ell] = rep.numeric
            return [rep.to_report(), adjoint_cohomology_pairing(ell, numeric=rep.numeric).to_report()]
        tasks.append(_guard(t, {"lemma": "adjoint_pairing", "ell": ell}))
    tasks.append(lambda: [criticality_check(5, 3, 0, 1, 6)])
    for m in critical_set(5, 3, 0, 1):
        for eps in (1, -1):
            for sign in (1, -1):
                tasks.append(_guard(lambda m=m, eps=eps, sign=sign: [rs_cohomology_pairing(
                    5, 3, 0, 1, eps, m, sign, quad, crosscheck=(eps == 1 and sign == (-1) ** (m % 2)),
                    tol=cfg.tolerance(1e-6)).to_report()], {"lemma": "rs_membership"}))
    for i in sorted(IDENTITIES):
        tasks.append(lambda i=i: [check_factorization(i).to_report()])
    return tasks


PRODUCERS = {
    "rep": _tasks_rep, "barnes": _tasks_barnes, "rs-zeta": _tasks_rs, "adjoint": _tasks_adjoint,
    "membership": _tasks_membership, "factorization": _tasks_factorization, "all": _tasks_all,
}


def _w_pi(a) -> int:
    return a.kappa % 2 if a.w_pi is None else a.w_pi


def _need(a, *names):
    missing = [n for n in names if getattr(a, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def run_tasks(tasks: Sequence[Task], jobs: int) -> List[Report]:
    if jobs <= 1:
        results = [t() for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda t: t(), tasks))
    return [r for rs in results for r in rs]


def exit_code(reports: Sequence[Report]) -> int:
    if any(r.verdict == QUADRATURE_FAILURE for r in reports):
        return EXIT_QUADRATURE
    return EXIT_OK if all(r.ok for r in reports) else EXIT_MISMATCH


def emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# eval whittaker


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _eval_whittaker(a, cfg: RunConfig) -> int:
    if (a.j is None) == (a.i is None):
        raise UsageError("give exactly one of --j and --i")
    a1s, a2s = _floats(a.a1), _floats(a.a2)
    if not a1s or len(a1s) != len(a2s):
        raise UsageError("--a1 and --a2 need the same number of values")
    if any(not (x > 0) for x in a1s + a2s):
        raise UsageError("--a1 and --a2 must be positive")
    try:
        j = tuple(int(x) for x in a.j.split(",")) if a.j is not None else None
        spec = WhittakerSpec("GL3", ell=a.ell, w=a.w_sigma, epsilon=a.epsilon, j=j, i=a.i)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    contour = cfg.contour()
    rows = []
    diag = {}
    try:
        if a.cache:
            geom = GridGeometry.with_step((-5.0, 4.0), (-5.0, 4.0), cfg.grid)
            cache_dir = Path(cfg.cache_dir) if cfg.cache_dir else None
            grid = cached_grid(spec, geom, contour, cache_dir=cache_dir)
            diag = {"source": "grid", "geometry": geom.to_dict(), "interp_order": grid.interp_order}
            for x, y in zip(a1s, a2s):
                rows.append({"a1": x, "a2": y, "value": grid.interpolate(x, y)})
        else:
            diag = {"source": "direct"}
            for x, y in zip(a1s, a2s):
                rows.append({"a1": x, "a2": y, "value": whittaker_gl3(spec, x, y, contour)})
    except (QuadratureError, ContourError, GridError) as exc:
        rep = Report("whittaker", spec.to_dict(), None, None, None, QUADRATURE_FAILURE, {"error": str(exc)})
        _write([rep], a, cfg)
        return EXIT_QUADRATURE
    rep = Report("whittaker", spec.to_dict(), rows, None, None, "pass", diag)
    _write([rep], a, cfg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("run configuration")
    g.add_argument("--T", type=float, default=60.0, help="contour half-height (default 60)")
    g.add_argument("--nodes", type=int, default=2400, help="contour intervals, even (default 2400)")
    g.add_argument("--pole-margin", type=float, default=0.25, help="minimal contour-to-pole distance")
    g.add_argument("--grid", type=float, default=0.1,
                   help="log-step of the radial quadrature / Whittaker cache grid (default 0.1)")
    g.add_argument("--tol", type=float, default=None, help="override the acceptance tolerance")
    g.add_argument("--format", choices=("json", "text"), default="json")
    g.add_argument("--out", default=None, help="write the report here instead of stdout")
    g.add_argument("--jobs", type=int, default=1, help="independent reports computed in parallel")
    g.add_argument("--cache-dir", default=None,
                   help="grid cache directory (default $GL3ARCH_CACHE_DIR or ~/.cache/gl3arch)")
    g.add_argument("--timestamp", default=None, help="fixed envelope timestamp (for reproducible files)")


def _weights(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--kappa", type=int, default=None)
    p.add_argument("--w-sigma", type=int, default=0)
    p.add_argument("--w-pi", type=int, default=None, help="default: kappa mod 2")
    p.add_argument("--epsilon", type=int, choices=(1, -1), default=1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gl3arch", description="Exact and numerical checks of GL(3) x GL(2) archimedean computations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ver = sub.add_parser("verify", help="run a verification and emit a report")
    vsub = ver.add_subparsers(dest="what", required=True, parser_class=_Parser)

    q = vsub.add_parser("rep", help="exact representation-theory suite")
    q.add_argument("--max-ell", type=int, default=9)
    q.add_argument("--corrupt-basis", action="store_true", help="test hook: perturb the V_ell basis")
    _common(q)

    q = vsub.add_parser("barnes", help="Barnes lemmas on random parameters")
    q.add_argument("--count", type=int, default=20)
    q.add_argument("--seed", type=int, default=0)
    _common(q)

    q = vsub.add_parser("rs-zeta", help="Rankin-Selberg zeta integral against its closed form")
    _weights(q)
    q.add_argument("--s", type=float, action="append", default=None, help="evaluation point (repeatable)")
    _common(q)

    q = vsub.add_parser("adjoint", help="adjoint pairing against its closed form")
    _weights(q)
    _common(q)

    q = vsub.add_parser("membership", help="pi-power membership of the cohomological pairings")
    _weights(q)
    q.add_argument("--m", type=int, action="append", default=None, help="critical point (repeatable)")
    _common(q)

    q = vsub.add_parser("factorization", help="Satake-parameter factorization identities")
    q.add_argument("--id", choices=sorted(IDENTITIES), default=None)
    q.add_argument("--drop", type=int, default=-1, help="negative control: drop this right-hand monomial")
    _common(q)

    q = vsub.add_parser("all", help="the whole acceptance sequence")
    _common(q)

    ev = sub.add_parser("eval", help="evaluate special functions")
    esub = ev.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = esub.add_parser("whittaker", help="GL3 Whittaker function on diag(a1 a2, a2, 1)")
    _weights(q)
    q.add_argument("--j", default=None, help="monomial index j1,j2,j3")
    q.add_argument("--i", type=int, default=None, help="SO(3) index i")
    q.add_argument("--a1", required=True, help="comma-separated positive values")
    q.add_argument("--a2", required=True, help="comma-separated positive values")
    q.add_argument("--cache", action="store_true", help="evaluate through a cached interpolation grid")
    _common(q)
    return p


def _config(a) -> RunConfig:
    if a.nodes <= 0 or a.nodes % 2:
        raise UsageError("--nodes must be a positive even integer")
    if not (a.T > 0 and a.grid > 0 and a.pole_margin > 0) or not math.isfinite(a.T):
        raise UsageError("--T, --grid and --pole-margin must be positive")
    if a.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return RunConfig(T=a.T, nodes=a.nodes, pole_margin=a.pole_margin, grid=a.grid, tol=a.tol,
                     format=a.format, out=a.out, jobs=a.jobs,
                     cache_dir=a.cache_dir or os.environ.get("GL3ARCH_CACHE_DIR"))


def _write(reports: List[Report], a, cfg: RunConfig) -> None:
    if cfg.format == "text":
        emit(format_text(reports), cfg.out)
    else:
        emit(dumps(document(reports, cfg.echo(), a.timestamp)), cfg.out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        cfg = _config(a)
        if a.command == "eval":
            return _eval_whittaker(a, cfg)
        tasks = PRODUCERS[a.what](a, cfg)
        reports = run_tasks(tasks, cfg.jobs)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"gl3arch: error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:  # parameter-domain violations from the library
        sys.stderr.write(f"gl3arch: error: {exc}\n")
        return EXIT_USAGE
    _write(reports, a, cfg)
    return exit_code(reports)


if __name__ == "__main__":
    raise SystemExit(main())
