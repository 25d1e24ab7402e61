"""Command-line entry point: ``higgs-hahn <command> [options]``.

Commands
--------
verify        exact identity suites (``--suite``), including ``diffop``
residuals     the same identities on truncated Fock matrices
sector        (H, L12, L34) sectors at one energy, with K1/K2 eigendata
overlaps      Hahn fits and overlap matching per sector
dump-catalog  every named operator in normal-ordered text form
report        all of the above in one document

Exit status is 0 on success, 1 when an identity or tolerance fails and 2
on usage errors.  JSON goes to ``--json PATH`` or to stdout with
``--format json``; it is only written once the whole report is assembled.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from . import fock, hahn
from .diffop import run_diffop_suite
from .identities import SUITES, SuiteReport, identities_for, run_suite

COMMANDS = ("verify", "residuals", "sector", "overlaps", "dump-catalog", "report")
EXACT_SUITES = SUITES + ("diffop", "all")
OVERLAP_TOL = 1e-8
REPORT_ENERGY = 10


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    suite: str = "all"
    cutoff: int = 10
    energy: Optional[int] = None
    m1: Optional[float] = None
    m2: Optional[float] = None
    overlaps: bool = False
    json_path: Optional[str] = None
    format: str = "text"
    tol_identity: float = fock.IDENTITY_TOL
    tol_eigen: float = fock.EIGEN_TOL
    timing: bool = True

    def tolerances(self) -> dict:
        return {"identity": self.tol_identity, "eigen": self.tol_eigen,
                "fit": hahn.FIT_TOL, "overlap": OVERLAP_TOL}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cutoff", type=int, default=10, help="Fock cutoff per mode (>= 4)")
    common.add_argument("--json", dest="json_path", metavar="PATH", help="write the JSON report here")
    common.add_argument("--format", choices=("json", "text"), default="text",
                        help="stdout format")
    common.add_argument("--tol-identity", type=float, default=fock.IDENTITY_TOL)
    common.add_argument("--tol-eigen", type=float, default=fock.EIGEN_TOL)
    common.add_argument("--no-timing", dest="timing", action="store_false",
                        help="omit per-identity timings so JSON is byte-reproducible")

    parser = argparse.ArgumentParser(prog="higgs-hahn", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, help_text in (("verify", "exact identity suites"),
                            ("residuals", "numeric residuals on the truncated Fock space"),
                            ("sector", "sector decomposition at one energy"),
                            ("overlaps", "Hahn fits and overlap matching"),
                            ("dump-catalog", "normal-ordered text of every named operator"),
                            ("report", "everything, in one document")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("verify", "residuals", "report"):
            p.add_argument("--suite", choices=EXACT_SUITES, default="all")
        if name in ("sector", "overlaps", "report"):
            p.add_argument("--energy", type=int, required=name != "report",
                           default=None if name != "report" else REPORT_ENERGY)
        if name in ("sector", "overlaps"):
            p.add_argument("--m1", type=float)
            p.add_argument("--m2", type=float)
        if name == "sector":
            p.add_argument("--overlaps", action="store_true",
                           help="include overlap matrices and Hahn matching")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Validate parsed flags; raises :class:`UsageError`."""
    cfg = RunConfig(**{k: v for k, v in vars(args).items()
                       if k in RunConfig.__dataclass_fields__})
    if cfg.cutoff < 4:
        raise UsageError("--cutoff must be at least 4")
    if cfg.tol_identity <= 0 or cfg.tol_eigen <= 0:
        raise UsageError("tolerances must be positive")
    if cfg.energy is not None:
        if cfg.energy < 2:
            raise UsageError("--energy must be at least 2")
        if cfg.energy - 2 > cfg.cutoff:
            raise UsageError(f"energy {cfg.energy} needs --cutoff >= {cfg.energy - 2}")
    for m in (cfg.m1, cfg.m2):
        if m is not None and 2 * m != round(2 * m):
            raise UsageError("--m1/--m2 must be integers or half-integers")
    if cfg.command == "residuals" and cfg.suite == "diffop":
        raise UsageError("the diffop suite has no Fock realization; use verify")
    return cfg


# ----------------------------------------------------------------------
# commands; each returns (ok, json document, text lines)


def _exact_report(suite: str) -> SuiteReport:
    if suite == "diffop":
        return run_diffop_suite()
    report = run_suite(suite)
    if suite == "all":
        extra = run_diffop_suite()
        report = SuiteReport("all", report.results + extra.results, dict(extra.recorded))
    return report


def cmd_verify(cfg: RunConfig):
    report = _exact_report(cfg.suite)
    doc = report.to_json(timing=cfg.timing)
    doc["tolerances"] = cfg.tolerances()
    lines = [f"FAIL {r.name} [{r.citation}]\n{r.residual}" for r in report.results if not r.passed]
    lines += [f"{k} = {v}" for k, v in report.recorded.items()]
    lines.append(report.summary())
    return report.ok, doc, lines


def cmd_residuals(cfg: RunConfig):
    cat = fock.numeric_catalog(cfg.cutoff)
    rows = []
    for ident in sorted(identities_for(cfg.suite), key=lambda c: c.name):
        r = fock.residual(ident, cfg.cutoff, cat)
        rows.append({"name": ident.name, "citation": ident.citation, "residual": r,
                     "pass": r <= cfg.tol_identity})
    passed = sum(r["pass"] for r in rows)
    worst = max((r["residual"] for r in rows), default=0.0)
    doc = {"suite": cfg.suite, "cutoff": cfg.cutoff, "identities": rows, "passed": passed,
           "failed": len(rows) - passed, "max_residual": worst,
           "tolerances": cfg.tolerances()}
    lines = [f"FAIL {r['name']}: residual {r['residual']:.3e}" for r in rows if not r["pass"]]
    lines.append(f"{len(rows)} identities, {passed} passed (max residual {worst:.3e}, "
                 f"cutoff {cfg.cutoff})")
    return passed == len(rows), doc, lines


def _select(cfg: RunConfig, sectors):
    out = [s for s in sectors
           if (cfg.m1 is None or s.m1 == cfg.m1) and (cfg.m2 is None or s.m2 == cfg.m2)]
    if not out:
        raise UsageError(f"no sector with m1={cfg.m1}, m2={cfg.m2} at energy {cfg.energy}")
    return out


def _floats(a) -> List[float]:
    return [float(x) for x in np.real(a)]


def _fit_json(fit: Optional[hahn.HahnFit]):
    if fit is None:
        return None
    p = fit.params
    return {"alpha": str(p.alpha), "beta": str(p.beta), "N": p.N, "scale": fit.scale,
            "shift": fit.shift, "reversed": fit.reversed, "max_error": fit.max_error}


def _hahn_json(sector, cfg: RunConfig):
    """Fit and overlap match; sectors of size 2 admit no unique fit and are skipped."""
    if sector.size == 2:
        return {"fit": None, "overlap_deviation": None, "pass": True, "skipped": "size 2"}
    try:
        rep = hahn.match_overlaps(sector, tol=hahn.FIT_TOL)
    except hahn.FitAbsentError as exc:
        return {"fit": None, "overlap_deviation": None, "pass": False, "error": str(exc)}
    ok = rep.max_deviation <= OVERLAP_TOL and (rep.fit is None or rep.fit.max_error <= hahn.FIT_TOL)
    return {"fit": _fit_json(rep.fit), "overlap_deviation": rep.max_deviation, "pass": ok}


def _sector_json(sector, cfg: RunConfig, with_overlaps: bool):
    tri = fock.jacobi_matrix(sector, cfg.tol_eigen)
    jac = sector.jacobi
    doc = {
        "energy": sector.energy, "m1": sector.m1, "m2": sector.m2, "size": sector.size,
        "k1_spectrum": _floats(sector.k1_values),
        "jacobi": {"diagonal": _floats(np.diag(jac)),
                   "off_diagonal": _floats(np.diag(jac, 1)),
                   "max_imag": float(np.abs(np.imag(jac)).max())},
        "k2_spectrum": _floats(sector.k2_values),
        "off_band": tri.off_band, "dual_off_band": tri.dual_off_band,
    }
    ok = tri.ok
    if with_overlaps:
        ov = fock.overlaps(sector)
        unitarity = float(np.abs(ov.conj().T @ ov - np.eye(sector.size)).max())
        doc["overlaps"] = {"real": [_floats(r) for r in ov],
                           "imag": [_floats(r) for r in np.imag(ov)],
                           "unitarity_error": unitarity}
        doc["hahn"] = _hahn_json(sector, cfg)
        ok = ok and unitarity <= cfg.tol_eigen and doc["hahn"]["pass"]
    doc["pass"] = ok
    return ok, doc


def _sector_line(d) -> str:
    line = (f"E={d['energy']} m1={d['m1']:+g} m2={d['m2']:+g} size={d['size']} "
            f"off-band={d['off_band']:.1e}/{d['dual_off_band']:.1e}")
    h = d.get("hahn")
    if h and h.get("fit"):
        f = h["fit"]
        line += (f" alpha={f['alpha']} beta={f['beta']} N={f['N']} "
                 f"overlap-dev={h['overlap_deviation']:.1e}")
    return line + ("" if d["pass"] else "  FAIL")


def cmd_sector(cfg: RunConfig):
    sectors = _select(cfg, fock.sector_decompose(cfg.energy, tol=cfg.tol_eigen))
    docs, ok = [], True
    for s in sectors:
        good, d = _sector_json(s, cfg, cfg.overlaps)
        ok &= good
        docs.append(d)
    doc = {"energy": cfg.energy, "level_dimension": fock.level_dimension(cfg.energy),
           "sectors": docs, "tolerances": cfg.tolerances()}
    lines = [_sector_line(d) for d in docs]
    lines.append(f"{len(docs)} sectors, {sum(d['pass'] for d in docs)} passed")
    return ok, doc, lines


def cmd_overlaps(cfg: RunConfig):
    sectors = _select(cfg, fock.sector_decompose(cfg.energy, tol=cfg.tol_eigen))
    rows = []
    for s in sectors:
        row = {"energy": s.energy, "m1": s.m1, "m2": s.m2, "size": s.size}
        row.update(_hahn_json(s, cfg))
        rows.append(row)
    passed = sum(r["pass"] for r in rows)
    doc = {"energy": cfg.energy, "sectors": rows, "passed": passed,
           "failed": len(rows) - passed, "tolerances": cfg.tolerances()}
    lines = []
    for r in rows:
        f = r["fit"]
        desc = (f"alpha={f['alpha']} beta={f['beta']} N={f['N']} fit-error={f['max_error']:.1e} "
                f"overlap-dev={r['overlap_deviation']:.1e}") if f else r.get("skipped", r.get("error", "size 1"))
        lines.append(f"E={r['energy']} m1={r['m1']:+g} m2={r['m2']:+g} size={r['size']} {desc}"
                     + ("" if r["pass"] else "  FAIL"))
    lines.append(f"{len(rows)} sectors, {passed} passed")
    return passed == len(rows), doc, lines


def cmd_dump_catalog(cfg: RunConfig):
    from .realizations import exact_catalog

    cat = exact_catalog()
    doc = {name: cat[name].to_text() for name in cat}
    lines = [f"== {name} ==\n{text}" for name, text in doc.items()]
    return True, doc, lines


def cmd_report(cfg: RunConfig):
    ok_v, verify, lv = cmd_verify(cfg)
    res_cfg = cfg if cfg.suite != "diffop" else RunConfig(**{**asdict(cfg), "suite": "all"})
    ok_r, residuals, lr = cmd_residuals(res_cfg)
    sectors, ok_s = [], True
    for E in range(2, cfg.energy + 1):
        for s in fock.sector_decompose(E, tol=cfg.tol_eigen):
            good, d = _sector_json(s, cfg, True)
            ok_s &= good
            sectors.append(d)
    doc = {"verify": verify, "residuals": residuals,
           "sectors": {"max_energy": cfg.energy, "items": sectors},
           "tolerances": cfg.tolerances()}
    lines = [f"verify: {lv[-1]}", f"residuals: {lr[-1]}",
             f"sectors: {len(sectors)} up to E={cfg.energy}, "
             f"{sum(d['pass'] for d in sectors)} passed"]
    return ok_v and ok_r and ok_s, doc, lines


DISPATCH = {"verify": cmd_verify, "residuals": cmd_residuals, "sector": cmd_sector,
            "overlaps": cmd_overlaps, "dump-catalog": cmd_dump_catalog, "report": cmd_report}


def _plain(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, default=_plain) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        ok, doc, lines = DISPATCH[cfg.command](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"higgs-hahn: error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ValueError) as exc:
        print(f"higgs-hahn: {cfg.command} failed: {exc}", file=sys.stderr)
        return 1
    text = _dumps(doc)
    if cfg.json_path:
        with open(cfg.json_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    if cfg.format == "json":
        sys.stdout.write(text)
    else:
        print("\n".join(lines))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
