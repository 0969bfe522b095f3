"""Command-line entry point: configuration, session bindings and dispatch.

Configuration precedence is flags > config file > environment > defaults.
Environment variables use the ``SEGRELC_`` prefix (``SEGRELC_FIELD``,
``SEGRELC_BOX``, ``SEGRELC_CACHE_DIR``, ``SEGRELC_THREADS``,
``SEGRELC_FORMAT``, ``SEGRELC_OUT``, ``SEGRELC_CONFIG``).

Exit codes: 0 verified, 1 refuted, 2 inconclusive, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
import time
from dataclasses import asdict, dataclass
from dataclasses import field as dc_field
from pathlib import Path

from . import __version__
from .algebra import GF, QQ, Field, Ring
from .cech import Box, MonomialModule, UnsupportedRouteError, cd_detect, cech_table, grade_detect
from .dmodule import classify_degree_support, verify_eulerian
from .dsl import (
    CdCmd,
    DepthCmd,
    DSLError,
    EulerianCmd,
    GotoCmd,
    IdealDecl,
    KunnethCmd,
    LcTableCmd,
    ModuleDecl,
    ReportCmd,
    RingDecl,
    SaturationCmd,
    SegreDecl,
    Statement,
    parse_script,
)
from .groebner import Ideal, ModulePresentation, set_cache_dir
from .kunneth import (
    verify_cd,
    verify_depth,
    verify_goto_watanabe,
    verify_kunneth,
    verify_saturation_product,
)
from .report import emit_report, to_plain
from .resolution import local_cohomology_series
from .segre import segre_presentation
from .verdict import EXIT_CODES, INCONCLUSIVE, REFUTED, VERIFIED, VerificationVerdict, combine

log = logging.getLogger("segrelc")

ENV_PREFIX = "SEGRELC_"
EXIT_USAGE = 3


# -- configuration --------------------------------------------------------------------------


@dataclass
class Config:
    field: str = "QQ"
    box: tuple[int, int] = (-3, 3)
    cache_dir: str | None = None
    threads: int = 1
    format: str = "json"
    out: str | None = None
    sources: dict = dc_field(default_factory=dict)

    KEYS = ("field", "box", "cache_dir", "threads", "format", "out")

    def set(self, key: str, value, source: str) -> None:
        if value is None:
            return
        if key == "box":
            value = parse_range(value) if isinstance(value, str) else tuple(int(v) for v in value)
        elif key == "threads":
            value = int(value)
            if value < 1:
                raise ValueError("threads must be at least 1")
        elif key == "format" and value not in ("json", "markdown"):
            raise ValueError(f"format must be json or markdown, not {value!r}")
        elif key == "field":
            parse_field(value)
        setattr(self, key, value)
        self.sources[key] = source

    def field_obj(self) -> Field:
        return parse_field(self.field)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["box"] = list(self.box)
        return d


def parse_range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise ValueError(f"expected lo..hi, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise ValueError(f"empty range {text!r}")
    return lo, hi


def parse_field(text: str) -> Field:
    t = re.sub(r"\s+", "", text)
    if t == "QQ":
        return QQ
    m = re.fullmatch(r"GF\((\d+)\)", t)
    if m:
        return GF(int(m.group(1)))
    raise ValueError(f"unknown field {text!r} (use QQ or GF(p))")


def load_config(args: argparse.Namespace, environ=None) -> Config:
    environ = os.environ if environ is None else environ
    cfg = Config()
    for key in Config.KEYS:
        cfg.set(key, environ.get(ENV_PREFIX + key.upper()), "env")
    path = getattr(args, "config", None) or environ.get(ENV_PREFIX + "CONFIG")
    if path:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        unknown = set(data) - set(Config.KEYS)
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        for key in Config.KEYS:
            cfg.set(key, data.get(key), "config")
    for key in Config.KEYS:
        cfg.set(key, getattr(args, key, None), "flag")
    return cfg


# -- session ------------------------------------------------------------------------------------


@dataclass
class Result:
    statement: str
    line: int
    kind: str
    verdict: VerificationVerdict | None
    payload: dict = dc_field(default_factory=dict)
    witnesses: list = dc_field(default_factory=list)
    seconds: float = 0.0

    def as_dict(self) -> dict:
        v = self.verdict
        return {
            "statement": self.statement,
            "line": self.line,
            "kind": self.kind,
            "status": v.status if v else "bound",
            "certainty": v.certainty if v else None,
            "detail": v.detail if v else "",
            "verdict": v.as_dict() if v else None,
            "witnesses": self.witnesses,
            "payload": self.payload,
            "seconds": round(self.seconds, 4),
        }


class Session:
    """Named bindings plus configuration; executes parsed statements in order."""

    KINDS = ("ring", "ideal", "module", "segre")

    def __init__(self, config: Config | None = None):
        self.config = config or Config()
        self.bindings: dict[str, dict] = {k: {} for k in self.KINDS}
        self.results: list[Result] = []
        self.report_targets: list[ReportCmd] = []
        self.history: list[str] = []
        if self.config.cache_dir:
            set_cache_dir(self.config.cache_dir)

    # lookups
    def _get(self, kind: str, name: str, stmt: Statement):
        if name in self.bindings[kind]:
            return self.bindings[kind][name]
        for other, table in self.bindings.items():
            if name in table:
                raise DSLError(f"{name!r} is a {other}, expected a {kind}", stmt.line, stmt.column)
        raise DSLError(f"unbound {kind} {name!r}", stmt.line, stmt.column)

    def _bind(self, kind: str, name: str, value, stmt: Statement) -> None:
        if name in self.bindings[kind]:
            raise DSLError(f"{kind} {name!r} is already bound", stmt.line, stmt.column)
        self.bindings[kind][name] = value

    def _module_slot(self, name: str, ring: Ring, stmt: Statement) -> ModulePresentation | None:
        if name in self.bindings["ring"]:
            if self.bindings["ring"][name] != ring:
                raise DSLError(f"module slot {name!r} names a different ring", stmt.line, stmt.column)
            return None
        M = self._get("module", name, stmt)
        if M.ring != ring:
            raise DSLError(f"module {name!r} lives over another ring", stmt.line, stmt.column)
        return M

    def _ideal_in(self, name: str, ring: Ring, stmt: Statement) -> Ideal:
        I = self._get("ideal", name, stmt)
        if I.ring != ring:
            raise DSLError(f"ideal {name!r} lives in another ring", stmt.line, stmt.column)
        return I

    def _boxes(self, box, *rings):
        lo, hi = box or self.config.box
        return [Box.uniform(R.ngens, lo, hi) for R in rings]

    def _field(self, text: str) -> Field:
        return self.config.field_obj() if text == "k" else parse_field(text)

    # execution
    def run(self, statements: list[Statement]) -> list[Result]:
        for st in statements:
            self.history.append(st.text)
            t0 = time.perf_counter()
            try:
                res = self._execute(st)
            except (UnsupportedRouteError, NotImplementedError) as exc:
                res = Result(st.text, st.line, type(st.command).__name__, VerificationVerdict.inconclusive(str(exc)))
            res.seconds = time.perf_counter() - t0
            log.info("line %d: %s -> %s", st.line, st.text, res.verdict.status if res.verdict else "bound")
            self.results.append(res)
        return self.results

    def _execute(self, st: Statement) -> Result:
        c = st.command
        kind = type(c).__name__
        if isinstance(c, RingDecl):
            F = self._field(c.field)
            base = Ring(c.variables, F)
            try:
                rels = [base(r) for r in c.relations]
                R = Ring(c.variables, F, relations=rels) if rels else base
            except DSLError as exc:
                raise DSLError(exc.message, st.line, st.column) from None
            self._bind("ring", c.name, R, st)
            return Result(st.text, st.line, kind, None, {"ring": repr(R)})
        if isinstance(c, IdealDecl):
            R = self._get("ring", c.ring, st)
            try:
                I = Ideal(R, [R(g) for g in c.generators])
            except DSLError as exc:
                raise DSLError(exc.message, st.line, st.column) from None
            self._bind("ideal", c.name, I, st)
            return Result(st.text, st.line, kind, None, {"generators": [str(g) for g in I.generators]})
        if isinstance(c, ModuleDecl):
            R = self._get("ring", c.ring, st)
            if c.matrix is None:
                M = ModulePresentation.free(R, c.twists)
            else:
                try:
                    rows = [[R(e) for e in row] for row in c.matrix]
                except DSLError as exc:
                    raise DSLError(exc.message, st.line, st.column) from None
                cols = [[row[j] for row in rows] for j in range(len(rows[0]))] if rows else []
                M = ModulePresentation(R, c.twists, cols)
            self._bind("module", c.name, M, st)
            return Result(st.text, st.line, kind, None, {"hilbert_series": M.hilbert_series().format()})
        if isinstance(c, SegreDecl):
            R, S = self._get("ring", c.left, st), self._get("ring", c.right, st)
            P = segre_presentation(R, S)
            self._bind("segre", c.name, P, st)
            self._bind("ring", c.name, P.ring, st)
            return Result(st.text, st.line, kind, None, {"presentation": str(P), "hilbert_series": P.hilbert_series().format()})
        if isinstance(c, LcTableCmd):
            return self._lctable(c, st)
        if isinstance(c, KunnethCmd):
            R, S = self._get("ring", c.R, st), self._get("ring", c.S, st)
            I, J = self._ideal_in(c.I, R, st), self._ideal_in(c.J, S, st)
            M, N = self._module_slot(c.M, R, st), self._module_slot(c.N, S, st)
            bR, bS = self._boxes(c.box, R, S)
            rep = verify_kunneth(R, I, M, S, J, N, bR, bS, c.kmax, threads=self.config.threads)
            return Result(st.text, st.line, kind, rep.verdict, rep.as_dict(), rep.witnesses[:50])
        if isinstance(c, SaturationCmd):
            R, S = self._get("ring", c.R, st), self._get("ring", c.S, st)
            I, J = self._ideal_in(c.I, R, st), self._ideal_in(c.J, S, st)
            M, N = self._module_slot(c.M, R, st), self._module_slot(c.N, S, st)
            bR, bS = self._boxes(c.box, R, S)
            v = verify_saturation_product(R, I, M, S, J, N, bR, bS, threads=self.config.threads)
            return Result(st.text, st.line, kind, v, v.data)
        if isinstance(c, GotoCmd):
            R, S = self._get("ring", c.R, st), self._get("ring", c.S, st)
            M, N = self._module_slot(c.M, R, st), self._module_slot(c.N, S, st)
            rep = verify_goto_watanabe(R, M, S, N, c.window)
            return Result(st.text, st.line, kind, rep.verdict, rep.as_dict(), rep.witnesses)
        if isinstance(c, (DepthCmd, CdCmd)):
            I, J = self._get("ideal", c.I, st), self._get("ideal", c.J, st)
            R, S = I.ring, J.ring
            bR, bS = self._boxes(c.box, R, S)
            fn = verify_depth if isinstance(c, DepthCmd) else verify_cd
            v = fn(R, I, S, J, c.mode, bR, bS, threads=self.config.threads)
            w = [v.witness] if v.witness else []
            seg = v.data.get("grade_segre") or v.data.get("cd_segre")
            if seg and seg.get("witness"):
                w.append(seg["witness"])
            return Result(st.text, st.line, kind, v, v.data, w)
        if isinstance(c, EulerianCmd):
            return self._eulerian(c, st)
        if isinstance(c, ReportCmd):
            self.report_targets.append(c)
            return Result(st.text, st.line, kind, None, {"out": c.out})
        raise DSLError(f"unsupported command {kind}", st.line, st.column)

    def _lctable(self, c: LcTableCmd, st: Statement) -> Result:
        R = self._get("ring", c.ring, st)
        I = self._ideal_in(c.ideal, R, st)
        M = self._module_slot(c.module, R, st)
        (box,) = self._boxes(c.box, R)
        try:
            mono = MonomialModule.from_presentation(R, M)
            if not I.is_monomial():
                raise UnsupportedRouteError("ideal is not monomial")
        except UnsupportedRouteError:
            return self._lctable_duality(c, st, R, I, M, box)
        table = cech_table(mono, I.monomial_exponents(), box, R.field, self.config.threads)
        g, cd = grade_detect(table), cd_detect(table)
        payload = table.as_dict()
        payload["table_preview"] = payload["nonzero_entries"][:20]
        payload["aggregates"] = {
            str(i): {str(l): {"dim": d, "complete": ok} for l, (d, ok) in table.aggregate(i).items()}
            for i in range(table.max_index + 1)
        }
        payload["grade"] = g.as_dict()
        payload["cd"] = cd.as_dict()
        certain = g.certainty.startswith("certified") and cd.certainty == "certified"
        v = VerificationVerdict(
            VERIFIED if certain else INCONCLUSIVE,
            f"grade {g.value}, cd {cd.value}",
            certainty="certified" if certain else "window-limited",
        )
        wit = [d.witness for d in (g, cd) if d.witness]
        return Result(st.text, st.line, "LcTableCmd", v, payload, wit)

    def _lctable_duality(self, c, st, R, I, M, box) -> Result:
        if I != Ideal(R, R.gens()):
            raise UnsupportedRouteError("non-monomial data is only supported at the maximal ideal")
        pres = M if M is not None else ModulePresentation.free(R)
        series = local_cohomology_series(pres)
        lo, hi = box.total_range
        n = R.ngens
        dims = {str(i): {str(l): s(-l - n) for l in range(lo, hi + 1)} for i, s in sorted(series.items())}
        v = VerificationVerdict.verified("duality route; every degree exact", certainty="certified")
        return Result(st.text, st.line, "LcTableCmd", v, {"route": "duality", "dims": dims})

    def _eulerian(self, c: EulerianCmd, st: Statement) -> Result:
        R = self._get("ring", c.ring, st)
        I = self._ideal_in(c.ideal, R, st)
        (box,) = self._boxes(c.box, R)
        mono = MonomialModule.from_ring(R)
        table = cech_table(mono, I.monomial_exponents() if I.is_monomial() else _raise_monomial(), box, R.field)
        cd = cd_detect(table)
        v1 = verify_eulerian(table, range(1, c.tmax + 1))
        parts = [v1]
        if cd.value is not None:
            parts.append(classify_degree_support(table, R.ngens, cd.value, box.total_range))
        v = combine(parts, f"Euler operators up to order {c.tmax}; degree support of H^{cd.value}")
        return Result(st.text, st.line, "EulerianCmd", v, v.data, [p.witness for p in parts if p.witness])


def _raise_monomial():
    raise UnsupportedRouteError("Eulerian checks need a monomial ideal")


# -- reports ------------------------------------------------------------------------------------


def build_report(session: Session, exit_code: int) -> dict:
    commands = [r.as_dict() for r in session.results]
    summary = {VERIFIED: 0, REFUTED: 0, INCONCLUSIVE: 0}
    for r in session.results:
        if r.verdict:
            summary[r.verdict.status] += 1
    return to_plain(
        {
            "tool": "segrelc",
            "version": __version__,
            "config": {k: v for k, v in session.config.as_dict().items()},
            "commands": commands,
            "summary": summary,
            "exit_code": exit_code,
        }
    )


def exit_code_for(results: list[Result]) -> int:
    statuses = {r.verdict.status for r in results if r.verdict}
    if REFUTED in statuses:
        return EXIT_CODES[REFUTED]
    if INCONCLUSIVE in statuses:
        return EXIT_CODES[INCONCLUSIVE]
    return EXIT_CODES[VERIFIED]


def run_script(text: str, config: Config | None = None) -> tuple[Session, int, dict]:
    session = Session(config)
    statements = parse_script(text)
    session.run(statements)
    code = exit_code_for(session.results)
    return session, code, build_report(session, code)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="segrelc", description="Segre products and local cohomology verification")
    p.add_argument("--script", help="script file (reads standard input when omitted)")
    p.add_argument("--out", help="report file")
    p.add_argument("--format", choices=["json", "markdown"], help="report format")
    p.add_argument("--cache-dir", dest="cache_dir", help="Groebner basis cache directory")
    p.add_argument("--threads", type=int, help="worker threads for table filling")
    p.add_argument("--field", help="default field for 'k[...]' rings: QQ or GF(p)")
    p.add_argument("--box", help="default per-variable box lo..hi")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"segrelc {__version__}")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = load_config(args)
        text = Path(args.script).read_text(encoding="utf-8") if args.script else sys.stdin.read()
        session, code, report = run_script(text, config)
    except DSLError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for target in session.report_targets:
        emit_report(report, target.format or config.format, target.out)
    if config.out:
        emit_report(report, config.format, config.out)
    for r in session.results:
        if r.verdict:
            print(f"line {r.line}: {r.verdict.status}: {r.statement}" + (f" ({r.verdict.detail})" if r.verdict.detail else ""))
    if not config.out and not session.report_targets:
        sys.stdout.write(emit_report(report, config.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
