"""Command-line front end.

    hellmann-spectra spectrum --limit spin --M 5 --Cs 5.5 --a 1 --b -4 --delta 0.01 \
        --H 0 --n 0,1 --kappa -5..-1,1..4
    hellmann-spectra tables --table 3
    hellmann-spectra wavefunction --limit nonrel --m 0.5 --a 2 --b 1 --delta 0.001 --n 0 --l 0
    hellmann-spectra compare --a 2 --b -4 --delta 0.01 ...
    hellmann-spectra doublets --limit spin ... --H 0,0.25,0.5,0.75,1

Exit codes: 0 success, 1 usage error, 2 numeric or not-found error,
3 a table cell outside its tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import reference as ref
from .model import (
    DomainError,
    Limit,
    PotentialParams,
    QuantumNumbers,
    RelativisticSetup,
    approximation_error_scan,
    nonrel_label,
    state_label,
)
from .nu import (
    OutsideRepresentableRegion,
    nonrel_energy,
    nonrel_is_bound,
    nonrel_sqrt_c,
    solve_levels,
)
from .oracle import EigenvalueNotFound, EffectiveEquation, Form, compare_nu_vs_oracle, shoot_eigenvalue
from .wavefunctions import (
    NotBoundError,
    NumericError,
    integration_limit,
    nonrel_radial,
    normalize,
    partner_component,
    solved_component,
)

log = logging.getLogger("hellmann_spectra")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_ACCEPTANCE = 0, 1, 2, 3

SPIN_TOL = 1e-6
NONREL_TOL = 1e-5
ORACLE_TOL = 1e-4

DEFAULT_DOUBLETS = {Limit.SPIN: ((1, -2), (1, -4)), Limit.PSPIN: ((1, -3), (2, -4))}


class UsageError(Exception):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"--{field_name}: {message}")
        self.field = field_name


# -- argument parsing ------------------------------------------------------------

_RANGE = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


def parse_int_list(text: "str | Sequence[int] | None", name: str) -> list[int]:
    """'0,1' or '-5..-1,1..4' -> list of ints; empty text -> []."""
    if text is None:
        return []
    if not isinstance(text, str):
        return [int(v) for v in text]
    out: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        m = _RANGE.match(part)
        try:
            if m:
                lo, hi = int(m.group(1)), int(m.group(2))
                step = 1 if hi >= lo else -1
                out.extend(range(lo, hi + step, step))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(name, f"cannot parse {part!r}") from None
    return out


def parse_float_list(text: "str | Sequence[float] | None", name: str) -> list[float]:
    if text is None:
        return []
    if not isinstance(text, str):
        return [float(v) for v in text]
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(name, f"cannot parse {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


_VALUE_FLAGS = {"--n", "--kappa", "--l", "--a", "--b", "--H", "--Cs", "--Cps", "--C", "--M",
                "--delta", "--m", "--r-min", "--r-max", "--pairs"}


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse takes '-5..-1' for an option; rewrite as '--kappa=-5..-1'
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and re.match(r"^-[\d.]", argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _add_physics(p: argparse.ArgumentParser, states: bool = True):
    p.add_argument("--limit", help="spin, pspin or nonrel")
    p.add_argument("--a", type=float, help="Coulomb strength")
    p.add_argument("--b", type=float, help="Yukawa strength")
    p.add_argument("--delta", type=float, help="screening parameter")
    p.add_argument("--H", type=float, help="tensor strength (default 0)")
    p.add_argument("--M", type=float, help="fermion mass")
    p.add_argument("--Cs", "--Cps", "--C", dest="C_sym", type=float, help="symmetry constant")
    p.add_argument("--m", dest="mass", type=float, help="mass in the Schrodinger limit")
    if states:
        p.add_argument("--n", help="radial node counts, e.g. 0,1 or 0..3")
        p.add_argument("--kappa", help="spin-orbit numbers, e.g. -5..-1,1..4")
        p.add_argument("--l", help="orbital numbers (nonrel)")


def _add_output(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON file with default values for any flag")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    p.add_argument("--output", "-o", help="output path, '-' for stdout (default)")
    p.add_argument("--grid-points", type=int, help="oracle grid size")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hellmann-spectra", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spectrum", help="energies of the requested states")
    _add_physics(sp)
    _add_output(sp)

    tp = sub.add_parser("tables", help="reproduce a published table with deviations")
    tp.add_argument("--table", type=int, choices=(2, 3, 4))
    tp.add_argument("--no-oracle", dest="oracle", action="store_false", default=None,
                    help="skip the shooting check of flagged cells")
    _add_output(tp)

    wp = sub.add_parser("wavefunction", help="sampled normalized radial functions")
    _add_physics(wp)
    wp.add_argument("--r-min", type=float, help="first sample (default 0)")
    wp.add_argument("--r-max", type=float, help="last sample (default: tail below 1e-12)")
    wp.add_argument("--points", type=int, help="number of samples (default 1001)")
    wp.add_argument("--normalization", choices=("single", "spinor"))
    _add_output(wp)

    cp = sub.add_parser("compare", help="potential vs approximation and NU vs shooting")
    _add_physics(cp)
    cp.add_argument("--r-min", type=float, help="potential scan start (default 0.1)")
    cp.add_argument("--r-max", type=float, help="potential scan end (default 50)")
    cp.add_argument("--points", type=int, help="potential scan samples (default 200)")
    cp.add_argument("--no-exact", dest="exact", action="store_false", default=None,
                    help="skip shooting on the unapproximated equation")
    _add_output(cp)

    dp = sub.add_parser("doublets", help="doublet splitting against tensor strength")
    _add_physics(dp, states=False)
    dp.add_argument("--H-list", "--Hs", dest="H_list", help="tensor strengths, e.g. 0,0.25,0.5")
    dp.add_argument("--pairs", help="kappa<0 members as n:kappa;n:kappa (default: two reference pairs)")
    _add_output(dp)
    return parser


# -- configuration ---------------------------------------------------------------

@dataclass
class RunConfig:
    command: str
    limit: Limit | None = None
    a: float | None = None
    b: float | None = None
    delta: float | None = None
    H: float = 0.0
    M: float | None = None
    C_sym: float | None = None
    mass: float | None = None
    n: list[int] = field(default_factory=list)
    kappa: list[int] = field(default_factory=list)
    l: list[int] = field(default_factory=list)
    output: str = "-"
    format: str = "csv"
    grid_points: int = 20000
    table: int | None = None
    oracle: bool = True
    exact: bool = True
    r_min: float | None = None
    r_max: float | None = None
    points: int | None = None
    normalization: str = "single"
    H_list: list[float] = field(default_factory=list)
    pairs: list[tuple[int, int]] = field(default_factory=list)

    def potential(self) -> PotentialParams:
        for name in ("a", "b", "delta"):
            if getattr(self, name) is None:
                raise UsageError(name, "is required")
        try:
            return PotentialParams(self.a, self.b, self.delta, self.H)
        except DomainError as exc:
            raise UsageError("delta", str(exc)) from None

    def setup(self) -> RelativisticSetup:
        if self.M is None:
            raise UsageError("M", "is required for the relativistic limits")
        if self.C_sym is None:
            raise UsageError("Cs" if self.limit is Limit.SPIN else "Cps", "is required")
        try:
            return RelativisticSetup(self.M, self.C_sym, self.limit)
        except DomainError as exc:
            raise UsageError("M", str(exc)) from None

    def nonrel_mass(self) -> float:
        if self.mass is None or not self.mass > 0:
            raise UsageError("m", "a positive mass is required in the nonrel limit")
        return self.mass

    def provenance(self) -> dict[str, Any]:
        d = asdict(self)
        d["limit"] = self.limit.value if self.limit else None
        return d


def _parse_pairs(text, name="pairs") -> list[tuple[int, int]]:
    if text is None:
        return []
    if not isinstance(text, str):
        return [tuple(map(int, p)) for p in text]
    out = []
    for part in filter(None, (p.strip() for p in text.split(";"))):
        try:
            n, k = (int(v) for v in re.split(r"[:,]", part))
        except ValueError:
            raise UsageError(name, f"cannot parse pair {part!r}") from None
        out.append((n, k))
    return out


def make_config(args: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {}
    cfg_path = getattr(args, "config", None)
    if cfg_path is not None:
        try:
            values.update(json.loads(Path(cfg_path).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError("config", str(exc)) from None
    for key, val in vars(args).items():
        if key != "config" and val is not None:
            values[key] = val
    values.pop("command", None)
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(values) - known
    if unknown:
        raise UsageError(sorted(unknown)[0], "unknown setting")
    cfg = RunConfig(command=args.command)
    for key, val in values.items():
        if key in ("n", "kappa", "l"):
            val = parse_int_list(val, key)
        elif key == "H_list":
            val = parse_float_list(val, "H-list")
        elif key == "pairs":
            val = _parse_pairs(val)
        elif key == "limit":
            try:
                val = Limit.parse(val)
            except DomainError as exc:
                raise UsageError("limit", str(exc)) from None
        setattr(cfg, key, val)
    if cfg.limit is None:
        cfg.limit = Limit.SPIN
    if any(n < 0 for n in cfg.n):
        raise UsageError("n", "radial numbers must be nonnegative")
    if any(k == 0 for k in cfg.kappa):
        raise UsageError("kappa", "kappa must be nonzero")
    if any(l < 0 for l in cfg.l):
        raise UsageError("l", "orbital numbers must be nonnegative")
    if cfg.grid_points < 1000:
        raise UsageError("grid-points", "at least 1000 points are needed")
    return cfg


# -- output ------------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def render(cfg: RunConfig, rows: list[dict], extra_meta: dict | None = None) -> str:
    params = cfg.provenance()
    if extra_meta:
        params.update(extra_meta)
    if cfg.format == "json":
        clean = [{k: (float(v) if isinstance(v, np.floating) else v) for k, v in r.items()} for r in rows]
        return json.dumps({"params": params, "rows": clean}, indent=2, default=str) + "\n"
    buf = io.StringIO()
    buf.write(f"# command: {cfg.command}\n")
    buf.write(f"# params: {json.dumps(params, default=str)}\n")
    sections: dict[str, list[dict]] = {}
    for r in rows:
        sections.setdefault(r.get("section", ""), []).append(r)
    if not rows:
        sections[""] = []
    for i, (name, block) in enumerate(sections.items()):
        if i:
            buf.write("\n")
        if name:
            buf.write(f"# section: {name}\n")
        cols = [k for k in (block[0].keys() if block else _EMPTY_HEADERS.get(cfg.command, ())) if k != "section"]
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for r in block:
            writer.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


_EMPTY_HEADERS = {"spectrum": ("n", "kappa", "label", "H", "E", "residual", "status")}


def emit(cfg: RunConfig, text: str):
    if cfg.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(cfg.output).write_text(text)


def _pool_map(fn: Callable, items: Iterable):
    items = list(items)
    try:
        threads = int(os.environ.get("HELLMANN_SPECTRA_THREADS", "1"))
    except ValueError:
        threads = 1
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# -- commands ----------------------------------------------------------------------

def _relativistic_row(p, setup, n, kappa) -> dict:
    qn = QuantumNumbers(n, kappa)
    label = state_label(n, kappa, setup.limit).name
    row = {"n": n, "kappa": kappa, "label": label, "H": p.H, "E": None, "residual": None, "status": "ok"}
    try:
        levels = solve_levels(p, setup, qn)
    except OutsideRepresentableRegion:
        row["status"] = "unbound: no real sqrt(C) in the window"
        return row
    if not levels:
        row["status"] = "unbound: no root in the window"
        return row
    row["E"] = levels[0].E
    row["residual"] = levels[0].residual_at_root
    if len(levels) > 1:
        row["status"] = f"ok ({len(levels)} roots; lowest shown)"
    return row


def _nonrel_row(p, m, n, l) -> dict:
    X = nonrel_sqrt_c(n, l, p.a, p.b, p.delta, m)
    bound = nonrel_is_bound(n, l, p.a, p.b, p.delta, m)
    return {"n": n, "l": l, "label": nonrel_label(n, l), "E": nonrel_energy(n, l, p.a, p.b, p.delta, m),
            "sqrt_c": X, "status": "ok" if bound else "unbound: sqrt(C) <= 0"}


def cmd_spectrum(cfg: RunConfig) -> int:
    p = cfg.potential()
    if cfg.limit is Limit.NONREL:
        m = cfg.nonrel_mass()
        cells = [(n, l) for l in cfg.l for n in cfg.n]
        rows = _pool_map(lambda c: _nonrel_row(p, m, *c), cells)
    else:
        setup = cfg.setup()
        cells = [(n, k) for n in cfg.n for k in cfg.kappa]
        rows = _pool_map(lambda c: _relativistic_row(p, setup, *c), cells)
    emit(cfg, render(cfg, rows))
    return EXIT_OK


def table_rows(which: int, oracle: bool = True, grid_points: int = 20000) -> tuple[list[dict], bool]:
    """Rows of a reproduced table and whether every checked cell is within tolerance."""
    if which in (2, 3):
        params, setup, data = ((ref.SPIN_PARAMS, ref.SPIN_SETUP, ref.SPIN_ROWS) if which == 2
                               else (ref.PSPIN_PARAMS, ref.PSPIN_SETUP, ref.PSPIN_ROWS))
        cells = [(n, k, H, Ep) for n, k, *E in data for H, Ep in zip(ref.TENSOR_STRENGTHS, E)]

        def one(cell):
            n, k, H, Ep = cell
            p = PotentialParams(params.a, params.b, params.delta, H)
            row = _relativistic_row(p, setup, n, k)
            dev = abs(row["E"] - Ep) if row["E"] is not None else None
            ok = dev is not None and dev < SPIN_TOL
            return {"n": n, "kappa": k, "label": row["label"], "H": H, "E_printed": Ep, "E": row["E"],
                    "abs_dev": dev, "status": "ok" if ok else "fail"}

        rows = _pool_map(one, cells)
        return rows, all(r["status"] == "ok" for r in rows)
    if which != 4:
        raise UsageError("table", f"unknown table {which}")
    m, a = ref.NONREL_MASS, ref.NONREL_A
    cells = [(st, d, b) for st in ref.NONREL_TABLE for d in ref.NONREL_DELTAS for b in ref.NONREL_B]

    def one(cell):
        st, d, b = cell
        n, l = ref.parse_state(st)
        Ep = ref.NONREL_TABLE[st][d][int(b)]
        E = nonrel_energy(n, l, a, b, d, m)
        status = ref.nonrel_cell_status(st, d, b)
        row = {"state": st, "delta": d, "b": b, "E_printed": Ep, "E": E, "abs_dev": abs(E - Ep),
               "status": status, "E_oracle": None, "oracle_dev": None}
        if status == "check":
            row["status"] = "ok" if row["abs_dev"] < NONREL_TOL else "fail"
        elif oracle:
            eq = EffectiveEquation.nonrelativistic(PotentialParams(a, b, d), l, m, Form.APPROXIMATED)
            Eo = shoot_eigenvalue(eq, n, N=grid_points).E
            row["E_oracle"], row["oracle_dev"] = Eo, abs(Eo - E)
            if row["oracle_dev"] >= ORACLE_TOL:
                row["status"] += "; oracle-fail"
        return row

    rows = _pool_map(one, cells)
    passed = all(r["status"] != "fail" and not r["status"].endswith("oracle-fail") for r in rows)
    return rows, passed


def cmd_tables(cfg: RunConfig) -> int:
    if cfg.table is None:
        raise UsageError("table", "choose 2, 3 or 4")
    rows, passed = table_rows(cfg.table, cfg.oracle, cfg.grid_points)
    emit(cfg, render(cfg, rows, {"all_checked_cells_pass": passed}))
    if not passed:
        log.error("table %s: at least one checked cell is outside tolerance", cfg.table)
        return EXIT_ACCEPTANCE
    return EXIT_OK


def _single(values: list[int], name: str) -> int:
    if len(values) != 1:
        raise UsageError(name, "give exactly one value")
    return values[0]


def cmd_wavefunction(cfg: RunConfig) -> int:
    p = cfg.potential()
    n = _single(cfg.n, "n")
    npts = cfg.points or 1001
    if npts < 2:
        raise UsageError("points", "need at least two samples")
    if cfg.limit is Limit.NONREL:
        l = _single(cfg.l, "l")
        R = nonrel_radial(n, l, p.a, p.b, p.delta, cfg.nonrel_mass())
        r = np.linspace(cfg.r_min or 0.0, cfg.r_max or integration_limit(R), npts)
        rows = [{"r": x, "R": y} for x, y in zip(r, R(r))]
        emit(cfg, render(cfg, rows, {"E": R.energy}))
        return EXIT_OK
    setup = cfg.setup()
    kappa = _single(cfg.kappa, "kappa")
    qn = QuantumNumbers(n, kappa)
    levels = solve_levels(p, setup, qn)
    if not levels:
        raise NotBoundError(f"no bound state for n={n}, kappa={kappa}")
    E = levels[0].E
    f = solved_component(E, p, setup, qn)
    g = partner_component(f, E, p, setup, kappa)
    if cfg.normalization == "spinor":
        f, g = normalize(f, g, "spinor")
    F, G = (f, g) if setup.limit is Limit.SPIN else (g, f)
    r = np.linspace(cfg.r_min or 0.0, cfg.r_max or integration_limit(f), npts)
    rows = [{"r": x, "F": u, "G": v} for x, u, v in zip(r, F(r), G(r))]
    emit(cfg, render(cfg, rows, {"E": E}))
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    p = cfg.potential()
    r = np.linspace(cfg.r_min or 0.1, cfg.r_max or 50.0, cfg.points or 200)
    rows: list[dict] = [{"section": "potential", "r": x, "V_exact": v, "V_approx": w, "abs_diff": abs(v - w)}
                        for x, v, w in approximation_error_scan(p, r)]
    if cfg.limit is Limit.NONREL:
        states = [(n, l) for l in cfg.l for n in cfg.n]
        setup: "RelativisticSetup | float" = cfg.nonrel_mass() if states else 1.0
    else:
        states = [QuantumNumbers(n, k) for n in cfg.n for k in cfg.kappa]
        setup = cfg.setup() if states else None
    if states:
        comp = _pool_map(lambda s: compare_nu_vs_oracle(p, setup, [s], N=cfg.grid_points, exact=cfg.exact)[0],
                         states)
        for c in comp:
            rows.append({"section": "levels", "state": c.state, "n": c.n, "kappa": c.kappa, "l": c.l,
                         "E_NU": c.E_nu, "E_oracle_approx": c.E_oracle_approx,
                         "E_oracle_exact": c.E_oracle_exact, "abs_dev": c.deviation})
    emit(cfg, render(cfg, rows))
    return EXIT_OK


def _partner_kappa(kappa: int, limit: Limit) -> int:
    return -kappa - 1 if limit is Limit.SPIN else 1 - kappa


def doublet_rows(p0: PotentialParams, setup: RelativisticSetup, H_values: Sequence[float],
                 pairs: Sequence[tuple[int, int]]) -> list[dict]:
    rows = []
    for H in H_values:
        p = PotentialParams(p0.a, p0.b, p0.delta, H)
        for n, k in pairs:
            if k >= 0:
                raise UsageError("pairs", "give the kappa < 0 member of each doublet")
            k2 = _partner_kappa(k, setup.limit)
            a = _relativistic_row(p, setup, n, k)
            b = _relativistic_row(p, setup, n, k2)
            split = b["E"] - a["E"] if a["E"] is not None and b["E"] is not None else None
            rows.append({"H": H, "n": n, "kappa_a": k, "label_a": a["label"], "E_a": a["E"],
                         "kappa_b": k2, "label_b": b["label"], "E_b": b["E"], "splitting": split})
    return rows


def cmd_doublets(cfg: RunConfig) -> int:
    if cfg.limit is Limit.NONREL:
        raise UsageError("limit", "doublets need the spin or pspin limit")
    if not cfg.H_list:
        raise UsageError("H-list", "give at least one tensor strength")
    p, setup = cfg.potential(), cfg.setup()
    pairs = cfg.pairs or list(DEFAULT_DOUBLETS[setup.limit])
    emit(cfg, render(cfg, doublet_rows(p, setup, cfg.H_list, pairs)))
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "tables": cmd_tables,
    "wavefunction": cmd_wavefunction,
    "compare": cmd_compare,
    "doublets": cmd_doublets,
}


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    try:
        cfg = make_config(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"hellmann-spectra {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotBoundError, EigenvalueNotFound, NumericError, OutsideRepresentableRegion, DomainError) as exc:
        print(f"hellmann-spectra {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
