"""Batch command line interface.

Three subcommands:

* ``bargtop decide --input inst.json``   run the decision pipeline on a
  JSON instance and emit a JSON report;
* ``bargtop family --lambda=-1``         decide an explicit-family instance
  through both the closed form and the generic pipeline;
* ``bargtop oracle --input inst.json --mode quadrature``  run one of the
  brute-force cross-checks.

Complex scalars are encoded as two-element arrays [re, im]; matrices as
row-major nested arrays.  Exit codes: 0 success, 1 parse error, 2 violated
assumptions or hypotheses, 3 marginal verdict under ``--strict-exit``,
4 non-convergent oracle.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from .errors import (
    AssumptionViolated,
    BargtopError,
    HypothesisViolated,
    NonConvergent,
    ParseError,
)
from .family import FamilyParams, family_decide, family_instance
from .forms import QuadraticSymbol, WeightForm
from .oracle import (
    QuadratureSpec,
    coherent_growth_scan,
    operator_norm_scan,
    weyl_symbol_quadrature,
)
from .pipeline import Verdict, analyze, coherent_norm_exponent
from .symplectic import TAU_DEFAULT, LagrangianPlane

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_ASSUMPTION = 2
EXIT_MARGINAL = 3
EXIT_NONCONVERGENT = 4


# ---------------------------------------------------------------- encoding

def _c2j(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _m2j(m) -> list:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        return [_c2j(z) for z in m]
    return [[_c2j(z) for z in row] for row in m]


def _j2c(obj, path: str) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if (
        isinstance(obj, list)
        and len(obj) == 2
        and all(isinstance(t, (int, float)) for t in obj)
    ):
        return complex(obj[0], obj[1])
    raise ParseError(path, "expected a number or a [re, im] pair")


def _j2v(obj, n: int, path: str) -> np.ndarray:
    if obj is None:
        return np.zeros(n, dtype=complex)
    if not isinstance(obj, list) or len(obj) != n:
        raise ParseError(path, f"expected a list of length {n}")
    return np.array([_j2c(t, f"{path}[{k}]") for k, t in enumerate(obj)])


def _j2m(obj, n: int, path: str) -> np.ndarray:
    if obj is None:
        return np.zeros((n, n), dtype=complex)
    if not isinstance(obj, list) or len(obj) != n:
        raise ParseError(path, f"expected {n} rows")
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"{path}[{i}]", f"expected {n} entries")
        rows.append([_j2c(t, f"{path}[{i}][{j}]") for j, t in enumerate(row)])
    return np.array(rows)


def parse_instance(doc: dict):
    """Parse an instance document into (WeightForm, QuadraticSymbol)."""
    if not isinstance(doc, dict):
        raise ParseError("", "instance document must be an object")
    if "n" not in doc:
        raise ParseError("n", "missing dimension")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise ParseError("n", "dimension must be a positive integer")
    phi = doc.get("phi0")
    if not isinstance(phi, dict) or "hermitian" not in phi:
        raise ParseError("phi0.hermitian", "missing Hermitian part")
    try:
        weight = WeightForm(
            _j2m(phi["hermitian"], n, "phi0.hermitian"),
            _j2m(phi.get("pluriharmonic"), n, "phi0.pluriharmonic"),
        )
    except BargtopError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError("phi0", str(exc)) from exc
    qdoc = doc.get("q") or {}
    if not isinstance(qdoc, dict):
        raise ParseError("q", "expected an object")
    try:
        symbol = QuadraticSymbol(
            _j2m(qdoc.get("xx"), n, "q.xx"),
            _j2m(qdoc.get("xxbar"), n, "q.xxbar"),
            _j2m(qdoc.get("xbarxbar"), n, "q.xbarxbar"),
            _j2v(qdoc.get("lin_x"), n, "q.lin_x"),
            _j2v(qdoc.get("lin_xbar"), n, "q.lin_xbar"),
            _j2c(qdoc.get("const", 0.0), "q.const"),
        )
    except BargtopError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError("q", str(exc)) from exc
    return weight, symbol


def _verdict_word(v: Verdict) -> str:
    if v is Verdict.MARGINAL:
        return "marginal"
    return "yes" if v in (Verdict.BOUNDED, Verdict.COMPACT) else "no"


def _finite(x: float):
    x = float(x)
    return x if np.isfinite(x) else None


def _validation_json(report) -> dict:
    return {
        "ok": report.ok,
        "strict_psh": {"ok": report.strict_psh, "margin": _finite(report.strict_psh_margin)},
        "majorization": {"ok": report.majorization, "margin": _finite(report.majorization_margin)},
        "nondegeneracy": {"ok": report.nondegenerate, "margin": _finite(report.nondegenerate_margin)},
    }


def analysis_report(a, tolerance: float) -> dict:
    """Assemble the machine-readable report of one analysis."""
    return {
        "n": a.phi0.n,
        "tolerance": tolerance,
        "validation": _validation_json(a.validation),
        "weyl_phase": {
            "F": {
                "xx": _m2j(a.weyl.F.mxx),
                "xxi": _m2j(a.weyl.F.mxz),
                "xixi": _m2j(a.weyl.F.mzz),
            },
            "alpha": {"x": _m2j(a.weyl.alpha.gx), "xi": _m2j(a.weyl.alpha.gxi)},
        },
        "kappa": {"linear": _m2j(a.kappa.m), "translation": _m2j(a.kappa.t)},
        "phi1": None
        if a.phi1 is None
        else {"hermitian": _m2j(a.phi1.H), "pluriharmonic": _m2j(a.phi1.S)},
        "verdicts": {
            "bounded": _verdict_word(a.bounded),
            "compact": _verdict_word(a.compact),
        },
        "positivity": a.positivity.classification.value,
        "kernel_dim": a.kernel_dim,
        "linear_vanishes": a.linear_vanishes,
        "margins": {k: _finite(v) for k, v in a.margins.items()},
    }


def write_report(report: dict, path: str | None) -> str:
    """Serialize deterministically; write atomically when a path is given."""
    text = json.dumps(report, sort_keys=True, indent=2)
    if path:
        directory = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text + "\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    else:
        sys.stdout.write(text + "\n")
    return text


# ---------------------------------------------------------------- commands

def _load(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(path, str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(path, f"invalid JSON: {exc}") from exc


def run_decide(args) -> int:
    doc = _load(args.input)
    weight, symbol = parse_instance(doc)
    try:
        a = analyze(weight, symbol, tau=args.tolerance)
    except AssumptionViolated as exc:
        report = {
            "n": weight.n,
            "tolerance": args.tolerance,
            "validation": _validation_json(exc.report),
            "error": {"type": "assumption_violated", "failed": exc.failed},
        }
        write_report(report, args.output)
        return EXIT_ASSUMPTION
    report = analysis_report(a, args.tolerance)
    write_report(report, args.output)
    if args.strict_exit and Verdict.MARGINAL in (a.bounded, a.compact):
        return EXIT_MARGINAL
    return EXIT_OK


def _parse_complex(text: str, name: str) -> complex:
    try:
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError as exc:
        raise ParseError(name, f"cannot parse complex number {text!r}") from exc


def _parse_cvector(text: str | None, n: int, name: str) -> np.ndarray:
    if text is None:
        return np.zeros(n, dtype=complex)
    if text.strip().startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(name, str(exc)) from exc
        return _j2v(data, n, name)
    return np.full(n, _parse_complex(text, name))


def run_family(args) -> int:
    n = args.n
    lam = _parse_complex(args.lam, "--lambda")
    if args.A is None:
        a_mat = np.zeros((n, n), dtype=complex)
    elif args.A.strip().startswith("["):
        try:
            a_mat = _j2m(json.loads(args.A), n, "--A")
        except json.JSONDecodeError as exc:
            raise ParseError("--A", str(exc)) from exc
    else:
        a_mat = _parse_complex(args.A, "--A") * np.eye(n)
    c = _parse_cvector(args.c, n, "--c")
    d = _parse_cvector(args.d, n, "--d")
    params = FamilyParams(lam, a_mat, c, d)
    if params.hypothesis_margin <= 0:
        # outside the admissible region: report the raw closed-form
        # arithmetic but flag the violated hypothesis
        closed = family_decide(params, tau=args.tolerance, require_hypothesis=False)
        report = {
            "error": {
                "type": "hypothesis_violated",
                "message": f"Re lambda + ||A|| = {params.lam.real + params.a_norm:.6g} >= 1/4",
            },
            "family": {
                "gamma": _c2j(params.gamma),
                "verdicts": {
                    "bounded": _verdict_word(closed.bounded),
                    "compact": _verdict_word(closed.compact),
                },
                "margins": {k: _finite(v) for k, v in closed.margins.items()},
            },
        }
        write_report(report, args.output)
        return EXIT_ASSUMPTION
    closed = family_decide(params, tau=args.tolerance)
    weight, symbol = family_instance(params)
    a = analyze(weight, symbol, tau=args.tolerance)
    pipeline_report = analysis_report(a, args.tolerance)
    agree = (
        closed.bounded == a.bounded or Verdict.MARGINAL in (closed.bounded, a.bounded)
    ) and (closed.compact == a.compact or Verdict.MARGINAL in (closed.compact, a.compact))
    report = {
        "family": {
            "gamma": _c2j(params.gamma),
            "verdicts": {
                "bounded": _verdict_word(closed.bounded),
                "compact": _verdict_word(closed.compact),
            },
            "kernel_dim": closed.kernel_dim,
            "condition_holds": closed.condition_holds,
            "margins": {k: _finite(v) for k, v in closed.margins.items()},
        },
        "pipeline": pipeline_report,
        "routes_agree": bool(agree),
    }
    write_report(report, args.output)
    if args.strict_exit and (
        Verdict.MARGINAL in (closed.bounded, closed.compact, a.bounded, a.compact)
    ):
        return EXIT_MARGINAL
    return EXIT_OK


def run_oracle(args) -> int:
    doc = _load(args.input)
    weight, symbol = parse_instance(doc)
    spec = QuadratureSpec(order=args.oracle_order, rel_tol=args.rel_tol)
    try:
        a = analyze(weight, symbol, tau=args.tolerance)
    except AssumptionViolated as exc:
        write_report({"error": {"type": "assumption_violated", "failed": exc.failed}}, args.output)
        return EXIT_ASSUMPTION
    section: dict = {"mode": args.mode}
    try:
        if args.mode == "quadrature":
            plane = LagrangianPlane(a.reduced)
            rng = np.random.default_rng(7)
            points = [rng.standard_normal(a.reduced.n) + 1j * rng.standard_normal(a.reduced.n) for _ in range(5)]
            rows = []
            worst = 0.0
            for x in points:
                ratio = weyl_symbol_quadrature(a.reduced, symbol, x, spec)
                expected = np.exp(1j * a.weyl.value(plane.point(x)))
                err = abs(ratio - expected) / max(abs(expected), 1e-300)
                worst = max(worst, err)
                rows.append({"x": _m2j(x), "ratio": _c2j(ratio), "expected": _c2j(expected), "rel_err": err})
            section["points"] = rows
            section["max_rel_err"] = worst
            section["pass"] = bool(worst <= max(5.0 * spec.rel_tol, 5e-6))
        elif args.mode == "fock":
            sizes = sorted({20, 40, args.fock_n})
            norms = operator_norm_scan(symbol, sizes, spec)
            section["sizes"] = sizes
            section["norms"] = norms
            section["growth_factor"] = norms[-1] / max(norms[0], 1e-300)
            if a.compact is Verdict.COMPACT:
                section["pass"] = bool(abs(norms[-1] - norms[-2]) < 1e-4)
            elif a.bounded is Verdict.UNBOUNDED:
                section["pass"] = bool(section["growth_factor"] >= 2.0)
            else:
                section["pass"] = bool(abs(norms[-1] - norms[-2]) < 1e-2 * max(norms[-1], 1.0))
        else:  # coherent
            radii = [0.0, 1.0, 2.0, 4.0, 8.0]
            exps, w0 = coherent_growth_scan(a.reduced, symbol, radii=radii)
            direct = [coherent_norm_exponent(a.f, a.reduced, t * w0) for t in radii]
            err = max(abs(x - y) for x, y in zip(exps, direct))
            section["radii"] = radii
            section["exponents"] = exps
            section["direction"] = _m2j(w0)
            section["max_abs_err_vs_pipeline"] = err
            trend_ok = (
                exps[-1] <= exps[0] + 1e-9 if a.bounded is Verdict.BOUNDED else exps[-1] > exps[0]
            )
            section["pass"] = bool(err <= 1e-9 and trend_ok)
    except NonConvergent as exc:
        report = analysis_report(a, args.tolerance)
        report["oracle"] = {"mode": args.mode, "error": str(exc)}
        write_report(report, args.output)
        return EXIT_NONCONVERGENT
    report = analysis_report(a, args.tolerance)
    report["oracle"] = section
    write_report(report, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bargtop", description=__doc__.split("\n", 1)[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", help="write the JSON report to this path (default: stdout)")
        p.add_argument("--tolerance", type=float, default=TAU_DEFAULT, help="relative tolerance band")
        p.add_argument("--strict-exit", action="store_true", help="exit 3 on marginal verdicts")

    p_decide = sub.add_parser("decide", help="decide boundedness and compactness of an instance")
    p_decide.add_argument("--input", required=True, help="instance JSON path")
    common(p_decide)
    p_decide.set_defaults(func=run_decide)

    p_family = sub.add_parser("family", help="explicit-family instance from flags")
    p_family.add_argument("--lambda", dest="lam", required=True, help="complex, e.g. -1 or 0.1+0.2i")
    p_family.add_argument("--A", help="complex scalar (mu, for mu I) or JSON matrix")
    p_family.add_argument("--c", help="complex scalar or JSON vector")
    p_family.add_argument("--d", help="complex scalar or JSON vector")
    p_family.add_argument("--n", type=int, default=1, help="dimension (default 1)")
    common(p_family)
    p_family.set_defaults(func=run_family)

    p_oracle = sub.add_parser("oracle", help="brute-force cross-checks")
    p_oracle.add_argument("--input", required=True, help="instance JSON path")
    p_oracle.add_argument("--mode", choices=["quadrature", "fock", "coherent"], required=True)
    p_oracle.add_argument("--oracle-order", type=int, default=40, help="Gauss-Hermite order")
    p_oracle.add_argument("--fock-N", dest="fock_n", type=int, default=60, help="largest truncation")
    p_oracle.add_argument("--rel-tol", type=float, default=1e-8, help="quadrature agreement tolerance")
    common(p_oracle)
    p_oracle.set_defaults(func=run_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (AssumptionViolated, HypothesisViolated) as exc:
        sys.stderr.write(f"invalid instance: {exc}\n")
        return EXIT_ASSUMPTION
    except NonConvergent as exc:
        sys.stderr.write(f"oracle did not converge: {exc}\n")
        return EXIT_NONCONVERGENT


if __name__ == "__main__":
    sys.exit(main())
