"""Command-line surface.

One structured-text instance document (JSON, schema srcf-instance/1) drives
every subcommand; flags override the instance's params block.  Outputs are
canonical JSON on stdout (sorted keys, fixed float rendering, no timestamps),
so identical instance + seed + thread settings give byte-identical bytes.
Certified real quantities are emitted as [lo, hi] bracket pairs, never bare
point estimates.  Exit status: 0 certified/ok, 2 indeterminate or not
certified, 1 input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import __version__
from .blocks import build_blocks
from .bounds import dimension_report, lower_certificate, upper_certificate
from .digit_sets import tau
from .expand import STATUS_UNCERTIFIED, evaluate, expand
from .ifs import assemble, control_constants
from .instance import InstanceError, ProblemInstance, load_instance
from .mobius import fundamental_interval
from .pressure import bowen_bisect, partition_bracket
from .util import fmt_fraction, fmt_real

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INDETERMINATE = 2


def _frac_str(x) -> str:
    return fmt_fraction(x) if isinstance(x, Fraction) else fmt_real(x)


def _pair(lo, hi, digits: int = 15) -> list[str]:
    return [fmt_real(lo, digits), fmt_real(hi, digits)]


def _settings(inst: ProblemInstance, args) -> dict:
    return {
        "seed": args.seed if args.seed is not None else inst.param("seed", 0),
        "depth": args.depth if args.depth is not None else inst.param("depth"),
        "tolerance": (args.tolerance if args.tolerance is not None
                      else inst.param("tolerance")),
        "precision_bits": (args.precision_bits if args.precision_bits is not None
                           else inst.param("precision_bits", 128)),
        "threads": args.threads if args.threads is not None else inst.param("threads", 1),
        "deterministic": (inst.param("deterministic", True)
                          if args.deterministic is None else args.deterministic),
    }


def _emit(args, command: str, inst: ProblemInstance, settings: dict,
          result: dict, status: str) -> int:
    # thread count is an execution detail: results are bit-stable across it
    # (deterministic reduction), so it is not echoed into the output bytes
    printable = {k: v for k, v in settings.items() if k != "threads"}
    doc = {
        "command": command,
        "tool": {"name": "srcfdim", "version": __version__},
        "instance": inst.document,
        "instance_hash": inst.instance_hash,
        "settings": printable,
        "status": status,
        "result": result,
    }
    out = json.dumps(doc, sort_keys=True, indent=2)
    print(out)
    if status == "ok":
        return EXIT_OK
    return EXIT_INDETERMINATE


def _write_csv(path: str, rows: list[dict]) -> None:
    if not rows:
        return
    fields = sorted({k for row in rows for k in row})
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)


def _system_from_instance(inst: ProblemInstance, settings):
    inst.require("sigma")
    if inst.alphabets is not None:
        horizon = inst.param("horizon")
        return assemble(inst.sigma, inst.alphabets, horizon=horizon)
    inst.require("digit_set", "growth")
    epsilon = inst.fraction_param("epsilon")
    if epsilon is None:
        raise InstanceError("params.epsilon required to build a scheme system")
    horizon = int(inst.param("horizon", 8))
    scheme = build_blocks(inst.digit_set, inst.growth, epsilon, horizon)
    return assemble(inst.sigma, scheme, on_inadmissible="substitute")


# -- subcommands --------------------------------------------------------------

def _cmd_expand(inst: ProblemInstance, args, settings) -> int:
    inst.require("x", "sigma")
    depth = int(settings["depth"] or 20)
    stream = expand(inst.x, inst.sigma, depth)
    enclosure = None
    if stream.digits:
        iv = stream.interval()
        enclosure = [_frac_str(iv.lo), _frac_str(iv.hi)]
    result = {
        "digits": list(stream.digits),
        "signs": list(stream.signs),
        "status": stream.status,
        "rational_input": stream.rational_input,
        "uncertified_at": stream.uncertified_at,
        "enclosure": enclosure,
    }
    status = "ok" if stream.status != STATUS_UNCERTIFIED else "indeterminate"
    return _emit(args, "expand", inst, settings, result, status)


def _cmd_eval(inst: ProblemInstance, args, settings) -> int:
    inst.require("sigma", "digits")
    signs = inst.sigma.prefix(len(inst.digits))
    point = Fraction(str(inst.param("point", "0")))
    value = evaluate(signs, inst.digits, point)
    result = {"value": _frac_str(value), "value_float": fmt_real(float(value), 17),
              "point": _frac_str(point)}
    return _emit(args, "eval", inst, settings, result, "ok")


def _cmd_interval(inst: ProblemInstance, args, settings) -> int:
    inst.require("sigma", "digits")
    signs = inst.sigma.prefix(len(inst.digits))
    iv = fundamental_interval(signs, inst.digits)
    result = {"lo": _frac_str(iv.lo), "hi": _frac_str(iv.hi),
              "length": _frac_str(iv.length)}
    return _emit(args, "interval", inst, settings, result, "ok")


def _cmd_tau(inst: ProblemInstance, args, settings) -> int:
    inst.require("digit_set")
    tol = float(settings["tolerance"] or 1e-6)
    est = tau(inst.digit_set, tolerance=tol, method=inst.param("tau_method", "auto"))
    result = {
        "lower": _frac_str(est.lower),
        "upper": _frac_str(est.upper),
        "bracket": _pair(float(est.lower), float(est.upper)),
        "method": est.method,
        "warning": est.warning,
    }
    return _emit(args, "tau", inst, settings, result, "ok" if est.warning is None else "indeterminate")


def _cmd_blocks(inst: ProblemInstance, args, settings) -> int:
    inst.require("digit_set", "growth")
    epsilon = inst.fraction_param("epsilon")
    if epsilon is None:
        raise InstanceError("params.epsilon is required")
    horizon = int(inst.param("horizon", 8))
    scheme = build_blocks(inst.digit_set, inst.growth, epsilon, horizon)
    doc = scheme.to_document()
    doc["audit"] = scheme.audit()
    return _emit(args, "blocks", inst, settings, {"scheme": doc}, "ok")


def _cmd_pressure(inst: ProblemInstance, args, settings) -> int:
    system = _system_from_instance(inst, settings)
    v = system.validation
    threads = int(settings["threads"])
    deterministic = bool(settings["deterministic"])
    mode = inst.param("mode", "auto")
    provenance = {
        "gamma": fmt_real(v.a4_gamma),
        "contraction_L": v.a4_L,
        "a3_route": v.a3_route,
        "a3_constant": fmt_real(v.a3_constant),
        "validated": v.ok,
    }
    delta = inst.fraction_param("delta")
    if delta is not None and system.scheme is not None:
        cc = control_constants(system, delta)
        provenance["C"] = _frac_str(cc.C)
        provenance["N"] = cc.N
    result: dict = {"system": system.label(), "provenance": provenance}
    status = "ok"
    if inst.param("solve", False):
        tol = float(settings["tolerance"] or 1e-2)
        depths = inst.param("depths")
        bracket = bowen_bisect(system, tolerance=tol,
                               depths=depths, mode=mode,
                               classify=inst.param("classify", "difference"),
                               threads=threads)
        result["critical_exponent"] = {
            "bracket": _pair(bracket.s_minus, bracket.s_plus),
            "status": bracket.status,
            "depths": list(bracket.depths),
            "classify": bracket.classify,
        }
        status = "ok" if bracket.status == "converged" else "indeterminate"
    else:
        s = inst.param("s")
        if s is None:
            raise InstanceError("params.s required (or set params.solve=true)")
        depths = inst.param("depths") or [int(settings["depth"] or 10)]
        brackets = []
        for n in depths:
            b = partition_bracket(system, float(s), int(n), mode=mode,
                                  threads=threads, deterministic=deterministic)
            brackets.append({
                "n": b.n, "mode": b.mode,
                "log_Z": _pair(b.z_low, b.z_high),
                "pressure": _pair(b.p_low, b.p_high),
            })
        result["partition_brackets"] = brackets
    return _emit(args, "pressure", inst, settings, result, status)


def _lower_doc(cert) -> dict:
    return {
        "epsilon": _frac_str(cert.epsilon),
        "delta": _frac_str(cert.delta),
        "tau_lower": _frac_str(cert.tau_lower),
        "s_lower": _frac_str(cert.s_lower),
        "s_lower_float": fmt_real(cert.s_lower_float, 15),
        "constants": {
            "C": _frac_str(cert.C), "N": cert.N, "t1": cert.t1,
            "min_digit": cert.min_digit,
            "gamma": fmt_real(cert.gamma), "contraction_L": cert.L,
        },
        "depth_checks": [
            {"n": c.n, "z_low": fmt_real(c.z_low), "log_floor": fmt_real(c.log_floor),
             "ok": c.ok} for c in cert.depth_checks
        ],
        "block_checks": [
            {"m": c.m, "log_sum_lower": fmt_real(c.log_sum_lower), "ok": c.ok}
            for c in cert.block_checks
        ],
        "substitutions": [list(sub) for sub in cert.substitutions],
        "applies_to_growth_set": cert.applies_to_growth_set,
        "scheme": cert.scheme_summary,
        "certified": cert.certified,
    }


def _upper_doc(cert) -> dict:
    return {
        "epsilon": _frac_str(cert.epsilon),
        "tau_upper": _frac_str(cert.tau_upper),
        "exponent": _frac_str(cert.exponent),
        "cutoff_L": cert.L,
        "C_search": fmt_real(cert.C_search),
        "C_refined": fmt_real(cert.C_refined),
        "inequality_holds": cert.inequality_holds,
        "cover_sums": [
            {"depth": c.depth, "value": fmt_real(c.value), "ok": c.ok}
            for c in cert.cover_sums
        ],
        "cover_nonincreasing": cert.cover_nonincreasing,
        "ratio_bound_max_quotient": fmt_real(cert.ratio_bound_max_quotient),
        "audited_words": cert.audited_words,
        "bound": _frac_str(cert.bound),
        "bound_float": fmt_real(float(cert.bound), 15),
        "shift_invariance_note": cert.shift_invariance_note,
        "certified": cert.certified,
    }


def _cmd_dim_lower(inst: ProblemInstance, args, settings) -> int:
    inst.require("digit_set", "growth", "sigma")
    eps = inst.fraction_param("epsilon")
    dlt = inst.fraction_param("delta")
    if eps is None or dlt is None:
        raise InstanceError("params.epsilon and params.delta are required")
    cert = lower_certificate(inst.digit_set, inst.growth, inst.sigma, eps, dlt,
                             depth_schedule=inst.param("depths"),
                             horizon=inst.param("horizon"))
    return _emit(args, "dim-lower", inst, settings, {"lower_certificate": _lower_doc(cert)},
                 "ok" if cert.certified else "indeterminate")


def _cmd_dim_upper(inst: ProblemInstance, args, settings) -> int:
    inst.require("digit_set", "sigma")
    eps = inst.fraction_param("epsilon")
    if eps is None:
        raise InstanceError("params.epsilon is required")
    cert = upper_certificate(inst.digit_set, inst.sigma, eps,
                             audit_depth=int(inst.param("audit_depth", 4)))
    return _emit(args, "dim-upper", inst, settings, {"upper_certificate": _upper_doc(cert)},
                 "ok" if cert.certified else "indeterminate")


def _cmd_dim(inst: ProblemInstance, args, settings) -> int:
    inst.require("digit_set", "growth", "sigma")
    tol = float(settings["tolerance"] or 0.1)
    eps_schedule = inst.param("epsilon_schedule", [0.1, 0.05, 0.02])
    report = dimension_report(inst.digit_set, inst.growth, inst.sigma,
                              tolerance=tol, epsilon_schedule=eps_schedule,
                              delta_schedule=inst.param("delta_schedule"),
                              audit_depth=int(inst.param("audit_depth", 4)))
    result = {
        "target": [_frac_str(report.target_lower), _frac_str(report.target_upper)],
        "sandwich": _pair(float(report.final_lower), float(report.final_upper)),
        "lower": _frac_str(report.final_lower),
        "upper": _frac_str(report.final_upper),
        "gap": fmt_real(report.gap),
        "narrative": report.narrative,
        "lower_certificates": [_lower_doc(c) for c in report.lower_certificates],
        "upper_certificates": [_upper_doc(c) for c in report.upper_certificates],
        "report_status": report.status,
    }
    if args.csv:
        _write_csv(args.csv, report.csv_rows())
    return _emit(args, "dim", inst, settings, result,
                 "ok" if report.status == "ok" else "indeterminate")


def _cmd_verify(inst: ProblemInstance, args, settings) -> int:
    from .verify import run_suite

    checks = run_suite(inst)
    result = {
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                   for c in checks],
        "passed": sum(1 for c in checks if c.passed),
        "total": len(checks),
    }
    ok = all(c.passed for c in checks)
    if args.csv:
        _write_csv(args.csv, [{"name": c.name, "passed": c.passed, "detail": c.detail}
                              for c in checks])
    return _emit(args, "verify", inst, settings, result, "ok" if ok else "indeterminate")


_COMMANDS = {
    "expand": _cmd_expand,
    "eval": _cmd_eval,
    "interval": _cmd_interval,
    "tau": _cmd_tau,
    "blocks": _cmd_blocks,
    "pressure": _cmd_pressure,
    "dim-lower": _cmd_dim_lower,
    "dim-upper": _cmd_dim_upper,
    "dim": _cmd_dim,
    "verify": _cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srcfdim",
        description="Continued-fraction digit systems: expansions, block schemes, "
                    "pressure brackets, and certified dimension bounds.",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("instance", help="instance document path, or - for stdin")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--depth", type=int, default=None)
    parser.add_argument("--precision-bits", type=int, default=None)
    parser.add_argument("--tolerance", type=float, default=None)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--deterministic", dest="deterministic", action="store_true",
                        default=None)
    parser.add_argument("--no-deterministic", dest="deterministic", action="store_false")
    parser.add_argument("--csv", default=None, help="write the tabular view to this path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.instance == "-":
            text = sys.stdin.read()
        else:
            with open(args.instance) as fh:
                text = fh.read()
        inst = load_instance(text)
        settings = _settings(inst, args)
        return _COMMANDS[args.command](inst, args, settings)
    except InstanceError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError, TypeError, IndexError, ZeroDivisionError) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
