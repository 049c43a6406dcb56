"""Command-line front end.

Every subcommand prints one JSON report (sorted keys) on stdout and a short
human summary on stderr.  Exit codes: 0 all primary checks pass, 1 a check
failed or a signal overflowed its window, 2 bad input or configuration.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import replace

import numpy as np

from . import __version__
from .bridge import (SymbolFunction, bank_round_trip, cascade_spectrum, symbol_conditions,
                     symbol_round_trip, symbol_tables)
from .cascade import (MODES, DecompositionResult, build_stages, cascade_spot_check, dwt, idwt,
                      splitting_check, stage_orthonormality_check, tail_energy_check)
from .characters import OmegaDomain, check_character_basis, omega_domain
from .errors import ConfigurationError, LFWaveletError, ResolutionError, WindowOverflowError
from .first_stage import (gram_oracle, lazy_bank, m0_periodicity_check, onb_conditions_check,
                          unitarity_check)
from .io import NU_FLAGS, RunConfig, load_bank, load_config, load_signal, read_json, write_json
from .lambda_indexing import DegenerateLambdaWarning, LambdaLattice
from .local_field import format_element
from .reports import Check, VerificationReport


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="run configuration JSON")
    p.add_argument("--nu", choices=sorted(NU_FLAGS), help="override the nu policy")
    p.add_argument("--tolerance", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--window", type=int, help="index window: n < q**window")
    p.add_argument("--resolution", type=int, help="frequency grid level m (cells of B^m)")
    p.add_argument("--omega", choices=("dual", "shifted"))
    p.add_argument("--out", help="write the main result here instead of embedding it in the report")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lfwavelets", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", help="field, dilation and index-set summary")
    _common(p)

    p = sub.add_parser("basis-check", help="character basis and polyphase shape findings")
    _common(p)

    p = sub.add_parser("verify", help="run the orthonormality check suite on a bank")
    _common(p)
    p.add_argument("--bank", required=True, help="bank JSON file or builtin:haar / builtin:lazy")
    p.add_argument("--stage", type=int, default=1, help="stage depth J")
    p.add_argument("--mode", choices=MODES)

    p = sub.add_parser("transform", help="J-stage analysis (or synthesis with --inverse)")
    _common(p)
    p.add_argument("--bank", required=True)
    p.add_argument("--signal", required=True, help="taps JSON, or a decomposition with --inverse")
    p.add_argument("--stage", type=int, default=1)
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--force", action="store_true", help="skip the unitarity gate")

    p = sub.add_parser("bridge", help="symbol tables, round trips and the cascade spectrum")
    _common(p)
    p.add_argument("--bank", required=True)
    p.add_argument("--stage", type=int, default=0, help="cascade depth J for the m0 spectrum (0: skip)")
    return ap


def _config(args) -> RunConfig:
    cfg = load_config(args.config).with_nu(args.nu)
    upd = {}
    for name in ("tolerance", "seed", "window", "resolution", "omega"):
        v = getattr(args, name, None)
        if v is not None:
            upd[name] = v
    if getattr(args, "mode", None):
        upd["cascade_mode"] = args.mode
    return replace(cfg, **upd) if upd else cfg


def _report(command: str, cfg: RunConfig, lat: LambdaLattice) -> VerificationReport:
    rep = VerificationReport(command, params=cfg.params.to_json())
    rep.meta["config"] = cfg.to_json()
    rep.meta["lattice"] = lat.describe()
    return rep


def _polyphase_shape(lat: LambdaLattice) -> dict:
    gens = lat.arity * len(lat.branches)
    comps = len(lat.branches) * lat.shift_count(1)
    kind = "square" if gens == comps else "overcomplete" if gens > comps else "undercomplete"
    return {"generators": gens, "components": comps, "shape": kind}


def cmd_field_info(args, cfg: RunConfig, lat: LambdaLattice) -> VerificationReport:
    rep = _report("field-info", cfg, lat)
    gf = lat.K.gf
    rep.meta["field"] = {"p": gf.p, "c": gf.c, "q": gf.q, "modulus": list(gf.modulus)}
    rep.meta["omega_offset"] = format_element(lat.omega)
    rep.meta["theta_integral_part"] = format_element(lat.theta_integral_part)
    rep.meta["polyphase"] = _polyphase_shape(lat)
    basis = check_character_basis(lat, cfg.window, cfg.omega, cfg.tolerance)
    for c in basis.checks:
        c.primary = False
    rep.extend(basis)
    return rep


def cmd_basis_check(args, cfg: RunConfig, lat: LambdaLattice) -> VerificationReport:
    rep = _report("basis-check", cfg, lat)
    shape = _polyphase_shape(lat)
    rep.meta["polyphase"] = shape
    for preset in ("dual", "shifted"):
        sub = check_character_basis(lat, cfg.window, preset, cfg.tolerance)
        for c in sub.checks:
            c.primary = preset == cfg.omega
            c.details["omega"] = sub.meta["omega"]
        rep.extend(sub, prefix=f"{preset}:")
    lazy = unitarity_check(lazy_bank(lat), cfg.resolution, cfg.tolerance, literal=False)
    for c in lazy.checks:
        c.primary = False
    rep.extend(lazy, prefix="lazy_bank:")
    if shape["shape"] != "square":
        rep.warnings.append(
            f"{shape['shape'].upper()}: {shape['generators']} generators for {shape['components']} "
            "polyphase components; no bank can be an orthonormal basis")
    return rep


def _gram_window(cfg: RunConfig, bank, lat: LambdaLattice) -> int:
    return max(cfg.window, bank.radius(), lat.delta_degree)


def cmd_verify(args, cfg: RunConfig, lat: LambdaLattice) -> VerificationReport:
    if args.stage < 1:
        raise ConfigurationError("--stage must be >= 1")
    bank = replace(load_bank(args.bank, lat), normalization=cfg.normalization)
    rep = _report("verify", cfg, lat)
    window = _gram_window(cfg, bank, lat)
    rep.meta.update({"gram_window": window, "stage": args.stage, "mode": cfg.cascade_mode})
    unit = unitarity_check(bank, cfg.resolution, cfg.tolerance)
    _, gram = gram_oracle(bank, window, cfg.tolerance)
    rep.extend(unit)
    rep.extend(gram)
    rep.add(Check("oracle_agreement", 0.0 if unit.passed == gram.passed else 1.0, 0.5,
                  details={"gram_pass": gram.passed, "unitarity_pass": unit.passed}))
    rep.extend(onb_conditions_check(bank, cfg.resolution, cfg.tolerance))
    rep.extend(m0_periodicity_check(bank, cfg.resolution, cfg.tolerance))
    rep.extend(symbol_conditions(bank, cfg.resolution, cfg.tolerance), prefix="symbols:")
    J = args.stage
    if J >= 2:
        stages = build_stages(bank, J, cfg.cascade_mode, cfg.strict)
        rep.meta["dropped_taps"] = stages.dropped
        rng = np.random.default_rng(cfg.seed)
        rep.add(Check("cascade_two_scale", cascade_spot_check(stages, rng), cfg.tolerance))
        for level in range(2, J + 1):
            rep.extend(stage_orthonormality_check(stages, level, window, None, cfg.tolerance))
        for level in range(1, J + 1):
            rep.extend(splitting_check(stages, level, window, samples=10, seed=cfg.seed,
                                       tolerance=cfg.tolerance))
        tail = tail_energy_check(stages, J, window, cfg.seed, cfg.tolerance)
        rep.extend(tail)
        rep.meta["approx_energies"] = tail.meta["energies"]
    return rep


def _emit(args, rep: VerificationReport, key: str, payload) -> None:
    if args.out:
        write_json(args.out, payload)
        rep.meta["output_file"] = args.out
    else:
        rep.meta[key] = payload


def cmd_transform(args, cfg: RunConfig, lat: LambdaLattice) -> VerificationReport:
    if args.stage < 1:
        raise ConfigurationError("--stage must be >= 1")
    bank = load_bank(args.bank, lat)
    rep = _report("transform", cfg, lat)
    rep.meta.update({"stage": args.stage, "mode": cfg.cascade_mode, "inverse": args.inverse})
    if not args.force:
        gate = unitarity_check(bank, cfg.resolution, cfg.tolerance, literal=False)
        rep.extend(gate)
        if not gate.passed:
            rep.warnings.append("bank failed the unitarity gate; rerun with --force to transform anyway")
            return rep
    stages = build_stages(bank, args.stage, cfg.cascade_mode, cfg.strict)
    if args.inverse:
        dec = DecompositionResult.from_json(read_json(args.signal))
        if dec.J != args.stage:
            raise ConfigurationError(f"decomposition has J={dec.J}, --stage is {args.stage}")
        z = idwt(dec, stages)
        rep.meta["energy"] = z.norm2()
        _emit(args, rep, "signal", z.to_json())
        return rep
    z = load_signal(args.signal)
    dec = dwt(z, stages, args.stage, cfg.window)
    table = dec.energy_table()
    rep.meta["energy_table"] = table
    rep.add(Check("energy_balance", abs(dec.total_energy() - z.norm2()), cfg.tolerance,
                  details={"signal_energy": z.norm2(), "subband_energy": dec.total_energy()},
                  primary=False))
    _emit(args, rep, "decomposition", dec.to_json())
    return rep


def cmd_bridge(args, cfg: RunConfig, lat: LambdaLattice) -> VerificationReport:
    bank = load_bank(args.bank, lat)
    rep = _report("bridge", cfg, lat)
    region = omega_domain(lat, cfg.omega)
    m = cfg.resolution if cfg.resolution is not None else max(bank.radius(), 1)
    tables = symbol_tables(bank, region, m)
    rep.meta["region"] = region.to_json()
    rep.warnings.extend(region.warnings)
    rep.add(Check("bank_round_trip", bank_round_trip(bank, region, m), 1e-12))
    rep.add(Check("symbol_round_trip", symbol_round_trip(tables, lat), 1e-12))
    rep.extend(symbol_conditions(bank, cfg.resolution, cfg.tolerance))
    payload = {"region": region.to_json(), "symbols": [t.to_json() for t in tables]}
    if args.stage:
        ball = OmegaDomain(lat.K, [(lat.K.zero, -lat.delta_degree)], "ball")
        spec = cascade_spectrum(SymbolFunction(bank.filters[0], lat), args.stage, ball, m + lat.delta_degree)
        payload["cascade"] = {"J": args.stage, "region": ball.to_json(), "m0_product": spec.to_json()}
    _emit(args, rep, "tables", payload)
    return rep


COMMANDS = {
    "field-info": cmd_field_info,
    "basis-check": cmd_basis_check,
    "verify": cmd_verify,
    "transform": cmd_transform,
    "bridge": cmd_bridge,
}


def _summary(rep: VerificationReport) -> str:
    lines = [f"{rep.command}: {'PASS' if rep.passed else 'FAIL'} ({len(rep.checks)} checks)"]
    for c in rep.checks:
        if c.primary and not c.passed:
            lines.append(f"  failing: {c.check} residual={c.residual:.3e} threshold={c.threshold:.1e}")
    for w in rep.warnings:
        lines.append(f"  warning: {w}")
    return "\n".join(lines)


def run(argv=None) -> tuple[int, VerificationReport | None]:
    args = build_parser().parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateLambdaWarning)
        try:
            cfg = _config(args)
            lat = LambdaLattice(cfg.params)
            rep = COMMANDS[args.command](args, cfg, lat)
        except WindowOverflowError as e:
            print(f"error: {e}", file=sys.stderr)
            return 1, None
        except (ConfigurationError, ResolutionError) as e:
            print(f"error: {e}", file=sys.stderr)
            return 2, None
        except LFWaveletError as e:
            print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
            return 2, None
    for w in caught:
        if issubclass(w.category, DegenerateLambdaWarning):
            msg = str(w.message)
            if msg not in rep.warnings:
                rep.warnings.append(msg)
    return (0 if rep.passed else 1), rep


def main(argv=None) -> int:
    code, rep = run(argv)
    if rep is not None:
        sys.stdout.write(rep.dumps() + "\n")
        print(_summary(rep), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
