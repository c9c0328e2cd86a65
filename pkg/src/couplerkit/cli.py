"""Command-line interface: energies, sweep, find, fit.

Exit codes: 0 success, 2 input/schema error, 3 no root found, 4 fit error.
All numeric output is formatted to 9 significant digits so repeated runs on
identical inputs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path
from typing import Callable

import numpy as np

from . import capnet, effmodel, fitkit, numdiag
from .errors import (
    AssumptionViolationError,
    CouplerKitError,
    LabelingError,
    NetlistError,
    NoRootError,
    ResonanceError,
    UnderdeterminedFitError,
)
from .squid import SquidParams, ej_of_flux, phase_from_flux_ratio
from .transmon import (
    SystemModel,
    TransmonParams,
    TransmonRole,
    anharmonicity_from_energies,
    frequency_from_energies,
    system_model,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_ROOT = 3
EXIT_FIT = 4


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _round9(obj):
    """Round every float in a JSON-ready structure to 9 significant digits."""
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round9(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round9(v) for v in obj]
    return obj


def _load_json(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise NetlistError(f"file not found: {path}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise NetlistError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise NetlistError(f"{path}: top level must be a JSON object")
    if data.get("schema", 1) != 1:
        raise NetlistError(f"{path}: unsupported schema version {data.get('schema')!r}")
    return data


def _squid_from_config(cfg: dict, where: str) -> SquidParams:
    if not isinstance(cfg, dict):
        raise NetlistError(f"{where} must be an object")
    try:
        if "ej_sum" in cfg:
            return SquidParams.from_sum_asymmetry(
                float(cfg["ej_sum"]), float(cfg.get("asymmetry", 0.0))
            )
        return SquidParams(float(cfg["ej_large"]), float(cfg["ej_small"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise NetlistError(
            f"{where} needs 'ej_sum' (+ optional 'asymmetry') or "
            f"'ej_large'/'ej_small': {exc}"
        ) from exc


def _model_from_config(cfg: dict) -> tuple[SystemModel, dict]:
    """Build the base SystemModel plus flux-sweep context from a run config."""
    context: dict = {}
    if "model" in cfg:
        block = cfg["model"]
        names = [f.name for f in fields(SystemModel)]
        missing = [n for n in names if n not in block]
        if missing:
            raise NetlistError(f"model block missing fields: {', '.join(missing)}")
        try:
            base = SystemModel(**{n: float(block[n]) for n in names})
        except (TypeError, ValueError) as exc:
            raise NetlistError(f"model block: {exc}") from exc
        if "coupler_squid" in cfg:
            context["coupler_squid"] = _squid_from_config(
                cfg["coupler_squid"], "coupler_squid"
            )
            try:
                context["coupler_ec"] = float(cfg["coupler_ec"])
            except (KeyError, TypeError, ValueError) as exc:
                raise NetlistError(
                    "coupler-flux sweeps from a model block need numeric "
                    "'coupler_ec'"
                ) from exc
        return base, context

    if "netlist" not in cfg:
        raise NetlistError("config needs a 'model' block or a 'netlist'")
    net_src = cfg["netlist"]
    net = capnet.load_netlist(
        net_src if isinstance(net_src, dict) else str(net_src)
    )
    energies = capnet.energies_exact(net)
    squids = cfg.get("squids")
    if not isinstance(squids, dict):
        raise NetlistError("netlist input needs a 'squids' object")
    trans = {}
    for key, e_c, role in (
        ("qubit1", energies.ec1, TransmonRole.QUBIT_1),
        ("qubit2", energies.ec2, TransmonRole.QUBIT_2),
        ("coupler", energies.ecc, TransmonRole.COUPLER),
    ):
        if key not in squids:
            raise NetlistError(f"squids block missing '{key}'")
        trans[key] = TransmonParams(
            e_c=e_c, squid=_squid_from_config(squids[key], f"squids.{key}"), role=role
        )
    flux = cfg.get("flux", {})
    phis = {
        key: phase_from_flux_ratio(float(flux.get(key, 0.0)))
        for key in ("qubit1", "qubit2", "coupler")
    }
    base = system_model(
        energies,
        trans["qubit1"],
        trans["qubit2"],
        trans["coupler"],
        phi_e1=phis["qubit1"],
        phi_e2=phis["qubit2"],
        phi_ec=phis["coupler"],
    )
    context["coupler_squid"] = trans["coupler"].squid
    context["coupler_ec"] = energies.ecc
    context["netlist_parts"] = (energies, trans, phis)
    return base, context


def _builder_from_config(cfg: dict) -> tuple[Callable[[float], SystemModel], str]:
    """x -> SystemModel mapping for the sweep variable; returns (builder, variable)."""
    base, context = _model_from_config(cfg)
    sweep = cfg.get("sweep")
    if not isinstance(sweep, dict):
        raise NetlistError("config needs a 'sweep' object")
    variable = sweep.get("variable", "coupler-frequency")
    if variable == "coupler-frequency":
        import couplerkit.presets as presets

        return presets.frequency_sweep_builder(base), variable
    if variable != "coupler-flux":
        raise NetlistError(
            f"sweep.variable must be 'coupler-frequency' or 'coupler-flux', "
            f"got {variable!r}"
        )
    if "netlist_parts" in context:
        energies, trans, phis = context["netlist_parts"]

        def build(flux_ratio: float) -> SystemModel:
            return system_model(
                energies,
                trans["qubit1"],
                trans["qubit2"],
                trans["coupler"],
                phi_e1=phis["qubit1"],
                phi_e2=phis["qubit2"],
                phi_ec=phase_from_flux_ratio(flux_ratio),
            )

        return build, variable
    if "coupler_squid" not in context:
        raise NetlistError(
            "coupler-flux sweeps from a model block need 'coupler_squid' "
            "and 'coupler_ec'"
        )
    squid = context["coupler_squid"]
    e_c = context["coupler_ec"]
    ej0 = ej_of_flux(squid, 0.0)

    def build(flux_ratio: float) -> SystemModel:
        phi = phase_from_flux_ratio(flux_ratio)
        ej = ej_of_flux(squid, phi)
        scale = (ej / ej0) ** 0.25  # = 1/Upsilon, suppresses both rates
        return SystemModel(
            omega1=base.omega1,
            omega2=base.omega2,
            omegac=frequency_from_energies(e_c, ej),
            eta1=base.eta1,
            eta2=base.eta2,
            etac=anharmonicity_from_energies(e_c, ej),
            g1c=base.g1c * scale,
            g2c=base.g2c * scale,
            g12=base.g12,
        )

    return build, variable


def _parse_levels(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise NetlistError(f"levels must be three comma-separated integers: {exc}")
    if len(parts) != 3:
        raise NetlistError("levels must be three comma-separated integers")
    return parts


def cmd_energies(args: argparse.Namespace) -> int:
    net = capnet.load_netlist(args.netlist)
    exact = capnet.energies_exact(net)
    closed = None
    closed_note = ""
    try:
        if net.topology is capnet.Topology.FLOATING_FLOATING:
            closed = capnet.energies_closed_form_floating(net)
        else:
            closed = capnet.energies_closed_form_grounded(net)
    except AssumptionViolationError as exc:
        closed_note = str(exc)
    print(f"topology: {net.topology.value}")
    print(f"{'energy':<6} {'exact_ghz':>14} {'closed_ghz':>14} {'rel_dev':>10}")
    for name in ("ec1", "ec2", "ecc", "e12", "e1c", "e2c"):
        ex = getattr(exact, name)
        if closed is None:
            print(f"{name:<6} {_fmt(ex):>14} {'-':>14} {'-':>10}")
        else:
            cl = getattr(closed, name)
            dev = abs(cl - ex) / abs(ex) if ex != 0.0 else float("nan")
            dev_s = _fmt(dev) if np.isfinite(dev) else "-"
            print(f"{name:<6} {_fmt(ex):>14} {_fmt(cl):>14} {dev_s:>10}")
    if closed_note:
        print(f"closed-form unavailable: {closed_note}")
    cls = capnet.classify_configuration(exact, degenerate_tol=args.degenerate_tol)
    print(f"configuration: {cls.value}")
    return EXIT_OK


def _sweep_rows(cfg: dict, backend: str, levels: tuple[int, int, int]):
    builder, _ = _builder_from_config(cfg)
    sweep = cfg["sweep"]
    try:
        lo, hi = (float(v) for v in sweep["range"])
        points = int(sweep["points"])
    except (KeyError, TypeError, ValueError) as exc:
        raise NetlistError(f"sweep block needs 'range': [lo, hi] and 'points': {exc}")
    if not lo < hi:
        raise NetlistError(f"sweep range must satisfy lo < hi, got [{lo}, {hi}]")
    if points < 2:
        raise NetlistError(f"sweep needs at least 2 points, got {points}")
    quantity = sweep.get("quantity", "both")
    if quantity not in ("g", "zz", "both"):
        raise NetlistError(f"sweep.quantity must be g|zz|both, got {quantity!r}")
    want_g = quantity in ("g", "both")
    want_zz = quantity in ("zz", "both")
    want_numeric = want_zz and backend in ("numeric", "both")
    want_pert = want_zz and backend in ("effective", "both")

    header = ["x_value", "g_eff_mhz", "g_mhz", "zeta2_mhz", "zeta34_mhz", "zeta_pert_mhz"]
    if want_numeric:
        header.append("zeta_numeric_mhz")
    rows = []
    for x in np.linspace(lo, hi, points):
        cells = {"x_value": _fmt(float(x))}
        try:
            m = builder(float(x))
        except CouplerKitError as exc:
            print(f"warning: x = {_fmt(float(x))}: {exc}", file=sys.stderr)
            rows.append([cells.get(h, "") for h in header])
            continue
        if want_g:
            try:
                eff = effmodel.g_net(m)
                cells["g_eff_mhz"] = _fmt(eff.g_eff * 1e3)
                cells["g_mhz"] = _fmt(eff.g * 1e3)
            except ResonanceError as exc:
                print(f"warning: x = {_fmt(float(x))}: {exc}", file=sys.stderr)
        if want_pert:
            try:
                zz = effmodel.zz_perturbative(m)
                cells["zeta2_mhz"] = _fmt(zz.zeta2 * 1e3)
                cells["zeta34_mhz"] = _fmt(zz.zeta34 * 1e3)
                cells["zeta_pert_mhz"] = _fmt(zz.zeta_total * 1e3)
            except ResonanceError as exc:
                print(f"warning: x = {_fmt(float(x))}: {exc}", file=sys.stderr)
        if want_numeric:
            try:
                cells["zeta_numeric_mhz"] = _fmt(numdiag.zz_numeric(m, levels) * 1e3)
            except (LabelingError, ResonanceError) as exc:
                print(f"warning: x = {_fmt(float(x))}: {exc}", file=sys.stderr)
        rows.append([cells.get(h, "") for h in header])
    return header, rows


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load_json(args.config)
    backend = args.backend or cfg.get("backend", "effective")
    if backend not in ("effective", "numeric", "both"):
        raise NetlistError(f"backend must be effective|numeric|both, got {backend!r}")
    levels = _parse_levels(args.levels) if args.levels else tuple(
        cfg.get("levels", numdiag.DEFAULT_LEVELS)
    )
    header, rows = _sweep_rows(cfg, backend, levels)
    out = args.out or cfg.get("out")
    text = "\n".join([",".join(header)] + [",".join(r) for r in rows]) + "\n"
    if out:
        Path(out).write_text(text)
        print(f"wrote {len(rows)} rows to {out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_find(args: argparse.Namespace) -> int:
    cfg = _load_json(args.config)
    builder, _ = _builder_from_config(cfg)
    sweep = cfg["sweep"]
    band = tuple(float(v) for v in sweep["range"])
    levels = _parse_levels(args.levels) if args.levels else tuple(
        cfg.get("levels", numdiag.DEFAULT_LEVELS)
    )
    backend = args.backend or cfg.get("backend", "effective")
    if args.target == "g":
        try:
            root = effmodel.find_zero_g(builder, band)
        except NoRootError as exc:
            print(f"no root: {exc}", file=sys.stderr)
            return EXIT_NO_ROOT
        print(_fmt(root))
        return EXIT_OK
    zz_backend = "numeric" if backend in ("numeric", "both") else "perturbative"
    roots = effmodel.find_zero_zz(builder, band, backend=zz_backend, levels=levels)
    if not roots:
        print(f"no zz roots in [{_fmt(band[0])}, {_fmt(band[1])}]", file=sys.stderr)
        return EXIT_NO_ROOT
    for r in roots:
        print(_fmt(r))
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    cfg = _load_json(args.config)
    data = fitkit.GFluxDataset.from_csv(args.dataset)
    init_block = cfg.get("init")
    if not isinstance(init_block, dict):
        raise NetlistError("fit config needs an 'init' object")
    try:
        init = fitkit.CouplerFluxModel(
            **{k: float(init_block[k]) for k in fitkit.FIT_PARAMETER_NAMES if k in init_block}
        )
    except (TypeError, ValueError) as exc:
        raise NetlistError(f"init block: {exc}") from exc
    free = tuple(cfg.get("free", fitkit.DEFAULT_FREE))
    result = fitkit.fit_g_vs_flux(
        data, init, free=free, refine=bool(cfg.get("refine", True))
    )
    payload = _round9(
        {
            "schema": 1,
            "g12_mhz": result.params.g12_mhz,
            "g1c_g2c_mhz2": result.params.g1c_g2c_mhz2,
            "product_sqrt_mhz": result.product_sqrt_mhz,
            "coupler_ec_ghz": result.params.coupler_ec_ghz,
            "coupler_ej_sum_ghz": result.params.coupler_ej_sum_ghz,
            "coupler_asymmetry": result.params.coupler_asymmetry,
            "free": list(result.free),
            "rms_residual_mhz": result.rms_residual_mhz,
            "converged": result.converged,
            "n_evaluations": result.n_evaluations,
            "covariance": result.covariance,
        }
    )
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote fit result to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="couplerkit",
        description="Quantize qubit-coupler-qubit circuits and locate "
        "zero-coupling operating points.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("energies", help="charging/coupling energies of a netlist")
    p.add_argument("netlist", help="netlist JSON path")
    p.add_argument(
        "--degenerate-tol",
        type=float,
        default=1e-6,
        help="|e1c*e2c| threshold for the degenerate classification (GHz^2)",
    )
    p.set_defaults(func=cmd_energies)

    p = sub.add_parser("sweep", help="sweep g and/or zz, emit CSV")
    p.add_argument("--config", required=True, help="run config JSON path")
    p.add_argument("--out", help="output CSV path (default: config 'out' or stdout)")
    p.add_argument("--backend", choices=["effective", "numeric", "both"])
    p.add_argument("--levels", help="truncation as n1,nc,n2")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("find", help="locate zero-coupling / zero-zz points")
    p.add_argument("--config", required=True, help="run config JSON path")
    p.add_argument("--target", choices=["g", "zz"], required=True)
    p.add_argument("--backend", choices=["effective", "numeric", "both"])
    p.add_argument("--levels", help="truncation as n1,nc,n2")
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("fit", help="fit g-vs-flux data, emit JSON")
    p.add_argument("dataset", help="dataset CSV path")
    p.add_argument("--config", required=True, help="fit config JSON path")
    p.add_argument("--out", help="output JSON path (default stdout)")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NetlistError, AssumptionViolationError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UnderdeterminedFitError, ValueError) as exc:
        if args.command == "fit":
            print(f"fit error: {exc}", file=sys.stderr)
            return EXIT_FIT
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CouplerKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
