"""Command-line front end: reproduce every curve and verdict as CSV/JSON.

Three subcommands:

* ``discrete``   -- damping/dephasing channel pairs, sequence verdicts, orders
* ``continuous`` -- switched-generator concurrence profiles and thresholds
* ``experiment`` -- interferometer-bench sweeps, ideal or measured elements

Every run writes a manifest JSON next to its outputs recording the full
resolved parameter set; identical invocations produce byte-identical CSVs.

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .channels import (
    QuantumChannel,
    ToleranceConflict,
    ad_channel,
    choi_state,
    compose,
    compose_signal_chain,
    eb_order,
    is_eb,
    pd_channel,
    unitary_channel,
)
from .continuous import (
    NoBracket,
    SwitchedLine,
    average_liouvillian,
    concurrence_profile,
    eb_length,
    rotating_ad_liouvillian,
    rotating_pd_liouvillian,
    write_profile_csv,
)
from .entanglement import BadDimension, concurrence
from .optics import (
    ElementInconsistent,
    ZeroSuccessProbability,
    identity_setup,
    m1_setup,
    m2_setup,
    mprime_setup,
    run_point,
    setup_from_json,
    sweep,
    write_sweep_csv,
)
from .qmath import (
    SIGMA_X,
    SIGMA_Z,
    DimensionMismatch,
    NonHermitian,
    NotUnitary,
    OutOfRange,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class ParseError(ValueError):
    """Malformed sequence string, unitary descriptor, or JSON payload."""


_VALIDATION = (ParseError, OutOfRange, NotUnitary, NonHermitian,
               DimensionMismatch, BadDimension, ElementInconsistent, ValueError)
_NUMERICAL = (ToleranceConflict, NoBracket, ZeroSuccessProbability)


@dataclass
class RunManifest:
    """Reproducibility record written alongside every output file."""

    command: str
    parameters: dict
    outputs: list = field(default_factory=list)
    version: str = __version__
    wall_time_s: float = 0.0
    notes: list = field(default_factory=list)

    def write(self, out_dir: Path, started: float,
              stem: str | None = None) -> Path:
        self.wall_time_s = round(time.monotonic() - started, 3)
        path = out_dir / f"{stem or self.command}_manifest.json"
        path.write_text(json.dumps(asdict(self), sort_keys=True, indent=2) + "\n")
        return path


def _unitary_from_string(text: str) -> np.ndarray:
    named = {
        "x": SIGMA_X,
        "z": SIGMA_Z,
        "zx-diag": (SIGMA_Z - SIGMA_X) / math.sqrt(2.0),
    }
    if text in named:
        return named[text]
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"unitary descriptor {text!r} is neither a name "
                         f"(x, z, zx-diag) nor JSON: {exc}") from None
    try:
        m = np.array([[complex(*e) if isinstance(e, (list, tuple)) else complex(e)
                       for e in row] for row in rows])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"cannot read a 2x2 matrix from {text!r}: {exc}") from None
    if m.shape != (2, 2):
        raise ParseError(f"unitary descriptor must be 2x2, got shape {m.shape}")
    return m


def _parse_sequence(text: str) -> str:
    seq = text.strip().upper()
    if not seq or any(ch not in "PQ" for ch in seq):
        raise ParseError(f"sequence {text!r} must be a nonempty word over P/Q")
    return seq


def _outdir(args) -> Path:
    d = Path(args.out)
    d.mkdir(parents=True, exist_ok=True)
    return d


# ---------------------------------------------------------------- discrete


def _channel_report(label: str, c: QuantumChannel, max_order: int) -> dict:
    verdict = is_eb(c)
    order = eb_order(c, max_order)
    return {
        "label": label,
        "is_eb": verdict.eb,
        "margin": verdict.margin,
        "choi_concurrence": concurrence(choi_state(c)).value,
        "eb_order": order if isinstance(order, int) else str(order),
    }


def cmd_discrete(args) -> int:
    started = time.monotonic()
    out_dir = _outdir(args)
    if args.pd is not None:
        base = pd_channel(args.pd)
        base_label = f"pd({args.pd:g})"
    else:
        base = ad_channel(args.eta)
        base_label = f"ad({args.eta:g})"
    u_mat = _unitary_from_string(args.unitary)
    u = unitary_channel(u_mat)
    u_dag = unitary_channel(u_mat.conj().T)
    phi = compose(u, base)      # signal meets the unitary first
    psi = compose(base, u_dag)  # damping first, inverse rotation after
    report = {
        "base": base_label,
        "unitary": args.unitary,
        "P": _channel_report("P", phi, args.max_order),
        "Q": _channel_report("Q", psi, args.max_order),
    }
    if args.sequence:
        seq = _parse_sequence(args.sequence)
        total = compose_signal_chain([phi if ch == "P" else psi for ch in seq])
        report["sequence"] = {"word": seq,
                              **{k: v for k, v in
                                 _channel_report(seq, total, args.max_order).items()
                                 if k != "label"}}
    if args.order_of:
        print(report[args.order_of]["eb_order"])
    else:
        for key in ("P", "Q"):
            r = report[key]
            print(f"{key}: is_eb={r['is_eb']} "
                  f"concurrence={r['choi_concurrence']:.12g} "
                  f"order={r['eb_order']}")
        if args.sequence:
            s = report["sequence"]
            print(f"sequence {s['word']}: is_eb={s['is_eb']} "
                  f"concurrence={s['choi_concurrence']:.12g} "
                  f"order={s['eb_order']}")
    report_path = out_dir / "discrete_report.json"
    report_path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    manifest = RunManifest("discrete", {
        "eta": args.eta, "pd": args.pd, "unitary": args.unitary,
        "sequence": args.sequence, "order_of": args.order_of,
        "max_order": args.max_order, "out": str(out_dir),
    }, outputs=[report_path.name])
    manifest.write(out_dir, started)
    return EXIT_OK


# -------------------------------------------------------------- continuous


def cmd_continuous(args) -> int:
    started = time.monotonic()
    out_dir = _outdir(args)
    decaying = args.dephasing_sign == "decaying"
    if args.family == "ad":
        gen = rotating_ad_liouvillian
        g1, g2 = gen(1, args.omega, args.eps), gen(2, args.omega, args.eps)
    else:
        g1 = rotating_pd_liouvillian(1, args.omega, args.eps, decaying=decaying)
        g2 = rotating_pd_liouvillian(2, args.omega, args.eps, decaying=decaying)
    x_hi = max(args.x_max, 20.0)
    manifest = RunManifest("continuous", {
        "family": args.family, "omega": args.omega, "eps": args.eps,
        "n": args.n, "x_max": args.x_max, "steps": args.steps,
        "dephasing_sign": args.dephasing_sign, "out": str(out_dir),
    })

    def emit(source, label):
        points = concurrence_profile(source, args.x_max, args.steps,
                                     stop_on_unphysical=not decaying)
        if len(points) < args.steps:
            # growing-sign comparison mode leaves the physical state cone
            manifest.notes.append(
                f"{label}: profile truncated at x={points[-1].x:g}, evolved "
                f"state loses positivity beyond this length")
        name = f"continuous_{args.family}_{label}.csv"
        write_profile_csv(out_dir / name, points, label)
        manifest.outputs.append(name)
        try:
            threshold = eb_length(source, x_hi)
        except NoBracket:
            threshold = None
        except OutOfRange:
            if decaying:
                raise
            print(f"{label}: no breaking length, evolution is unphysical")
            return None
        if isinstance(threshold, float):
            print(f"{label}: eb_length {threshold:.12g}")
        elif threshold is None:
            print(f"{label}: never entangled on the probe")
        else:
            print(f"{label}: {threshold}")
        return threshold

    single = emit(g1, "single")
    if isinstance(single, float):
        for n in args.n:
            if n < 1:
                raise OutOfRange(f"slice count {n} must be positive")
            line = SwitchedLine(g1, g2, single / n, label=f"n{n}")
            emit(line, f"n{n}")
    else:
        manifest.notes.append("switched lines skipped: no finite "
                              "single-channel threshold to slice")
    emit(average_liouvillian(g1, g2), "limit")
    manifest.write(out_dir, started)
    return EXIT_OK


# -------------------------------------------------------------- experiment


_SETUPS = {
    "mprime": lambda a: mprime_setup(a.eta1, a.eta2, theta=a.theta, phi=a.phi,
                                     preset=a.preset, w=a.W,
                                     source_phase=a.source_phase),
    "m1": lambda a: m1_setup(a.eta2, theta=a.theta, preset=a.preset, w=a.W,
                             source_phase=a.source_phase),
    "m2": lambda a: m2_setup(a.eta1, phi=a.phi, preset=a.preset, w=a.W,
                             source_phase=a.source_phase),
    "identity": lambda a: identity_setup(preset=a.preset, w=a.W,
                                         source_phase=a.source_phase),
}

_DEFAULT_VARY = {"mprime": "theta", "m1": "theta", "m2": "phi",
                 "identity": "theta"}


def _summarize(points) -> list[str]:
    lines = []
    cs = [p.concurrence for p in points]
    for i in range(1, len(points) - 1):
        if cs[i] > cs[i - 1] and cs[i] >= cs[i + 1] and cs[i] > 1e-9:
            lines.append(f"peak at {points[i].angle:+.6f}: "
                         f"concurrence {cs[i]:.6g}")
    zero = sum(1 for c in cs if c <= 1e-9)
    lines.append(f"zero-concurrence points: {zero} of {len(points)}")
    return lines


def cmd_experiment(args) -> int:
    started = time.monotonic()
    out_dir = _outdir(args)
    if args.setup_json:
        setup = setup_from_json(Path(args.setup_json).read_text())
        map_label = setup.label
        preset_name = setup.preset
    else:
        setup = _SETUPS[args.map](args)
        map_label = args.map
        preset_name = args.preset
    vary = args.vary or _DEFAULT_VARY.get(map_label, "theta")
    rng = np.random.default_rng(args.seed) if args.omega_samples else None
    lo, hi = args.range
    points = sweep(setup, vary, lo, hi, args.steps,
                   omega_samples=args.omega_samples, rng=rng)
    name = f"experiment_{map_label}_{preset_name}_{vary}.csv"
    write_sweep_csv(out_dir / name, points, preset_name, map_label)
    for line in _summarize(points):
        print(line)
    manifest = RunManifest("experiment", {
        "map": map_label, "preset": preset_name, "vary": vary,
        "range": [lo, hi], "steps": args.steps, "W": args.W,
        "eta1": args.eta1, "eta2": args.eta2,
        "theta": args.theta, "phi": args.phi,
        "source_phase": args.source_phase,
        "omega_samples": args.omega_samples, "seed": args.seed,
        "setup_json": args.setup_json, "degrees": args.degrees,
        "out": str(out_dir),
    }, outputs=[name])
    manifest.write(out_dir, started, stem=name[:-len(".csv")])
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="entweave",
        description="Qubit-channel cut-and-paste toolkit: discrete algebra, "
                    "switched generators, interferometer bench.")
    top.add_argument("--out", default=".", help="output directory")
    sub = top.add_subparsers(dest="command", required=True)

    d = sub.add_parser("discrete", help="channel pairs and sequence verdicts")
    d.add_argument("--eta", type=float, default=0.3,
                   help="damping parameter of the base channel")
    d.add_argument("--pd", type=float, default=None, metavar="P",
                   help="use the dephasing channel with this parameter instead")
    d.add_argument("--unitary", default="x",
                   help="x, z, zx-diag, or a JSON 2x2 matrix")
    d.add_argument("--sequence", default=None,
                   help="word over P/Q, leftmost applied first")
    d.add_argument("--order-of", choices=("P", "Q"), default=None,
                   help="print the breaking order of one factor")
    d.add_argument("--max-order", type=int, default=16)

    c = sub.add_parser("continuous", help="switched-generator profiles")
    c.add_argument("--family", choices=("ad", "pd"), required=True)
    c.add_argument("--omega", type=float, default=1.5, help="rotation rate")
    c.add_argument("--eps", type=float, default=1.0, help="dissipation rate")
    c.add_argument("--n", type=int, nargs="+", default=[1, 2, 4, 8, 16],
                   help="slice counts for the switched lines")
    c.add_argument("--x-max", type=float, default=6.0)
    c.add_argument("--steps", type=int, default=241)
    c.add_argument("--dephasing-sign", choices=("decaying", "growing"),
                   default="decaying",
                   help="growing reproduces the non-physical sign of the "
                        "dephasing generator for comparison")

    e = sub.add_parser("experiment", help="interferometer-bench sweeps")
    e.add_argument("--map", choices=tuple(_SETUPS), default="mprime")
    e.add_argument("--preset", choices=("ideal", "measured"), default="ideal")
    e.add_argument("--vary", choices=("theta", "phi"), default=None)
    e.add_argument("--range", type=float, nargs=2,
                   default=[-math.pi / 2, math.pi / 2])
    e.add_argument("--steps", type=int, default=361)
    e.add_argument("--W", type=float, default=0.96, help="Werner parameter")
    e.add_argument("--eta1", type=float, default=0.3)
    e.add_argument("--eta2", type=float, default=0.3)
    e.add_argument("--theta", type=float, default=math.pi / 4)
    e.add_argument("--phi", type=float, default=math.pi / 4)
    e.add_argument("--source-phase", type=float, default=math.pi)
    e.add_argument("--degrees", action="store_true",
                   help="interpret all angle inputs as degrees")
    e.add_argument("--omega-samples", type=int, default=None,
                   help="Monte Carlo phase-average validation mode")
    e.add_argument("--seed", type=int, default=None,
                   help="random seed (Monte Carlo mode only)")
    e.add_argument("--setup-json", default=None,
                   help="load a full setup document instead of presets")
    return top


def _convert_degrees(args) -> None:
    if getattr(args, "degrees", False):
        for name in ("theta", "phi", "source_phase"):
            setattr(args, name, math.radians(getattr(args, name)))
        args.range = [math.radians(v) for v in args.range]


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _convert_degrees(args)
    handlers = {"discrete": cmd_discrete, "continuous": cmd_continuous,
                "experiment": cmd_experiment}
    try:
        return handlers[args.command](args)
    except _NUMERICAL as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _VALIDATION as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
