"""Polarization-interferometer model of the damping-channel experiment.

Each damping stage is a double interferometer (DIF): a polarizing beam
splitter splits |H> and |V> onto two paths of a loop, half-wave plates rotate
the path-b polarization, the same splitter recombines the loop, and the
horizontal light left on path b picks up a random phase before a final beam
splitter merges everything onto one postselected output port.  Averaging the
random phase removes the cross terms, leaving a two-branch Kraus map that, for
ideal elements, is exactly the amplitude-damping channel.

Three DIFs in series, with half-wave plates between them, act on one half of a
Werner pair; sweeps over the plate angles reproduce the experiment's
concurrence curves for the composed, order-2-breaking, and restored maps.

Element parameters are the measured intensity transmissivities/reflectivities.
The matrices use the raw amplitudes (sqrt(T), i sqrt(R)); this equals the
loss-renormalized unitary scaled by sqrt(1 - loss), so losses reduce success
probability without extra bookkeeping.  The loop's return pass uses the
inverse splitter matrix (reciprocity of a lossless element traversed
backwards), which is what makes the ideal loop close exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from .channels import QuantumChannel, compose_signal_chain, unitary_channel
from .entanglement import concurrence, werner_state
from .qmath import OutOfRange, as_matrix, projector
from .states import DensityMatrix, matrix_of


class ElementInconsistent(ValueError):
    """Optical element parameters violate T + R <= 1 or a range constraint."""


class ZeroSuccessProbability(RuntimeError):
    """Postselection trace vanished; no photons reach the output port."""


_ETOL = 1e-9


@dataclass(frozen=True)
class BeamSplitterParams:
    """Measured intensity transmissivity/reflectivity; loss is the remainder."""

    T: float
    R: float
    loss: float = field(init=False)

    def __post_init__(self):
        if not (0.0 <= self.T and 0.0 <= self.R):
            raise ElementInconsistent("negative transmissivity or reflectivity")
        if self.T + self.R > 1.0 + _ETOL:
            raise ElementInconsistent(
                f"T + R = {self.T + self.R:.4f} exceeds 1")
        object.__setattr__(self, "loss", max(0.0, 1.0 - self.T - self.R))

    def renormalized(self) -> tuple[float, float]:
        """Loss-free (T', R') with T' + R' = 1."""
        s = self.T + self.R
        if s <= 0.0:
            raise ElementInconsistent("element blocks all light")
        return self.T / s, self.R / s


@dataclass(frozen=True)
class PbsParams:
    """Polarizing splitter: independent splitting ratios for H and V."""

    T_H: float
    R_H: float
    T_V: float
    R_V: float
    loss_H: float = field(init=False)
    loss_V: float = field(init=False)

    def __post_init__(self):
        for t, r, pol in ((self.T_H, self.R_H, "H"), (self.T_V, self.R_V, "V")):
            if t < 0.0 or r < 0.0 or t + r > 1.0 + _ETOL:
                raise ElementInconsistent(f"{pol} parameters violate T + R <= 1")
        object.__setattr__(self, "loss_H", max(0.0, 1.0 - self.T_H - self.R_H))
        object.__setattr__(self, "loss_V", max(0.0, 1.0 - self.T_V - self.R_V))


@dataclass(frozen=True)
class DifElements:
    """Per-interferometer element set: loop splitter, output splitter, and
    per-path fiber-coupling efficiencies (unmeasured in the experiment;
    default lossless)."""

    bs: BeamSplitterParams
    pbs: PbsParams
    coupling: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        c = tuple(float(x) for x in self.coupling)
        if len(c) != 2 or not all(0.0 <= x <= 1.0 for x in c):
            raise ElementInconsistent("coupling efficiencies must lie in [0, 1]")
        object.__setattr__(self, "coupling", c)


IDEAL = DifElements(BeamSplitterParams(0.5, 0.5), PbsParams(1.0, 0.0, 0.0, 1.0))

# Bench-characterized averages.  The H triple as stated sums to more than 1,
# so the loss fields are always derived as 1 - T - R.
MEASURED = DifElements(BeamSplitterParams(0.48, 0.44),
                       PbsParams(0.965, 0.0185, 0.004, 0.948))

_PRESETS = {"ideal": IDEAL, "measured": MEASURED}


def hwp(xi: float) -> np.ndarray:
    """Half-wave plate at angle xi: [[cos 2xi, sin 2xi], [sin 2xi, -cos 2xi]].

    Real, symmetric, involutive.  hwp(0) = sigma_z, hwp(pi/4) = sigma_x.
    """
    c, s = math.cos(2.0 * xi), math.sin(2.0 * xi)
    return np.array([[c, s], [s, -c]], dtype=complex)


def alpha_for_eta(eta: float) -> float:
    """Plate angle realizing damping parameter eta: arccos(-sqrt(eta)) / 2.

    eta = 1 -> pi/2 (identity stage), eta = 0 -> pi/4 (full damping).
    """
    if not 0.0 <= eta <= 1.0:
        raise OutOfRange(f"damping parameter {eta} outside [0, 1]")
    return math.acos(-math.sqrt(eta)) / 2.0


def _split_matrix(t: float, r: float, conj: bool) -> np.ndarray:
    """Raw-amplitude splitter on the path pair; conj selects the return pass."""
    ph = -1.0j if conj else 1.0j
    return np.array([[math.sqrt(t), ph * math.sqrt(r)],
                     [ph * math.sqrt(r), math.sqrt(t)]], dtype=complex)


def _pbs_matrix(pbs: PbsParams, conj: bool) -> np.ndarray:
    """Polarizing splitter on pol (x) path."""
    h = np.zeros((2, 2), dtype=complex)
    h[0, 0] = 1.0
    v = np.eye(2, dtype=complex) - h
    return (np.kron(h, _split_matrix(pbs.T_H, pbs.R_H, conj))
            + np.kron(v, _split_matrix(pbs.T_V, pbs.R_V, conj)))


def _dif_branches(alpha: float, elements: DifElements) -> tuple[np.ndarray, np.ndarray]:
    """Polarization-space operators of the two output branches.

    Returns (main, arm): the postselected port emits main + e^{i omega} arm
    applied to the input polarization state.  The loop is traced in the
    pol (x) path basis with path index 0 = a, 1 = b; the signal enters on a.
    """
    el = elements
    loop = (np.kron(hwp(0.0), np.diag([1.0, 0.0])).astype(complex)
            + np.kron(hwp(alpha), np.diag([0.0, 1.0])).astype(complex))
    embed = np.kron(np.eye(2, dtype=complex), np.array([[1.0], [0.0]], dtype=complex))
    stage = _pbs_matrix(el.pbs, conj=True) @ loop @ _pbs_matrix(el.pbs, conj=False) @ embed
    ca, cb = (math.sqrt(c) for c in el.coupling)
    path_a = ca * stage[0::2, :]
    path_b = cb * stage[1::2, :]
    # final splitter, output port fed by reflected a and transmitted b
    main = 1.0j * math.sqrt(el.bs.R) * path_a
    arm = math.sqrt(el.bs.T) * path_b
    return main, arm


def dif_map(alpha: float,
            bs: BeamSplitterParams | None = None,
            pbs: PbsParams | None = None,
            *,
            coupling: tuple[float, float] = (1.0, 1.0),
            omega_samples: int | None = None,
            rng: np.random.Generator | None = None) -> QuantumChannel:
    """Trace-nonincreasing polarization map of one double interferometer.

    The random output phase is averaged analytically: the cross terms between
    the phase-carrying branch and the rest vanish, leaving the two-operator
    Kraus form.  ``omega_samples`` switches to a Monte Carlo average over that
    many phase draws instead (validation mode; converges ~ 1/sqrt(N)).

    With ideal elements the normalized map is exactly the damping channel of
    parameter eta(alpha) given by cos(2 alpha) = -sqrt(eta), at success
    probability 1/2.
    """
    elements = DifElements(bs if bs is not None else IDEAL.bs,
                           pbs if pbs is not None else IDEAL.pbs,
                           coupling)
    main, arm = _dif_branches(alpha, elements)
    if omega_samples is None:
        return QuantumChannel((main, arm))
    if omega_samples < 1:
        raise OutOfRange("omega_samples must be positive")
    rng = rng if rng is not None else np.random.default_rng()
    phases = np.exp(1.0j * rng.uniform(0.0, 2.0 * math.pi, size=omega_samples))
    scale = 1.0 / math.sqrt(omega_samples)
    return QuantumChannel(tuple(scale * (main + ph * arm) for ph in phases))


@dataclass(frozen=True)
class OpticalSetup:
    """Angles, element sets, and input parameters of the three-DIF bench.

    ``alpha1``, ``alpha21``, ``alpha2`` are the loop plate angles of the three
    DIFs in signal order; ``phi`` plates sit right after the first and second
    DIF, ``theta`` plates right after the phi plates.  ``source_phase`` is the
    relative phase of the entangled-pair ket (|HV> + e^{i phase}|VH>)/sqrt(2);
    the experiment does not pin it, and entanglement verdicts cannot depend on
    it.
    """

    alpha1: float
    alpha21: float
    alpha2: float
    theta: float = math.pi / 4
    phi: float = math.pi / 4
    theta_present: bool = True
    phi_present: bool = True
    elements: tuple[DifElements, DifElements, DifElements] = (IDEAL, IDEAL, IDEAL)
    W: float = 0.96
    source_phase: float = math.pi
    preset: str = "ideal"
    label: str = "custom"

    def __post_init__(self):
        for name in ("alpha1", "alpha21", "alpha2", "theta", "phi", "source_phase"):
            if not math.isfinite(getattr(self, name)):
                raise OutOfRange(f"{name} is not finite")
        if not 0.0 <= self.W <= 1.0:
            raise OutOfRange(f"Werner parameter {self.W} outside [0, 1]")
        if len(self.elements) != 3:
            raise ElementInconsistent("need one element set per DIF")


def resolve_elements(preset) -> tuple[DifElements, DifElements, DifElements]:
    """Accept a preset name, one DifElements, or a 3-tuple of them."""
    if isinstance(preset, str):
        try:
            e = _PRESETS[preset.lower()]
        except KeyError:
            raise ElementInconsistent(f"unknown element preset {preset!r}") from None
        return (e, e, e)
    if isinstance(preset, DifElements):
        return (preset, preset, preset)
    elems = tuple(preset)
    if len(elems) != 3 or not all(isinstance(e, DifElements) for e in elems):
        raise ElementInconsistent("expected three DifElements")
    return elems


def _preset_name(preset) -> str:
    return preset.lower() if isinstance(preset, str) else "custom"


def mprime_setup(eta1: float = 0.3, eta2: float = 0.3, *,
                 theta: float = math.pi / 4, phi: float = math.pi / 4,
                 preset="ideal", w: float = 0.96,
                 source_phase: float = math.pi) -> OpticalSetup:
    """Restored sequence: three DIFs at alpha(eta1), alpha(eta1 eta2),
    alpha(eta2) with both plate pairs in place."""
    return OpticalSetup(alpha_for_eta(eta1), alpha_for_eta(eta1 * eta2),
                        alpha_for_eta(eta2), theta=theta, phi=phi,
                        elements=resolve_elements(preset), W=w,
                        source_phase=source_phase,
                        preset=_preset_name(preset), label="mprime")


def m1_setup(eta2: float = 0.3, *, theta: float = math.pi / 4,
             preset="ideal", w: float = 0.96,
             source_phase: float = math.pi) -> OpticalSetup:
    """Twice the damping-then-rotation map: first DIF idles (alpha = pi/2),
    phi plates removed."""
    a = alpha_for_eta(eta2)
    return OpticalSetup(math.pi / 2, a, a, theta=theta, phi_present=False,
                        elements=resolve_elements(preset), W=w,
                        source_phase=source_phase,
                        preset=_preset_name(preset), label="m1")


def m2_setup(eta1: float = 0.3, *, phi: float = math.pi / 4,
             preset="ideal", w: float = 0.96,
             source_phase: float = math.pi) -> OpticalSetup:
    """Twice the rotation-then-damping map: last DIF idles, theta plates
    removed."""
    a = alpha_for_eta(eta1)
    return OpticalSetup(a, a, math.pi / 2, phi=phi, theta_present=False,
                        elements=resolve_elements(preset), W=w,
                        source_phase=source_phase,
                        preset=_preset_name(preset), label="m2")


def identity_setup(*, preset="ideal", w: float = 0.96,
                   source_phase: float = math.pi) -> OpticalSetup:
    """All three DIFs idle, every external plate removed: the bench's
    do-nothing baseline."""
    return OpticalSetup(math.pi / 2, math.pi / 2, math.pi / 2,
                        theta_present=False, phi_present=False,
                        elements=resolve_elements(preset), W=w,
                        source_phase=source_phase,
                        preset=_preset_name(preset), label="identity")


def source_state(s: OpticalSetup) -> DensityMatrix:
    """Werner input built on (|HV> + e^{i source_phase}|VH>)/sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[1] = 1.0 / math.sqrt(2.0)
    v[2] = np.exp(1.0j * s.source_phase) / math.sqrt(2.0)
    return werner_state(s.W, omega=DensityMatrix(projector(v)))


def setup_map(s: OpticalSetup, *,
              omega_samples: int | None = None,
              rng: np.random.Generator | None = None) -> tuple[QuantumChannel, float]:
    """Composed polarization map of the bench and its success probability on
    the configured Werner input.

    Signal order: DIF1, [phi plate], [theta plate], DIF2, [phi plate],
    [theta plate], DIF3.  Each DIF's random phase is independent, so the three
    two-branch maps compose as channels.
    """
    if omega_samples is not None and rng is None:
        rng = np.random.default_rng()
    def stage(alpha, el):
        return dif_map(alpha, el.bs, el.pbs, coupling=el.coupling,
                       omega_samples=omega_samples, rng=rng)
    plates = []
    if s.phi_present:
        plates.append(unitary_channel(hwp(s.phi)))
    if s.theta_present:
        plates.append(unitary_channel(hwp(s.theta)))
    chain = [stage(s.alpha1, s.elements[0]), *plates,
             stage(s.alpha21, s.elements[1]), *plates,
             stage(s.alpha2, s.elements[2])]
    total = compose_signal_chain(chain)
    rho_in = matrix_of(source_state(s))
    eye = np.eye(2, dtype=complex)
    out = sum(np.kron(k, eye) @ rho_in @ np.kron(k, eye).conj().T
              for k in total.kraus)
    return total, float(np.trace(out).real)


def run_point(s: OpticalSetup, *,
              omega_samples: int | None = None,
              rng: np.random.Generator | None = None) -> tuple[float, float]:
    """Output concurrence and success probability at one setting.

    Applies (map (x) id) to the Werner input and renormalizes by the
    postselection trace.
    """
    total, _ = setup_map(s, omega_samples=omega_samples, rng=rng)
    rho_in = matrix_of(source_state(s))
    eye = np.eye(2, dtype=complex)
    out = sum(np.kron(k, eye) @ rho_in @ np.kron(k, eye).conj().T
              for k in total.kraus)
    succ = float(np.trace(out).real)
    if succ < 1e-12:
        raise ZeroSuccessProbability(
            f"postselection trace {succ:.3e} at {s.label}")
    rho = out / succ
    rho = 0.5 * (rho + rho.conj().T)
    return concurrence(DensityMatrix(rho)).value, succ


class SweepPoint(NamedTuple):
    angle: float
    concurrence: float
    success_prob: float


def sweep(s: OpticalSetup, vary: str, lo: float, hi: float, steps: int, *,
          omega_samples: int | None = None,
          rng: np.random.Generator | None = None) -> list[SweepPoint]:
    """run_point over a uniform grid of the theta or phi plate angle."""
    if vary not in ("theta", "phi"):
        raise OutOfRange(f"vary must be 'theta' or 'phi', not {vary!r}")
    if steps < 2:
        raise OutOfRange("need at least two sweep steps")
    pts = []
    for ang in np.linspace(lo, hi, steps):
        cfg = replace(s, **{vary: float(ang)})
        c, p = run_point(cfg, omega_samples=omega_samples, rng=rng)
        pts.append(SweepPoint(float(ang), c, p))
    return pts


def _elements_doc(e: DifElements) -> dict:
    return {"bs": {"T": e.bs.T, "R": e.bs.R},
            "pbs": {"T_H": e.pbs.T_H, "R_H": e.pbs.R_H,
                    "T_V": e.pbs.T_V, "R_V": e.pbs.R_V},
            "coupling": list(e.coupling)}


def _elements_from_doc(doc: dict) -> DifElements:
    return DifElements(BeamSplitterParams(doc["bs"]["T"], doc["bs"]["R"]),
                       PbsParams(doc["pbs"]["T_H"], doc["pbs"]["R_H"],
                                 doc["pbs"]["T_V"], doc["pbs"]["R_V"]),
                       tuple(doc.get("coupling", (1.0, 1.0))))


def setup_to_json(s: OpticalSetup) -> str:
    doc = {
        "label": s.label,
        "preset": s.preset,
        "alpha1": s.alpha1, "alpha21": s.alpha21, "alpha2": s.alpha2,
        "theta": s.theta, "phi": s.phi,
        "theta_present": s.theta_present, "phi_present": s.phi_present,
        "W": s.W, "source_phase": s.source_phase,
        "elements": [_elements_doc(e) for e in s.elements],
    }
    return json.dumps(doc, sort_keys=True, indent=2)


def setup_from_json(text: str) -> OpticalSetup:
    doc = json.loads(text)
    try:
        elems = tuple(_elements_from_doc(d) for d in doc["elements"])
        if len(elems) != 3:
            raise ElementInconsistent("expected three DIF element sets")
        return OpticalSetup(doc["alpha1"], doc["alpha21"], doc["alpha2"],
                            theta=doc["theta"], phi=doc["phi"],
                            theta_present=doc["theta_present"],
                            phi_present=doc["phi_present"],
                            elements=elems, W=doc["W"],
                            source_phase=doc["source_phase"],
                            preset=doc.get("preset", "custom"),
                            label=doc.get("label", "custom"))
    except KeyError as exc:
        raise ElementInconsistent(f"setup document missing key {exc}") from None


def write_sweep_csv(path, points: Sequence[SweepPoint], preset: str,
                    map_label: str) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["angle", "concurrence", "success_prob", "preset", "map_label"])
        for p in points:
            w.writerow(["%.12g" % p.angle, "%.12g" % p.concurrence,
                        "%.12g" % p.success_prob, preset, map_label])
