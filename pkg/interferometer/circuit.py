"""The two-splitter interferometer and one forward evolution t1 -> t2.

Geometry: the input ψ meets the first splitter from the right, the injected
state χ (when present) from the left. The left channel carries ψ1 through
G1, the right channel carries ψ2 through G2, and the two channels meet
opposite faces of the second splitter, whose right output is ψ3 and whose
left output is ψ4.

Both splitters transmit with amplitude α and reflect with amplitude -iβ on
either face::

    out_left  = α·in_right - iβ·in_left
    out_right = -iβ·in_right + α·in_left

Following ψ alone (χ = 0):

    ψ1 = αψ,  ψ2 = -iβψ
    ψ3 = α·G1ψ1 - iβ·G2ψ2 = (α²G1 - β²G2)ψ
    ψ4 = -iβ·G1ψ1 + α·G2ψ2 = -iαβ(G1 + G2)ψ

and with χ on the left face the extra terms are -iαβ(G1 + G2)χ in ψ3 and
(α²G2 - β²G1)χ in ψ4. ``closed_form_outputs`` and ``path_sum_outputs``
evaluate the same outputs independently of the staged evaluation.

ψ1 and ψ2 are recorded right after the first splitter, before the channel
propagators act. They are labels only and never feed the outputs.
"""
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from .algebra import (
    DEFAULT_TOL,
    Operator,
    State,
    apply,
    as_operator,
    as_state,
    check_same_dim,
    is_unitary,
    norm_sq,
    zero_state,
)
from .exceptions import DimensionMismatch, InvalidSplitter, NonUnitaryWarning

logger = logging.getLogger(__name__)

SPLITTER_TOL = 1e-12


def warn_if_not_unitary(name, op, tol=None):
    if tol is None:
        tol = getattr(settings, 'CHRONOLOOP_UNITARY_TOL', DEFAULT_TOL)
    if not is_unitary(op, tol):
        message = f'{name} is not unitary; output norms need not be conserved'
        logger.warning(message)
        warnings.warn(message, NonUnitaryWarning, stacklevel=3)


@dataclass(frozen=True)
class BeamSplitter:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise InvalidSplitter('splitter amplitudes must be finite')
        if self.alpha < 0 or self.beta < 0:
            raise InvalidSplitter(f'splitter amplitudes must be non-negative, got α={self.alpha}, β={self.beta}')
        deviation = abs(self.alpha ** 2 + self.beta ** 2 - 1.0)
        if deviation > SPLITTER_TOL:
            raise InvalidSplitter(f'α² + β² must equal 1 (off by {deviation:.3e})')

    @classmethod
    def balanced(cls):
        half = math.sqrt(0.5)
        return cls(alpha=half, beta=half)

    @classmethod
    def from_transmission(cls, alpha):
        return cls(alpha=alpha, beta=math.sqrt(1.0 - alpha ** 2))

    @property
    def transmission(self) -> complex:
        return complex(self.alpha, 0.0)

    @property
    def reflection(self) -> complex:
        return complex(0.0, -self.beta)


@dataclass(frozen=True, eq=False)
class CircuitConfig:
    dim: int
    splitter: BeamSplitter
    g1: Operator
    g2: Operator

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatch(f'dimension must be positive, got {self.dim}')
        object.__setattr__(self, 'g1', as_operator(self.g1, self.dim))
        object.__setattr__(self, 'g2', as_operator(self.g2, self.dim))
        warn_if_not_unitary('G1', self.g1)
        warn_if_not_unitary('G2', self.g2)

    def state(self, values) -> State:
        return as_state(values, self.dim)


@dataclass(frozen=True, eq=False)
class PassResult:
    psi1: State
    psi2: State
    psi3: State
    psi4: State
    t1: str = 't1'
    t2: str = 't2'

    @property
    def output_norm_sq(self) -> float:
        return norm_sq(self.psi3) + norm_sq(self.psi4)


def beam_splitter_action(bs: BeamSplitter, in_right: State, in_left: State):
    """Mix the two faces of a splitter; returns ``(out_left, out_right)``."""
    check_same_dim(in_right, in_left)
    t, r = bs.transmission, bs.reflection
    out_left = t * in_right + r * in_left
    out_right = r * in_right + t * in_left
    return out_left, out_right


def _forward(cfg: CircuitConfig, psi: State, chi: State) -> PassResult:
    psi = cfg.state(psi)
    chi = cfg.state(chi)
    psi1, psi2 = beam_splitter_action(cfg.splitter, in_right=psi, in_left=chi)
    left_arrival = apply(cfg.g1, psi1)
    right_arrival = apply(cfg.g2, psi2)
    psi4, psi3 = beam_splitter_action(cfg.splitter, in_right=right_arrival, in_left=left_arrival)
    return PassResult(
        psi1=as_state(psi1),
        psi2=as_state(psi2),
        psi3=as_state(psi3),
        psi4=as_state(psi4),
    )


def open_loop_pass(cfg: CircuitConfig, psi: State) -> PassResult:
    """Forward evolution with no feedback arm (M = 0)."""
    return _forward(cfg, psi, zero_state(cfg.dim))


def two_input_pass(cfg: CircuitConfig, psi: State, chi: State) -> PassResult:
    """Forward evolution with ``chi`` (the injected Mψ_T) entering on the left at t1."""
    return _forward(cfg, psi, chi)


def default_qtltt_params(dim: int, g: Operator) -> CircuitConfig:
    """Balanced splitters with G1 = G and G2 = iG (so that G1 = -iG2 = G)."""
    g = as_operator(g, dim)
    return CircuitConfig(dim=dim, splitter=BeamSplitter.balanced(), g1=g, g2=1j * g)


def closed_form_outputs(cfg: CircuitConfig, psi: State, chi: State = None):
    """``(psi3, psi4)`` from the output formulas as whole-matrix expressions."""
    a2 = cfg.splitter.alpha ** 2
    b2 = cfg.splitter.beta ** 2
    ab = cfg.splitter.alpha * cfg.splitter.beta
    psi3 = (a2 * cfg.g1 - b2 * cfg.g2) @ psi
    psi4 = -1j * ab * (cfg.g1 + cfg.g2) @ psi
    if chi is not None:
        psi3 = psi3 - 1j * ab * (cfg.g1 + cfg.g2) @ chi
        psi4 = psi4 + (a2 * cfg.g2 - b2 * cfg.g1) @ chi
    return as_state(psi3), as_state(psi4)


@dataclass(frozen=True, eq=False)
class PathTerm:
    source: str
    channel: str
    output: str
    coefficient: complex
    contribution: State


def enumerate_paths(cfg: CircuitConfig, psi: State, chi: State = None):
    """Every (input, internal channel, output) amplitude through the circuit."""
    t, r = cfg.splitter.transmission, cfg.splitter.reflection
    # first splitter: input face -> internal channel
    entry = {'right': {'left': t, 'right': r}, 'left': {'left': r, 'right': t}}
    # second splitter: internal channel -> output
    exit_ = {'left': {'psi3': t, 'psi4': r}, 'right': {'psi3': r, 'psi4': t}}
    propagators = {'left': cfg.g1, 'right': cfg.g2}

    sources = [('psi', 'right', psi)]
    if chi is not None:
        sources.append(('chi', 'left', chi))

    terms = []
    for name, face, state in sources:
        for channel, propagator in propagators.items():
            for output in ('psi3', 'psi4'):
                coefficient = entry[face][channel] * exit_[channel][output]
                terms.append(PathTerm(
                    source=name,
                    channel=channel,
                    output=output,
                    coefficient=coefficient,
                    contribution=coefficient * (propagator @ state),
                ))
    return terms


def path_sum_outputs(cfg: CircuitConfig, psi: State, chi: State = None):
    totals = {'psi3': np.zeros(cfg.dim, dtype=np.complex128),
              'psi4': np.zeros(cfg.dim, dtype=np.complex128)}
    for term in enumerate_paths(cfg, psi, chi):
        totals[term.output] = totals[term.output] + term.contribution
    return as_state(totals['psi3']), as_state(totals['psi4'])
