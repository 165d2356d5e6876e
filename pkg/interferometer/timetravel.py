"""The feedback channel M and the two-pass paradox protocol.

First pass: the circuit runs open-loop and the output collapses by the Born
rule. A left outcome triggers the feedback channel, which launches ψ_T at t2
and delivers χ = Mψ_T to the left face of the first splitter at t1. Second
pass: the circuit re-evolves with ψ on the right and χ on the left.

Only the product Mψ_T enters the outputs, so the coherent and dephased modes
parameterize χ directly instead of fixing some ψ_T and M. ``ExplicitM`` takes
both; without an explicit ψ_T it uses the normalized first-pass ψ4, which is
a convention and nothing more.

The paradox measure is 1 - p_left of the second pass. It is defined by this
simulator, not taken from the circuit analysis: 1 means the launching
(left) output is cancelled outright, 1/2 an unbiased second pass.
"""
import logging
import math
from dataclasses import dataclass
from typing import ClassVar, Optional

import numpy as np

from .algebra import Operator, State, apply, as_operator, as_state, norm, norm_sq
from .circuit import CircuitConfig, PassResult, open_loop_pass, two_input_pass, warn_if_not_unitary
from .exceptions import DimensionMismatch, InvalidState, MissingSecondPass
from .measurement import Outcome, born_probabilities, collapse_with, run_generator

logger = logging.getLogger(__name__)


def coherent_injection(psi_t1: State) -> State:
    """χ = Mψ_T(t2) = ψ(t1): the injected state reproduces the input exactly."""
    return as_state(psi_t1)


def dephased_injection(psi_t1: State, phi: float) -> State:
    """χ = e^{iφ}ψ(t1): the coherent injection with a relative phase added."""
    if not math.isfinite(phi):
        raise InvalidState(f'phase must be finite, got {phi}')
    return as_state(np.exp(1j * phi) * psi_t1)


def dephasing_p_left(phi: float) -> float:
    """Second-pass left probability under balanced default parameters."""
    return (1.0 - math.cos(phi)) / 2.0


def default_launched_state(first_pass: PassResult) -> State:
    psi4 = first_pass.psi4
    size = norm(psi4)
    if size == 0.0:
        return as_state(psi4)
    return as_state(psi4 / size)


class InjectionMode:
    mode: ClassVar[str]
    randomized: ClassVar[bool] = False

    def injected_state(self, psi_t1: State, first_pass: PassResult, rng: np.random.Generator) -> State:
        raise NotImplementedError

    def validate_for(self, cfg: CircuitConfig):
        pass


@dataclass(frozen=True)
class Coherent(InjectionMode):
    mode: ClassVar[str] = 'coherent'

    def injected_state(self, psi_t1, first_pass, rng):
        return coherent_injection(psi_t1)


@dataclass(frozen=True)
class Dephased(InjectionMode):
    phi: float
    mode: ClassVar[str] = 'dephased'

    def __post_init__(self):
        if not math.isfinite(self.phi):
            raise InvalidState(f'phase must be finite, got {self.phi}')

    def injected_state(self, psi_t1, first_pass, rng):
        return dephased_injection(psi_t1, self.phi)


@dataclass(frozen=True)
class RandomPhase(InjectionMode):
    """Dephasing by a phase drawn uniformly on [0, 2π) from the run's generator."""
    mode: ClassVar[str] = 'random_phase'
    randomized: ClassVar[bool] = True

    def injected_state(self, psi_t1, first_pass, rng):
        return dephased_injection(psi_t1, rng.uniform(0.0, 2.0 * math.pi))


@dataclass(frozen=True, eq=False)
class ExplicitM(InjectionMode):
    m: Operator
    psi_t: Optional[State] = None
    mode: ClassVar[str] = 'explicit'

    def __post_init__(self):
        object.__setattr__(self, 'm', as_operator(self.m))
        if self.psi_t is not None:
            object.__setattr__(self, 'psi_t', as_state(self.psi_t))

    def validate_for(self, cfg):
        if self.m.shape[0] != cfg.dim:
            raise DimensionMismatch(f'M is {self.m.shape[0]}x{self.m.shape[0]}, circuit dimension is {cfg.dim}')
        if self.psi_t is not None and self.psi_t.shape[0] != cfg.dim:
            raise DimensionMismatch(f'ψ_T has length {self.psi_t.shape[0]}, circuit dimension is {cfg.dim}')
        warn_if_not_unitary('M', self.m)

    def launched_state(self, first_pass):
        if self.psi_t is not None:
            return self.psi_t
        return default_launched_state(first_pass)

    def injected_state(self, psi_t1, first_pass, rng):
        return apply(self.m, self.launched_state(first_pass))


@dataclass(frozen=True, eq=False)
class TwoPassReport:
    first_pass: PassResult
    first_outcome: Outcome
    triggered: bool
    injected_chi: Optional[State] = None
    second_pass: Optional[PassResult] = None
    paradox: Optional[float] = None


def _paradox_of(second_pass: PassResult) -> float:
    _, p_left = born_probabilities(second_pass)
    return 1.0 - p_left


def paradox_measure(report: TwoPassReport) -> float:
    if report.second_pass is None:
        raise MissingSecondPass('the feedback channel was not triggered; there is no second pass')
    return _paradox_of(report.second_pass)


class TwoPassProtocol:
    """The protocol for one (circuit, input, injection) triple.

    The first pass and, for non-random injections, the second pass do not
    depend on the generator, so they are evaluated once and shared by every
    run of the same protocol.
    """

    def __init__(self, cfg: CircuitConfig, psi, mode: InjectionMode):
        self.cfg = cfg
        self.psi = cfg.state(psi)
        if norm_sq(self.psi) == 0.0:
            raise InvalidState('input state must be nonzero')
        self.mode = mode
        mode.validate_for(cfg)
        self.first_pass = open_loop_pass(cfg, self.psi)
        self.p_right, self.p_left = born_probabilities(self.first_pass)
        self._cached_second = None

    def _second_pass(self, rng):
        if self._cached_second is not None:
            return self._cached_second
        chi = self.mode.injected_state(self.psi, self.first_pass, rng)
        second = two_input_pass(self.cfg, self.psi, chi)
        result = (chi, second, _paradox_of(second))
        if not self.mode.randomized:
            self._cached_second = result
        return result

    def run(self, rng: np.random.Generator, force_outcome: Optional[Outcome] = None) -> TwoPassReport:
        if force_outcome is not None:
            outcome = Outcome(force_outcome)
        else:
            outcome = collapse_with(self.p_left, rng)
        logger.debug('first pass collapsed %s (p_left=%.6f)', outcome.value, self.p_left)

        if outcome is Outcome.RIGHT:
            return TwoPassReport(first_pass=self.first_pass, first_outcome=outcome, triggered=False)

        chi, second, paradox = self._second_pass(rng)
        return TwoPassReport(
            first_pass=self.first_pass,
            first_outcome=outcome,
            triggered=True,
            injected_chi=chi,
            second_pass=second,
            paradox=paradox,
        )


def run_two_pass_protocol(cfg: CircuitConfig, psi, mode: InjectionMode, rng_seed: int,
                          force_outcome: Optional[Outcome] = None) -> TwoPassReport:
    return TwoPassProtocol(cfg, psi, mode).run(run_generator(rng_seed), force_outcome)
