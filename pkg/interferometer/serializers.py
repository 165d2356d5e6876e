import hashlib
import json
import math
from dataclasses import dataclass
from typing import Optional

from rest_framework import serializers

from .algebra import Operator, State, as_operator, as_state, norm_sq
from .circuit import SPLITTER_TOL, BeamSplitter, CircuitConfig, open_loop_pass
from .exceptions import ChronoloopError, ConfigError
from .measurement import born_probabilities
from .timetravel import (
    Coherent,
    Dephased,
    ExplicitM,
    InjectionMode,
    RandomPhase,
    default_launched_state,
)

# Hand-written files may miss α² + β² = 1 by this much; they are renormalized.
FILE_SPLITTER_TOL = 1e-9

INJECTION_MODES = {
    Coherent.mode: Coherent,
    Dephased.mode: Dephased,
    ExplicitM.mode: ExplicitM,
    RandomPhase.mode: RandomPhase,
}


@dataclass(frozen=True, eq=False)
class RunConfig:
    circuit: CircuitConfig
    psi: State
    injection: InjectionMode
    m: Optional[Operator] = None
    seed: int = 0
    trials: int = 1000

    @property
    def dim(self):
        return self.circuit.dim

    @property
    def alpha(self):
        return self.circuit.splitter.alpha

    @property
    def beta(self):
        return self.circuit.splitter.beta

    @property
    def g1(self):
        return self.circuit.g1

    @property
    def g2(self):
        return self.circuit.g2

    @classmethod
    def from_protocol(cls, cfg, psi, mode, seed=0, trials=1000):
        m = None
        if isinstance(mode, ExplicitM):
            m = mode.m
            if mode.psi_t is None:
                mode = ExplicitM(m=m, psi_t=mode.launched_state(open_loop_pass(cfg, cfg.state(psi))))
        return cls(circuit=cfg, psi=cfg.state(psi), injection=mode, m=m, seed=seed, trials=trials)


class ComplexField(serializers.Field):
    default_error_messages = {
        'invalid': 'Expected a [re, im] pair of finite numbers.',
    }

    def to_internal_value(self, data):
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            self.fail('invalid')
        parts = []
        for part in data:
            if isinstance(part, bool) or not isinstance(part, (int, float)):
                self.fail('invalid')
            if not math.isfinite(part):
                self.fail('invalid')
            parts.append(float(part))
        return complex(*parts)

    def to_representation(self, value):
        return [float(value.real), float(value.imag)]


class VectorField(serializers.ListField):
    child = ComplexField()

    def __init__(self, **kwargs):
        kwargs.setdefault('min_length', 1)
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        values = super().to_internal_value(data)
        try:
            return as_state(values)
        except ChronoloopError as exc:
            raise serializers.ValidationError(str(exc))


class MatrixField(serializers.ListField):
    """Row-major nested arrays of [re, im] pairs."""
    child = VectorField()

    def __init__(self, **kwargs):
        kwargs.setdefault('min_length', 1)
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        rows = super().to_internal_value(data)
        if any(row.shape[0] != len(rows) for row in rows):
            raise serializers.ValidationError('Matrix must be square.')
        try:
            return as_operator(rows)
        except ChronoloopError as exc:
            raise serializers.ValidationError(str(exc))


class InjectionSerializer(serializers.Serializer):
    mode = serializers.ChoiceField(choices=sorted(INJECTION_MODES))
    phi = serializers.FloatField(required=False)
    psi_t = VectorField(required=False)

    def validate_phi(self, value):
        if not math.isfinite(value):
            raise serializers.ValidationError('Phase must be finite.')
        return value

    def validate(self, attrs):
        if attrs['mode'] == Dephased.mode and 'phi' not in attrs:
            raise serializers.ValidationError({'phi': 'Dephased injection requires a phase.'})
        if 'psi_t' in attrs and attrs['mode'] != ExplicitM.mode:
            raise serializers.ValidationError({'psi_t': 'Only explicit injection takes a launched state.'})
        return attrs


class RunConfigSerializer(serializers.Serializer):
    dim = serializers.IntegerField(min_value=1)
    alpha = serializers.FloatField(min_value=0)
    beta = serializers.FloatField(min_value=0)
    g1 = MatrixField()
    g2 = MatrixField()
    m = MatrixField(required=False, allow_null=True)
    psi = VectorField()
    injection = InjectionSerializer(required=False)
    seed = serializers.IntegerField(min_value=0, default=0)
    trials = serializers.IntegerField(min_value=1, default=1000)

    def validate(self, attrs):
        dim = attrs['dim']
        errors = {}
        for name in ('g1', 'g2', 'm'):
            op = attrs.get(name)
            if op is not None and op.shape[0] != dim:
                errors[name] = f'Expected a {dim}x{dim} matrix, got {op.shape[0]}x{op.shape[0]}.'
        if attrs['psi'].shape[0] != dim:
            errors['psi'] = f'Expected {dim} amplitudes, got {attrs["psi"].shape[0]}.'
        elif norm_sq(attrs['psi']) == 0.0:
            errors['psi'] = 'Input state must be nonzero.'

        injection = attrs.get('injection') or {'mode': Coherent.mode}
        attrs['injection'] = injection
        psi_t = injection.get('psi_t')
        if psi_t is not None and psi_t.shape[0] != dim:
            errors['injection'] = {'psi_t': f'Expected {dim} amplitudes, got {psi_t.shape[0]}.'}
        if injection['mode'] == ExplicitM.mode and attrs.get('m') is None:
            errors['m'] = 'Explicit injection requires the feedback propagator m.'

        alpha, beta = attrs['alpha'], attrs['beta']
        deviation = abs(alpha ** 2 + beta ** 2 - 1.0)
        if deviation > FILE_SPLITTER_TOL:
            errors['beta'] = f'alpha² + beta² must equal 1 (off by {deviation:.3e}).'
        elif deviation > SPLITTER_TOL:
            scale = math.sqrt(alpha ** 2 + beta ** 2)
            attrs['alpha'], attrs['beta'] = alpha / scale, beta / scale

        if errors:
            raise serializers.ValidationError(errors)
        return attrs

    def create(self, validated_data):
        circuit = CircuitConfig(
            dim=validated_data['dim'],
            splitter=BeamSplitter(alpha=validated_data['alpha'], beta=validated_data['beta']),
            g1=validated_data['g1'],
            g2=validated_data['g2'],
        )
        psi = validated_data['psi']
        m = validated_data.get('m')
        injection = validated_data['injection']
        mode = injection['mode']

        if mode == Dephased.mode:
            injection_mode = Dephased(phi=injection['phi'])
        elif mode == ExplicitM.mode:
            psi_t = injection.get('psi_t')
            if psi_t is None:
                psi_t = default_launched_state(open_loop_pass(circuit, psi))
            injection_mode = ExplicitM(m=m, psi_t=psi_t)
        else:
            injection_mode = INJECTION_MODES[mode]()

        return RunConfig(
            circuit=circuit,
            psi=psi,
            injection=injection_mode,
            m=m,
            seed=validated_data['seed'],
            trials=validated_data['trials'],
        )


def parse_run_config(data) -> RunConfig:
    serializer = RunConfigSerializer(data=data)
    if not serializer.is_valid():
        raise ConfigError(f'invalid run configuration: {json.dumps(serializer.errors, sort_keys=True)}',
                          errors=serializer.errors)
    try:
        return serializer.save()
    except ChronoloopError as exc:
        raise ConfigError(f'invalid run configuration: {exc}') from exc


def dump_run_config(run_config: RunConfig) -> dict:
    return json.loads(json.dumps(RunConfigSerializer(run_config).data))


def config_hash(run_config: RunConfig) -> str:
    canonical = json.dumps(dump_run_config(run_config), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


class PassResultSerializer(serializers.Serializer):
    t1 = serializers.CharField()
    t2 = serializers.CharField()
    psi1 = VectorField()
    psi2 = VectorField()
    psi3 = VectorField()
    psi4 = VectorField()
    p_right = serializers.SerializerMethodField()
    p_left = serializers.SerializerMethodField()

    def get_p_right(self, obj):
        if obj.output_norm_sq == 0.0:
            return None
        return born_probabilities(obj)[0]

    def get_p_left(self, obj):
        if obj.output_norm_sq == 0.0:
            return None
        return born_probabilities(obj)[1]


class TwoPassReportSerializer(serializers.Serializer):
    first_pass = PassResultSerializer()
    first_outcome = serializers.CharField(source='first_outcome.value')
    triggered = serializers.BooleanField()
    injected_chi = VectorField(allow_null=True)
    second_pass = PassResultSerializer(allow_null=True)
    paradox = serializers.FloatField(allow_null=True)


class LoopSolutionSerializer(serializers.Serializer):
    method = serializers.CharField(source='method.value')
    iterations = serializers.IntegerField(allow_null=True)
    psi4 = VectorField()
    psi3 = VectorField()
    residual = serializers.FloatField()


class EnsembleReportSerializer(serializers.Serializer):
    trials = serializers.IntegerField()
    seed = serializers.IntegerField()
    left_count = serializers.IntegerField()
    right_count = serializers.IntegerField()
    trigger_frequency = serializers.FloatField()
    mean_paradox = serializers.FloatField(allow_null=True)
