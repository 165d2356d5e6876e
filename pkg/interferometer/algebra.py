"""Dense complex linear algebra for small circuit operators.

States are 1-D ``complex128`` arrays and operators square 2-D ``complex128``
arrays. Arrays produced here are marked read-only so a state handed to a pass
can never be changed underneath it.
"""
import numpy as np
import numpy.typing as npt

from .exceptions import DimensionMismatch, InvalidState, Singular

State = npt.NDArray[np.complex128]
Operator = npt.NDArray[np.complex128]

DEFAULT_TOL = 1e-12
DEFAULT_COND_LIMIT = 1e12
# Relative residual accepted from a direct solve.
SOLVE_RESIDUAL_TOL = 1e-10


def _frozen(array):
    array.flags.writeable = False
    return array


def as_state(values, dim=None) -> State:
    state = np.array(values, dtype=np.complex128, ndmin=1)
    if state.ndim != 1 or state.size == 0:
        raise InvalidState(f'state must be a non-empty vector, got shape {state.shape}')
    if not np.all(np.isfinite(state)):
        raise InvalidState('state amplitudes must be finite')
    if dim is not None and state.shape[0] != dim:
        raise DimensionMismatch(f'state has length {state.shape[0]}, expected {dim}')
    return _frozen(state)


def as_operator(values, dim=None) -> Operator:
    op = np.array(values, dtype=np.complex128)
    if op.ndim != 2 or op.shape[0] != op.shape[1] or op.shape[0] == 0:
        raise DimensionMismatch(f'operator must be a non-empty square matrix, got shape {op.shape}')
    if not np.all(np.isfinite(op)):
        raise InvalidState('operator entries must be finite')
    if dim is not None and op.shape[0] != dim:
        raise DimensionMismatch(f'operator is {op.shape[0]}x{op.shape[0]}, expected {dim}x{dim}')
    return _frozen(op)


def identity(dim) -> Operator:
    return _frozen(np.eye(dim, dtype=np.complex128))


def zero_operator(dim) -> Operator:
    return _frozen(np.zeros((dim, dim), dtype=np.complex128))


def zero_state(dim) -> State:
    return _frozen(np.zeros(dim, dtype=np.complex128))


def check_same_dim(*states):
    sizes = {s.shape[0] for s in states}
    if len(sizes) != 1:
        raise DimensionMismatch(f'states have differing dimensions {sorted(sizes)}')


def apply(op: Operator, s: State) -> State:
    if op.shape[1] != s.shape[0]:
        raise DimensionMismatch(
            f'cannot apply {op.shape[0]}x{op.shape[1]} operator to state of length {s.shape[0]}'
        )
    return _frozen(op @ s)


def norm_sq(s: State) -> float:
    return float(np.vdot(s, s).real)


def norm(s: State) -> float:
    return float(np.linalg.norm(s))


def is_unitary(op: Operator, tol=DEFAULT_TOL) -> bool:
    """True iff every entry of op†·op is within ``tol`` of the identity."""
    if tol <= 0:
        raise ValueError('tol must be positive')
    deviation = op.conj().T @ op - np.eye(op.shape[0])
    return bool(np.max(np.abs(deviation)) <= tol)


def condition_estimate(a: Operator) -> float:
    """Ratio of the largest to the smallest singular value; infinite when singular."""
    singular_values = np.linalg.svd(a, compute_uv=False)
    smallest = singular_values[-1]
    if smallest == 0.0:
        return np.inf
    return float(singular_values[0] / smallest)


def solve_linear(a: Operator, b: State, cond_limit=DEFAULT_COND_LIMIT) -> State:
    """Solve ``a @ x = b``.

    Raises ``Singular`` when ``a`` is singular or its condition estimate
    exceeds ``cond_limit``.
    """
    if cond_limit <= 0:
        raise ValueError('cond_limit must be positive')
    if a.shape[0] != a.shape[1] or a.shape[1] != b.shape[0]:
        raise DimensionMismatch(
            f'cannot solve {a.shape[0]}x{a.shape[1]} system against vector of length {b.shape[0]}'
        )

    condition = condition_estimate(a)
    if not condition <= cond_limit:
        raise Singular(
            f'system matrix is singular or ill-conditioned (condition estimate {condition:.3e})',
            condition=condition,
        )

    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise Singular(str(exc), condition=condition) from exc

    residual = np.linalg.norm(a @ x - b)
    if residual > SOLVE_RESIDUAL_TOL * max(1.0, np.linalg.norm(b)):
        raise Singular(f'solve residual {residual:.3e} exceeds tolerance', condition=condition)
    return _frozen(x)


def random_unitary(rng: np.random.Generator, dim) -> Operator:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return _frozen(q * phases)


def random_operator(rng: np.random.Generator, dim, scale=1.0) -> Operator:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return _frozen(scale * z / np.sqrt(2 * dim))


def random_state(rng: np.random.Generator, dim, normalized=True) -> State:
    s = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    if normalized:
        s = s / np.linalg.norm(s)
    return _frozen(s)
