"""Markov kernels that generate streams of symmetrization parameters.

A kernel is built from a frozen spec dataclass by :func:`build_kernel`, which
checks the parameter constraints.  Kernels are immutable; their states are
small frozen dataclasses.  Every random draw comes from an :class:`RngStream`
addressed by ``(seed, trial, step)``, so a trajectory depends only on those
three numbers and never on scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec, TagMismatch
from .symmetrize import AxisParam, SharpParam, SteinerParam, SymmParam

__all__ = [
    "RngStream",
    "IidPolar",
    "ProjBallWalk",
    "Kronecker",
    "EnumeratedDense",
    "MultWalkCap",
    "ReflectedWalkCap",
    "SharpProduct",
    "SharpFailing",
    "KernelSpec",
    "AngleState",
    "IndexState",
    "AxisState",
    "SpinState",
    "Kernel",
    "build_kernel",
    "step",
    "emit",
    "is_boundary",
    "van_der_corput",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RngStream:
    """Counter-based stream: Philox keyed by ``seed``, counter block ``(step, trial)``.

    Each ``(trial, step)`` owns a disjoint block of 2**64 counter values, so
    draws never overlap between streams.
    """

    seed: int
    trial: int = 0
    step: int = 0

    def generator(self) -> np.random.Generator:
        key = self.seed % 2**64
        bitgen = np.random.Philox(key=key, counter=[0, self.step, self.trial, 0])
        return np.random.Generator(bitgen)

    def at(self, step: int) -> "RngStream":
        return RngStream(self.seed, self.trial, step)


# ---------------------------------------------------------------------------
# Kernel specifications


@dataclass(frozen=True)
class IidPolar:
    """I.i.d. polarizations: uniform axis, half-normal offset."""

    sigma: float = 1.0


@dataclass(frozen=True)
class ProjBallWalk:
    """Random walk of Steiner directions, uniform step in the ball of radius ``rho``."""

    rho: float = 0.3


@dataclass(frozen=True)
class Kronecker:
    """Deterministic rotation ``theta -> theta + alpha (mod pi)``."""

    alpha: float = math.pi * (math.sqrt(2) - 1)
    theta0: float = 0.0


@dataclass(frozen=True)
class EnumeratedDense:
    """Deterministic walk through a fixed enumeration of distinct, dense directions."""

    seed: int = 0


@dataclass(frozen=True)
class MultWalkCap:
    """Uniform axes with multiplicative offset walk ``W <- Z W``, ``Z`` lognormal of mean 1."""

    log_sigma: float = 0.1
    kind: str = "cap"


@dataclass(frozen=True)
class ReflectedWalkCap:
    """Uniform axes with reflected offset walk ``W <- max(W + Z, 0)``, ``Z ~ N(mean, std)``."""

    mean: float = -0.1
    std: float = 0.5
    delta: float = 0.5
    kind: str = "cap"


@dataclass(frozen=True)
class SharpProduct:
    """Spin chain (stay with prob. ``beta_plus``/``beta_minus``) times a reflected walk."""

    beta_plus: float = 0.5
    beta_minus: float = 0.5
    mean: float = -0.1
    std: float = 0.5
    delta: float = 0.5


@dataclass(frozen=True)
class SharpFailing:
    """The spin may only flip through the boundary point ``r = 0``."""

    sigma: float = 1.0


KernelSpec = (
    IidPolar
    | ProjBallWalk
    | Kronecker
    | EnumeratedDense
    | MultWalkCap
    | ReflectedWalkCap
    | SharpProduct
    | SharpFailing
)


# ---------------------------------------------------------------------------
# States


@dataclass(frozen=True)
class AngleState:
    theta: float


@dataclass(frozen=True)
class IndexState:
    index: int


@dataclass(frozen=True)
class AxisState:
    phi: float
    w: float


@dataclass(frozen=True)
class SpinState:
    spin: int
    w: float


# ---------------------------------------------------------------------------
# Kernels


def _positive(name, v):
    if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
        raise InvalidSpec(f"{name} must be a finite number > 0, got {v!r}")


def _kind(v):
    if v not in ("cap", "polar"):
        raise InvalidSpec(f"kind must be 'cap' or 'polar', got {v!r}")


def _check_walk(mean, std, delta):
    if not (isinstance(mean, (int, float)) and math.isfinite(mean) and mean < 0):
        raise InvalidSpec(f"reflected walk needs a negative drift, got mean={mean!r}")
    _positive("std", std)
    _positive("delta", delta)


def near_small_rational(x: float, max_den: int = 64, tol: float = 1e-9) -> bool:
    """True if ``x`` lies within ``tol`` of some ``p/q`` with ``q <= max_den``.

    Irrationality cannot be decided in floating point; this only rejects the
    rotations that visibly cycle through few directions.
    """
    return any(abs(x * q - round(x * q)) < tol * q for q in range(1, max_den + 1))


def van_der_corput(k: int, base: int = 2) -> float:
    """Radical inverse of ``k``: the ``k``-th point of the van der Corput sequence."""
    out, denom = 0.0, 1.0
    while k:
        k, digit = divmod(k, base)
        denom *= base
        out += digit / denom
    return out


def _half_normal(gen, sigma):
    return abs(float(gen.normal(0.0, sigma)))


class Kernel:
    """Immutable transition rule over one state type."""

    state_type: type = object

    def __init__(self, spec):
        self.spec = spec

    def _check(self, state):
        if not isinstance(state, self.state_type):
            raise TagMismatch(
                f"{type(self).__name__} expects {self.state_type.__name__}, got {type(state).__name__}"
            )

    def initial(self, rng: RngStream):
        raise NotImplementedError

    def step(self, state, rng: RngStream):
        self._check(state)
        return self._step(state, rng)

    def emit(self, state) -> SymmParam:
        self._check(state)
        return self._emit(state)

    def is_boundary(self, state) -> bool:
        self._check(state)
        return self._emit(state).on_boundary

    def __repr__(self):
        return f"{type(self).__name__}({self.spec!r})"


class _SteinerKernel(Kernel):
    state_type = AngleState

    def _emit(self, state):
        return SteinerParam(state.theta)

    def is_boundary(self, state) -> bool:
        self._check(state)
        return False


class ProjBallWalkKernel(_SteinerKernel):
    def initial(self, rng):
        return AngleState(float(rng.generator().uniform(0.0, math.pi)))

    def _step(self, state, rng):
        jump = float(rng.generator().uniform(-self.spec.rho, self.spec.rho))
        return AngleState((state.theta + jump) % math.pi)


class KroneckerKernel(_SteinerKernel):
    def initial(self, rng):
        return AngleState(self.spec.theta0 % math.pi)

    def _step(self, state, rng):
        return AngleState((state.theta + self.spec.alpha) % math.pi)


class EnumeratedDenseKernel(Kernel):
    """``alpha_n -> alpha_{n+1}`` along a fixed enumeration of ``[0, pi)``.

    This is the discontinuous transition: every state not on the enumeration
    would jump back to its start, so the kernel is deterministic but not
    continuous in the state.
    """

    state_type = IndexState

    def initial(self, rng):
        return IndexState(1)

    def _step(self, state, rng):
        return IndexState(state.index + 1)

    def direction(self, index: int) -> float:
        return math.pi * van_der_corput(index + self.spec.seed)

    def _emit(self, state):
        return SteinerParam(self.direction(state.index))

    def is_boundary(self, state) -> bool:
        self._check(state)
        return False


class IidPolarKernel(Kernel):
    state_type = AxisState

    def _draw(self, rng):
        gen = rng.generator()
        phi = float(gen.uniform(0.0, TWO_PI))
        return AxisState(phi, _half_normal(gen, self.spec.sigma))

    def initial(self, rng):
        return self._draw(rng)

    def _step(self, state, rng):
        return self._draw(rng)

    def _emit(self, state):
        return AxisParam(state.phi, state.w, "polar")


class MultWalkKernel(Kernel):
    state_type = AxisState

    def _z(self, gen):
        s = self.spec.log_sigma
        return math.exp(float(gen.normal(-0.5 * s * s, s)))  # E[Z] = 1

    def initial(self, rng):
        gen = rng.generator()
        phi = float(gen.uniform(0.0, TWO_PI))
        return AxisState(phi, self._z(gen))

    def _step(self, state, rng):
        gen = rng.generator()
        phi = float(gen.uniform(0.0, TWO_PI))
        return AxisState(phi, multiply(state.w, self._z(gen)))

    def _emit(self, state):
        return AxisParam(state.phi, state.w, self.spec.kind)


class ReflectedWalkKernel(Kernel):
    state_type = AxisState

    def initial(self, rng):
        gen = rng.generator()
        phi = float(gen.uniform(0.0, TWO_PI))
        return AxisState(phi, max(float(gen.normal(self.spec.mean, self.spec.std)), 0.0))

    def _step(self, state, rng):
        gen = rng.generator()
        phi = float(gen.uniform(0.0, TWO_PI))
        z = float(gen.normal(self.spec.mean, self.spec.std))
        return AxisState(phi, reflect(state.w, z))

    def _emit(self, state):
        return AxisParam(state.phi, state.w, self.spec.kind)


def reflect(w: float, z: float) -> float:
    """One step of the walk reflected at zero."""
    return max(w + z, 0.0)


def multiply(w: float, z: float) -> float:
    return z * w


class SharpProductKernel(Kernel):
    state_type = SpinState

    def initial(self, rng):
        gen = rng.generator()
        spin = 1 if gen.random() < 0.5 else -1
        return SpinState(spin, max(float(gen.normal(self.spec.mean, self.spec.std)), 0.0))

    def _step(self, state, rng):
        gen = rng.generator()
        stay = self.spec.beta_plus if state.spin == 1 else self.spec.beta_minus
        spin = state.spin if gen.random() < stay else -state.spin
        z = float(gen.normal(self.spec.mean, self.spec.std))
        return SpinState(spin, reflect(state.w, z))

    def _emit(self, state):
        return SharpParam(state.spin, state.w)


class SharpFailingKernel(Kernel):
    """With probability 1/2 keep the spin and redraw ``r`` from a half-normal law;
    otherwise flip the spin and land on ``r = 0``."""

    state_type = SpinState

    def initial(self, rng):
        # Start on the (-e, 0) component: it fixes the upper half-disk, and
        # leaving it requires a boundary emission.
        return SpinState(-1, _half_normal(rng.generator(), self.spec.sigma))

    def _step(self, state, rng):
        gen = rng.generator()
        if gen.random() < 0.5:
            return SpinState(state.spin, _half_normal(gen, self.spec.sigma))
        return SpinState(-state.spin, 0.0)

    def _emit(self, state):
        return SharpParam(state.spin, state.w)


def build_kernel(spec: KernelSpec) -> Kernel:
    """Validate ``spec`` and return the corresponding kernel."""
    if isinstance(spec, IidPolar):
        _positive("sigma", spec.sigma)
        return IidPolarKernel(spec)
    if isinstance(spec, ProjBallWalk):
        _positive("rho", spec.rho)
        return ProjBallWalkKernel(spec)
    if isinstance(spec, Kronecker):
        _positive("alpha", spec.alpha)
        if near_small_rational(spec.alpha / math.pi):
            raise InvalidSpec(f"alpha/pi = {spec.alpha / math.pi!r} is (numerically) a small rational")
        return KroneckerKernel(spec)
    if isinstance(spec, EnumeratedDense):
        if not (isinstance(spec.seed, int) and spec.seed >= 0):
            raise InvalidSpec(f"seed must be a nonnegative integer, got {spec.seed!r}")
        return EnumeratedDenseKernel(spec)
    if isinstance(spec, MultWalkCap):
        _positive("log_sigma", spec.log_sigma)
        _kind(spec.kind)
        return MultWalkKernel(spec)
    if isinstance(spec, ReflectedWalkCap):
        _check_walk(spec.mean, spec.std, spec.delta)
        _kind(spec.kind)
        return ReflectedWalkKernel(spec)
    if isinstance(spec, SharpProduct):
        for name in ("beta_plus", "beta_minus"):
            b = getattr(spec, name)
            if not (isinstance(b, (int, float)) and 0 < b < 1):
                raise InvalidSpec(f"{name} must lie in (0, 1), got {b!r}")
        _check_walk(spec.mean, spec.std, spec.delta)
        return SharpProductKernel(spec)
    if isinstance(spec, SharpFailing):
        _positive("sigma", spec.sigma)
        return SharpFailingKernel(spec)
    raise InvalidSpec(f"unknown kernel spec {spec!r}")


def step(kernel: Kernel, state, rng: RngStream):
    return kernel.step(state, rng)


def emit(kernel: Kernel, state) -> SymmParam:
    return kernel.emit(state)


def is_boundary(kernel: Kernel, state) -> bool:
    return kernel.is_boundary(state)
