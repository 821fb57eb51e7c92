"""Multi-channel pulse-coupled neural network fusion of conspicuity maps.

Each pixel is a neuron. Every input channel feeds its own stimulus plane H^k,
which decays per iteration, absorbs weighted pulses from firing neighbors
through an inverse-square-distance linking kernel, and re-adds the channel
input. The internal activity is the product over channels of (1 + beta_k *
H^k); neurons whose activity exceeds a decaying dynamic threshold fire, and
firing bumps the threshold. The fused map is the square root of the final
activity, min-max normalized.

Updates are iteration-synchronous: every plane of iteration n is computed
from iteration n-1 state only, so per-pixel work can be parallelized freely
without changing results. The product over channels is taken in ascending
value order per pixel, which makes channel permutation (with matching weight
permutation) bit-exact, and the neighbor convolution accumulates integer
counts per distinct kernel value, which makes flips and 90-degree rotations
of the inputs bit-exact as well.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ._kernels import KernelDecomp, decompose_kernel, group_conv
from .errors import EmptyInputError, NonPositiveRadiusError, ShapeMismatchError
from .planes import normalize_unit

# Per-iteration constants of the fusion stage.
ALPHA_H = 0.001   # stimulus decay exponent
V_H = 15.0        # pulse coupling gain
ALPHA_T = 0.012   # threshold decay exponent
V_T = 100.0       # threshold bump on firing
DEFAULT_RADIUS = 17   # 35x35 linking kernel
DEFAULT_ITERATIONS = 20
ALL_FIRED_CAP = 200


def linking_kernel(radius: int = DEFAULT_RADIUS) -> np.ndarray:
    """Inverse-squared-distance weights 1/(m^2+n^2) on a (2r+1)^2 grid.

    The center tap is 0: a neuron does not pulse itself.
    """
    if radius < 1:
        raise NonPositiveRadiusError(f"radius must be >= 1, got {radius}")
    m, n = np.mgrid[-radius:radius + 1, -radius:radius + 1]
    d = (m * m + n * n).astype(np.float64)
    d[radius, radius] = np.inf
    return 1.0 / d


@dataclass(frozen=True)
class PcnnParams:
    """Iteration constants, channel weights and linking kernel."""

    alpha_h: float = ALPHA_H
    v_h: float = V_H
    alpha_t: float = ALPHA_T
    v_t: float = V_T
    betas: tuple = ()
    kernel: np.ndarray = field(default_factory=linking_kernel)
    n_iter: int = DEFAULT_ITERATIONS
    stop_mode: str = "fixed"   # "fixed" or "all-fired"

    def __post_init__(self):
        if self.alpha_h <= 0 or self.alpha_t <= 0:
            raise ValueError("decay exponents must be positive")
        if self.v_h <= 0 or self.v_t <= 0:
            raise ValueError("scale factors must be positive")
        if any(b < 0 for b in self.betas):
            raise ValueError("channel weights must be nonnegative")
        k = np.asarray(self.kernel)
        if k.ndim != 2 or k.shape[0] != k.shape[1] or k.shape[0] % 2 == 0:
            raise ValueError("kernel must be square with odd side length")
        if (k < 0).any():
            raise ValueError("kernel must be nonnegative")
        if self.stop_mode not in ("fixed", "all-fired"):
            raise ValueError(f"unknown stop mode {self.stop_mode!r}")


@dataclass(frozen=True)
class PcnnState:
    """Network state after n iterations."""

    stimulus: np.ndarray   # (K, H, W) per-channel H^k planes
    activity: np.ndarray   # (H, W) internal activity U
    fired: np.ndarray      # (H, W) uint8 firing map Y
    threshold: np.ndarray  # (H, W) dynamic threshold T
    n: int = 0


def initial_state(inputs: np.ndarray) -> PcnnState:
    """Start state: H^k = I^k, everything else zero."""
    shape = inputs.shape[1:]
    return PcnnState(
        stimulus=inputs.astype(np.float64, copy=True),
        activity=np.zeros(shape),
        fired=np.zeros(shape, np.uint8),
        threshold=np.zeros(shape),
        n=0,
    )


def _sorted_product(factors: np.ndarray) -> np.ndarray:
    """Product over axis 0 in ascending per-pixel order (permutation-stable)."""
    if factors.shape[0] == 1:
        return factors[0].copy()
    ordered = np.sort(factors, axis=0)
    out = ordered[0]
    for k in range(1, ordered.shape[0]):
        out = out * ordered[k]
    return out


def mpcnn_step(state: PcnnState, inputs: np.ndarray, params: PcnnParams,
               decomp: KernelDecomp | None = None) -> PcnnState:
    """One synchronous update of every neuron from the previous state."""
    if inputs.shape != state.stimulus.shape:
        raise ShapeMismatchError(
            f"inputs {inputs.shape} do not match state {state.stimulus.shape}")
    if decomp is None:
        decomp = decompose_kernel(params.kernel)
    betas = np.asarray(params.betas, dtype=np.float64)
    decay_h = math.exp(-params.alpha_h)
    decay_t = math.exp(-params.alpha_t)

    pulses = group_conv(state.fired, decomp)
    stimulus = decay_h * state.stimulus + params.v_h * pulses[None] + inputs
    factors = 1.0 + betas[:, None, None] * stimulus
    activity = _sorted_product(factors)
    fired = (activity > state.threshold).astype(np.uint8)
    threshold = decay_t * state.threshold + params.v_t * fired
    return PcnnState(stimulus=stimulus, activity=activity, fired=fired,
                     threshold=threshold, n=state.n + 1)


def mpcnn_fuse(inputs, betas, params: PcnnParams) -> np.ndarray:
    """Fuse K conspicuity planes in [0, 1] into one saliency plane in [0, 1].

    Runs either a fixed number of iterations or, in "all-fired" mode, until
    every neuron has fired at least once (capped). Returns the min-max
    normalized square root of the final internal activity.
    """
    planes = [np.asarray(p, dtype=np.float64) for p in inputs]
    if not planes:
        raise EmptyInputError("need at least one input plane")
    shape = planes[0].shape
    if any(p.shape != shape for p in planes):
        raise ShapeMismatchError("all input planes must share dimensions")
    if len(betas) != len(planes):
        raise ShapeMismatchError("one weight per input plane required")
    if abs(sum(betas) - 1.0) > 1e-9:
        raise ValueError(f"channel weights must sum to 1, got {sum(betas)}")

    params = replace(params, betas=tuple(float(b) for b in betas))
    stack = np.stack(planes)
    decomp = decompose_kernel(params.kernel)
    state = initial_state(stack)

    if params.stop_mode == "fixed":
        for _ in range(params.n_iter):
            state = mpcnn_step(state, stack, params, decomp)
    else:
        ever_fired = np.zeros(shape, bool)
        while state.n < ALL_FIRED_CAP:
            state = mpcnn_step(state, stack, params, decomp)
            ever_fired |= state.fired.astype(bool)
            if ever_fired.all():
                break
    return normalize_unit(np.sqrt(state.activity))
