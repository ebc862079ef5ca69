"""Stochastic switching model of an MTJ array and its acquisition protocol.

Each device flips with a logistic probability in the perturb voltage. Slow
environmental drift is an Ornstein-Uhlenbeck walk on the 50% point, and read
correlation is a Bernoulli repeat of the previous emitted bit. Acquisition
runs reset-perturb cycles across the array and interleaves bits cycle-major.

Randomness layout: every device owns three counter-based substreams (switch,
correlation, drift) spawned from ``(master_seed, (device_id, purpose))``, so
streams are identical under any chunking or device-level parallelism.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.signal import lfilter
from scipy.special import expit

from .bitstream import RawBitstream, pack_bits
from .errors import CalibrationError, ConfigError, ValidationError

_PURPOSE_SWITCH = 0
_PURPOSE_CORR = 1
_PURPOSE_DRIFT = 2
_PURPOSE_CALIB = 3

DEFAULT_CHUNK_CYCLES = 1 << 18


@dataclass(frozen=True)
class DeviceParams:
    """Static parameters of one simulated MTJ cell."""

    device_id: int
    v50: float
    slope_w: float
    r_p: float = 2000.0
    r_ap: float = 4500.0
    drift_sigma: float = 0.0
    drift_reversion: float = 0.0
    corr_rho: float = 0.0

    def __post_init__(self):
        if self.device_id < 0:
            raise ValidationError(f"device_id must be nonnegative, got {self.device_id}")
        if not self.slope_w > 0:
            raise ValidationError(f"slope_w must be positive, got {self.slope_w}")
        if not 0 <= self.corr_rho < 1:
            raise ValidationError(f"corr_rho must lie in [0, 1), got {self.corr_rho}")
        if self.drift_sigma < 0:
            raise ValidationError(f"drift_sigma must be nonnegative, got {self.drift_sigma}")
        if not 0 <= self.drift_reversion <= 1:
            raise ValidationError(
                f"drift_reversion must lie in [0, 1], got {self.drift_reversion}"
            )
        if not 0 < self.r_p < self.r_ap:
            raise ValidationError("resistances must satisfy r_ap > r_p > 0")


@dataclass(frozen=True)
class CycleConfig:
    """Array-level acquisition settings for the reset-perturb protocol."""

    v_reset: float = -0.45
    pulse_width: float = 5e-6
    v_th: float = 0.1
    cycle_hz: float = 1e5
    n_devices: int = 16
    v_perturb: tuple | None = None

    def __post_init__(self):
        if not self.v_reset < 0:
            raise ValidationError(f"v_reset must be negative, got {self.v_reset}")
        if not self.pulse_width > 0:
            raise ValidationError(f"pulse_width must be positive, got {self.pulse_width}")
        if not self.cycle_hz > 0:
            raise ValidationError(f"cycle_hz must be positive, got {self.cycle_hz}")
        if not 1 <= self.n_devices <= 255:
            raise ValidationError(
                f"n_devices must lie in [1, 255], got {self.n_devices}"
            )
        if self.v_perturb is not None:
            v = tuple(float(x) for x in self.v_perturb)
            if len(v) != self.n_devices:
                raise ValidationError(
                    f"v_perturb needs one entry per device "
                    f"({self.n_devices}), got {len(v)}"
                )
            if any(not x > 0 for x in v):
                raise ValidationError("every v_perturb must be positive")
            object.__setattr__(self, "v_perturb", v)


@dataclass
class ArrayState:
    """Device list plus calibrated perturb voltages and the entropy seed."""

    devices: list
    master_seed: int = 0
    v_perturb: np.ndarray | None = None

    def __post_init__(self):
        if not self.devices:
            raise ValidationError("ArrayState needs at least one device")
        ids = [d.device_id for d in self.devices]
        if ids != list(range(len(self.devices))):
            raise ValidationError("device_ids must be 0..N-1 in order")
        if not 0 <= self.master_seed < (1 << 64):
            raise ValidationError("master_seed must be a 64-bit integer")
        if self.v_perturb is not None:
            self.v_perturb = np.asarray(self.v_perturb, dtype=np.float64)
            if self.v_perturb.shape != (len(self.devices),):
                raise ValidationError("v_perturb length must match device count")


def _substream(master_seed: int, device_id: int, purpose: int) -> np.random.Generator:
    ss = np.random.SeedSequence(master_seed, spawn_key=(device_id, purpose))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass
class DeviceRng:
    """The three per-device substreams consumed during generation."""

    u_switch: np.random.Generator
    u_corr: np.random.Generator
    g_drift: np.random.Generator

    @classmethod
    def for_device(cls, master_seed: int, device_id: int) -> "DeviceRng":
        return cls(
            u_switch=_substream(master_seed, device_id, _PURPOSE_SWITCH),
            u_corr=_substream(master_seed, device_id, _PURPOSE_CORR),
            g_drift=_substream(master_seed, device_id, _PURPOSE_DRIFT),
        )


@dataclass(frozen=True)
class DeviceState:
    """Evolving per-device state: drifted v50, filter carry, previous bit."""

    params: DeviceParams
    v50_t: float
    drift_carry: float = 0.0
    prev_bit: int = 0

    @classmethod
    def initial(cls, params: DeviceParams) -> "DeviceState":
        return cls(params=params, v50_t=params.v50, drift_carry=0.0, prev_bit=0)


def switching_probability(v: float, params: DeviceParams):
    """Logistic switching probability at perturb voltage v."""
    return expit((np.asarray(v, dtype=np.float64) - params.v50) / params.slope_w)


def _device_chunk(params: DeviceParams, v: float, n: int, rng: DeviceRng,
                  v50_in: float, carry_in: float, prev_in: int):
    """Advance one device n cycles; returns (bits, v50_out, carry_out, prev_out).

    All three substreams advance by exactly n draws so any split into chunks
    reproduces the unchunked stream bit for bit.
    """
    u = rng.u_switch.random(n)
    c = rng.u_corr.random(n)
    g = rng.g_drift.standard_normal(n)

    # OU deviation y[t] = sigma*g[t] + (1-r)*y[t-1]; the voltage used at
    # cycle t is the value settled at the end of cycle t-1.
    sigma = params.drift_sigma
    decay = 1.0 - params.drift_reversion
    y, zf = lfilter([sigma], [1.0, -decay], g, zi=np.array([carry_in]))
    v50_used = np.empty(n, dtype=np.float64)
    v50_used[0] = v50_in
    v50_used[1:] = params.v50 + y[:-1]

    p = expit((v - v50_used) / params.slope_w)
    raw = (u < p).astype(np.uint8)

    # Read correlation: repeated positions inherit the last fresh bit; a
    # prefix of repeats inherits prev_in.
    repeat = c < params.corr_rho
    idx = np.where(repeat, -1, np.arange(n))
    np.maximum.accumulate(idx, out=idx)
    bits = np.where(idx < 0, np.uint8(prev_in), raw[np.maximum(idx, 0)])

    v50_out = float(params.v50 + y[-1])
    return bits.astype(np.uint8, copy=False), v50_out, float(zf[0]), int(bits[-1])


def sample_switch(state: DeviceState, v: float, rng: DeviceRng):
    """Emit one bit from a device; returns (bit, updated state).

    Bit-identical to the corresponding position of generate() when driven
    from the same substreams.
    """
    bits, v50_out, carry, prev = _device_chunk(
        state.params, v, 1, rng, state.v50_t, state.drift_carry, state.prev_bit
    )
    new_state = replace(state, v50_t=v50_out, drift_carry=carry, prev_bit=prev)
    return int(bits[0]), new_state


def calibrate(params: DeviceParams, target_p: float,
              pulses_per_estimate: int = 1000, *, tol: float = 0.02,
              v_min: float = 0.0, v_max: float = 2.0, max_iter: int = 64,
              verify_attempts: int = 8, seed: int = 0) -> float:
    """Find a perturb voltage whose estimated switching probability hits target_p.

    Bisection on the monotone sigmoid using Monte Carlo estimates of
    pulses_per_estimate pulses each; drift and read correlation are disabled.
    The returned voltage's final estimate lies within ``tol`` of target_p, or
    a CalibrationError names the device.
    """
    if pulses_per_estimate < 1:
        raise ValidationError("pulses_per_estimate must be positive")
    if not 0 < target_p < 1:
        raise CalibrationError(
            f"device {params.device_id}: target probability {target_p} "
            f"is unreachable under a finite voltage range"
        )
    rng = _substream(seed, params.device_id, _PURPOSE_CALIB)

    def estimate(v: float) -> float:
        p = float(switching_probability(v, params))
        return float(np.count_nonzero(rng.random(pulses_per_estimate) < p)) \
            / pulses_per_estimate

    lo, hi = float(v_min), float(v_max)
    if not lo < hi:
        raise ValidationError("v_min must be below v_max")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if estimate(mid) < target_p:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-7:
            break
    v = 0.5 * (lo + hi)
    for _ in range(verify_attempts):
        if abs(estimate(v) - target_p) <= tol:
            return v
    raise CalibrationError(
        f"device {params.device_id}: calibration did not converge to "
        f"{target_p} +/- {tol} within {max_iter} iterations"
    )


def calibrate_array(array: ArrayState, target_p: float = 0.5,
                    pulses_per_estimate: int = 1000, **kwargs) -> ArrayState:
    """Calibrate every device; returns a state carrying the voltages found."""
    seed = kwargs.pop("seed", array.master_seed)
    volts = [
        calibrate(d, target_p, pulses_per_estimate, seed=seed, **kwargs)
        for d in array.devices
    ]
    return ArrayState(
        devices=array.devices,
        master_seed=array.master_seed,
        v_perturb=np.array(volts, dtype=np.float64),
    )


def generate(array: ArrayState, config: CycleConfig, n_bits: int, *,
             chunk_cycles: int = DEFAULT_CHUNK_CYCLES) -> RawBitstream:
    """Run reset-perturb cycles and interleave device bits cycle-major.

    The stream is bit-exact reproducible from (master_seed, devices, config,
    n_bits) regardless of chunk size or execution order.
    """
    if n_bits <= 0:
        raise ValidationError(f"n_bits must be positive, got {n_bits}")
    if chunk_cycles < 1:
        raise ValidationError("chunk_cycles must be positive")
    n_dev = config.n_devices
    if n_dev != len(array.devices):
        raise ValidationError(
            f"config expects {n_dev} devices, array has {len(array.devices)}"
        )
    if config.v_perturb is not None:
        volts = np.asarray(config.v_perturb, dtype=np.float64)
    elif array.v_perturb is not None:
        volts = array.v_perturb
    else:
        raise ValidationError(
            "no perturb voltages: calibrate the array or set config.v_perturb"
        )

    n_cycles = -(-n_bits // n_dev)
    bits2d = np.empty((n_cycles, n_dev), dtype=np.uint8)
    for d, params in enumerate(array.devices):
        rng = DeviceRng.for_device(array.master_seed, d)
        v50_t, carry, prev = params.v50, 0.0, 0
        done = 0
        while done < n_cycles:
            n = min(chunk_cycles, n_cycles - done)
            chunk, v50_t, carry, prev = _device_chunk(
                params, float(volts[d]), n, rng, v50_t, carry, prev
            )
            bits2d[done:done + n, d] = chunk
            done += n

    stream = bits2d.reshape(-1)[:n_bits]
    return RawBitstream(
        data=pack_bits(stream),
        n_bits=n_bits,
        source="mtj-raw",
        n_devices=n_dev,
        master_seed=array.master_seed,
    )


# ---------------------------------------------------------------------------
# JSON configuration
# ---------------------------------------------------------------------------

def _require(mapping: dict, key: str, ctx: str):
    if key not in mapping:
        raise ConfigError(f"{ctx}: missing required key {key!r}")
    return mapping[key]


def load_array_config(source, *, n_devices: int | None = None,
                      master_seed: int | None = None):
    """Load (ArrayState, CycleConfig) from a JSON file or an equivalent dict.

    Devices come either from an explicit "devices" list or from a
    "device_spread" block whose v50 values are evenly spaced over
    "v50_range". "v_perturb" may be a per-device list, "calibrated" (run
    calibration at the configured target), or "v50" (use each device's
    exact midpoint, mainly for drift-free experiments).
    """
    if isinstance(source, dict):
        doc, path = source, "<config>"
    else:
        path = source
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")

    seed = master_seed if master_seed is not None else int(doc.get("master_seed", 0))

    cycle_doc = dict(doc.get("cycle", {}))
    if n_devices is not None:
        cycle_doc["n_devices"] = n_devices
    cycle_kwargs = {
        k: cycle_doc[k]
        for k in ("v_reset", "pulse_width", "v_th", "cycle_hz", "n_devices")
        if k in cycle_doc
    }
    try:
        config = CycleConfig(**cycle_kwargs)
    except TypeError as exc:
        raise ConfigError(f"{path}: bad cycle block ({exc})") from exc

    if "devices" in doc:
        dev_docs = doc["devices"]
        if not isinstance(dev_docs, list) or not dev_docs:
            raise ConfigError(f"{path}: 'devices' must be a nonempty list")
        devices = [
            DeviceParams(device_id=i, **{k: v for k, v in d.items() if k != "device_id"})
            for i, d in enumerate(dev_docs)
        ]
        if len(devices) != config.n_devices:
            config = replace(config, n_devices=len(devices))
    elif "device_spread" in doc:
        spread = doc["device_spread"]
        lo, hi = _require(spread, "v50_range", path)
        n = config.n_devices
        v50s = np.linspace(float(lo), float(hi), n) if n > 1 else [0.5 * (lo + hi)]
        common = {
            k: spread[k]
            for k in ("slope_w", "r_p", "r_ap", "drift_sigma",
                      "drift_reversion", "corr_rho")
            if k in spread
        }
        devices = [DeviceParams(device_id=i, v50=float(v50s[i]), **common)
                   for i in range(n)]
    else:
        raise ConfigError(f"{path}: needs a 'devices' list or 'device_spread' block")

    array = ArrayState(devices=devices, master_seed=seed)

    mode = doc.get("v_perturb", "calibrated")
    if isinstance(mode, list):
        array.v_perturb = np.asarray([float(x) for x in mode], dtype=np.float64)
        if array.v_perturb.shape != (len(devices),):
            raise ConfigError(f"{path}: v_perturb list length != device count")
    elif mode == "v50":
        array.v_perturb = np.array([d.v50 for d in devices], dtype=np.float64)
    elif mode == "calibrated":
        cal = doc.get("calibration", {})
        array = calibrate_array(
            array,
            target_p=float(cal.get("target_p", 0.5)),
            pulses_per_estimate=int(cal.get("pulses_per_estimate", 1000)),
        )
    else:
        raise ConfigError(f"{path}: v_perturb must be a list, 'calibrated', or 'v50'")
    return array, config
