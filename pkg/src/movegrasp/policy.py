"""Recurrent actor-critic in plain numpy with hand-written backprop.

Architecture: obs -> fc(tanh) -> fc(tanh) -> LSTM -> heads. Continuous
action components are tanh-squashed Gaussians, the gripper command is a
Bernoulli. Gradients are exact reverse-mode derivatives through a
truncated unroll, so they can be checked against finite differences.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .environment import MoverAction, RobotAction

LOG_STD_MIN, LOG_STD_MAX = -5.0, 2.0
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)

ROBOT_BOUNDS = np.array([(-0.3, 0.3), (-0.3, 0.3), (0.0, 0.3), (-math.pi / 2, math.pi / 2)])
MOVER_BOUNDS = np.array([(-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)])

CHECKPOINT_FORMAT = "movegrasp-checkpoint"
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class Descriptor:
    role: str = "robot"
    obs_dim: int = 31
    hidden: tuple[int, ...] = (128, 128)
    lstm: int = 128
    obs_scale: float = 20.0

    def __post_init__(self):
        if self.role not in ("robot", "mover"):
            raise ValueError(f"role must be 'robot' or 'mover', got {self.role!r}")
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        if len(self.hidden) != 2 or min(self.hidden) < 1 or self.lstm < 1 or self.obs_dim < 1:
            raise ValueError(f"bad layer sizes in {self}")

    @property
    def n_gauss(self) -> int:
        return 4 if self.role == "robot" else 3

    @property
    def n_bern(self) -> int:
        return 1 if self.role == "robot" else 0

    @property
    def bounds(self) -> np.ndarray:
        return ROBOT_BOUNDS if self.role == "robot" else MOVER_BOUNDS

    def shapes(self) -> list[tuple[str, tuple[int, ...]]]:
        h1, h2 = self.hidden
        L, G, B = self.lstm, self.n_gauss, self.n_bern
        out = [
            ("W1", (self.obs_dim, h1)), ("b1", (h1,)),
            ("W2", (h1, h2)), ("b2", (h2,)),
            ("Wx", (h2, 4 * L)), ("Wh", (L, 4 * L)), ("bl", (4 * L,)),
            ("Wmu", (L, G)), ("bmu", (G,)),
            ("Wls", (L, G)), ("bls", (G,)),
        ]
        if B:
            out += [("Wp", (L, B)), ("bp", (B,))]
        out += [("Wv", (L, 1)), ("bv", (1,))]
        return out

    @property
    def n_params(self) -> int:
        return sum(int(np.prod(s)) for _, s in self.shapes())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["hidden"] = list(self.hidden)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Descriptor:
        return cls(**{**d, "hidden": tuple(d["hidden"])})


@dataclass
class PolicyParams:
    descriptor: Descriptor
    flat: np.ndarray

    def __post_init__(self):
        if self.flat.ndim != 1 or self.flat.size != self.descriptor.n_params:
            raise ValueError(f"expected {self.descriptor.n_params} parameters, got shape {self.flat.shape}")

    def views(self) -> dict[str, np.ndarray]:
        return unpack(self.descriptor, self.flat)

    def copy(self) -> PolicyParams:
        return PolicyParams(self.descriptor, self.flat.copy())


def unpack(desc: Descriptor, flat: np.ndarray) -> dict[str, np.ndarray]:
    out, i = {}, 0
    for name, shape in desc.shapes():
        n = int(np.prod(shape))
        out[name] = flat[i:i + n].reshape(shape)
        i += n
    return out


def init_policy(desc: Descriptor, seed, dtype=np.float32, log_std_init: float = 0.0) -> PolicyParams:
    """Fan-in scaled weights; near-zero output heads; forget-gate bias 1."""
    rng = np.random.default_rng(seed)
    flat = np.zeros(desc.n_params, dtype=np.float64)
    p = unpack(desc, flat)
    for name in ("W1", "W2", "Wx", "Wh"):
        p[name][...] = rng.standard_normal(p[name].shape) / math.sqrt(p[name].shape[0])
    L = desc.lstm
    p["bl"][L:2 * L] = 1.0
    p["bls"][...] = log_std_init
    heads = ["Wmu", "Wls", "Wv"] + (["Wp"] if desc.n_bern else [])
    for name in heads:
        p[name][...] = 0.01 * rng.standard_normal(p[name].shape) / math.sqrt(p[name].shape[0])
    return PolicyParams(desc, flat.astype(dtype))


@dataclass
class HiddenState:
    h: np.ndarray
    c: np.ndarray

    @classmethod
    def zeros(cls, desc: Descriptor, batch: Optional[int] = None, dtype=np.float32) -> HiddenState:
        shape = (desc.lstm,) if batch is None else (batch, desc.lstm)
        return cls(np.zeros(shape, dtype), np.zeros(shape, dtype))

    def copy(self) -> HiddenState:
        return HiddenState(self.h.copy(), self.c.copy())


@dataclass
class ActionDistribution:
    role: str
    mean: np.ndarray      # (..., G) pre-squash
    log_std: np.ndarray   # (..., G) clamped
    logit: Optional[np.ndarray] = None  # (..., 1) robot gripper

    @property
    def bounds(self) -> np.ndarray:
        return ROBOT_BOUNDS if self.role == "robot" else MOVER_BOUNDS

    @property
    def close_prob(self) -> Optional[np.ndarray]:
        return None if self.logit is None else _sigmoid(self.logit)


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def _softplus(x):
    return np.logaddexp(0.0, x)


def _forward_step(p: dict, desc: Descriptor, x: np.ndarray, h: np.ndarray, c: np.ndarray, cache: bool = False):
    L = desc.lstm
    xs = x * desc.obs_scale
    a1 = np.tanh(xs @ p["W1"] + p["b1"])
    a2 = np.tanh(a1 @ p["W2"] + p["b2"])
    gates = a2 @ p["Wx"] + h @ p["Wh"] + p["bl"]
    i = _sigmoid(gates[..., :L])
    f = _sigmoid(gates[..., L:2 * L])
    g = np.tanh(gates[..., 2 * L:3 * L])
    o = _sigmoid(gates[..., 3 * L:])
    c2 = f * c + i * g
    tc = np.tanh(c2)
    h2 = o * tc
    mean = h2 @ p["Wmu"] + p["bmu"]
    ls_raw = h2 @ p["Wls"] + p["bls"]
    log_std = np.clip(ls_raw, LOG_STD_MIN, LOG_STD_MAX)
    logit = h2 @ p["Wp"] + p["bp"] if desc.n_bern else None
    value = (h2 @ p["Wv"] + p["bv"])[..., 0]
    out = (mean, ls_raw, log_std, logit, value, h2, c2)
    if cache:
        return out, (xs, a1, a2, h, c, i, f, g, o, tc)
    return out


def policy_step(params: PolicyParams, obs: np.ndarray, h: HiddenState):
    """One recurrent step. ``obs`` is (obs_dim,) or (batch, obs_dim)."""
    desc = params.descriptor
    obs = np.asarray(obs, dtype=params.flat.dtype)
    if obs.shape[-1] != desc.obs_dim:
        raise ValueError(f"observation length {obs.shape[-1]} != descriptor obs_dim {desc.obs_dim}")
    mean, _, log_std, logit, value, h2, c2 = _forward_step(params.views(), desc, obs, h.h, h.c)
    return ActionDistribution(desc.role, mean, log_std, logit), value, HiddenState(h2, c2)


def _log_squash_jacobian(u: np.ndarray, bounds: np.ndarray) -> np.ndarray:
    """log |d a / d u| for a = lo + (hi - lo) * (tanh(u) + 1) / 2, summed over heads."""
    half_range = 0.5 * (bounds[:, 1] - bounds[:, 0])
    log_dtanh = 2.0 * (math.log(2.0) - u - _softplus(-2.0 * u))
    return np.sum(np.log(half_range) + log_dtanh, axis=-1)


def squash(u: np.ndarray, bounds: np.ndarray) -> np.ndarray:
    lo, hi = bounds[:, 0], bounds[:, 1]
    return np.clip(lo + (hi - lo) * 0.5 * (np.tanh(u) + 1.0), lo, hi)


def log_prob(dist: ActionDistribution, raw: np.ndarray) -> np.ndarray:
    """Log-density of a raw sample (pre-squash Gaussians, then 0/1 gripper)."""
    G = dist.mean.shape[-1]
    u = raw[..., :G]
    std = np.exp(dist.log_std)
    lp = np.sum(-0.5 * ((u - dist.mean) / std) ** 2 - dist.log_std - _HALF_LOG_2PI, axis=-1)
    lp = lp - _log_squash_jacobian(u, dist.bounds)
    if dist.logit is not None:
        g, l = raw[..., G:], dist.logit
        lp = lp + np.sum(g * -_softplus(-l) + (1 - g) * -_softplus(l), axis=-1)
    return lp


def entropy(dist: ActionDistribution) -> np.ndarray:
    """Sum of per-head entropies (Gaussian heads taken before squashing)."""
    ent = np.sum(dist.log_std + 0.5 + _HALF_LOG_2PI, axis=-1)
    if dist.logit is not None:
        p = _sigmoid(dist.logit)
        ent = ent + np.sum(p * _softplus(-dist.logit) + (1 - p) * _softplus(dist.logit), axis=-1)
    return ent


def raw_to_action(raw: np.ndarray, role: str) -> Union[RobotAction, MoverAction]:
    if role == "robot":
        a = squash(raw[:4], ROBOT_BOUNDS)
        return RobotAction(float(a[0]), float(a[1]), float(a[2]), float(a[3]), bool(raw[4] > 0.5))
    a = squash(raw[:3], MOVER_BOUNDS)
    return MoverAction(float(a[0]), float(a[1]), float(a[2]))


def sample_raw(dist: ActionDistribution, rng: np.random.Generator, deterministic: bool = False) -> np.ndarray:
    noise = np.zeros_like(dist.mean) if deterministic else rng.standard_normal(dist.mean.shape)
    u = dist.mean + np.exp(dist.log_std) * noise
    if dist.logit is None:
        return u
    p = _sigmoid(dist.logit)
    g = (p > 0.5) if deterministic else (rng.random(p.shape) < p)
    return np.concatenate([u, g.astype(u.dtype)], axis=-1)


def sample_action(dist: ActionDistribution, rng: np.random.Generator, deterministic: bool = False):
    """Draw one action from an unbatched distribution: (action, log_prob, raw)."""
    raw = sample_raw(dist, rng, deterministic)
    return raw_to_action(raw, dist.role), float(log_prob(dist, raw)), raw


@dataclass(frozen=True)
class LossSpec:
    pg_coeff: float = 1.0
    value_coeff: float = 0.5
    entropy_coeff: float = 0.01


@dataclass
class Segment:
    """A (T, B) window of recurrent experience for one agent.

    ``starts[t, b]`` is 1 where an episode begins at step t (the carry is
    zeroed before that step).
    """

    obs: np.ndarray          # (T, B, obs_dim)
    raw: np.ndarray          # (T, B, G [+1])
    advantages: np.ndarray   # (T, B)
    returns: np.ndarray      # (T, B)
    h0: HiddenState          # (B, L)
    starts: np.ndarray = field(default=None)  # (T, B)

    def __post_init__(self):
        if self.starts is None:
            self.starts = np.zeros(self.obs.shape[:2])


def loss_and_gradients(params: PolicyParams, spec: LossSpec, seg: Segment) -> tuple[float, np.ndarray]:
    """Mean-over-samples loss and its exact gradient w.r.t. the flat parameters.

    loss = mean[-pg * A * log pi(a) + vc * (V - R)^2 - ec * H]
    """
    desc = params.descriptor
    dt = params.flat.dtype
    p = params.views()
    grad = np.zeros_like(params.flat)
    gp = unpack(desc, grad)
    T, B = seg.obs.shape[:2]
    G = desc.n_gauss
    w = 1.0 / (T * B)
    keep = (1.0 - np.asarray(seg.starts, dtype=dt))[..., None]
    h, c = seg.h0.h.astype(dt), seg.h0.c.astype(dt)
    caches, heads = [], []
    loss = 0.0
    for t in range(T):
        h, c = h * keep[t], c * keep[t]
        out, cache = _forward_step(p, desc, seg.obs[t].astype(dt), h, c, cache=True)
        mean, ls_raw, log_std, logit, value, h, c = out
        caches.append(cache + (c,))
        dist = ActionDistribution(desc.role, mean, log_std, logit)
        raw = seg.raw[t].astype(dt)
        A, R = seg.advantages[t].astype(dt), seg.returns[t].astype(dt)
        lp = log_prob(dist, raw)
        ent = entropy(dist)
        loss += w * float(np.sum(-spec.pg_coeff * A * lp + spec.value_coeff * (value - R) ** 2
                                 - spec.entropy_coeff * ent))
        u = raw[:, :G]
        inv_var = np.exp(-2.0 * log_std)
        z2 = (u - mean) ** 2 * inv_var
        pgA = (spec.pg_coeff * A)[:, None]
        d_mean = -w * pgA * (u - mean) * inv_var
        d_ls = w * (-pgA * (z2 - 1.0) - spec.entropy_coeff)
        d_ls = d_ls * ((ls_raw > LOG_STD_MIN) & (ls_raw < LOG_STD_MAX))
        d_logit = None
        if desc.n_bern:
            pr = _sigmoid(logit)
            g = raw[:, G:]
            d_logit = w * (-pgA * (g - pr) + spec.entropy_coeff * logit * pr * (1 - pr))
        d_value = w * 2.0 * spec.value_coeff * (value - R)
        heads.append((d_mean, d_ls, d_logit, d_value))

    L = desc.lstm
    dh_next = np.zeros((B, L), dt)
    dc_next = np.zeros((B, L), dt)
    for t in reversed(range(T)):
        xs, a1, a2, h_prev, c_prev, i, f, g, o, tc, c_t = caches[t]
        h_t = o * tc
        d_mean, d_ls, d_logit, d_value = heads[t]
        gp["Wmu"] += h_t.T @ d_mean
        gp["bmu"] += d_mean.sum(0)
        gp["Wls"] += h_t.T @ d_ls
        gp["bls"] += d_ls.sum(0)
        gp["Wv"] += h_t.T @ d_value[:, None]
        gp["bv"] += d_value.sum()
        dh = dh_next + d_mean @ p["Wmu"].T + d_ls @ p["Wls"].T + d_value[:, None] @ p["Wv"].T
        if d_logit is not None:
            gp["Wp"] += h_t.T @ d_logit
            gp["bp"] += d_logit.sum(0)
            dh += d_logit @ p["Wp"].T
        do = dh * tc
        dc = dc_next + dh * o * (1.0 - tc * tc)
        di, dg, df = dc * g, dc * i, dc * c_prev
        dgates = np.concatenate(
            [di * i * (1 - i), df * f * (1 - f), dg * (1 - g * g), do * o * (1 - o)], axis=1
        )
        gp["Wx"] += a2.T @ dgates
        gp["Wh"] += h_prev.T @ dgates
        gp["bl"] += dgates.sum(0)
        dh_next = (dgates @ p["Wh"].T) * keep[t]
        dc_next = (dc * f) * keep[t]
        dz2 = (dgates @ p["Wx"].T) * (1 - a2 * a2)
        gp["W2"] += a1.T @ dz2
        gp["b2"] += dz2.sum(0)
        dz1 = (dz2 @ p["W2"].T) * (1 - a1 * a1)
        gp["W1"] += xs.T @ dz1
        gp["b1"] += dz1.sum(0)
    return loss, grad


def gradients(params: PolicyParams, spec: LossSpec, seg: Segment) -> np.ndarray:
    return loss_and_gradients(params, spec, seg)[1]


def loss_value(params: PolicyParams, spec: LossSpec, seg: Segment) -> float:
    """Forward-only loss (used by finite-difference checks)."""
    desc = params.descriptor
    p = params.views()
    dt = params.flat.dtype
    T, B = seg.obs.shape[:2]
    keep = (1.0 - np.asarray(seg.starts, dtype=dt))[..., None]
    h, c = seg.h0.h.astype(dt), seg.h0.c.astype(dt)
    total = 0.0
    for t in range(T):
        h, c = h * keep[t], c * keep[t]
        mean, _, log_std, logit, value, h, c = _forward_step(p, desc, seg.obs[t].astype(dt), h, c)
        dist = ActionDistribution(desc.role, mean, log_std, logit)
        lp = log_prob(dist, seg.raw[t].astype(dt))
        total += float(np.sum(-spec.pg_coeff * seg.advantages[t] * lp
                              + spec.value_coeff * (value - seg.returns[t]) ** 2
                              - spec.entropy_coeff * entropy(dist)))
    return total / (T * B)


# checkpoints -----------------------------------------------------------------

def save_checkpoint(path, params: PolicyParams, training_step: int = 0, gamma1: Optional[float] = None) -> Path:
    """UTF-8 JSON header line, then the parameters as little-endian float32."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "descriptor": params.descriptor.to_dict(),
        "training_step": int(training_step),
        "gamma1": None if gamma1 is None else float(gamma1),
        "n_params": params.descriptor.n_params,
    }
    body = np.ascontiguousarray(params.flat, dtype="<f4").tobytes()
    with path.open("wb") as fh:
        fh.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
        fh.write(body)
    return path


def load_checkpoint(path) -> tuple[PolicyParams, dict]:
    path = Path(path)
    data = path.read_bytes()
    nl = data.find(b"\n")
    if nl < 0:
        raise ValueError(f"{path}: missing checkpoint header")
    header = json.loads(data[:nl].decode("utf-8"))
    if header.get("format") != CHECKPOINT_FORMAT or header.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"{path}: unsupported checkpoint format {header.get('format')!r} v{header.get('version')}")
    desc = Descriptor.from_dict(header["descriptor"])
    flat = np.frombuffer(data[nl + 1:], dtype="<f4").astype(np.float32)
    if flat.size != desc.n_params:
        raise ValueError(f"{path}: expected {desc.n_params} parameters, found {flat.size}")
    return PolicyParams(desc, flat), header
