"""Configuration dataclasses and the flat key=value config file format.

A config file is plain text, one `key = value` pair per line, `#` comments.
Keys are routed to SimConfig / EnvConfig / PpoConfig by field name, so a
single file configures a whole run. Unknown keys are reported with their line
number.
"""

import dataclasses
import math
from dataclasses import dataclass, field, fields

from .errors import ConfigError

TASKS = ("lifting", "flipping", "relocation")


@dataclass
class SimConfig:
    """Physical constants of the pillar array and the contact model."""

    grid_n: int = 16                 # pillars per side
    pitch: float = 0.020             # pillar center spacing, m
    joint_range: float = 0.055       # vertical travel, m
    max_speed: float = 0.053         # joint speed cap, m/s
    sim_dt: float = 0.02             # physics substep, s (50 Hz)
    substeps_per_control: int = 10   # 5 Hz control from 50 Hz physics
    gravity: float = 9.81
    friction_mu: float = 0.3
    contact_tol: float = 1e-3        # tip-to-plane distance that still counts as contact
    v_stick: float = 1e-3            # below this speed static friction can capture
    topple_margin: float = 2e-3      # COM overhang beyond the support hull that triggers a topple
    topple_rate: float = math.pi     # rad/s while a topple is in progress

    def validate(self):
        if self.grid_n < 5:
            raise ConfigError(f"grid_n must be >= 5, got {self.grid_n}")
        if self.pitch <= 0 or self.joint_range <= 0 or self.max_speed <= 0:
            raise ConfigError("pitch, joint_range and max_speed must be positive")
        if self.sim_dt <= 0:
            raise ConfigError(f"sim_dt must be positive, got {self.sim_dt}")
        if self.substeps_per_control < 1:
            raise ConfigError("substeps_per_control must be >= 1")
        if self.friction_mu < 0:
            raise ConfigError("friction_mu must be >= 0")
        return self

    @property
    def table_extent(self):
        return self.grid_n * self.pitch

    @property
    def control_dt(self):
        return self.sim_dt * self.substeps_per_control


@dataclass
class EnvConfig:
    """Episode structure, task selection, perception and object defaults."""

    task: str = "lifting"
    episode_limit: int = 100
    goal_eps: float = 0.02           # goal radius, m
    hold_steps: int = 5              # consecutive in-goal steps for success (1 s at 5 Hz)
    action_scale: float = 0.0106     # per-control-step travel budget, m (53 mm/s at 5 Hz)
    tactile_threshold: float = 0.05  # N
    tactile_noise_std: float = 0.0   # Gaussian force noise, N (off by default)
    tactile_flip_prob: float = 0.0   # Bernoulli cell flips (off by default)
    center_z_half_height: bool = True  # add half height to the tactile z estimate
    object_size: float = 0.08        # cube edge for lifting/flipping, m
    object_mass: float = 0.5         # kg
    catalog_seed: int = 0            # fixes the procedural shape catalogs
    seed: int = 0
    sim: SimConfig = field(default_factory=SimConfig)

    def validate(self):
        if self.task not in TASKS:
            raise ConfigError(f"task must be one of {TASKS}, got {self.task!r}")
        if self.episode_limit < 1:
            raise ConfigError("episode_limit must be >= 1")
        if self.goal_eps <= 0:
            raise ConfigError("goal_eps must be positive")
        if self.hold_steps < 1:
            raise ConfigError("hold_steps must be >= 1")
        if self.action_scale <= 0:
            raise ConfigError("action_scale must be positive")
        if self.tactile_threshold <= 0:
            raise ConfigError("tactile_threshold must be positive")
        self.sim.validate()
        return self


@dataclass
class PpoConfig:
    """PPO hyper-parameters; defaults follow the training-table values."""

    gamma: float = 0.99
    gae_lambda: float = 0.95
    learning_rate: float = 3e-4
    num_envs: int = 128
    clip_eps: float = 0.2
    epochs: int = 4
    horizon: int = 128
    minibatches: int = 4
    value_coef: float = 0.5
    entropy_coef: float = 0.0
    hidden: tuple = (64, 64)         # desk-scale default; paper preset is (256, 256, 128)
    log_std_init: float = 0.0
    normalize_input: bool = True
    normalize_value: bool = True
    normalize_advantage: bool = True
    checkpoint_interval: int = 100
    workers: int = 1
    seed: int = 0

    def validate(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigError(f"gamma must be in (0, 1], got {self.gamma}")
        if not 0.0 <= self.gae_lambda <= 1.0:
            raise ConfigError(f"gae_lambda must be in [0, 1], got {self.gae_lambda}")
        if self.clip_eps <= 0:
            raise ConfigError("clip_eps must be positive")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if min(self.num_envs, self.epochs, self.horizon, self.minibatches) < 1:
            raise ConfigError("num_envs, epochs, horizon, minibatches must be >= 1")
        if (self.horizon * self.num_envs) % self.minibatches:
            raise ConfigError("minibatches must divide horizon * num_envs")
        if len(self.hidden) < 1 or any(h < 1 for h in self.hidden):
            raise ConfigError(f"hidden sizes must be positive, got {self.hidden}")
        return self


def paper_ppo_config(**overrides):
    """PPO config with the published network sizes and environment count."""
    cfg = PpoConfig(hidden=(256, 256, 128), num_envs=128)
    return dataclasses.replace(cfg, **overrides)


# --- flat key=value parsing ------------------------------------------------

_BOOL_WORDS = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def _coerce(raw, ftype, key, path, lineno):
    try:
        if ftype is bool:
            word = raw.strip().lower()
            if word not in _BOOL_WORDS:
                raise ValueError(f"not a boolean: {raw!r}")
            return _BOOL_WORDS[word]
        if ftype is int:
            return int(raw)
        if ftype is float:
            return float(raw)
        if ftype is tuple:
            return tuple(int(tok) for tok in raw.replace(",", " ").split())
        return raw.strip()
    except ValueError as exc:
        raise ConfigError(f"{path}:{lineno}: bad value for '{key}': {exc}") from exc


def parse_config_text(text, path="<config>"):
    """Parse key=value lines into (EnvConfig, PpoConfig); errors carry line numbers."""
    env_fields = {f.name: f for f in fields(EnvConfig) if f.name != "sim"}
    sim_fields = {f.name: f for f in fields(SimConfig)}
    ppo_fields = {f.name: f for f in fields(PpoConfig)}

    env_cfg = EnvConfig()
    ppo_cfg = PpoConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        # ppo 'seed'/'workers' shadow nothing in env; 'seed' routes to both.
        routed = False
        if key in env_fields:
            setattr(env_cfg, key, _coerce(raw, type(getattr(env_cfg, key)), key, path, lineno))
            routed = True
        if key in sim_fields:
            setattr(env_cfg.sim, key, _coerce(raw, type(getattr(env_cfg.sim, key)), key, path, lineno))
            routed = True
        if key in ppo_fields:
            setattr(ppo_cfg, key, _coerce(raw, type(getattr(ppo_cfg, key)), key, path, lineno))
            routed = True
        if not routed:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
    env_cfg.validate()
    ppo_cfg.validate()
    return env_cfg, ppo_cfg


def load_config_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text, path=str(path))


def config_to_dict(env_cfg, ppo_cfg):
    """Flatten both configs into one JSON-friendly dict (for manifests/checkpoints)."""
    out = {}
    for f in fields(SimConfig):
        out[f.name] = getattr(env_cfg.sim, f.name)
    for f in fields(EnvConfig):
        if f.name == "sim":
            continue
        out[f.name] = getattr(env_cfg, f.name)
    if ppo_cfg is not None:
        for f in fields(PpoConfig):
            val = getattr(ppo_cfg, f.name)
            out[f.name] = list(val) if isinstance(val, tuple) else val
    return out
