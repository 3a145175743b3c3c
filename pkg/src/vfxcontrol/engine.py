"""Deterministic, fixed-timestep, headless particle simulation.

Update order is fixed (spawn, integrate, cull) so that identical seeds and
identical write/step sequences produce bit-identical states. All parameter
writes are addressed through catalog paths and validated against catalog
ranges before they touch the emitter.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, fields, replace

from .catalog import Catalog, GROUP_SENTINEL_PREFIX, resolve_path, validate_assignment
from .errors import RangeViolationError, UnknownTemplateError
from .rng import RandomSource

TEMPLATE_KINDS = ("fire", "fountain", "firework", "bubbles", "trail")

# Direction the emission cone is centered on, per template.
EMISSION_AXES: dict[str, tuple[float, float, float]] = {
    "fire": (0.0, 1.0, 0.0),
    "fountain": (0.0, 1.0, 0.0),
    "firework": (0.0, 1.0, 0.0),
    "bubbles": (0.0, 1.0, 0.0),
    "trail": (1.0, 0.0, 0.0),
}

# Initial speed = velocity_radius * speed scale. Bubbles drift, trails streak.
SPEED_SCALES: dict[str, float] = {
    "fire": 1.0,
    "fountain": 1.0,
    "firework": 1.0,
    "bubbles": 0.5,
    "trail": 1.5,
}


@dataclass
class EmitterConfig:
    """One field per catalog parameter; every value stays inside its catalog range."""

    particles_count: float = 10.0
    emission_time: float = 0.1
    particle_mass: float = 10.0
    particle_lifetime: float = 1.0
    velocity_radius: float = 5.0
    velocity_theta: float = 0.0
    alpha_start: float = 1.0
    alpha_end: float = 0.1
    color_start_red: float = 255.0
    color_start_green: float = 100.0
    color_start_blue: float = 0.0
    color_end_red: float = 255.0
    color_end_green: float = 0.0
    color_end_blue: float = 0.0
    scale_start: float = 1.0
    scale_end: float = 0.5
    force_x: float = 0.0
    force_y: float = 0.0
    force_z: float = 0.0
    position_x: float = 0.0
    position_y: float = 0.0
    position_z: float = 0.0

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


# Preset emitter configurations for the template library. These are artifact
# constants, documented here and checked against the catalog in tests.
TEMPLATE_PRESETS: dict[str, EmitterConfig] = {
    "fire": EmitterConfig(
        particles_count=12, emission_time=0.1, particle_mass=8, particle_lifetime=1.2,
        velocity_radius=6, velocity_theta=25, alpha_start=1.0, alpha_end=0.1,
        color_start_red=255, color_start_green=140, color_start_blue=40,
        color_end_red=200, color_end_green=30, color_end_blue=10,
        scale_start=1.0, scale_end=0.4, force_x=0, force_y=4, force_z=0,
        position_x=0, position_y=0, position_z=0,
    ),
    "fountain": EmitterConfig(
        particles_count=5, emission_time=0.05, particle_mass=2, particle_lifetime=2.5,
        velocity_radius=20, velocity_theta=15, alpha_start=1.0, alpha_end=0.8,
        color_start_red=120, color_start_green=180, color_start_blue=255,
        color_end_red=200, color_end_green=230, color_end_blue=255,
        scale_start=1.0, scale_end=0.8, force_x=0, force_y=-20, force_z=0,
        position_x=0, position_y=0, position_z=0,
    ),
    "firework": EmitterConfig(
        particles_count=100, emission_time=1.0, particle_mass=2, particle_lifetime=1.2,
        velocity_radius=30, velocity_theta=180, alpha_start=1.0, alpha_end=0.1,
        color_start_red=255, color_start_green=220, color_start_blue=120,
        color_end_red=255, color_end_green=60, color_end_blue=30,
        scale_start=0.8, scale_end=0.2, force_x=0, force_y=-10, force_z=0,
        position_x=0, position_y=0, position_z=0,
    ),
    "bubbles": EmitterConfig(
        particles_count=3, emission_time=0.4, particle_mass=0.5, particle_lifetime=4.0,
        velocity_radius=2, velocity_theta=20, alpha_start=0.6, alpha_end=0.1,
        color_start_red=180, color_start_green=220, color_start_blue=255,
        color_end_red=240, color_end_green=250, color_end_blue=255,
        scale_start=0.5, scale_end=1.0, force_x=0, force_y=1, force_z=0,
        position_x=0, position_y=0, position_z=0,
    ),
    "trail": EmitterConfig(
        particles_count=2, emission_time=0.02, particle_mass=5, particle_lifetime=0.9,
        velocity_radius=10, velocity_theta=8, alpha_start=0.9, alpha_end=0.1,
        color_start_red=255, color_start_green=255, color_start_blue=255,
        color_end_red=140, color_end_green=160, color_end_blue=255,
        scale_start=0.8, scale_end=0.2, force_x=0, force_y=0, force_z=0,
        position_x=0, position_y=0, position_z=0,
    ),
}


@dataclass
class BirthConfig:
    """Interpolation endpoints frozen at spawn time; later emitter writes
    only affect future spawns."""

    alpha_start: float
    alpha_end: float
    color_start: tuple[float, float, float]
    color_end: tuple[float, float, float]
    scale_start: float
    scale_end: float


@dataclass
class Particle:
    position: list[float]
    velocity: list[float]
    age: float
    lifetime: float
    birth: BirthConfig
    emitter_index: int = 0


@dataclass
class SystemState:
    template_kind: str
    emitters: list[EmitterConfig]
    particles: list[Particle]
    emission_accumulators: list[float]
    rng: RandomSource
    sim_time: float = 0.0
    total_spawned: int = 0


@dataclass(frozen=True)
class ParticleView:
    position: tuple[float, float, float]
    velocity: tuple[float, float, float]
    alpha: float
    color: tuple[float, float, float]
    scale: float


@dataclass(frozen=True)
class Snapshot:
    sim_time: float
    particle_count: int
    particles: tuple[ParticleView, ...]
    mean_position: tuple[float, float, float]
    mean_speed: float
    mean_alpha: float

    def to_dict(self) -> dict:
        return {
            "sim_time": self.sim_time,
            "particle_count": self.particle_count,
            "particles": [
                {
                    "position": list(p.position),
                    "velocity": list(p.velocity),
                    "alpha": p.alpha,
                    "color": list(p.color),
                    "scale": p.scale,
                }
                for p in self.particles
            ],
            "metrics": {
                "mean_position": list(self.mean_position),
                "mean_speed": self.mean_speed,
                "mean_alpha": self.mean_alpha,
            },
        }


def instantiate_template(kind: str, catalog: Catalog, seed: int) -> SystemState:
    """Build a fresh SystemState from a template preset. Presets are validated
    against the catalog so a bad constant fails loudly, not silently."""
    if kind not in TEMPLATE_PRESETS:
        raise UnknownTemplateError(
            f"unknown template {kind!r}; available: {', '.join(TEMPLATE_KINDS)}"
        )
    config = replace(TEMPLATE_PRESETS[kind])
    for name, value in config.as_dict().items():
        violation = validate_assignment(catalog, name, value)
        if violation is not None:
            raise RangeViolationError(f"template {kind!r} preset invalid: {violation.reason}")
    return SystemState(
        template_kind=kind,
        emitters=[config],
        particles=[],
        emission_accumulators=[0.0],
        rng=RandomSource(seed=seed),
    )


_EMITTER_PATH_RE = re.compile(r"^emitters\[(\d+)\]\.(.+)$")

# Suffix of each resolved emitter path -> config field, derived from the
# catalog's own path templates so engine addressing can't drift from the
# catalog document.
def _suffix_map(catalog: Catalog) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for spec in catalog:
        template = spec.path_template
        if template.startswith(GROUP_SENTINEL_PREFIX):
            continue
        prefix = f"emitters[{{emitterIndex}}]."
        if template.startswith(prefix):
            mapping[template[len(prefix):]] = spec.name
    return mapping


def apply_parameter(
    state: SystemState,
    name: str,
    value: float,
    catalog: Catalog,
    emitter_index: int = 0,
) -> SystemState:
    """Write one parameter to an emitter. Live particles keep their birth
    config; position-group writes move the emitter origin."""
    violation = validate_assignment(catalog, name, value)
    if violation is not None:
        raise RangeViolationError(violation.reason)
    path = resolve_path(catalog, name, emitter_index)
    emitter = state.emitters[emitter_index]
    if path.group is not None:
        axis = path.group.removeprefix(GROUP_SENTINEL_PREFIX)  # e.g. "position_x"
        setattr(emitter, axis, float(value))
        return state
    match = _EMITTER_PATH_RE.match(path.segments)
    if match is None:
        raise RangeViolationError(f"unroutable engine path {path.segments!r}")
    suffix = match.group(2)
    field_name = _suffix_map(catalog).get(suffix)
    if field_name is None:
        raise RangeViolationError(f"no emitter field for path {path.segments!r}")
    setattr(emitter, field_name, float(value))
    return state


def _cone_direction(rng: RandomSource, axis: tuple[float, float, float], theta_deg: float) -> tuple[float, float, float]:
    """Uniform direction inside a spherical cone of half-angle theta about axis."""
    u1 = rng.uniform()
    u2 = rng.uniform()
    cos_theta = math.cos(math.radians(theta_deg))
    cos_phi = 1.0 - u1 * (1.0 - cos_theta)
    sin_phi = math.sqrt(max(0.0, 1.0 - cos_phi * cos_phi))
    psi = 2.0 * math.pi * u2
    # Orthonormal basis (t1, axis, t2).
    ax, ay, az = axis
    if abs(ay) > 0.9:
        hx, hy, hz = 1.0, 0.0, 0.0
    else:
        hx, hy, hz = 0.0, 1.0, 0.0
    t1x, t1y, t1z = hy * az - hz * ay, hz * ax - hx * az, hx * ay - hy * ax
    norm = math.sqrt(t1x * t1x + t1y * t1y + t1z * t1z)
    t1x, t1y, t1z = t1x / norm, t1y / norm, t1z / norm
    t2x, t2y, t2z = ay * t1z - az * t1y, az * t1x - ax * t1z, ax * t1y - ay * t1x
    c1 = sin_phi * math.cos(psi)
    c2 = sin_phi * math.sin(psi)
    return (
        t1x * c1 + ax * cos_phi + t2x * c2,
        t1y * c1 + ay * cos_phi + t2y * c2,
        t1z * c1 + az * cos_phi + t2z * c2,
    )


def _spawn_one(state: SystemState, emitter: EmitterConfig, emitter_index: int) -> None:
    axis = EMISSION_AXES[state.template_kind]
    speed = emitter.velocity_radius * SPEED_SCALES[state.template_kind]
    direction = _cone_direction(state.rng, axis, emitter.velocity_theta)
    state.particles.append(
        Particle(
            position=[emitter.position_x, emitter.position_y, emitter.position_z],
            velocity=[direction[0] * speed, direction[1] * speed, direction[2] * speed],
            age=0.0,
            lifetime=emitter.particle_lifetime,
            birth=BirthConfig(
                alpha_start=emitter.alpha_start,
                alpha_end=emitter.alpha_end,
                color_start=(emitter.color_start_red, emitter.color_start_green, emitter.color_start_blue),
                color_end=(emitter.color_end_red, emitter.color_end_green, emitter.color_end_blue),
                scale_start=emitter.scale_start,
                scale_end=emitter.scale_end,
            ),
            emitter_index=emitter_index,
        )
    )
    state.total_spawned += 1


def step(state: SystemState, dt: float) -> SystemState:
    """Advance the simulation by dt. Order: spawn, integrate, cull."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    for i, emitter in enumerate(state.emitters):
        state.emission_accumulators[i] += dt
        while state.emission_accumulators[i] >= emitter.emission_time:
            state.emission_accumulators[i] -= emitter.emission_time
            for _ in range(int(round(emitter.particles_count))):
                _spawn_one(state, emitter, i)
    # Acceleration from each particle's owning emitter at its current config.
    accels = [
        (e.force_x / e.particle_mass, e.force_y / e.particle_mass, e.force_z / e.particle_mass)
        for e in state.emitters
    ]
    for p in state.particles:
        ax, ay, az = accels[p.emitter_index]
        p.velocity[0] += ax * dt
        p.velocity[1] += ay * dt
        p.velocity[2] += az * dt
        p.position[0] += p.velocity[0] * dt
        p.position[1] += p.velocity[1] * dt
        p.position[2] += p.velocity[2] * dt
        p.age += dt
    state.particles = [p for p in state.particles if p.age < p.lifetime]
    state.sim_time += dt
    return state


def _lerp(a: float, b: float, t: float) -> float:
    return a + (b - a) * t


def particle_view(p: Particle) -> ParticleView:
    t = p.age / p.lifetime
    birth = p.birth
    return ParticleView(
        position=tuple(p.position),
        velocity=tuple(p.velocity),
        alpha=_lerp(birth.alpha_start, birth.alpha_end, t),
        color=(
            _lerp(birth.color_start[0], birth.color_end[0], t),
            _lerp(birth.color_start[1], birth.color_end[1], t),
            _lerp(birth.color_start[2], birth.color_end[2], t),
        ),
        scale=_lerp(birth.scale_start, birth.scale_end, t),
    )


def snapshot(state: SystemState) -> Snapshot:
    views = tuple(particle_view(p) for p in state.particles)
    n = len(views)
    if n == 0:
        mean_position = (0.0, 0.0, 0.0)
        mean_speed = 0.0
        mean_alpha = 0.0
    else:
        mean_position = (
            math.fsum(v.position[0] for v in views) / n,
            math.fsum(v.position[1] for v in views) / n,
            math.fsum(v.position[2] for v in views) / n,
        )
        mean_speed = math.fsum(
            math.sqrt(v.velocity[0] ** 2 + v.velocity[1] ** 2 + v.velocity[2] ** 2)
            for v in views
        ) / n
        mean_alpha = math.fsum(v.alpha for v in views) / n
    return Snapshot(
        sim_time=state.sim_time,
        particle_count=n,
        particles=views,
        mean_position=mean_position,
        mean_speed=mean_speed,
        mean_alpha=mean_alpha,
    )


def speeds(state: SystemState) -> list[float]:
    """Per-particle speeds in particle order; handy for conservation checks."""
    return [
        math.sqrt(p.velocity[0] ** 2 + p.velocity[1] ** 2 + p.velocity[2] ** 2)
        for p in state.particles
    ]
