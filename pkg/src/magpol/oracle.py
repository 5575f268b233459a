"""Time-domain oracle for the closed-form steady state.

Integrates the rotating-frame equations of motion with a fixed-step RK4
kernel until the amplitudes settle, then reports them in the same
normalization as model.steady_state.  This is deliberately an independent
route to the same numbers: the closed form never enters the integration.

Internally everything is converted to angular units (rad/us = 2*pi*MHz),
including the drive terms sqrt(2*eta*kappa)*amplitude; reported amplitudes
are rescaled by sqrt(2*pi) back to the linear-rate normalization, under
which the input-output relation of model.output_field holds unchanged.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, IntegrationTimeout
from .model import DriveField, ModeAmplitudes, SystemParams, output_field

try:
    from . import _kernel as _impl
except ImportError:  # extension not built; use the slow twin
    from . import _kernel_py as _impl

_TWO_PI = 2.0 * math.pi


def kernel_backend() -> str:
    """Name of the active integrator backend ("compiled" or "python")."""
    return _impl.BACKEND


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integrator settings.

    step and max_time are in us; None means derive from the system: step
    0.01/(2*pi*f_max) with f_max the largest rate or detuning in MHz, and
    max_time 3*(ln(1/settle_tol)+5)/(2*pi*min(kappa_c, kappa_m)), which stays
    above 10/min(kappa) for settle_tol <= 1e-10.
    """

    step: float | None = None
    settle_tol: float = 1e-10
    max_time: float | None = None

    def __post_init__(self):
        if self.step is not None and not self.step > 0.0:
            raise DomainError(f"step must be positive, got {self.step}")
        if not self.settle_tol > 0.0:
            raise DomainError(f"settle_tol must be positive, got {self.settle_tol}")
        if self.max_time is not None and not self.max_time > 0.0:
            raise DomainError(f"max_time must be positive, got {self.max_time}")


def _resolved(
    config: IntegratorConfig, params: SystemParams, delta_c: float, delta_m: float
) -> tuple[float, float, int]:
    """(step, max_time, n_window) for this system, filling in auto values."""
    f_max = max(
        params.kappa_c, params.kappa_m, params.coupling_g, abs(delta_c), abs(delta_m)
    )
    step = config.step if config.step is not None else 0.01 / (_TWO_PI * f_max)
    kappa_min = min(params.kappa_c, params.kappa_m)
    if config.max_time is not None:
        max_time = config.max_time
    else:
        max_time = 3.0 * (math.log(1.0 / config.settle_tol) + 5.0) / (_TWO_PI * kappa_min)
    decay_time = 1.0 / (_TWO_PI * kappa_min)
    n_window = max(1, int(decay_time / step))
    return step, max_time, n_window


def integrate_to_steady(
    params: SystemParams,
    drive: DriveField,
    probe_freq: float,
    config: IntegratorConfig | None = None,
) -> ModeAmplitudes:
    """Integrate the driven two-mode system from rest to steady state.

    Returns amplitudes in the linear-rate normalization of
    model.steady_state.  Raises IntegrationTimeout if the windowed settle
    criterion is not met within max_time.
    """
    if config is None:
        config = IntegratorConfig()
    delta_c = params.cavity_freq - probe_freq
    delta_m = params.magnon_freq - probe_freq
    step, max_time, n_window = _resolved(config, params, delta_c, delta_m)
    max_steps = int(max_time / step) + 1

    za = -(1j * delta_c + params.kappa_c) * _TWO_PI
    zm = -(1j * delta_m + params.kappa_m) * _TWO_PI
    ig = 1j * params.coupling_g * _TWO_PI
    fa = complex(math.sqrt(2.0 * params.kappa_c1 * _TWO_PI) * drive.probe_amp)
    fm = (
        math.sqrt(2.0 * params.kappa_m1 * _TWO_PI)
        * drive.ratio_delta
        * drive.probe_amp
        * cmath.exp(-1j * drive.effective_phase)
    )

    a, m, steps, settled, change = _impl.run(
        za, zm, ig, fa, fm, step, n_window, config.settle_tol, max_steps
    )
    if not settled:
        raise IntegrationTimeout(
            f"no steady state within {max_time:g} us "
            f"({steps} steps, last relative change {change:.3e})",
            last_change=change,
        )
    scale = math.sqrt(_TWO_PI)
    return ModeAmplitudes(cavity_amp=a * scale, magnon_amp=m * scale)


def oracle_transmission(
    params: SystemParams,
    drive: DriveField,
    probe_freq: float,
    config: IntegratorConfig | None = None,
) -> complex:
    """t_p obtained from the time-domain steady state via input-output."""
    if drive.probe_amp == 0.0:
        raise DomainError("transmission is undefined for probe_amp == 0")
    amps = integrate_to_steady(params, drive, probe_freq, config)
    return output_field(params, amps.cavity_amp, drive.probe_amp) / drive.probe_amp
