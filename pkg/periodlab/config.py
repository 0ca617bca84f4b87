import os
import logging

from .errors import ConfigurationError

logger = logging.getLogger(__name__)

TOL_ENV = 'PERIODLAB_TOL'


class IntegratorSettings:
    """
    settings of the embedded Runge-Kutta integrator and of the return map built on top of it.
    """
    def __init__(self, rtol=1e-10, atol=None, h_init=1e-2, h_min=1e-14, max_period_factor=10.0, box_factor=10.0,
                 event_tol=1e-12, max_steps=200000):
        """

        Args:
            rtol: relative error tolerance of a step
            atol: absolute error tolerance of a step, defaults to rtol*1e-2
            h_init: first trial step
            h_min: steps below this raise StepUnderflow
            max_period_factor: integration is abandoned after max_period_factor*T0 without a return
            box_factor: bounding box of the return map in units of the small-amplitude cap
            event_tol: |y| accepted at a localized axis crossing
            max_steps: hard limit of accepted steps per return map

        """
        if rtol <= 0:
            raise ConfigurationError("rtol must be positive, got %r" % rtol)
        self.rtol = float(rtol)
        self.atol = float(atol) if atol is not None else self.rtol * 1e-2
        self.h_init = h_init
        self.h_min = h_min
        self.max_period_factor = max_period_factor
        self.box_factor = box_factor
        self.event_tol = event_tol
        self.max_steps = max_steps

    @classmethod
    def from_env(cls, **kwargs):
        """
        like the constructor, but PERIODLAB_TOL (a decimal literal) overrides rtol if it is set.
        """
        raw = os.environ.get(TOL_ENV)
        if raw is not None and raw.strip() != '':
            try:
                tol = float(raw)
            except ValueError:
                raise ConfigurationError("%s must be a decimal literal, got %r" % (TOL_ENV, raw))
            if not tol > 0:
                raise ConfigurationError("%s must be positive, got %r" % (TOL_ENV, raw))
            logger.debug("integrator tolerance %g taken from %s", tol, TOL_ENV)
            kwargs['rtol'] = tol
            kwargs.pop('atol', None)
        return cls(**kwargs)

    def __repr__(self):
        return "IntegratorSettings(rtol=%g, atol=%g)" % (self.rtol, self.atol)


class WellSettings:
    def __init__(self, cap=10.0, scan_fraction=1e-3, pullback=1e-6):
        """

        Args:
            cap: largest |x| searched for zeros of g
            scan_fraction: outward scan step as a fraction of cap
            pullback: relative distance kept from the separatrix energy

        """
        if cap <= 0:
            raise ConfigurationError("cap must be positive")
        self.cap = float(cap)
        self.scan_fraction = scan_fraction
        self.pullback = pullback


class QuadratureSettings:
    def __init__(self, tol=1e-10, min_level=3, max_level=12, t_max=4.5, gap_nodes=24):
        """

        Args:
            tol: absolute tolerance of the energy-period integral
            min_level: tanh-sinh levels always computed
            max_level: QuadratureNoConvergence once exhausted
            t_max: truncation of the tanh-sinh abscissa
            gap_nodes: Gauss-Legendre nodes of the energy gap integral near a turning point

        """
        self.tol = tol
        self.min_level = min_level
        self.max_level = max_level
        self.t_max = t_max
        self.gap_nodes = gap_nodes


class GridConfig:
    """
    symmetric criteria grid: n_points on +-fraction of the half-widths, without the exclusion ball around 0.
    """
    def __init__(self, n_points=41, fraction=0.8, exclusion=1e-3):
        if n_points < 2:
            raise ConfigurationError("a criteria grid needs at least two points")
        self.n_points = n_points
        self.fraction = fraction
        self.exclusion = exclusion


class CurveConfig:
    """
    numeric period curve sampled by classify. Amplitudes are clipped to clip*small-amplitude cap, cmax limits the
    top of the curve (an energy for conservative systems, an amplitude otherwise).
    """
    def __init__(self, amplitude_lo=0.02, amplitude_hi=0.3, n=8, clip=0.8, cmax=None, workers=1):
        if n < 3:
            raise ConfigurationError("a period curve needs at least three samples for a verdict")
        if not 0 < amplitude_lo < amplitude_hi:
            raise ConfigurationError("amplitude range must satisfy 0 < lo < hi")
        self.amplitude_lo = amplitude_lo
        self.amplitude_hi = amplitude_hi
        self.n = n
        self.clip = clip
        self.cmax = cmax
        self.workers = workers
