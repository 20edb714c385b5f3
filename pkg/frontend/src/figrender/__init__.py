"""Two-panel comparison plot for relaxation-curve CSVs.

Reads solver output (`t,sigma_re,sigma_im,scenario`) and an optional
decay-fit report (`scenario,mode,slope_or_rate,rms_residual,t_min,t_max`),
and renders a linear-response panel next to a log-log tail panel with the
fitted slope annotated.  All numerics live upstream; this package only
reads, transforms axes, and draws.
"""

from .plotting import CurveSet, RenderError, render

__all__ = ["CurveSet", "RenderError", "render"]

__version__ = "0.1.0"
