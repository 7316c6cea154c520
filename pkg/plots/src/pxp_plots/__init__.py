"""Figure rendering for driven-pxp run directories.

Consumes only the documented CSV/JSON contract of a completed run directory
(manifest.json plus per-scenario data files); never recomputes physics and
never mutates its inputs.
"""

__version__ = "0.1.0"
