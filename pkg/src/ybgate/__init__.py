"""Yang-Baxter gates: closed forms, Weyl-chamber analysis, circuit templates,
cross-resonance pulse durations, and simulated process tomography."""
from . import circuits, gates, matrixcore, noisetomo, pulse, weyl, ybe
from .gates import braid_gate, r1, r2, yang_baxterize, yb_gate
from .weyl import entangling_power, nonlocal_params

__all__ = ["circuits", "gates", "matrixcore", "noisetomo", "pulse", "weyl", "ybe",
           "braid_gate", "r1", "r2", "yang_baxterize", "yb_gate", "entangling_power",
           "nonlocal_params"]
__version__ = "0.1.0"
