"""Flow-record botnet detection toolkit.

Per-host scoring of traffic captures, a network-wide filter/cluster/correlate
pipeline, shared numeric kernels, and a deterministic traffic generator for
exercising both engines.
"""

__version__ = "0.1.0"
