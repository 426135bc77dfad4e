"""Breaking entanglement-breaking: correlated-noise environment toolbox.

Core subpackages:

* :mod:`ebreak.gaussian`     — two-mode covariance-matrix algebra
* :mod:`ebreak.environment`  — correlated thermal environments and thresholds
* :mod:`ebreak.discord`      — Gaussian discord by measurement minimisation
* :mod:`ebreak.propagation`  — EPR transmission and reactivation formulas
* :mod:`ebreak.qudit`        — finite-dimensional twirling machinery
* :mod:`ebreak.bosonic`      — phase-space twirling at the CM level
* :mod:`ebreak.sweeps`       — grid scans and tables
* :mod:`ebreak.service`      — FastAPI compute service
* :mod:`ebreak.cli`          — thin command-line client
"""

__version__ = "0.1.0"
