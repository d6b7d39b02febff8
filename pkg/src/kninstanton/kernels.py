"""
Backend selection for the integration kernels.

The compiled module is used when it imports; setting
``KNINSTANTON_PURE_PYTHON=1`` forces the pure-Python twin.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("KNINSTANTON_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

integrate = _impl.integrate
mino_rhs = _impl.mino_rhs
ham_rhs = _impl.ham_rhs
guard = _impl.guard
dense_eval = _pykernels.dense_eval

MINO = _pykernels.MINO
HAMILTONIAN = _pykernels.HAMILTONIAN
STATUS_NAMES = {
    _pykernels.ST_DONE: "ok",
    _pykernels.ST_HORIZON: "HorizonApproach",
    _pykernels.ST_SINGULARITY: "SingularityApproach",
    _pykernels.ST_UNDERFLOW: "StepFailure",
    _pykernels.ST_MAXSTEPS: "MaxSteps",
    _pykernels.ST_NONFINITE: "StepFailure",
    _pykernels.ST_THETA_HORIZON: "ThetaHorizonApproach",
    _pykernels.ST_DOMAIN: "DomainExit",
}
