"""Backend selection for the O(N^2) pair kernels.

The compiled extension is used when it was built; otherwise the numpy
reference implementation is used.  ``SYMKNOTS_BACKEND=python`` forces the
fallback, and :func:`use_backend` switches at runtime.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels


def available_backends():
    return sorted(_BACKENDS)


def _default():
    wanted = os.environ.get("SYMKNOTS_BACKEND")
    if wanted:
        if wanted not in _BACKENDS:
            raise ImportError(f"backend {wanted!r} unavailable; have {available_backends()}")
        return wanted
    return "compiled" if "compiled" in _BACKENDS else "python"


_active = _default()
_threads = 1


def set_threads(n):
    """Thread count for the compiled kernels; 1 is the reproducibility mode."""
    global _threads
    if n < 1:
        raise ValueError("threads must be >= 1")
    _threads = int(n)


def get_threads():
    return _threads


def use_backend(name):
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; have {available_backends()}")
    _active = name


def active_backend():
    return _active


def tp_energy(points, h, q, threads=None):
    threads = _threads if threads is None else threads
    if _active == "compiled":
        return _ckernels.tp_energy(points, h, q, threads)
    return _pykernels.tp_energy(points, h, q)


def tp_energy_grad(points, h, q, threads=None):
    threads = _threads if threads is None else threads
    if _active == "compiled":
        return _ckernels.tp_energy_grad(points, h, q, threads)
    return _pykernels.tp_energy_grad(points, h, q)


def bilipschitz(points, ell, threads=None):
    threads = _threads if threads is None else threads
    if _active == "compiled":
        return _ckernels.bilipschitz(points, ell, threads)
    return _pykernels.bilipschitz(points, ell)
