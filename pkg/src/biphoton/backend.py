"""Kernel backend selection: compiled extension when available, numpy otherwise.

Set ``BIPHOTON_BACKEND=python`` to force the numpy fallback (used by the
benchmark and by tests that compare the two), or ``BIPHOTON_BACKEND=compiled``
to fail loudly if the extension is missing.  ``BIPHOTON_THREADS`` caps the
parallelism of the compiled kernel and of length sweeps.
"""

from __future__ import annotations

import math
import os

import numpy as np

# order 6 holds per-panel error near 1e-13 at the default pi/4 phase per
# panel; the doubled-resolution self-check guards the tolerance regardless
GL_ORDER = 6
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_ORDER)

_requested = os.environ.get("BIPHOTON_BACKEND", "").strip().lower()
if _requested in ("python", "numpy"):
    from . import _kernel_numpy as _impl

    BACKEND = "python"
elif _requested in ("compiled", "c"):
    from . import _kernel as _impl  # type: ignore[attr-defined]

    BACKEND = "compiled"
elif _requested:
    raise ValueError(f"BIPHOTON_BACKEND={_requested!r}: expected 'compiled' or 'python'")
else:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernel_numpy as _impl

        BACKEND = "python"


def thread_count() -> int:
    env = os.environ.get("BIPHOTON_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def chirp_integrals(
    u,
    alpha: float,
    half_len: float,
    *,
    max_phase_per_panel: float = math.pi / 4,
    rel_tol: float = 1e-8,
    max_doublings: int = 20,
    num_threads: int | None = None,
):
    """Finite Fourier integral of a quadratic-phase grating over a u grid.

    Computes ``integral_{-h}^{+h} exp(i*(u*xi - alpha*xi^2)) dxi`` for every
    element of ``u`` (rad/cm) through the active backend.
    """
    threads = thread_count() if num_threads is None else max(1, num_threads)
    return _impl.chirp_integrals(
        np.ascontiguousarray(u, dtype=float),
        float(alpha),
        float(half_len),
        _GL_X,
        _GL_W,
        float(max_phase_per_panel),
        float(rel_tol),
        int(max_doublings),
        threads,
    )
