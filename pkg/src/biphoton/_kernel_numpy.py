"""Pure-numpy fallback for the chirped-grating Fourier integral kernel.

Same algorithm as the compiled module ``_kernel``: composite Gauss-Legendre
with the panel count set by a max-phase-per-panel rule from the integrand
phase ``u*xi - alpha*xi**2``, plus a doubled-resolution self-check per grid
point.  Panel counts are rounded up to multiples of 64 so points can be
evaluated in batched matrix products; that only adds resolution, never
removes it.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError

_BLOCK_ELEMENTS = 2_000_000  # complex temporaries per batch (~32 MB)


def _eval_batch(u_vals: np.ndarray, panels: int, alpha: float, half_len: float,
                xg: np.ndarray, wg: np.ndarray) -> np.ndarray:
    order = xg.shape[0]
    h = 2.0 * half_len / panels
    centres = -half_len + (np.arange(panels) + 0.5) * h
    xi = (centres[:, None] + 0.5 * h * xg[None, :]).ravel()
    coeff = np.broadcast_to(0.5 * h * wg, (panels, order)).ravel() * np.exp(-1j * alpha * xi * xi)
    out = np.empty(u_vals.shape[0], dtype=np.complex128)
    block = max(1, _BLOCK_ELEMENTS // xi.shape[0])
    for s in range(0, u_vals.shape[0], block):
        u_blk = u_vals[s : s + block]
        out[s : s + block] = np.exp(1j * np.multiply.outer(u_blk, xi)) @ coeff
    return out


def chirp_integrals(u, alpha, half_len, nodes_x, nodes_w,
                    max_phase_per_panel, rel_tol, max_doublings, num_threads=1):
    """integral_{-h}^{+h} exp(i*(u*xi - alpha*xi^2)) dxi for each u (rad/cm)."""
    del num_threads  # numpy path is single-threaded
    u = np.ascontiguousarray(u, dtype=float)
    xg = np.ascontiguousarray(nodes_x, dtype=float)
    wg = np.ascontiguousarray(nodes_w, dtype=float)
    length = 2.0 * half_len
    n0 = np.ceil(length * (np.abs(u) + abs(alpha) * length) / max_phase_per_panel)
    n0 = np.maximum(1, n0.astype(np.int64))
    n0 = 64 * ((n0 + 63) // 64)
    atol = 1e-13 * length

    vals = np.empty(u.shape, dtype=np.complex128)
    for n in np.unique(n0):
        sel = n0 == n
        vals[sel] = _eval_batch(u[sel], int(n), alpha, half_len, xg, wg)

    budget = 1 << 22  # hard ceiling on panels per point, matching _kernel
    current = n0.copy()
    unconverged = np.ones(u.shape, dtype=bool)
    capped = np.zeros(u.shape, dtype=bool)
    for _ in range(max_doublings):
        capped |= unconverged & (2 * current > budget)
        idx = np.flatnonzero(unconverged & ~capped)
        if idx.size == 0:
            break
        current[idx] *= 2
        for n in np.unique(current[idx]):
            sub = idx[current[idx] == n]
            refined = _eval_batch(u[sub], int(n), alpha, half_len, xg, wg)
            converged = np.abs(refined - vals[sub]) <= rel_tol * np.abs(refined) + atol
            vals[sub] = refined
            unconverged[sub[converged]] = False
    if unconverged.any():
        bad = int(np.flatnonzero(unconverged)[0])
        raise ConvergenceError(
            f"quadrature failed to converge for {int(unconverged.sum())} grid "
            f"point(s); first at index {bad} (u={u[bad]:.6g} rad/cm)",
            last_estimate=complex(vals[bad]),
        )
    return vals
