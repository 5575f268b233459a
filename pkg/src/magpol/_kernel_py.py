"""Pure-Python fallback for the steady-state RK4 kernel.

Mirrors _kernel.pyx operation for operation so the two backends agree to
rounding.  Keep the loop body in sync with the Cython source when editing.
"""

import math

BACKEND = "python"


def run(za, zm, ig, fa, fm, h, n_window, settle_tol, max_steps):
    """Integrate da/dt = za*a - ig*m + fa, dm/dt = zm*m - ig*a + fm from rest.

    All coefficients are complex and in angular units (rad per time unit of
    h).  Integration proceeds in windows of n_window fixed RK4 steps; after
    each window the relative change of both amplitudes over the window is
    compared against settle_tol.

    Returns (a, m, steps_taken, settled, last_change).
    """
    a = 0j
    m = 0j
    h2 = 0.5 * h
    h6 = h / 6.0
    tiny = 1e-300
    steps = 0
    change = math.inf
    while steps < max_steps:
        a0 = a
        m0 = m
        for _ in range(n_window):
            k1a = za * a - ig * m + fa
            k1m = zm * m - ig * a + fm
            at = a + h2 * k1a
            mt = m + h2 * k1m
            k2a = za * at - ig * mt + fa
            k2m = zm * mt - ig * at + fm
            at = a + h2 * k2a
            mt = m + h2 * k2m
            k3a = za * at - ig * mt + fa
            k3m = zm * mt - ig * at + fm
            at = a + h * k3a
            mt = m + h * k3m
            k4a = za * at - ig * mt + fa
            k4m = zm * mt - ig * at + fm
            a = a + h6 * (k1a + 2.0 * (k2a + k3a) + k4a)
            m = m + h6 * (k1m + 2.0 * (k2m + k3m) + k4m)
        steps += n_window
        change_a = abs(a - a0) / (abs(a) + tiny)
        change_m = abs(m - m0) / (abs(m) + tiny)
        change = change_a if change_a > change_m else change_m
        if change <= settle_tol:
            return a, m, steps, True, change
    return a, m, steps, False, change
