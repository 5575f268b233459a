# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled steady-state RK4 kernel.

Same algorithm as _kernel_py.run; keep the loop bodies in sync.
"""

BACKEND = "compiled"


def run(double complex za, double complex zm, double complex ig,
        double complex fa, double complex fm,
        double h, long n_window, double settle_tol, long max_steps):
    """Integrate da/dt = za*a - ig*m + fa, dm/dt = zm*m - ig*a + fm from rest.

    Returns (a, m, steps_taken, settled, last_change).
    """
    cdef double complex a = 0, m = 0, a0, m0, at, mt
    cdef double complex k1a, k1m, k2a, k2m, k3a, k3m, k4a, k4m
    cdef double h2 = 0.5 * h
    cdef double h6 = h / 6.0
    cdef double tiny = 1e-300
    cdef double change = float("inf")
    cdef double change_a, change_m
    cdef long steps = 0
    cdef long j
    while steps < max_steps:
        a0 = a
        m0 = m
        for j in range(n_window):
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
