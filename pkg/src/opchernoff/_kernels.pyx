# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled adaptive Gauss-Kronrod kernels.

Mirrors ``_kernels_py``: same 15-point rule, same bisection order
(largest error first, ties to the leftmost panel), same integrand codes.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, log1p, fabs, INFINITY, isfinite
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef double XGK[8]
cdef double WGK[8]
cdef double WG[4]
XGK[:] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
]
WGK[:] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
]
WG[:] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
]


cdef struct Integrand:
    int dcode
    double d0, d1, d2
    int wcode
    double alpha
    double *coef
    int ncoef
    double z


cdef inline double log_density(Integrand *f, double y) nogil:
    cdef double u, ly
    if f.dcode == 0:
        u = (y - f.d0) / f.d1
        return -0.5 * u * u - f.d2
    elif f.dcode == 1:
        if y < 0.0:
            return -INFINITY
        return f.d1 - f.d0 * y
    elif f.dcode == 2:
        if y <= 0.0:
            return -INFINITY
        return (f.d0 - 1.0) * log(y) - y / f.d1 - f.d2
    elif f.dcode == 3:
        if y < f.d0 or y > f.d1:
            return -INFINITY
        return -f.d2
    else:
        if y <= 0.0:
            return -INFINITY
        ly = log(y)
        u = (ly - f.d0) / f.d1
        return -0.5 * u * u - ly - f.d2


cdef inline double log_weight(Integrand *f, double s) nogil:
    cdef double t
    if f.wcode == 0:
        return 0.0
    elif f.wcode == 1:
        if s <= 0.0:
            return -INFINITY
        if f.alpha == 0.0:
            return 0.0
        return f.alpha * log(s)
    elif f.wcode == 2:
        return f.alpha * s
    elif f.wcode == 3:
        if s <= 0.0:
            return -INFINITY
        return f.alpha * s
    elif f.wcode == 4:
        if s <= 0.0:
            return -INFINITY
        return 0.0
    else:
        t = s / f.alpha
        if t >= 0.0:
            return -log1p(exp(-t))
        return t - log1p(exp(t))


cdef inline double integrand(Integrand *f, double y) nogil:
    cdef double lp = log_density(f, y)
    cdef double lw, s, poly
    cdef int k
    if lp == -INFINITY:
        return 0.0
    if f.wcode == 6:
        s = f.z + y
        poly = 0.0
        for k in range(f.ncoef - 1, -1, -1):
            poly = poly * s + f.coef[k]
        return exp(lp) * poly
    lw = log_weight(f, f.z + y)
    if lw == -INFINITY:
        return 0.0
    return exp(lp + lw)


cdef void gk15(Integrand *f, double a, double b, double *val, double *err) nogil:
    cdef double half = 0.5 * (b - a)
    cdef double centre = 0.5 * (a + b)
    cdef double fc = integrand(f, centre)
    cdef double resk = WGK[7] * fc
    cdef double resg = WG[3] * fc
    cdef double dx, f1, f2
    cdef int j
    for j in range(7):
        dx = half * XGK[j]
        f1 = integrand(f, centre - dx)
        f2 = integrand(f, centre + dx)
        resk += WGK[j] * (f1 + f2)
        if j % 2 == 1:
            resg += WG[j // 2] * (f1 + f2)
    val[0] = half * resk
    err[0] = fabs(half * resk - half * resg)


cdef tuple adaptive(Integrand *f, double a, double b, double abs_tol,
                    double rel_tol, int max_sub):
    cdef double *pa = <double *> malloc((max_sub + 1) * sizeof(double))
    cdef double *pb = <double *> malloc((max_sub + 1) * sizeof(double))
    cdef double *pv = <double *> malloc((max_sub + 1) * sizeof(double))
    cdef double *pe = <double *> malloc((max_sub + 1) * sizeof(double))
    cdef int n = 1, i, best, nev = 15
    cdef double total, total_err, mid, lv, le, rv, re, tol
    cdef bint converged = False
    if pa == NULL or pb == NULL or pv == NULL or pe == NULL:
        free(pa); free(pb); free(pv); free(pe)
        raise MemoryError()
    try:
        with nogil:
            pa[0] = a
            pb[0] = b
            gk15(f, a, b, &pv[0], &pe[0])
            total = pv[0]
            total_err = pe[0]
            while True:
                tol = rel_tol * fabs(total)
                if abs_tol > tol:
                    tol = abs_tol
                if total_err <= tol:
                    converged = True
                    break
                if n >= max_sub or not isfinite(total):
                    break
                best = 0
                for i in range(1, n):
                    if pe[i] > pe[best] or (pe[i] == pe[best] and pa[i] < pa[best]):
                        best = i
                mid = 0.5 * (pa[best] + pb[best])
                if not (pa[best] < mid and mid < pb[best]):
                    break
                gk15(f, pa[best], mid, &lv, &le)
                gk15(f, mid, pb[best], &rv, &re)
                nev += 30
                total += lv + rv - pv[best]
                total_err += le + re - pe[best]
                pa[n] = mid
                pb[n] = pb[best]
                pv[n] = rv
                pe[n] = re
                pb[best] = mid
                pv[best] = lv
                pe[best] = le
                n += 1
            if converged:
                total = 0.0
                total_err = 0.0
                for i in range(n):
                    total += pv[i]
                    total_err += pe[i]
        return total, total_err, bool(converged), nev
    finally:
        free(pa); free(pb); free(pv); free(pe)


cdef void fill(Integrand *f, int dcode, dparams, int wcode, double[::1] w, double z):
    f.dcode = dcode
    f.d0 = dparams[0]
    f.d1 = dparams[1]
    f.d2 = dparams[2]
    f.wcode = wcode
    f.alpha = w[0] if w.shape[0] > 0 else 0.0
    f.ncoef = w.shape[0]
    f.coef = &w[0] if w.shape[0] > 0 else NULL
    f.z = z


def catalog_integral(int dcode, dparams, int wcode, wparams, double z,
                     double a, double b, double abs_tol, double rel_tol,
                     int max_sub):
    """Integrate ``p(y) * w(z + y)`` over the finite interval ``[a, b]``."""
    cdef Integrand f
    cdef double[::1] w = np.ascontiguousarray(wparams, dtype=float)
    if dcode < 0 or dcode > 4:
        raise ValueError(f"unknown density code {dcode}")
    if wcode < 0 or wcode > 6:
        raise ValueError(f"unknown weight code {wcode}")
    if w.shape[0] == 0:
        w = np.zeros(1)
    fill(&f, dcode, dparams, wcode, w, z)
    return adaptive(&f, a, b, abs_tol, rel_tol, max_sub)


def eval_integrand(int dcode, dparams, int wcode, wparams, double z, y):
    """Vectorized ``p(y) * w(z + y)``."""
    cdef Integrand f
    cdef double[::1] w = np.ascontiguousarray(wparams, dtype=float)
    cdef double[::1] yy = np.ascontiguousarray(np.atleast_1d(y), dtype=float)
    out = np.empty(yy.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    if w.shape[0] == 0:
        w = np.zeros(1)
    fill(&f, dcode, dparams, wcode, w, z)
    for i in range(yy.shape[0]):
        o[i] = integrand(&f, yy[i])
    return out.reshape(np.shape(y))
