# cython: language_level=3
"""Compiled versions of the kernels in ``_pure.py``.

Signatures and return conventions are identical; see that module for the
algorithm descriptions.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

cdef double EPS = 2.220446049250313e-16

BACKEND = "compiled"


def aberth(coeffs, z0, int maxiter):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.asarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] z = np.array(z0, dtype=np.complex128)
    cdef int n = a.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] absa = np.abs(a)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] done = np.zeros(n, dtype=np.uint8)
    cdef int it, i, j, k
    cdef bint active
    cdef double complex zi, p, dp, ratio, s, d, w, denom
    cdef double az, bound
    for it in range(1, maxiter + 1):
        active = False
        for i in range(n):
            if done[i]:
                continue
            zi = z[i]
            az = abs(zi)
            p = a[n]
            dp = 0
            bound = absa[n]
            for k in range(n - 1, -1, -1):
                dp = dp * zi + p
                p = p * zi + a[k]
                bound = bound * az + absa[k]
            if abs(p) <= 8.0 * EPS * bound:
                done[i] = 1
                continue
            active = True
            if dp == 0:
                z[i] = zi + (1e-8 + 1e-8j) * (1.0 + az)
                continue
            ratio = p / dp
            s = 0
            for j in range(n):
                if j != i:
                    d = zi - z[j]
                    if d != 0:
                        s = s + 1.0 / d
            denom = 1.0 - ratio * s
            if denom != 0:
                w = ratio / denom
            else:
                w = ratio
            z[i] = zi - w
            if abs(w) <= EPS * abs(z[i]):
                done[i] = 1
        if not active:
            return [complex(v) for v in z], True, it
    return [complex(v) for v in z], bool(np.all(done)), maxiter


cdef inline void _eval_pair(double complex* c0, double complex* dc, double t, double complex x, int n,
                            double complex* p_out, double complex* dp_out, double complex* q_out) noexcept nogil:
    cdef double complex p = c0[n] + t * dc[n]
    cdef double complex dp = 0
    cdef double complex q = dc[n]
    cdef int k
    for k in range(n - 1, -1, -1):
        dp = dp * x + p
        p = p * x + (c0[k] + t * dc[k])
        q = q * x + dc[k]
    p_out[0] = p
    dp_out[0] = dp
    q_out[0] = q


def track_segment(c0_in, dc_in, x0, double h0, double hmin, double newton_tol, double collision,
                  int max_newton, trace=None):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] c0 = np.ascontiguousarray(c0_in, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] dc = np.ascontiguousarray(dc_in, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] x = np.array(x0, dtype=np.complex128)
    cdef int n = x.shape[0]
    cdef int deg = c0.shape[0] - 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] pred = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] corr = np.empty(n, dtype=np.complex128)
    cdef double complex* pc0 = <double complex*> c0.data
    cdef double complex* pdc = <double complex*> dc.data
    cdef double t = 0.0, tn, h = h0, dmin, guard, d
    cdef long steps = 0
    cdef int i, j, it
    cdef bint ok, conv
    cdef double complex p, dp, q, zz, dz
    if trace is not None:
        trace.append((t, tuple(x.tolist())))
    while t < 1.0:
        if h > 1.0 - t:
            h = 1.0 - t
        ok = True
        for i in range(n):
            _eval_pair(pc0, pdc, t, x[i], deg, &p, &dp, &q)
            if dp == 0:
                ok = False
                break
            pred[i] = x[i] - h * q / dp
        tn = t + h
        if ok:
            for i in range(n):
                zz = pred[i]
                conv = False
                for it in range(max_newton):
                    _eval_pair(pc0, pdc, tn, zz, deg, &p, &dp, &q)
                    if dp == 0:
                        break
                    dz = p / dp
                    zz = zz - dz
                    if abs(dz) <= newton_tol * max(1.0, abs(zz)):
                        conv = True
                        break
                if not conv:
                    ok = False
                    break
                corr[i] = zz
        if ok:
            dmin = 1e308
            for i in range(n):
                for j in range(i + 1, n):
                    d = abs(corr[i] - corr[j])
                    if d < dmin:
                        dmin = d
            guard = dmin / collision
            for i in range(n):
                if not (abs(corr[i] - pred[i]) < guard):
                    ok = False
                    break
        if ok:
            t = 1.0 if tn >= 1.0 else tn
            for i in range(n):
                x[i] = corr[i]
            steps += 1
            if trace is not None:
                trace.append((t, tuple(x.tolist())))
            if h * 2.0 <= h0:
                h *= 2.0
        else:
            h *= 0.5
            if h < hmin:
                return [complex(v) for v in x], False, t, steps
    return [complex(v) for v in x], True, t, steps


def closure(gens, int n, long max_order):
    if n > 16:
        from . import _pure
        return _pure.closure(gens, n, max_order)
    cdef int ng = len(gens)
    cdef vector[int] g_img
    cdef int i, k
    for s in gens:
        for i in range(n):
            g_img.push_back(<int> s[i])
    cdef unordered_set[uint64_t] seen
    cdef vector[uint64_t] out
    cdef uint64_t code = 0, h, g
    cdef size_t head = 0
    for i in range(n):
        code |= (<uint64_t> i) << (4 * i)
    seen.insert(code)
    out.push_back(code)
    while head < out.size():
        g = out[head]
        head += 1
        for k in range(ng):
            h = 0
            for i in range(n):
                h |= (<uint64_t> g_img[k * n + <int> ((g >> (4 * i)) & 15)]) << (4 * i)
            if seen.find(h) == seen.end():
                seen.insert(h)
                out.push_back(h)
                if <long> out.size() > max_order:
                    return None
    result = []
    for h in out:
        result.append(tuple([<int> ((h >> (4 * i)) & 15) for i in range(n)]))
    return result


def cycle_types(elements, int n):
    cdef int s, j, k, m, a, b, tmp
    cdef int e[64]
    cdef int seen[64]
    cdef int lens[64]
    if n > 64:
        from . import _pure
        return _pure.cycle_types(elements, n)
    out = set()
    for el in elements:
        for s in range(n):
            e[s] = <int> el[s]
            seen[s] = 0
        m = 0
        for s in range(n):
            if seen[s]:
                continue
            k = 0
            j = s
            while not seen[j]:
                seen[j] = 1
                j = e[j]
                k += 1
            lens[m] = k
            m += 1
        for a in range(1, m):
            tmp = lens[a]
            b = a - 1
            while b >= 0 and lens[b] < tmp:
                lens[b + 1] = lens[b]
                b -= 1
            lens[b + 1] = tmp
        out.add(tuple([lens[a] for a in range(m)]))
    return out
