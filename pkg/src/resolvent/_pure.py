"""Pure-Python implementations of the numerical hot loops.

Mirrors ``_speedups.pyx`` function for function; ``_kernels`` picks one at
import time. Coefficient lists are lowest degree first.
"""

EPS = 2.220446049250313e-16

BACKEND = "pure"


def aberth(coeffs, z0, maxiter):
    """Aberth-Ehrlich iteration on all roots at once.

    Returns ``(roots, converged, iterations)``. A root is frozen once its
    residual reaches rounding level or its correction stalls.
    """
    n = len(coeffs) - 1
    a = [complex(c) for c in coeffs]
    absa = [abs(c) for c in a]
    z = [complex(v) for v in z0]
    done = [False] * n
    for it in range(1, maxiter + 1):
        active = False
        for i in range(n):
            if done[i]:
                continue
            zi = z[i]
            az = abs(zi)
            p = a[n]
            dp = 0j
            bound = absa[n]
            for k in range(n - 1, -1, -1):
                dp = dp * zi + p
                p = p * zi + a[k]
                bound = bound * az + absa[k]
            if abs(p) <= 8.0 * EPS * bound:
                done[i] = True
                continue
            active = True
            if dp == 0:
                z[i] = zi + (1e-8 + 1e-8j) * (1.0 + az)
                continue
            ratio = p / dp
            s = 0j
            for j in range(n):
                if j != i:
                    d = zi - z[j]
                    if d != 0:
                        s += 1.0 / d
            denom = 1.0 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            z[i] = zi - w
            if abs(w) <= EPS * abs(z[i]):
                done[i] = True
        if not active:
            return z, True, it
    return z, all(done), maxiter


def _eval_pair(c0, dc, t, x, n):
    # value and x-derivative of sum (c0[k] + t dc[k]) x^k, plus sum dc[k] x^k
    p = c0[n] + t * dc[n]
    dp = 0j
    q = dc[n]
    for k in range(n - 1, -1, -1):
        dp = dp * x + p
        p = p * x + (c0[k] + t * dc[k])
        q = q * x + dc[k]
    return p, dp, q


def track_segment(c0, dc, x0, h0, hmin, newton_tol, collision, max_newton, trace=None):
    """Continue the roots of ``c0 + t*dc`` from t=0 to t=1.

    Euler predictor along the tangent, Newton corrector, and a collision
    guard: every corrected root must stay within ``dmin / collision`` of its
    prediction, ``dmin`` being the minimum pairwise distance after
    correction. Returns ``(roots, ok, t, steps)``; on failure ``t`` is where
    the step size underflowed.
    """
    n = len(x0)
    c0 = [complex(c) for c in c0]
    dc = [complex(c) for c in dc]
    x = [complex(v) for v in x0]
    t = 0.0
    h = h0
    steps = 0
    if trace is not None:
        trace.append((t, tuple(x)))
    while t < 1.0:
        if h > 1.0 - t:
            h = 1.0 - t
        pred = []
        ok = True
        for xi in x:
            p, dp, q = _eval_pair(c0, dc, t, xi, n)
            if dp == 0:
                ok = False
                break
            pred.append(xi - h * q / dp)
        tn = t + h
        corr = []
        if ok:
            for xi in pred:
                zz = xi
                conv = False
                for _ in range(max_newton):
                    p, dp, _q = _eval_pair(c0, dc, tn, zz, n)
                    if dp == 0:
                        break
                    dz = p / dp
                    zz -= dz
                    if abs(dz) <= newton_tol * max(1.0, abs(zz)):
                        conv = True
                        break
                if not conv:
                    ok = False
                    break
                corr.append(zz)
        if ok:
            dmin = float("inf")
            for i in range(n):
                for j in range(i + 1, n):
                    d = abs(corr[i] - corr[j])
                    if d < dmin:
                        dmin = d
            guard = dmin / collision
            for i in range(n):
                if not abs(corr[i] - pred[i]) < guard:
                    ok = False
                    break
        if ok:
            t = 1.0 if tn >= 1.0 else tn
            x = corr
            steps += 1
            if trace is not None:
                trace.append((t, tuple(x)))
            if h * 2.0 <= h0:
                h *= 2.0
        else:
            h *= 0.5
            if h < hmin:
                return x, False, t, steps
    return x, True, t, steps


def closure(gens, n, max_order):
    """Breadth-first closure of permutation image tuples.

    Product convention: ``g`` then ``s``, i.e. ``h[i] = s[g[i]]``. Returns
    the element list in discovery order, or None once ``max_order`` is
    exceeded.
    """
    ident = tuple(range(n))
    seen = {ident}
    out = [ident]
    head = 0
    gens = [tuple(g) for g in gens]
    while head < len(out):
        g = out[head]
        head += 1
        for s in gens:
            h = tuple([s[i] for i in g])
            if h not in seen:
                seen.add(h)
                out.append(h)
                if len(out) > max_order:
                    return None
    return out


def cycle_types(elements, n):
    """Set of cycle types (decreasing cycle lengths) over image tuples."""
    out = set()
    for e in elements:
        seen = [False] * n
        lens = []
        for s in range(n):
            if seen[s]:
                continue
            k = 0
            j = s
            while not seen[j]:
                seen[j] = True
                j = e[j]
                k += 1
            lens.append(k)
        lens.sort(reverse=True)
        out.add(tuple(lens))
    return out
