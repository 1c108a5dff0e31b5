# Jitted full conditionals and chain loops for the Gibbs samplers.
#
# Arrays are 0-based: position t here is time t+1. Positions below zero obey
# the zero convention (y = w = alpha = 0). Window positions past T-1 are not
# in the likelihood and are skipped.
import math

import numpy as np
from numba import njit

from .distributions import LN2_HI, LN2_LO, MAX_SPAN, _draw_grid, _draw_logw, _gamma

OK = 0
BAD_Y = 1
BAD_ALPHA = 2
BAD_W = 3
BAD_MU = 4

MU_FLOOR = 1e-300


@njit(cache=True)
def _lf(lf, k):
    if k < lf.shape[0]:
        return lf[k]
    return math.lgamma(k + 1.0)


@njit(cache=True)
def _xlogy(c, z):
    if c == 0.0:
        return 0.0
    return c * math.log(z)


@njit(cache=True)
def _xlog1m(c, z):
    if c == 0.0:
        return 0.0
    return c * math.log1p(-z)


@njit(cache=True, fastmath={"contract", "nsz", "arcp", "afn"}, error_model="numpy")
def _vlog(v, ebuf):
    """In-place natural log of positive normal doubles, written so that LLVM
    vectorises it (libm log is scalar). Absolute error below 1e-15.

    Mantissas are folded into [sqrt(2)/2, sqrt(2)) and expanded with the
    atanh series log(m) = 2 (s + s^3/3 + ... + s^23/23), s = (m-1)/(m+1).
    """
    n = v.shape[0]
    bits = v.view(np.uint64)
    for i in range(n):
        b = bits[i]
        e = np.int64(b >> np.uint64(52)) - 1023
        mb = (b & np.uint64(0xFFFFFFFFFFFFF)) | np.uint64(0x3FF0000000000000)
        big = mb > np.uint64(0x3FF6A09E667F3BCD)
        bits[i] = mb - np.uint64(0x0010000000000000) if big else mb
        ebuf[i] = e + 1 if big else e
    for i in range(n):
        f = v[i]
        s = (f - 1.0) / (f + 1.0)
        z = s * s
        c = 1.0 / 23
        c = c * z + 1.0 / 21
        c = c * z + 1.0 / 19
        c = c * z + 1.0 / 17
        c = c * z + 1.0 / 15
        c = c * z + 1.0 / 13
        c = c * z + 1.0 / 11
        c = c * z + 1.0 / 9
        c = c * z + 1.0 / 7
        c = c * z + 1.0 / 5
        c = c * z + 1.0 / 3
        ef = float(ebuf[i])
        v[i] = ef * LN2_HI + (2.0 * s + (2.0 * s * z * c + ef * LN2_LO))


# ---------------------------------------------------------------------------
# Type A


@njit(cache=True)
def a_resid(x, y, p, j):
    """x_j minus the latent sum over the window ending at j."""
    r = x[j]
    for i in range(p + 1):
        if j - i >= 0:
            r -= y[j - i]
    return r


@njit(cache=True)
def a_wsum(alpha, p, j):
    s = 0.0
    for i in range(p + 1):
        if j - i >= 0:
            s += alpha[j - i]
    return s


@njit(cache=True)
def a_y_logw(x, y, alpha, mu, p, t, lf, out):
    """Log-weights of y_t on 0..c_t written to ``out``; returns c_t (or -1)."""
    T = x.shape[0]
    jmax = min(t + p, T - 1)
    c = x[t]
    for j in range(t, jmax + 1):
        b = a_resid(x, y, p, j) + y[t]
        if b < c:
            c = b
    if c < 0:
        return -1
    if alpha[t] <= 0.0:
        out[0] = 0.0
        return 0
    lam = math.log(mu) + math.log(alpha[t])
    for v in range(c + 1):
        out[v] = v * lam - _lf(lf, v)
    for j in range(t, jmax + 1):
        b = a_resid(x, y, p, j) + y[t]
        lr = math.log(mu * (1.0 - a_wsum(alpha, p, j)))
        for v in range(c + 1):
            out[v] += (b - v) * lr - _lf(lf, b - v)
    return c


@njit(cache=True)
def a_update_y(gen, x, y, alpha, mu, p, t, lf, buf):
    c = a_y_logw(x, y, alpha, mu, p, t, lf, buf)
    if c < 0:
        return BAD_Y
    y[t] = _draw_logw(buf, c + 1, gen.random())
    return OK


@njit(cache=True)
def a_alpha_upper(alpha, p, t, T):
    """min(d_t, 1): the largest alpha_t keeping every window sum below one."""
    d = 1.0
    jmax = min(t + p, T - 1)
    for j in range(t, jmax + 1):
        dj = 1.0 - (a_wsum(alpha, p, j) - alpha[t])
        if dj < d:
            d = dj
    return d


@njit(cache=True)
def a_alpha_logdens(x, y, alpha, mu, p, t, a_al, b_al, pts, out):
    """Unnormalised log full conditional of alpha_t at each point of ``pts``."""
    T = x.shape[0]
    jmax = min(t + p, T - 1)
    nwin = jmax - t + 1
    r = np.empty(nwin)
    d = np.empty(nwin)
    for k in range(nwin):
        j = t + k
        r[k] = a_resid(x, y, p, j)
        d[k] = 1.0 - (a_wsum(alpha, p, j) - alpha[t])
    ca = a_al + y[t] - 1.0
    cb = b_al - 1.0
    lin = mu * (nwin - 1)
    for q in range(pts.shape[0]):
        a = pts[q]
        v = ca * math.log(a) + _xlog1m(cb, a) + lin * a
        for k in range(nwin):
            if a >= d[k]:
                v = -np.inf
                break
            if r[k] != 0:
                v += r[k] * math.log(d[k] - a)
        out[q] = v


@njit(cache=True)
def _mul_ipow(prod, base, d, hi, unit, r):
    """prod *= (d - hi * unit) ** r elementwise, by repeated squaring."""
    n = unit.shape[0]
    for q in range(n):
        base[q] = d - hi * unit[q]
    e = r
    while True:
        if e & 1:
            for q in range(n):
                prod[q] *= base[q]
        e >>= 1
        if e == 0:
            break
        for q in range(n):
            base[q] *= base[q]


@njit(cache=True)
def a_alpha_grid(x, y, alpha, mu, p, t, a_al, b_al, hi, unit, lu, l1u, out, work, ebuf):
    """``a_alpha_logdens`` on the midpoint grid ``hi * unit``.

    Uses tabulated logs for log(a) = log(hi) + log(u) and for the binding
    window, log(hi - a) = log(hi) + log(1 - u). The remaining window factors
    have integer exponents and are multiplied together before a single log,
    flushing whenever the running product could underflow.
    """
    T = x.shape[0]
    n = unit.shape[0]
    jmax = min(t + p, T - 1)
    nwin = jmax - t + 1
    r = np.empty(nwin, dtype=np.int64)
    d = np.empty(nwin)
    c_bind = 0.0
    n_free = 0
    for k in range(nwin):
        j = t + k
        rk = a_resid(x, y, p, j)
        dk = 1.0 - (a_wsum(alpha, p, j) - alpha[t])
        if dk == hi:
            c_bind += rk
        elif rk != 0:
            r[n_free] = rk
            d[n_free] = dk
            n_free += 1
    cb = b_al - 1.0
    if hi == 1.0:
        c_bind += cb
        cb = 0.0
    ca = a_al + y[t] - 1.0
    lin = mu * (nwin - 1)
    lhi = math.log(hi)
    for q in range(n):
        out[q] = ca * (lhi + lu[q]) + c_bind * (lhi + l1u[q]) + lin * hi * unit[q]
    prod = work[0]
    base = work[1]
    if cb != 0.0:
        for q in range(n):
            base[q] = 1.0 - hi * unit[q]
        _vlog(base, ebuf)
        for q in range(n):
            out[q] += cb * base[q]
    if n_free == 0:
        return
    prod[:] = 1.0
    budget = 0.0
    amax = hi * unit[n - 1]
    for k in range(n_free):
        # smallest factor sits at the largest grid point
        worst = r[k] * math.log(d[k] - amax)
        if worst < -600.0:
            for q in range(n):
                out[q] += r[k] * math.log(d[k] - hi * unit[q])
            continue
        if budget + worst < -600.0:
            _flush_log(prod, out, ebuf)
            budget = 0.0
        _mul_ipow(prod, base, d[k], hi, unit, r[k])
        budget += worst
    if budget < 0.0:
        _flush_log(prod, out, ebuf)


@njit(cache=True)
def _flush_log(prod, out, ebuf):
    _vlog(prod, ebuf)
    for q in range(prod.shape[0]):
        out[q] += prod[q]
        prod[q] = 1.0


@njit(cache=True)
def a_update_alpha(gen, x, y, alpha, mu, p, t, a_al, b_al, unit, lu, l1u, dens, work,
                   ebuf):
    T = x.shape[0]
    hi = a_alpha_upper(alpha, p, t, T)
    if hi <= 0.0:
        return BAD_ALPHA
    n = unit.shape[0]
    a_alpha_grid(x, y, alpha, mu, p, t, a_al, b_al, hi, unit, lu, l1u, dens, work, ebuf)
    a = _draw_grid(dens, 0.0, hi / n, gen.random(), gen.random())
    if not a > 0.0:
        return BAD_ALPHA
    alpha[t] = a
    return OK


@njit(cache=True)
def a_tied_upper(p, T):
    return 1.0 / (min(p, T - 1) + 1)


@njit(cache=True)
def a_tied_logdens(x, y, mu, p, a_al, b_al, pts, out):
    """Log conditional of a common alpha shared by every time point."""
    T = x.shape[0]
    R = np.zeros(p + 2)
    sy = 0.0
    sn = 0.0
    for t in range(T):
        n = min(t, p) + 1
        R[n] += a_resid(x, y, p, t)
        sy += y[t]
        sn += n
    ca = a_al + sy - 1.0
    cb = b_al - 1.0
    lin = mu * (sn - T)
    for q in range(pts.shape[0]):
        a = pts[q]
        v = ca * math.log(a) + _xlog1m(cb, a) + lin * a
        for n in range(1, p + 2):
            if R[n] != 0:
                z = 1.0 - n * a
                if z <= 0.0:
                    v = -np.inf
                    break
                v += R[n] * math.log(z)
        out[q] = v


@njit(cache=True)
def a_update_alpha_tied(gen, x, y, alpha, mu, p, a_al, b_al, unit, pts, dens):
    T = x.shape[0]
    hi = a_tied_upper(p, T)
    n = unit.shape[0]
    for q in range(n):
        pts[q] = hi * unit[q]
    a_tied_logdens(x, y, mu, p, a_al, b_al, pts, dens)
    a = _draw_grid(dens, 0.0, hi / n, gen.random(), gen.random())
    if not a > 0.0:
        return BAD_ALPHA
    alpha[:] = a
    return OK


@njit(cache=True)
def a_mu_params(x, y, alpha, p, a_mu, b_mu):
    """Gamma(shape, rate) full conditional of mu (rate carries a minus sign)."""
    T = x.shape[0]
    shape = a_mu
    rate = b_mu + T
    for s in range(T):
        lag = min(p, T - 1 - s)
        shape += x[s] - lag * y[s]
        rate -= lag * alpha[s]
    return shape, rate


# ---------------------------------------------------------------------------
# Type B


@njit(cache=True)
def b_wsum(w, p, j):
    s = 0
    for i in range(p + 1):
        if j - i >= 0:
            s += w[j - i]
    return s


@njit(cache=True)
def b_y_logw(x, y, w, alpha, mu, p, t, lf, out):
    N = b_wsum(w, p, t)
    m = min(x[t], N)
    if m < 0:
        return -1
    if alpha[t] <= 0.0:
        out[0] = 0.0
        return 0
    c = math.log(alpha[t]) - math.log(mu) - 2.0 * math.log1p(-alpha[t])
    xt = x[t]
    for v in range(m + 1):
        out[v] = v * c - _lf(lf, xt - v) - _lf(lf, v) - _lf(lf, N - v)
    return m


@njit(cache=True)
def b_update_y(gen, x, y, w, alpha, mu, p, t, lf, buf):
    m = b_y_logw(x, y, w, alpha, mu, p, t, lf, buf)
    if m < 0:
        return BAD_Y
    y[t] = _draw_logw(buf, m + 1, gen.random())
    return OK


@njit(cache=True)
def b_w_setup(y, w, alpha, mu, p, t, divisor):
    """Window bases (sum of the other w's), counts y_j, the lower bound h_t and
    the per-unit log factor of w_t."""
    T = y.shape[0]
    jmax = min(t + p, T - 1)
    nwin = jmax - t + 1
    base = np.empty(nwin, dtype=np.int64)
    yy = np.empty(nwin, dtype=np.int64)
    h = 0
    logc = math.log(mu / divisor)
    for k in range(nwin):
        j = t + k
        base[k] = b_wsum(w, p, j) - w[t]
        yy[k] = y[j]
        if yy[k] - base[k] > h:
            h = yy[k] - base[k]
        logc += math.log1p(-alpha[j])
    return base, yy, h, logc


@njit(cache=True)
def b_w_logw_at(base, yy, logc, v, lf):
    s = v * logc - _lf(lf, v)
    for k in range(base.shape[0]):
        n = base[k] + v
        s += _lf(lf, n) - _lf(lf, n - yy[k])
    return s


@njit(cache=True)
def b_update_w(gen, x, y, w, alpha, mu, p, t, divisor, log_tol, lf, buf):
    """Exact draw of w_t on h_t, h_t+1, ... with adaptive tail truncation.

    Returns (status, span, buf); ``buf`` may be reallocated when it is too
    small for the enumerated range.
    """
    base, yy, h, logc = b_w_setup(y, w, alpha, mu, p, t, divisor)
    n = 0
    m = -np.inf
    acc = 0.0
    prev = -np.inf
    prev_ratio = np.inf
    v = h
    while True:
        if n >= MAX_SPAN:
            return BAD_W, n, buf
        if n >= buf.shape[0]:
            nb = np.empty(2 * buf.shape[0])
            nb[: buf.shape[0]] = buf
            buf = nb
        lv = b_w_logw_at(base, yy, logc, v, lf)
        buf[n] = lv
        n += 1
        if lv > m:
            acc = acc * math.exp(m - lv) + 1.0 if m > -np.inf else 1.0
            m = lv
        elif lv > -np.inf:
            acc += math.exp(lv - m)
        if lv > -np.inf and prev > -np.inf:
            ratio = lv - prev
            if ratio < 0.0 and ratio <= prev_ratio:
                log_tail = lv + ratio - math.log1p(-math.exp(ratio))
                if log_tail < log_tol + m + math.log(acc):
                    break
            prev_ratio = ratio
        prev = lv
        v += 1
    k = _draw_logw(buf, n, gen.random())
    if k < 0:
        return BAD_W, n, buf
    w[t] = h + k
    return OK, n, buf


@njit(cache=True)
def b_alpha_logdens(x, y, w, mu, p, t, a_al, b_al, pts, out):
    N = b_wsum(w, p, t)
    ca = a_al + y[t] - 1.0
    cb = b_al + x[t] + N - 2.0 * y[t] - 1.0
    for q in range(pts.shape[0]):
        a = pts[q]
        out[q] = ca * math.log(a) + _xlog1m(cb, a) + mu * a


@njit(cache=True)
def b_alpha_grid(x, y, w, mu, p, t, a_al, b_al, la, l1a, pts, out):
    # same density as b_alpha_logdens on the fixed (0, 1) grid, logs precomputed
    N = b_wsum(w, p, t)
    ca = a_al + y[t] - 1.0
    cb = b_al + x[t] + N - 2.0 * y[t] - 1.0
    for q in range(pts.shape[0]):
        out[q] = ca * la[q] + cb * l1a[q] + mu * pts[q]


@njit(cache=True)
def b_update_alpha(gen, x, y, w, alpha, mu, p, t, a_al, b_al, la, l1a, pts, dens):
    b_alpha_grid(x, y, w, mu, p, t, a_al, b_al, la, l1a, pts, dens)
    n = pts.shape[0]
    a = _draw_grid(dens, 0.0, 1.0 / n, gen.random(), gen.random())
    if not (0.0 < a < 1.0):
        return BAD_ALPHA
    alpha[t] = a
    return OK


@njit(cache=True)
def b_tied_coefs(x, y, w, p):
    T = x.shape[0]
    sy = 0.0
    sb = 0.0
    for t in range(T):
        sy += y[t]
        sb += x[t] + b_wsum(w, p, t) - 2.0 * y[t]
    return sy, sb


@njit(cache=True)
def b_tied_logdens(x, y, w, mu, p, a_al, b_al, pts, out):
    T = x.shape[0]
    sy, sb = b_tied_coefs(x, y, w, p)
    ca = a_al + sy - 1.0
    cb = b_al + sb - 1.0
    for q in range(pts.shape[0]):
        a = pts[q]
        out[q] = ca * math.log(a) + _xlog1m(cb, a) + mu * T * a


@njit(cache=True)
def b_update_alpha_tied(gen, x, y, w, alpha, mu, p, a_al, b_al, la, l1a, pts, dens):
    T = x.shape[0]
    sy, sb = b_tied_coefs(x, y, w, p)
    ca = a_al + sy - 1.0
    cb = b_al + sb - 1.0
    for q in range(pts.shape[0]):
        dens[q] = ca * la[q] + cb * l1a[q] + mu * T * pts[q]
    n = pts.shape[0]
    a = _draw_grid(dens, 0.0, 1.0 / n, gen.random(), gen.random())
    if not (0.0 < a < 1.0):
        return BAD_ALPHA
    alpha[:] = a
    return OK


@njit(cache=True)
def b_mu_params(x, y, w, alpha, a_mu, b_mu, divisor):
    T = x.shape[0]
    shape = a_mu
    rate = b_mu + T + T / divisor
    for t in range(T):
        shape += x[t] + w[t] - y[t]
        rate -= alpha[t]
    return shape, rate


# ---------------------------------------------------------------------------
# INAR(1)


@njit(cache=True)
def i_y_logw(x, alpha, mu, t, lf, out):
    xp = x[t - 1]
    xt = x[t]
    m = min(xp, xt)
    la = math.log(alpha)
    l1 = math.log1p(-alpha)
    lm = math.log(mu * (1.0 - alpha))
    for v in range(m + 1):
        out[v] = (-_lf(lf, v) - _lf(lf, xp - v) + v * la + (xp - v) * l1
                  + (xt - v) * lm - _lf(lf, xt - v))
    return m


@njit(cache=True)
def i_update_y(gen, x, y, alpha, mu, t, lf, buf):
    m = i_y_logw(x, alpha, mu, t, lf, buf)
    y[t] = _draw_logw(buf, m + 1, gen.random())
    return OK


@njit(cache=True)
def i_alpha_coefs(x, y, mu, a_al, b_al):
    T = x.shape[0]
    ca = a_al - 1.0
    cb = b_al - 1.0
    for t in range(1, T):
        ca += y[t]
        cb += (x[t - 1] - y[t]) + (x[t] - y[t])
    return ca, cb, mu * (T - 1)


@njit(cache=True)
def i_alpha_logdens(x, y, mu, a_al, b_al, pts, out):
    ca, cb, lin = i_alpha_coefs(x, y, mu, a_al, b_al)
    for q in range(pts.shape[0]):
        a = pts[q]
        out[q] = ca * math.log(a) + _xlog1m(cb, a) + lin * a


@njit(cache=True)
def i_update_alpha(gen, x, y, mu, a_al, b_al, la, l1a, pts, dens):
    ca, cb, lin = i_alpha_coefs(x, y, mu, a_al, b_al)
    for q in range(pts.shape[0]):
        dens[q] = ca * la[q] + cb * l1a[q] + lin * pts[q]
    n = pts.shape[0]
    return _draw_grid(dens, 0.0, 1.0 / n, gen.random(), gen.random())


@njit(cache=True)
def i_mu_params(x, y, alpha, a_mu, b_mu):
    T = x.shape[0]
    shape = a_mu + x[0]
    for t in range(1, T):
        shape += x[t] - y[t]
    return shape, b_mu + 1.0 + (T - 1) * (1.0 - alpha)


# ---------------------------------------------------------------------------
# chains


@njit(cache=True)
def _unit_grid(n):
    u = np.empty(n)
    for q in range(n):
        u[q] = (q + 0.5) / n
    return u


@njit(cache=True)
def _draw_mu(gen, shape, rate):
    m = _gamma(gen, shape, rate)
    return m if m > MU_FLOOR else MU_FLOOR


@njit(cache=True)
def chain_type_a(gen, x, p, a_al, b_al, a_mu, b_mu, n_iter, burn, thin, grid_n,
                 tied, store, y, alpha, mu, lf):
    T = x.shape[0]
    n_keep = (n_iter - burn) // thin
    acols = 1 if tied else T
    mu_out = np.empty(n_keep)
    alpha_out = np.empty((n_keep, acols))
    y_out = np.empty((n_keep if store else 0, T), dtype=np.int64)
    buf = np.empty(x.max() + 1)
    unit = _unit_grid(grid_n)
    lu = np.log(unit)
    l1u = np.log1p(-unit)
    work = np.empty((2, grid_n))
    ebuf = np.empty(grid_n, dtype=np.int64)
    pts = np.empty(grid_n)
    dens = np.empty(grid_n)
    kept = 0
    for it in range(n_iter):
        for t in range(T):
            if a_update_y(gen, x, y, alpha, mu, p, t, lf, buf) != OK:
                return BAD_Y, it, t, mu, mu_out, alpha_out, y_out
        if tied:
            if a_update_alpha_tied(gen, x, y, alpha, mu, p, a_al, b_al, unit, pts, dens) != OK:
                return BAD_ALPHA, it, -1, mu, mu_out, alpha_out, y_out
        else:
            for t in range(T):
                if a_update_alpha(gen, x, y, alpha, mu, p, t, a_al, b_al, unit, lu, l1u,
                                  dens, work, ebuf) != OK:
                    return BAD_ALPHA, it, t, mu, mu_out, alpha_out, y_out
        shape, rate = a_mu_params(x, y, alpha, p, a_mu, b_mu)
        if not (shape > 0.0 and rate > 0.0):
            return BAD_MU, it, -1, mu, mu_out, alpha_out, y_out
        mu = _draw_mu(gen, shape, rate)
        if it >= burn and (it - burn + 1) % thin == 0 and kept < n_keep:
            mu_out[kept] = mu
            for c in range(acols):
                alpha_out[kept, c] = alpha[c]
            if store:
                y_out[kept, :] = y
            kept += 1
    return OK, n_iter, -1, mu, mu_out, alpha_out, y_out


@njit(cache=True)
def chain_type_b(gen, x, p, divisor, a_al, b_al, a_mu, b_mu, n_iter, burn, thin, grid_n,
                 tied, store, log_tol, y, w, alpha, mu, lf):
    T = x.shape[0]
    n_keep = (n_iter - burn) // thin
    acols = 1 if tied else T
    mu_out = np.empty(n_keep)
    alpha_out = np.empty((n_keep, acols))
    y_out = np.empty((n_keep if store else 0, T), dtype=np.int64)
    w_out = np.empty((n_keep if store else 0, T), dtype=np.int64)
    buf = np.empty(x.max() + 1)
    wbuf = np.empty(256)
    pts = _unit_grid(grid_n)
    la = np.log(pts)
    l1a = np.log1p(-pts)
    dens = np.empty(grid_n)
    max_span = 0
    kept = 0
    for it in range(n_iter):
        for t in range(T):
            if b_update_y(gen, x, y, w, alpha, mu, p, t, lf, buf) != OK:
                return BAD_Y, it, t, mu, mu_out, alpha_out, y_out, w_out, max_span
        for t in range(T):
            st, span, wbuf = b_update_w(gen, x, y, w, alpha, mu, p, t, divisor, log_tol, lf, wbuf)
            if span > max_span:
                max_span = span
            if st != OK:
                return BAD_W, it, t, mu, mu_out, alpha_out, y_out, w_out, max_span
        if tied:
            if b_update_alpha_tied(gen, x, y, w, alpha, mu, p, a_al, b_al, la, l1a, pts, dens) != OK:
                return BAD_ALPHA, it, -1, mu, mu_out, alpha_out, y_out, w_out, max_span
        else:
            for t in range(T):
                if b_update_alpha(gen, x, y, w, alpha, mu, p, t, a_al, b_al, la, l1a, pts, dens) != OK:
                    return BAD_ALPHA, it, t, mu, mu_out, alpha_out, y_out, w_out, max_span
        shape, rate = b_mu_params(x, y, w, alpha, a_mu, b_mu, divisor)
        if not (shape > 0.0 and rate > 0.0):
            return BAD_MU, it, -1, mu, mu_out, alpha_out, y_out, w_out, max_span
        mu = _draw_mu(gen, shape, rate)
        if it >= burn and (it - burn + 1) % thin == 0 and kept < n_keep:
            mu_out[kept] = mu
            for c in range(acols):
                alpha_out[kept, c] = alpha[c]
            if store:
                y_out[kept, :] = y
                w_out[kept, :] = w
            kept += 1
    return OK, n_iter, -1, mu, mu_out, alpha_out, y_out, w_out, max_span


@njit(cache=True)
def chain_inar1(gen, x, a_al, b_al, a_mu, b_mu, n_iter, burn, thin, grid_n, store,
                y, alpha, mu, lf):
    T = x.shape[0]
    n_keep = (n_iter - burn) // thin
    mu_out = np.empty(n_keep)
    alpha_out = np.empty((n_keep, 1))
    y_out = np.empty((n_keep if store else 0, T), dtype=np.int64)
    buf = np.empty(x.max() + 1)
    pts = _unit_grid(grid_n)
    la = np.log(pts)
    l1a = np.log1p(-pts)
    dens = np.empty(grid_n)
    kept = 0
    for it in range(n_iter):
        for t in range(1, T):
            i_update_y(gen, x, y, alpha, mu, t, lf, buf)
        a = i_update_alpha(gen, x, y, mu, a_al, b_al, la, l1a, pts, dens)
        if not (0.0 < a < 1.0):
            return BAD_ALPHA, it, -1, mu, alpha, mu_out, alpha_out, y_out
        alpha = a
        shape, rate = i_mu_params(x, y, alpha, a_mu, b_mu)
        mu = _draw_mu(gen, shape, rate)
        if it >= burn and (it - burn + 1) % thin == 0 and kept < n_keep:
            mu_out[kept] = mu
            alpha_out[kept, 0] = alpha
            if store:
                y_out[kept, :] = y
            kept += 1
    return OK, n_iter, -1, mu, alpha, mu_out, alpha_out, y_out
