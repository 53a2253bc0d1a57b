# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels.

Semantics mirror _pykern exactly: integer-output kernels are bit-identical,
float paths agree to summation-order rounding.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, fabs, floor, hypot, sqrt

cnp.import_array()

NAME = "compiled"

cdef double RAD2DEG = 57.29577951308232


def luma_bt601(const unsigned char[:, :, ::1] rgb):
    cdef Py_ssize_t h = rgb.shape[0], w = rgb.shape[1]
    out_arr = np.empty((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef Py_ssize_t y, x
    cdef unsigned int v
    with nogil:
        for y in range(h):
            for x in range(w):
                v = 299u * rgb[y, x, 0] + 587u * rgb[y, x, 1] + 114u * rgb[y, x, 2]
                out[y, x] = <unsigned char>((v + 500u) // 1000u)
    return out_arr


def box_downscale_u8(const unsigned char[:, ::1] img, Py_ssize_t out_h, Py_ssize_t out_w):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_arr = np.empty((out_h, out_w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef Py_ssize_t yy, xx, y0, y1, x0, x1, y, x
    cdef unsigned long long s, cnt
    with nogil:
        for yy in range(out_h):
            y0 = (yy * h) // out_h
            y1 = ((yy + 1) * h) // out_h
            for xx in range(out_w):
                x0 = (xx * w) // out_w
                x1 = ((xx + 1) * w) // out_w
                s = 0
                for y in range(y0, y1):
                    for x in range(x0, x1):
                        s += img[y, x]
                cnt = <unsigned long long>((y1 - y0) * (x1 - x0))
                out[yy, xx] = <unsigned char>((2 * s + cnt) // (2 * cnt))
    return out_arr


def blur_u8(const unsigned char[:, ::1] img, const double[::1] kx, const double[::1] ky):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t nx = kx.shape[0], ny = ky.shape[0]
    cdef Py_ssize_t rx = nx // 2, ry = ny // 2
    tmp_arr = np.empty((h, w), dtype=np.float64)
    out_arr = np.empty((h, w), dtype=np.uint8)
    cdef double[:, ::1] tmp = tmp_arr
    cdef unsigned char[:, ::1] out = out_arr
    cdef Py_ssize_t y, x, i, xx, yy
    cdef double acc
    with nogil:
        for y in range(h):
            for x in range(w):
                acc = 0.0
                for i in range(nx):
                    xx = x + i - rx
                    if xx < 0:
                        xx = 0
                    elif xx >= w:
                        xx = w - 1
                    acc += kx[i] * img[y, xx]
                tmp[y, x] = acc
        for y in range(h):
            for x in range(w):
                acc = 0.0
                for i in range(ny):
                    yy = y + i - ry
                    if yy < 0:
                        yy = 0
                    elif yy >= h:
                        yy = h - 1
                    acc += ky[i] * tmp[yy, x]
                acc = floor(acc + 0.5)
                if acc < 0:
                    acc = 0
                elif acc > 255:
                    acc = 255
                out[y, x] = <unsigned char>acc
    return out_arr


def sbs_half_rgb(const unsigned char[:, :, ::1] frame):
    cdef Py_ssize_t h = frame.shape[0], w = frame.shape[1]
    cdef Py_ssize_t half = w // 2
    out_arr = np.empty((h, w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_arr
    cdef Py_ssize_t y, x, c
    cdef unsigned int v
    with nogil:
        for y in range(h):
            for x in range(half):
                for c in range(3):
                    v = (<unsigned int>frame[y, 2 * x, c] + frame[y, 2 * x + 1, c] + 1) >> 1
                    out[y, x, c] = <unsigned char>v
                    out[y, half + x, c] = <unsigned char>v
    return out_arr


def cascade_sweep(
    const unsigned long long[:, ::1] ii,
    int win_w,
    int win_h,
    int stride,
    const double[::1] stage_thr,
    const int[::1] stage_start,
    const double[::1] weak_split,
    const double[::1] weak_left,
    const double[::1] weak_right,
    const int[::1] rect_start,
    const int[::1] rect_x,
    const int[::1] rect_y,
    const int[::1] rect_w,
    const int[::1] rect_h,
    const double[::1] rect_wt,
):
    cdef Py_ssize_t h = ii.shape[0] - 1, w = ii.shape[1] - 1
    cdef Py_ssize_t n_stages = stage_thr.shape[0]
    if w < win_w or h < win_h:
        return (np.zeros(0, np.int32), np.zeros(0, np.int32), np.zeros(0, np.float64))
    cdef Py_ssize_t nx = (w - win_w) // stride + 1
    cdef Py_ssize_t ny = (h - win_h) // stride + 1
    xs_arr = np.empty(nx * ny, dtype=np.int32)
    ys_arr = np.empty(nx * ny, dtype=np.int32)
    sc_arr = np.empty(nx * ny, dtype=np.float64)
    cdef int[::1] xs = xs_arr
    cdef int[::1] ys = ys_arr
    cdef double[::1] sc = sc_arr
    cdef Py_ssize_t n_out = 0
    cdef Py_ssize_t iy, ix, s, k, r
    cdef long long ox, oy, x0, y0, x1, y1
    cdef double margin, score, val, bottleneck, ratio
    cdef bint ok, any_weak
    with nogil:
        for iy in range(ny):
            oy = iy * stride
            for ix in range(nx):
                ox = ix * stride
                margin = 0.0
                bottleneck = 0.0
                any_weak = False
                ok = True
                for s in range(n_stages):
                    score = 0.0
                    for k in range(stage_start[s], stage_start[s + 1]):
                        val = 0.0
                        for r in range(rect_start[k], rect_start[k + 1]):
                            x0 = ox + rect_x[r]
                            y0 = oy + rect_y[r]
                            x1 = x0 + rect_w[r]
                            y1 = y0 + rect_h[r]
                            val += rect_wt[r] * <double>(
                                <long long>ii[y1, x1] - <long long>ii[y0, x1]
                                - <long long>ii[y1, x0] + <long long>ii[y0, x0]
                            )
                        if val < weak_split[k]:
                            score += weak_left[k]
                        else:
                            score += weak_right[k]
                        ratio = (val - weak_split[k]) / (fabs(weak_split[k]) + 1.0)
                        if weak_right[k] < weak_left[k]:
                            ratio = -ratio
                        if not any_weak or ratio < bottleneck:
                            bottleneck = ratio
                            any_weak = True
                    if score < stage_thr[s]:
                        ok = False
                        break
                    margin += score - stage_thr[s]
                if ok:
                    xs[n_out] = <int>ox
                    ys[n_out] = <int>oy
                    sc[n_out] = margin + bottleneck
                    n_out += 1
    return (xs_arr[:n_out].copy(), ys_arr[:n_out].copy(), sc_arr[:n_out].copy())


cdef void _hog_into(
    const unsigned char[:, ::1] win,
    Py_ssize_t oy,
    Py_ssize_t ox,
    Py_ssize_t h,
    Py_ssize_t w,
    int cell,
    int nbins,
    double clip,
    double eps,
    double* hist,
    double* desc,
) noexcept nogil:
    cdef Py_ssize_t cy = h // cell, cx = w // cell
    cdef Py_ssize_t y, x, xm, xp, ym, yp, i, j
    cdef double gx, gy, mag, deg, b, frac, n
    cdef double bw = 180.0 / nbins
    cdef long long b0
    cdef int i0, i1
    cdef Py_ssize_t cidx, by, bx, dy, dx, base, o
    for i in range(cy * cx * nbins):
        hist[i] = 0.0
    for y in range(h):
        ym = y - 1 if y > 0 else 0
        yp = y + 1 if y < h - 1 else h - 1
        for x in range(w):
            xm = x - 1 if x > 0 else 0
            xp = x + 1 if x < w - 1 else w - 1
            gx = <double>win[oy + y, ox + xp] - <double>win[oy + y, ox + xm]
            gy = <double>win[oy + yp, ox + x] - <double>win[oy + ym, ox + x]
            mag = hypot(gx, gy)
            deg = atan2(gy, gx) * RAD2DEG
            if deg < 0:
                deg += 180.0
            b = deg / bw - 0.5
            b0 = <long long>floor(b)
            frac = b - <double>b0
            i0 = <int>(((b0 % nbins) + nbins) % nbins)
            i1 = (i0 + 1) % nbins
            cidx = (y // cell) * cx + (x // cell)
            hist[cidx * nbins + i0] += mag * (1.0 - frac)
            hist[cidx * nbins + i1] += mag * frac
    o = 0
    for by in range(cy - 1):
        for bx in range(cx - 1):
            base = o
            for dy in range(2):
                for dx in range(2):
                    cidx = (by + dy) * cx + (bx + dx)
                    for j in range(nbins):
                        desc[o] = hist[cidx * nbins + j]
                        o += 1
            n = 0.0
            for j in range(base, o):
                n += desc[j] * desc[j]
            n = sqrt(n + eps * eps)
            for j in range(base, o):
                desc[j] = desc[j] / n
                if desc[j] > clip:
                    desc[j] = clip
            n = 0.0
            for j in range(base, o):
                n += desc[j] * desc[j]
            n = sqrt(n + eps * eps)
            for j in range(base, o):
                desc[j] = desc[j] / n


def hog_descriptor_f64(
    const unsigned char[:, ::1] win, int cell, int nbins, double clip, double eps
):
    cdef Py_ssize_t h = win.shape[0], w = win.shape[1]
    cdef Py_ssize_t cy = h // cell, cx = w // cell
    hist_arr = np.empty(cy * cx * nbins, dtype=np.float64)
    desc_arr = np.empty((cy - 1) * (cx - 1) * 4 * nbins, dtype=np.float64)
    cdef double[::1] hist = hist_arr
    cdef double[::1] desc = desc_arr
    with nogil:
        _hog_into(win, 0, 0, h, w, cell, nbins, clip, eps, &hist[0], &desc[0])
    return desc_arr


def hog_sweep(
    const unsigned char[:, ::1] level,
    int win_w,
    int win_h,
    int stride,
    int cell,
    int nbins,
    double clip,
    double eps,
    const double[::1] weights,
    double bias,
    double threshold,
):
    cdef Py_ssize_t h = level.shape[0], w = level.shape[1]
    if w < win_w or h < win_h:
        return (np.zeros(0, np.int32), np.zeros(0, np.int32), np.zeros(0, np.float64))
    cdef Py_ssize_t nx = (w - win_w) // stride + 1
    cdef Py_ssize_t ny = (h - win_h) // stride + 1
    cdef Py_ssize_t cy = win_h // cell, cx = win_w // cell
    cdef Py_ssize_t dlen = (cy - 1) * (cx - 1) * 4 * nbins
    hist_arr = np.empty(cy * cx * nbins, dtype=np.float64)
    desc_arr = np.empty(dlen, dtype=np.float64)
    xs_arr = np.empty(nx * ny, dtype=np.int32)
    ys_arr = np.empty(nx * ny, dtype=np.int32)
    sc_arr = np.empty(nx * ny, dtype=np.float64)
    cdef double[::1] hist = hist_arr
    cdef double[::1] desc = desc_arr
    cdef int[::1] xs = xs_arr
    cdef int[::1] ys = ys_arr
    cdef double[::1] sc = sc_arr
    cdef Py_ssize_t n_out = 0
    cdef Py_ssize_t iy, ix, j
    cdef double s
    with nogil:
        for iy in range(ny):
            for ix in range(nx):
                _hog_into(
                    level, iy * stride, ix * stride, win_h, win_w,
                    cell, nbins, clip, eps, &hist[0], &desc[0],
                )
                s = bias
                for j in range(dlen):
                    s += weights[j] * desc[j]
                if s > threshold:
                    xs[n_out] = <int>(ix * stride)
                    ys[n_out] = <int>(iy * stride)
                    sc[n_out] = s
                    n_out += 1
    return (xs_arr[:n_out].copy(), ys_arr[:n_out].copy(), sc_arr[:n_out].copy())
