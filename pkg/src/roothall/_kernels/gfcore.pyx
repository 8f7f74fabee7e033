# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(q) matrix kernels (hot path).

Same surface as `gfpure`; see that module for conventions.
"""


def mat_mul(int m, int k, int n, const unsigned char[::1] a,
            const unsigned char[::1] b, const unsigned char[::1] mul,
            const unsigned char[::1] add, int q):
    cdef bytearray out_b = bytearray(m * n)
    cdef unsigned char[::1] out = out_b
    cdef int i, j, t, arow, orow, mrow, brow
    cdef unsigned char x, y
    for i in range(m):
        arow = i * k
        orow = i * n
        for t in range(k):
            x = a[arow + t]
            if x == 0:
                continue
            mrow = x * q
            brow = t * n
            for j in range(n):
                y = b[brow + j]
                if y:
                    out[orow + j] = add[out[orow + j] * q + mul[mrow + y]]
    return bytes(out_b)


def mat_add(const unsigned char[::1] a, const unsigned char[::1] b,
            const unsigned char[::1] add, int q):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef bytearray out_b = bytearray(n)
    cdef unsigned char[::1] out = out_b
    for i in range(n):
        out[i] = add[a[i] * q + b[i]]
    return bytes(out_b)


def mat_neg(const unsigned char[::1] a, const unsigned char[::1] neg):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef bytearray out_b = bytearray(n)
    cdef unsigned char[::1] out = out_b
    for i in range(n):
        out[i] = neg[a[i]]
    return bytes(out_b)


def scal_mul(int c, const unsigned char[::1] a, const unsigned char[::1] mul,
             int q):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef int row = c * q
    cdef bytearray out_b = bytearray(n)
    cdef unsigned char[::1] out = out_b
    for i in range(n):
        out[i] = mul[row + a[i]]
    return bytes(out_b)


def axpy(int c, const unsigned char[::1] a, const unsigned char[::1] b,
         const unsigned char[::1] mul, const unsigned char[::1] add, int q):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef int row = c * q
    cdef bytearray out_b = bytearray(n)
    cdef unsigned char[::1] out = out_b
    for i in range(n):
        out[i] = add[mul[row + a[i]] * q + b[i]]
    return bytes(out_b)


def rank(int m, int n, const unsigned char[::1] a,
         const unsigned char[::1] add, const unsigned char[::1] mul,
         const unsigned char[::1] neg, const unsigned char[::1] inv, int q):
    cdef bytearray w_b = bytearray(a)
    cdef unsigned char[::1] w = w_b
    cdef int r = 0, col, i, j, piv, pr, rr, ir, frow
    cdef unsigned char x, f, pinv, tmp
    for col in range(n):
        piv = -1
        for i in range(r, m):
            if w[i * n + col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            pr = piv * n
            rr = r * n
            for j in range(col, n):
                tmp = w[pr + j]
                w[pr + j] = w[rr + j]
                w[rr + j] = tmp
        rr = r * n
        pinv = inv[w[rr + col]]
        for i in range(r + 1, m):
            ir = i * n
            x = w[ir + col]
            if x == 0:
                continue
            f = neg[mul[x * q + pinv]]
            frow = f * q
            for j in range(col, n):
                w[ir + j] = add[w[ir + j] * q + mul[frow + w[rr + j]]]
        r += 1
        if r == m:
            break
    return r


def rref(int m, int n, const unsigned char[::1] a,
         const unsigned char[::1] add, const unsigned char[::1] mul,
         const unsigned char[::1] neg, const unsigned char[::1] inv, int q):
    cdef bytearray w_b = bytearray(a)
    cdef unsigned char[::1] w = w_b
    cdef list pivots = []
    cdef int r = 0, col, i, j, piv, pr, rr, ir, srow, frow
    cdef unsigned char x, f, s, tmp
    for col in range(n):
        piv = -1
        for i in range(r, m):
            if w[i * n + col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            pr = piv * n
            rr = r * n
            for j in range(n):
                tmp = w[pr + j]
                w[pr + j] = w[rr + j]
                w[rr + j] = tmp
        rr = r * n
        s = inv[w[rr + col]]
        if s != 1:
            srow = s * q
            for j in range(n):
                w[rr + j] = mul[srow + w[rr + j]]
        for i in range(m):
            if i == r:
                continue
            ir = i * n
            x = w[ir + col]
            if x == 0:
                continue
            f = neg[x]
            frow = f * q
            for j in range(n):
                w[ir + j] = add[w[ir + j] * q + mul[frow + w[rr + j]]]
        pivots.append(col)
        r += 1
        if r == m:
            break
    return bytes(w_b), tuple(pivots)
