"""Pure-Python GF(q) matrix kernels.

Fallback backend with the same surface as the compiled `gfcore` module.
Matrices are row-major `bytes` of element codes 0..q-1; `add` and `mul` are
flattened q x q operation tables, `neg` and `inv` length-q tables (inv[0] is
an unused placeholder).
"""


def mat_mul(m, k, n, a, b, mul, add, q):
    out = bytearray(m * n)
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
    return bytes(out)


def mat_add(a, b, add, q):
    return bytes(add[x * q + y] for x, y in zip(a, b))


def mat_neg(a, neg):
    return bytes(neg[x] for x in a)


def scal_mul(c, a, mul, q):
    row = c * q
    return bytes(mul[row + x] for x in a)


def axpy(c, a, b, mul, add, q):
    """c*a + b, elementwise."""
    row = c * q
    return bytes(add[mul[row + x] * q + y] for x, y in zip(a, b))


def rank(m, n, a, add, mul, neg, inv, q):
    w = bytearray(a)
    r = 0
    for col in range(n):
        piv = -1
        for i in range(r, m):
            if w[i * n + col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            pr, rr = piv * n, r * n
            for j in range(col, n):
                w[pr + j], w[rr + j] = w[rr + j], w[pr + j]
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


def rref(m, n, a, add, mul, neg, inv, q):
    """Reduced row echelon form; returns (data, pivot column tuple)."""
    w = bytearray(a)
    pivots = []
    r = 0
    for col in range(n):
        piv = -1
        for i in range(r, m):
            if w[i * n + col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            pr, rr = piv * n, r * n
            for j in range(n):
                w[pr + j], w[rr + j] = w[rr + j], w[pr + j]
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
    return bytes(w), tuple(pivots)
