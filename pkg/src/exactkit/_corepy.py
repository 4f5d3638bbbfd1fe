"""Pure-Python kernels for dense arithmetic mod a prime.

These two functions are the hot path of the whole package: every solve,
kernel, image and subspace operation reduces to them.  A compiled Cython
twin lives in ``_corec.pyx``; both implementations must stay
behaviourally identical (see tests/test_kernels.py).

Matrices are flat row-major sequences of ints already reduced mod p.
"""


def mat_mul(a, ar, ac, b, br, bc, p):
    """Return the flat row-major product of an ar x ac and an ac x bc matrix."""
    if ac != br:
        raise ValueError("mat_mul: inner dimensions differ (%d != %d)" % (ac, br))
    out = [0] * (ar * bc)
    for i in range(ar):
        abase = i * ac
        obase = i * bc
        for k in range(ac):
            aval = a[abase + k]
            if aval:
                bbase = k * bc
                for j in range(bc):
                    out[obase + j] += aval * b[bbase + j]
    for i in range(ar * bc):
        out[i] %= p
    return out


def rref(data, rows, cols, p):
    """Reduced row echelon form mod p.

    Returns ``(m, pivots)`` where m is the reduced flat matrix and pivots
    the strictly increasing list of pivot column indices.
    """
    m = [x % p for x in data]
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if m[i * cols + c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                m[r * cols + j], m[piv * cols + j] = m[piv * cols + j], m[r * cols + j]
        inv = pow(m[r * cols + c], p - 2, p)
        if inv != 1:
            for j in range(c, cols):
                m[r * cols + j] = (m[r * cols + j] * inv) % p
        for i in range(rows):
            if i != r:
                f = m[i * cols + c]
                if f:
                    for j in range(c, cols):
                        m[i * cols + j] = (m[i * cols + j] - f * m[r * cols + j]) % p
        pivots.append(c)
        r += 1
    return m, pivots
