"""Pure-Python fallback for the numeric hot loops.

Mirrors the compiled extension ``dzw._kernels`` function for function; the
active implementation is chosen in :mod:`dzw._backend`.  Both versions use the
same Neumaier compensation and the same summation order, so results agree to
the last few ulps and are deterministic within a backend.
"""

from cmath import exp as _cexp

BACKEND_NAME = "python"


def exp_dirichlet_sum(weights, lengths, s):
    """Compensated sum of ``w_j * exp(-s * L_j)`` in array order.

    ``weights`` is a sequence of complex, ``lengths`` a sequence of float of
    the same size, ``s`` complex.  Returns a complex.
    """
    sr = 0.0
    si = 0.0
    cr = 0.0
    ci = 0.0
    for j in range(len(weights)):
        w = complex(weights[j])
        t = w * _cexp(-s * lengths[j])
        x = t.real
        tmp = sr + x
        if abs(sr) >= abs(x):
            cr += (sr - tmp) + x
        else:
            cr += (x - tmp) + sr
        sr = tmp
        y = t.imag
        tmp = si + y
        if abs(si) >= abs(y):
            ci += (si - tmp) + y
        else:
            ci += (y - tmp) + si
        si = tmp
    return complex(sr + cr, si + ci)


def sym_power_row_sums(eigenvalues, kmax, nmax):
    """Row sums ``S_k = sum_{N=0}^{nmax} h_N(x^k)`` for k = 1..kmax.

    ``h_N`` is the complete homogeneous symmetric polynomial, evaluated by
    Newton's identities on the power sums of ``x^k``.  ``eigenvalues`` is a
    sequence of complex (typically all of modulus < 1).  Returns a list of
    complex of length ``kmax``.
    """
    n = len(eigenvalues)
    out = []
    for k in range(1, kmax + 1):
        if n == 0 or nmax == 0:
            out.append(1.0 + 0.0j)
            continue
        y = [complex(x) ** k for x in eigenvalues]
        # power sums p_i = sum_j y_j^i for i = 1..nmax
        p = [0.0 + 0.0j] * (nmax + 1)
        run = list(y)
        for i in range(1, nmax + 1):
            acc = 0.0 + 0.0j
            for j in range(n):
                acc += run[j]
            p[i] = acc
            if i < nmax:
                for j in range(n):
                    run[j] *= y[j]
        h = [0.0 + 0.0j] * (nmax + 1)
        h[0] = 1.0 + 0.0j
        for m in range(1, nmax + 1):
            acc = 0.0 + 0.0j
            for i in range(1, m + 1):
                acc += p[i] * h[m - i]
            h[m] = acc / m
        # compensated row sum, ascending N
        sr = 0.0
        si = 0.0
        cr = 0.0
        ci = 0.0
        for m in range(nmax + 1):
            x = h[m].real
            tmp = sr + x
            if abs(sr) >= abs(x):
                cr += (sr - tmp) + x
            else:
                cr += (x - tmp) + sr
            sr = tmp
            v = h[m].imag
            tmp = si + v
            if abs(si) >= abs(v):
                ci += (si - tmp) + v
            else:
                ci += (v - tmp) + si
            si = tmp
        out.append(complex(sr + cr, si + ci))
    return out
