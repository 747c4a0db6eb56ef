"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

Same loops, same operation order, so both backends agree to the last bit
on IEEE hardware (checked in the test suite).
"""


def tricomi_series(z, nu, first_term, rel_tol, max_terms, out):
    for i in range(len(z)):
        zi = float(z[i])
        term = first_term
        s = term
        count = 1
        ok = False
        while True:
            term = term * zi / (count * (nu + count))
            if term == 0.0 or abs(term) < rel_tol * abs(s):
                ok = True
                break
            if count >= max_terms:
                break
            s += term
            count += 1
        if not ok:
            return i
        out[i] = s
    return -1


def laguerre_cn(F, x, dt, nsteps, theta):
    n = len(F)
    xs = [float(v) for v in x]
    cl = [0.0] * n
    cu = [0.0] * n
    for j in range(n):
        if j == 0:
            hr = xs[1] - xs[0]
            w = 0.5 * hr
        elif j == n - 1:
            hl = xs[j] - xs[j - 1]
            w = 0.5 * hl
        else:
            hl = xs[j] - xs[j - 1]
            hr = xs[j + 1] - xs[j]
            w = 0.5 * (hl + hr)
        if j > 0:
            cl[j] = 0.5 * (xs[j] + xs[j - 1]) / (hl * w)
        if j < n - 1:
            cu[j] = 0.5 * (xs[j] + xs[j + 1]) / (hr * w)
    cp = [0.0] * n
    den = [0.0] * n
    for j in range(n):
        a = -theta * dt * cl[j]
        b = 1.0 + theta * dt * (cl[j] + cu[j])
        c = -theta * dt * cu[j]
        den[j] = b if j == 0 else b - a * cp[j - 1]
        cp[j] = c / den[j]
    f = [float(v) for v in F]
    rhs = [0.0] * n
    for _ in range(nsteps):
        for j in range(n):
            lf = 0.0
            if j > 0:
                lf += cl[j] * (f[j - 1] - f[j])
            if j < n - 1:
                lf += cu[j] * (f[j + 1] - f[j])
            rhs[j] = f[j] + (1.0 - theta) * dt * lf
        rhs[0] = rhs[0] / den[0]
        for j in range(1, n):
            rhs[j] = (rhs[j] + theta * dt * cl[j] * rhs[j - 1]) / den[j]
        f[n - 1] = rhs[n - 1]
        for j in range(n - 2, -1, -1):
            f[j] = rhs[j] - cp[j] * f[j + 1]
    for j in range(n):
        F[j] = f[j]
