"""Reference computations that do not share code with the package.

Everything here is evaluated straight from the defining formulas in
30-digit mpmath, with plain binomials and Gamma calls.
"""

import math

import mpmath as mp
import numpy as np

mp.mp.dps = 30


def weighted_product(f, g, alpha):
    """H_k = sum_j C(k,j) Gamma(j a+1) Gamma((k-j) a+1) / Gamma(k a+1) F_j G_(k-j)."""
    a = mp.mpf(alpha)
    top = min(len(f), len(g))
    out = []
    for k in range(top):
        s = mp.mpf(0)
        for j in range(k + 1):
            s += math.comb(k, j) * mp.gamma(j * a + 1) * mp.gamma((k - j) * a + 1) * mp.mpf(f[j]) * mp.mpf(g[k - j])
        out.append(float(s / mp.gamma(k * a + 1)))
    return out


def weighted_power(f, n, alpha):
    """y**n by repeated weighted products, all in mpmath."""
    a = mp.mpf(alpha)
    lg = [mp.gamma(k * a + 1) / math.factorial(k) for k in range(len(f))]
    b = [mp.mpf(v) * g for v, g in zip(f, lg)]
    out = [mp.mpf(1)] + [mp.mpf(0)] * (len(f) - 1)
    for _ in range(n):
        out = [mp.fsum(out[j] * b[k - j] for j in range(k + 1)) for k in range(len(f))]
    return [float(v / g) for v, g in zip(out, lg)]


def cauchy(f, g):
    top = min(len(f), len(g))
    return list(np.convolve(f, g)[:top])


def classical_exp(a, lam):
    """exp(lam*y) coefficients by the textbook recurrence R_l = (lam/l) sum i A_i R_(l-i)."""
    r = [math.exp(lam * a[0])]
    for l in range(1, len(a)):
        r.append(lam / l * math.fsum(i * a[i] * r[l - i] for i in range(1, l + 1)))
    return r


def G(x):
    return math.gamma(x)


# printed closed forms, alpha-dependent
def a2_linear(c, alpha):
    """c Gamma(a+1) / (Gamma(2a+1)[Gamma(a+1)+2]) -- the common A_2 shape."""
    return c * G(alpha + 1) / (G(2 * alpha + 1) * (G(alpha + 1) + 2))


def lhs_bracket(m, alpha):
    """Gamma(m a+1)[Gamma((m-1)a+1) + 2 Gamma((m-2)a+1)] / (Gamma((m-1)a+1) Gamma((m-2)a+1))."""
    a = alpha
    return G(m * a + 1) * (G((m - 1) * a + 1) + 2 * G((m - 2) * a + 1)) / (G((m - 1) * a + 1) * G((m - 2) * a + 1))
