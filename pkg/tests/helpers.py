import math

import numpy as np

from spikedho import BasisParams, MatElemQuery, matel_gk
from spikedho.specfun import log_gamma


def reduced_element(m, n, alpha, p):
    """Element divided by B**(alpha/4) Gamma(gamma - alpha/2) / Gamma(gamma); a polynomial in alpha."""
    g = p.gamma_p
    x = matel_gk(MatElemQuery(m, n, alpha, p))
    return x * math.exp(log_gamma(g) - log_gamma(g - 0.5 * alpha) - 0.25 * alpha * math.log(p.B))


def degree_residual(m, n, p: BasisParams) -> float:
    """Interpolate on m+n+1 Chebyshev points, return the worst relative miss at fresh points."""
    deg = m + n
    hi = min(p.alpha_max - 0.05, 6.0)
    k = np.arange(deg + 1)
    nodes = 0.5 * hi * (1 - np.cos((2 * k + 1) * np.pi / (2 * deg + 2)))
    vals = [reduced_element(m, n, a, p) for a in nodes]
    poly = np.polynomial.Polynomial.fit(nodes, vals, deg)
    probes = np.linspace(0.03, hi - 0.03, 7)
    got = np.array([reduced_element(m, n, a, p) for a in probes])
    scale = max(np.max(np.abs(vals)), np.max(np.abs(got)))
    return float(np.max(np.abs(poly(probes) - got)) / scale)
