"""Independent oracles for the test suite: contour quadrature of the upper
incomplete Gamma definition (scipy-based, separate from the production
routes) and a tiny helper for Pochhammer products."""

import numpy as np
from scipy.integrate import quad


def gamma_upper_quadrature(a, z):
    """Gamma(a; z) by adaptive quadrature of the defining integral.

    Straight segment from z to a far-right real point, then a real tail to
    infinity. Principal branch throughout (valid while the segment stays
    off the negative real axis, which the test inputs do).
    """
    a = complex(a)
    z = complex(z)
    right = max(60.0, 2.0 * abs(z), 2.0 * a.real + 40.0)

    def seg(t):
        zt = z + t * (right - z)
        return np.exp((a - 1.0) * np.log(zt) - zt) * (right - z)

    re = quad(lambda t: seg(t).real, 0.0, 1.0, epsabs=1e-15, epsrel=1e-13,
              limit=400)[0]
    im = quad(lambda t: seg(t).imag, 0.0, 1.0, epsabs=1e-15, epsrel=1e-13,
              limit=400)[0]

    def tail_re(x):
        return np.exp((a.real - 1.0) * np.log(x) - x) * np.cos(a.imag * np.log(x))

    def tail_im(x):
        return np.exp((a.real - 1.0) * np.log(x) - x) * np.sin(a.imag * np.log(x))

    tre = quad(tail_re, right, np.inf, epsabs=1e-18, epsrel=1e-13, limit=400)[0]
    tim = quad(tail_im, right, np.inf, epsabs=1e-18, epsrel=1e-13, limit=400)[0]
    return complex(re + tre, im + tim)
