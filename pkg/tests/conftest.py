"""Shared oracles. mpmath is used only here, as an independent reference."""

import mpmath as mp
import pytest

mp.mp.dps = 40


def mp_eta(s):
    """Dirichlet eta at 40 digits."""
    return complex(mp.altzeta(mp.mpc(s.real, s.imag)))


def mp_embedding(s, kappa, nu, terms=400):
    """Embedding from its Dirichlet-type form sum_m (-1)^m w_m (m+1)^-s,
    accelerated by mpmath's alternating-series summation.

    Only valid where the plain alternating series converges (Re s > 0).
    """
    k = mp.mpf(kappa)

    def ratio(x):
        a, b = 1 / k, 2 * x / k
        return (mp.e ** a + 2 + mp.e ** -a) / (mp.e ** a + mp.e ** b + mp.e ** -b + mp.e ** -a)

    z = mp.mpc(s.real, s.imag)
    return complex(mp.nsum(lambda m: (-1) ** int(m) * ratio(mp.mpf(m + 1) ** -nu)
                           * (m + 1) ** -z, [0, mp.inf], method="alternating"))


def mp_coefficients(kappa, n):
    """a_n and b_n from B(y)/B(0) = (1 + cosh(1/k)) / (cosh(1/k) + cosh(2y/k)).

    The denominator's Taylor coefficients in y^2 are b_n up to the factor
    1 + cosh(1/k); a is then the convolution inverse, done at 60 digits.
    """
    with mp.workdps(60):
        k = mp.mpf(kappa)
        d0 = 1 + mp.cosh(1 / k)
        b = [mp.mpf(1)] + [(2 / k) ** (2 * j) / mp.factorial(2 * j) / d0 for j in range(1, n + 1)]
        a = [mp.mpf(1)]
        for j in range(1, n + 1):
            a.append(-mp.fsum(b[i] * a[j - i] for i in range(1, j + 1)))
        return [float(x) for x in a], [float(x) for x in b]


@pytest.fixture(scope="session")
def first_zeros():
    """First three critical-line zeros found by mpmath's own zero finder."""
    return [float(mp.im(mp.zetazero(n))) for n in (1, 2, 3)]
