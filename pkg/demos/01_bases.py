"""
Polynomial bases on [-1, 1]
===========================

Potentials are stored as Chebyshev series, monomials or normalized
Gegenbauer series. This walk-through converts between them and finds
the critical points of a series.
"""

import numpy as np

from polyenergy import (
    ChebyshevSeries,
    MonomialPolynomial,
    cheb_to_monomial,
    critical_points,
    expand_gegenbauer,
    monomial_to_cheb,
    pframe_coeffs,
    series_product,
)

# t^4 written in the Chebyshev basis: 3/8 T_0 + 1/2 T_2 + 1/8 T_4
t4 = MonomialPolynomial([0, 0, 0, 0, 1])
c = monomial_to_cheb(t4)
print("t^4 as Chebyshev:", np.round(c.coeffs, 12))
print("and back:", np.round(cheb_to_monomial(c).coeffs, 12))

# products use T_m T_n = (T_{m+n} + T_{|m-n|}) / 2
T2 = ChebyshevSeries.basis(2)
print("T_2 * T_2 =", series_product(T2, T2).coeffs)

# on S^2 the Gegenbauer parameter is 1/2 (Legendre); C_k(1) = 1 throughout
g = expand_gegenbauer(t4, 2, 4)
print("t^4 on S^2:", np.round(g.coeffs, 10))
t = np.linspace(-1, 1, 7)
print("max reconstruction error:", np.max(np.abs(g(t) - t**4)))

# |t|^p is not a polynomial, so its coefficients come from quadrature
print("|t|^1.5 on S^2, first terms:", np.round(pframe_coeffs(1.5, 2, 6).coeffs, 6))

f = ChebyshevSeries([1, 0, 1, 0, 1, 0, 3])
print("critical points of T0+T2+T4+3T6:", np.round(critical_points(f), 6))
