#pragma once

// Special-function kernel: cross-angle law, uniform-ball marginal,
// normal c.d.f., ball volumes and a Gauss hypergeometric series.
// Every function is pure; no tables or caches are kept between calls.

namespace l1pred::special {

/// Density of V = U1'U2 for independent uniform directions in R^d (d >= 2).
/// Zero outside [-1, 1]. For d = 2 the endpoints are integrable poles and
/// evaluate to +inf.
double cross_angle_pdf(int d, double v);

/// C.d.f. of V, clamped: 0 for v <= -1 and 1 for v >= 1.
double cross_angle_cdf(int d, double v);

/// Density of the first coordinate of a uniform draw on the unit ball in R^d.
double ball_marginal_pdf(int d, double t);

/// C.d.f. of the first coordinate of a uniform draw on the unit ball in R^d.
double ball_marginal_cdf(int d, double t);

/// Power series for 2F1(a, b; c; z), |z| < 1. Throws DomainError outside
/// the disc of convergence or when c is a nonpositive integer.
double hyp2f1(double a, double b, double c, double z);

/// Standard normal c.d.f.
double std_normal_cdf(double u);

/// Volume of a d-ball of radius m: m^d pi^{d/2} / Gamma(d/2 + 1).
double ball_volume(int d, double m);

/// Surface area of the unit sphere in R^d: 2 pi^{d/2} / Gamma(d/2).
double sphere_area(int d);

double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b).
double regularized_beta(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Student-t c.d.f. with nu degrees of freedom.
double student_t_cdf(double nu, double t);

}  // namespace l1pred::special
