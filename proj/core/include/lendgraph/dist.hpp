#pragma once

namespace lendgraph::dist {

// Regularized incomplete beta I_x(a, b).
double incbeta(double a, double b, double x);

double normal_cdf(double z);

// Two-sided p-value for a Student-t statistic with df degrees of freedom.
double t_pvalue(double t, double df);

// P(F >= f) for an F statistic with (d1, d2) degrees of freedom.
double f_sf(double f, double d1, double d2);

// Standard normal pdf.
double normal_pdf(double z);

}  // namespace lendgraph::dist
