#pragma once

#include <string>
#include <utility>
#include <vector>

#include "prefcover/cover.hpp"

namespace prefcover {

// Geometric-mean lower bound on h(r, theta); w(r,0) = (r/(e(r+1)))^r.
// Defined for theta in [0, 1/(r+1)], the right endpoint by its limit.
double w_func(int r, double theta);

// Smallest positive solution of theta*(1 - 1/(r+1) - (r-1)theta)^(r-1)
// = w(r, theta); the boundary 1/(r+1) when no interior root exists
// (r = 1, 2).  Cached per r.
double phi(int r);

// Unimodal envelope of w: constant w(r, phi(r)) up to phi(r), then w itself.
double H_func(int r, double theta);

// Stand-ins for f(r, theta) used by the g layer.
struct FModel {
    enum class Kind { exact_small_r, lower_H, upper_cover, table };
    Kind kind = Kind::lower_H;
    int r = 0;                                    // preference arity
    std::vector<std::pair<double, double>> knots; // (theta, value), theta ascending

    std::string describe() const;
};

FModel make_exact_model(int r);   // r in {2, 3}: f is the constant 1/2 resp. 1/9
FModel make_lower_H_model(int r); // f(r, theta) >= H(r-1, theta)
// Upper bounds h(Q) of witness covers (arity r-1), interpolated as a
// left-constant staircase; the exact endpoint value f(r, 1/r) = (1/r)^(r-1)
// closes the staircase on the right.
FModel make_upper_cover_model(int r, const std::vector<Cover>& covers);
FModel make_table_model(int r, std::vector<std::pair<double, double>> knots);

double f_model(const FModel& model, double theta);

// Root of beta^alpha = f(r, beta) on (0, 1/r]; requires 0 < alpha <= r-1.
double beta_of_alpha(const FModel& model, double alpha);

// g(r, alpha) = -1 / log_r f(r, beta(alpha)); alpha = 0 uses f(r, 0).
double g_of(const FModel& model, double alpha);

// ((r-1)/(e r))^(r-1) <= f(r, 0) <= (r-1)!/r^(r-1)
std::pair<double, double> bounds_f0(int r);

// Model-dependent estimate of the peak location of h(r-1, theta):
// smallest positive root of theta*(1 - 1/r - (r-2)theta)^(r-2)
// = f_model(r, theta).
double varphi_estimate(const FModel& model);

struct GCurveRow {
    double alpha = 0, beta = 0, g = 0;
};

std::vector<GCurveRow> g_table(const FModel& model, double alpha_lo,
                               double alpha_hi, int steps);

} // namespace prefcover
