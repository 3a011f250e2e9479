#include "prefcover/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace prefcover {

namespace {

double xlogx(double y) { return y <= 0 ? 0.0 : y * std::log(y); }

// bisection on [lo, hi] with f(lo) < 0 < f(hi); 200 halvings or width 1e-15
template <typename F>
double bisect(double lo, double hi, F f) {
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < 0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// smallest root of f on (0, top); boundary `top` when f never changes sign
template <typename F>
double first_root(double top, F f) {
    const int panels = 10000;
    double prev_x = 0, prev_v = f(1e-300);
    for (int i = 1; i < panels; ++i) {
        double x = top * i / panels;
        double v = f(x);
        if (prev_v < 0 && v >= 0) return bisect(prev_x, x, f);
        prev_x = x;
        prev_v = v;
    }
    return top;
}

} // namespace

double w_func(int r, double theta) {
    if (r < 1) throw parameter_error("w: r >= 1 required");
    double top = 1.0 / (r + 1);
    if (theta < -1e-15 || theta > top + 1e-15)
        throw std::domain_error("w: theta must lie in [0, 1/(r+1)]");
    theta = std::clamp(theta, 0.0, top);
    if (top - theta < 1e-12) return std::exp(-r * std::log(r + 1.0));
    double a = 1.0 - top - (r - 1) * theta;
    double lnw = -r + (xlogx(a) - xlogx(theta)) / (top - theta);
    return std::exp(lnw);
}

double phi(int r) {
    if (r < 1) throw parameter_error("phi: r >= 1 required");
    static std::map<int, double> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(r);
    if (it != cache.end()) return it->second;
    double top = 1.0 / (r + 1);
    auto gap = [r, top](double th) {
        double base = 1.0 - top - (r - 1) * th;
        return th * std::pow(base, r - 1) - w_func(r, th);
    };
    double root = first_root(top, gap);
    cache[r] = root;
    return root;
}

double H_func(int r, double theta) {
    double p = phi(r);
    return theta <= p ? w_func(r, p) : w_func(r, theta);
}

std::string FModel::describe() const {
    switch (kind) {
        case Kind::exact_small_r: return "exact-small-r(r=" + std::to_string(r) + ")";
        case Kind::lower_H: return "lower-H(r=" + std::to_string(r) + ")";
        case Kind::upper_cover: return "upper-cover(r=" + std::to_string(r) + ")";
        case Kind::table: return "table(r=" + std::to_string(r) + ")";
    }
    return "?";
}

FModel make_exact_model(int r) {
    if (r != 2 && r != 3)
        throw parameter_error("exact-small-r model exists only for r = 2 or 3");
    FModel m;
    m.kind = FModel::Kind::exact_small_r;
    m.r = r;
    return m;
}

FModel make_lower_H_model(int r) {
    if (r < 2) throw parameter_error("lower-H model: r >= 2 required");
    FModel m;
    m.kind = FModel::Kind::lower_H;
    m.r = r;
    return m;
}

FModel make_upper_cover_model(int r, const std::vector<Cover>& covers) {
    if (r < 2) throw parameter_error("upper-cover model: r >= 2 required");
    FModel m;
    m.kind = FModel::Kind::upper_cover;
    m.r = r;
    for (const auto& q : covers) {
        if (q.r != r - 1)
            throw parameter_error("upper-cover model: covers must have arity r-1");
        m.knots.emplace_back(to_double(q.theta), to_double(h_of(q).hmax));
    }
    m.knots.emplace_back(1.0 / r, std::pow(1.0 / r, r - 1));
    std::sort(m.knots.begin(), m.knots.end());
    return m;
}

FModel make_table_model(int r, std::vector<std::pair<double, double>> knots) {
    if (r < 2) throw parameter_error("table model: r >= 2 required");
    if (knots.empty()) throw parameter_error("table model: at least one knot required");
    std::sort(knots.begin(), knots.end());
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (knots[i].second > knots[i - 1].second + 1e-12)
            throw parameter_error("table model: values must be non-increasing in theta");
    FModel m;
    m.kind = FModel::Kind::table;
    m.r = r;
    m.knots = std::move(knots);
    return m;
}

double f_model(const FModel& model, double theta) {
    const double top = 1.0 / model.r;
    if (theta < -1e-15 || theta > top + 1e-15)
        throw std::domain_error("f_model: theta must lie in [0, 1/r]");
    theta = std::clamp(theta, 0.0, top);
    switch (model.kind) {
        case FModel::Kind::exact_small_r:
            return model.r == 2 ? 0.5 : 1.0 / 9.0;
        case FModel::Kind::lower_H:
            return H_func(model.r - 1, theta);
        case FModel::Kind::upper_cover: {
            if (theta < model.knots.front().first - 1e-12)
                throw std::domain_error("upper-cover model: theta below first knot");
            double v = model.knots.front().second;
            for (const auto& [t, h] : model.knots)
                if (t <= theta + 1e-12) v = h; else break;
            return v;
        }
        case FModel::Kind::table: {
            if (theta <= model.knots.front().first) return model.knots.front().second;
            if (theta >= model.knots.back().first) return model.knots.back().second;
            for (std::size_t i = 1; i < model.knots.size(); ++i) {
                if (theta <= model.knots[i].first) {
                    auto [t0, v0] = model.knots[i - 1];
                    auto [t1, v1] = model.knots[i];
                    double lam = (theta - t0) / (t1 - t0);
                    return v0 + lam * (v1 - v0);
                }
            }
            return model.knots.back().second;
        }
    }
    throw std::logic_error("f_model: unknown kind");
}

double beta_of_alpha(const FModel& model, double alpha) {
    int r = model.r;
    if (alpha <= 0 || alpha > r - 1 + 1e-12)
        throw std::domain_error("beta_of_alpha: alpha must lie in (0, r-1]");
    // log-space bisection on G(x) = alpha*x - ln f(e^x), increasing in x
    double hi = std::log(1.0 / r);
    double lo = -690.0; // underflow floor, beta ~ 1e-300
    auto G = [&](double x) {
        return alpha * x - std::log(f_model(model, std::exp(x)));
    };
    if (G(lo) >= 0) return std::exp(lo);
    double x = bisect(lo, hi, G);
    return std::exp(x);
}

double g_of(const FModel& model, double alpha) {
    int r = model.r;
    if (alpha < 0 || alpha > r - 1 + 1e-12)
        throw std::domain_error("g: alpha must lie in [0, r-1]");
    double f = alpha == 0 ? f_model(model, 0.0)
                          : f_model(model, beta_of_alpha(model, alpha));
    return -std::log(r) / std::log(f);
}

std::pair<double, double> bounds_f0(int r) {
    if (r < 2) throw parameter_error("bounds_f0: r >= 2 required");
    double lo = std::pow((r - 1.0) / (std::exp(1.0) * r), r - 1);
    double hi = 1.0;
    for (int i = 2; i < r; ++i) hi *= i;
    hi /= std::pow(static_cast<double>(r), r - 1);
    return {lo, hi};
}

double varphi_estimate(const FModel& model) {
    int rc = model.r - 1; // cover arity whose h the model bounds
    if (rc < 1) throw parameter_error("varphi_estimate: model arity too small");
    double top = 1.0 / (rc + 1);
    auto gap = [&](double th) {
        double base = 1.0 - top - (rc - 1) * th;
        return th * std::pow(base, rc - 1) - f_model(model, th);
    };
    return first_root(top, gap);
}

std::vector<GCurveRow> g_table(const FModel& model, double alpha_lo,
                               double alpha_hi, int steps) {
    if (steps < 1) throw parameter_error("g_table: steps >= 1 required");
    if (alpha_lo < 0 || alpha_hi < alpha_lo)
        throw parameter_error("g_table: need 0 <= alpha_lo <= alpha_hi");
    std::vector<GCurveRow> rows;
    rows.reserve(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        GCurveRow row;
        row.alpha = alpha_lo + (alpha_hi - alpha_lo) * i / steps;
        row.beta = row.alpha == 0 ? 0.0 : beta_of_alpha(model, row.alpha);
        row.g = g_of(model, row.alpha);
        rows.push_back(row);
    }
    return rows;
}

} // namespace prefcover
