#pragma once

#include <json.hpp>
#include <vector>

#include "prefcover/preference.hpp"
#include "prefcover/rational.hpp"

namespace prefcover {

// Perfect matching of the grid {theta + (1/(r+1) - theta) * j/n : j in [rn]}
// into n edges of r vertices each.  Edges hold 1-based grid indices.
struct Cover {
    int r = 0;
    int n = 0;
    Rational theta;
    std::vector<std::vector<int>> edges;

    Rational vertex_value(int j) const;
    void canonicalize();   // sorts edge members and edges by first member
    void validate() const; // partition + theta range, throws parameter_error
};

struct CoverScore {
    Rational hmax;              // max over edges of the product of vertex values
    int argmax_edge = -1;       // index into edges after canonicalization
    Rational sum_products;      // sum over edges of the product
    double sum_log_vertices = 0; // sum over all vertices of -log(value)
};

CoverScore h_of(const Cover& q);

// Same edge structure transplanted onto the theta2 grid.
Cover similar(const Cover& q, const Rational& theta2);

// k-fold refinement: every edge e spawns e, e - 1/rkn, ..., e - (k-1)/rkn on
// the kn grid.  h is preserved exactly.
Cover replicate_cover(const Cover& q, int k);

struct HExactResult {
    Rational value;
    Cover witness;
    unsigned long long matchings = 0; // total matchings of the instance
};

// Exact minimum of h over all (r,theta,n)-covers by canonical matching
// enumeration.  Refuses with resource_error when (rn)!/(n!*(r!)^n) exceeds
// `budget`.
HExactResult h_exact(int r, const Rational& theta, int n, double budget = 1e7);

// Merge-saturate-pack pipeline turning an (r,m)-preference order into an
// (r-1, theta, n)-cover with h <= f_P(theta) + (r-1)*2^(r-1)/m,
// n = m - r*max(0, ceil(theta*m) - 1).
Cover preference_to_cover(const PreferenceOrder& P, const Rational& theta);

struct CoverToPreferenceResult {
    PreferenceOrder order;
    int m = 0; // scale parameter: order is on [r*m], r = q.r + 1
};

// Inverse direction: an (r-1, theta, n)-cover yields an (r, r*m)-preference
// order with f_P(theta) <= h(Q) + (r-1)*2^(r-1)/m, where m is the smallest
// solution of m - r*max(0, ceil(theta*m) - 1) = n.
CoverToPreferenceResult cover_to_preference(const Cover& q, long long m_budget = 1000000);

nlohmann::ordered_json cover_to_json(const Cover& q);
Cover cover_from_json(const nlohmann::ordered_json& j);

enum class CoverObjective { sum_products, max_product };

struct OptimizeParams {
    std::uint64_t seed = 0;
    int restarts = 8;
    long long max_iters = -1; // accepted-move cap per restart; <= 0: run to local optimum
    CoverObjective objective = CoverObjective::sum_products;
    int threads = 1;
    int trace_stride = 64; // record every k-th accepted move in the trace
};

struct TraceRow {
    long long iter = 0;
    double objective = 0;
    double hmax = 0;
};

struct OptimizeResult {
    Cover best;
    CoverScore score;         // exact rescore of the returned cover
    Rational objective_value; // exact value of the chosen objective
    int best_restart = -1;
    long long accepted_moves = 0; // across all restarts
    std::vector<TraceRow> trace;  // winning restart only
};

// Seeded multi-restart first-improvement local search over single-vertex
// swaps between edges.  Restart 0 starts from the smallest-with-largest
// greedy matching, the rest from uniform random matchings.  Hot loop runs on
// integer/double numerators; the returned cover is rescored exactly.
OptimizeResult optimize_cover(int r, const Rational& theta, int n,
                              const OptimizeParams& params = {});

} // namespace prefcover
