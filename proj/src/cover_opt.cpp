#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "prefcover/cover.hpp"
#include "prefcover/rng.hpp"

namespace prefcover {

namespace {

struct RestartOutcome {
    Cover cover;
    CoverScore score;
    Rational objective_exact;
    long long accepts = 0;
    std::vector<TraceRow> trace;
};

template <typename Num>
struct Engine {
    int r = 0, n = 0, rn = 0;
    CoverObjective obj = CoverObjective::sum_products;
    long long max_iters = 0;
    int trace_stride = 1;
    double scale = 1; // converts Num products to real units for the trace

    std::vector<Num> val;                  // 1-based vertex values
    std::vector<int> edge_of;              // 1-based vertex -> edge id
    std::vector<std::vector<int>> members; // edge -> sorted vertex list
    std::vector<Num> prod;                 // edge -> product of member values
    std::vector<Num> coprod;               // vertex -> product of its edge's other members
    Num sum{};
    int top[3] = {-1, -1, -1}; // edge ids of the three largest products

    void load(const std::vector<int>& assignment) {
        edge_of.assign(rn + 1, 0);
        members.assign(n, {});
        for (int j = 1; j <= rn; ++j) {
            edge_of[j] = assignment[j];
            members[assignment[j]].push_back(j);
        }
        prod.assign(n, Num{1});
        coprod.assign(rn + 1, Num{1});
        sum = Num{};
        for (int e = 0; e < n; ++e) {
            std::sort(members[e].begin(), members[e].end());
            Num p{1};
            for (int v : members[e]) p = p * val[v];
            prod[e] = p;
            sum = sum + p;
            for (int v : members[e]) {
                Num c{1};
                for (int u : members[e])
                    if (u != v) c = c * val[u];
                coprod[v] = c;
            }
        }
        refresh_top();
    }

    void refresh_top() {
        top[0] = top[1] = top[2] = -1;
        for (int e = 0; e < n; ++e) {
            if (top[0] < 0 || prod[e] > prod[top[0]]) {
                top[2] = top[1]; top[1] = top[0]; top[0] = e;
            } else if (top[1] < 0 || prod[e] > prod[top[1]]) {
                top[2] = top[1]; top[1] = e;
            } else if (top[2] < 0 || prod[e] > prod[top[2]]) {
                top[2] = e;
            }
        }
    }

    Num hmax() const { return prod[top[0]]; }

    // max product among edges other than e and f
    Num max_excluding(int e, int f) const {
        for (int s = 0; s < 3; ++s)
            if (top[s] >= 0 && top[s] != e && top[s] != f) return prod[top[s]];
        return Num{};
    }

    bool improving(int a, int b) const { // requires a < b, different edges
        if (obj == CoverObjective::sum_products)
            return coprod[a] < coprod[b];
        int e = edge_of[a], f = edge_of[b];
        Num pe = coprod[a] * val[b];
        Num pf = coprod[b] * val[a];
        Num nh = max_excluding(e, f);
        if (pe > nh) nh = pe;
        if (pf > nh) nh = pf;
        Num h = hmax();
        if (nh < h) return true;
        if (nh > h) return false;
        Num ns = sum - prod[e] - prod[f] + pe + pf;
        return ns < sum;
    }

    void apply(int a, int b) {
        int e = edge_of[a], f = edge_of[b];
        Num pe = coprod[a] * val[b];
        Num pf = coprod[b] * val[a];
        sum = sum - prod[e] - prod[f] + pe + pf;
        prod[e] = pe;
        prod[f] = pf;
        auto& Me = members[e];
        auto& Mf = members[f];
        *std::find(Me.begin(), Me.end(), a) = b;
        *std::find(Mf.begin(), Mf.end(), b) = a;
        std::sort(Me.begin(), Me.end());
        std::sort(Mf.begin(), Mf.end());
        edge_of[a] = f;
        edge_of[b] = e;
        for (int v : Me) {
            Num c{1};
            for (int u : Me)
                if (u != v) c = c * val[u];
            coprod[v] = c;
        }
        for (int v : Mf) {
            Num c{1};
            for (int u : Mf)
                if (u != v) c = c * val[u];
            coprod[v] = c;
        }
        refresh_top();
    }

    double objective_real() const {
        return obj == CoverObjective::sum_products
                   ? static_cast<double>(static_cast<long double>(sum) * scale)
                   : static_cast<double>(static_cast<long double>(hmax()) * scale);
    }

    // first-improvement sweep over pairs of the shuffled scan list, wrapping
    // around until a full pass finds nothing
    long long run(const std::vector<int>& scan, std::vector<TraceRow>& trace) {
        const long long total_pairs =
            static_cast<long long>(rn) * (rn - 1) / 2;
        long long accepts = 0;
        trace.push_back({0, objective_real(),
                         static_cast<double>(static_cast<long double>(hmax()) * scale)});
        if (rn < 2 || n < 2) return 0;
        int i = 0, j = 1;
        long long since_accept = 0;
        auto advance = [&]() {
            if (++j >= rn) {
                if (++i >= rn - 1) i = 0;
                j = i + 1;
            }
        };
        while (since_accept < total_pairs && accepts < max_iters) {
            int a = scan[i], b = scan[j];
            if (edge_of[a] != edge_of[b]) {
                if (a > b) std::swap(a, b);
                if (improving(a, b)) {
                    apply(a, b);
                    ++accepts;
                    since_accept = 0;
                    if (accepts % trace_stride == 0)
                        trace.push_back({accepts, objective_real(),
                                         static_cast<double>(
                                             static_cast<long double>(hmax()) * scale)});
                    advance();
                    continue;
                }
            }
            ++since_accept;
            advance();
        }
        trace.push_back({accepts, objective_real(),
                         static_cast<double>(static_cast<long double>(hmax()) * scale)});
        return accepts;
    }
};

std::vector<int> greedy_assignment(int r, int n) {
    // edge k takes the k-th smallest vertex plus the r-1 largest still free
    int rn = r * n;
    std::vector<int> assign(rn + 1, 0);
    for (int k = 1; k <= n; ++k) {
        assign[k] = k - 1;
        for (int t = 0; t < r - 1; ++t)
            assign[rn - (k - 1) * (r - 1) - t] = k - 1;
    }
    return assign;
}

std::vector<int> random_assignment(int r, int n, Rng& rng) {
    int rn = r * n;
    std::vector<int> verts(rn);
    for (int i = 0; i < rn; ++i) verts[i] = i + 1;
    shuffle_vec(verts, rng);
    std::vector<int> assign(rn + 1, 0);
    for (int i = 0; i < rn; ++i) assign[verts[i]] = i / r;
    return assign;
}

template <typename Num>
RestartOutcome run_restart(int r, const Rational& theta, int n,
                           const OptimizeParams& params, int restart,
                           const std::vector<Num>& val, double scale) {
    Rng rng = make_rng(params.seed, static_cast<std::uint64_t>(restart));
    int rn = r * n;
    std::vector<int> assign = restart == 0 ? greedy_assignment(r, n)
                                           : random_assignment(r, n, rng);
    std::vector<int> scan(rn);
    for (int i = 0; i < rn; ++i) scan[i] = i + 1;
    shuffle_vec(scan, rng);

    Engine<Num> eng;
    eng.r = r;
    eng.n = n;
    eng.rn = rn;
    eng.obj = params.objective;
    eng.max_iters = params.max_iters > 0 ? params.max_iters : 10'000'000LL;
    eng.trace_stride = std::max(1, params.trace_stride);
    eng.scale = scale;
    eng.val = val;
    eng.load(assign);

    RestartOutcome out;
    out.accepts = eng.run(scan, out.trace);

    out.cover.r = r;
    out.cover.n = n;
    out.cover.theta = theta;
    out.cover.edges = eng.members;
    out.cover.canonicalize();
    out.cover.validate();
    out.score = h_of(out.cover);
    out.objective_exact = params.objective == CoverObjective::sum_products
                              ? out.score.sum_products
                              : out.score.hmax;
    return out;
}

} // namespace

OptimizeResult optimize_cover(int r, const Rational& theta, int n,
                              const OptimizeParams& params) {
    if (r < 1 || n < 1) throw parameter_error("optimize_cover: r >= 1 and n >= 1 required");
    if (theta < 0 || theta * (r + 1) >= 1)
        throw std::domain_error("optimize_cover: theta must lie in [0, 1/(r+1))");
    if (params.restarts < 1) throw parameter_error("optimize_cover: restarts >= 1 required");

    // exact integer engine when products fit 128 bits comfortably, otherwise
    // floating point with an exact rescore at the end
    BigInt p = rat_num(theta), q = rat_den(theta);
    BigInt D = q * n * (r + 1);
    bool exact_ok = D <= BigInt(std::numeric_limits<long long>::max() / 2) && n <= 64;
    int bits = 0;
    if (exact_ok) {
        long long d = D.convert_to<long long>();
        while (d > 0) { d >>= 1; ++bits; }
        exact_ok = r * bits <= 120;
    }

    int rn = r * n;
    std::vector<RestartOutcome> outcomes(params.restarts);
    auto run_one = [&](int restart) {
        if (exact_ok) {
            long long pd = (p * n * (r + 1)).convert_to<long long>();
            long long slope = (q - p * (r + 1)).convert_to<long long>();
            std::vector<unsigned __int128> val(rn + 1, 1);
            for (int j = 1; j <= rn; ++j)
                val[j] = static_cast<unsigned __int128>(pd + slope * j);
            long double dd = static_cast<long double>(D.convert_to<double>());
            double scale = static_cast<double>(powl(1.0L / dd, r));
            return run_restart<unsigned __int128>(r, theta, n, params, restart, val, scale);
        }
        std::vector<double> val(rn + 1, 1);
        Cover probe;
        probe.r = r;
        probe.n = n;
        probe.theta = theta;
        for (int j = 1; j <= rn; ++j) val[j] = to_double(probe.vertex_value(j));
        return run_restart<double>(r, theta, n, params, restart, val, 1.0);
    };

    if (params.threads > 1) {
        std::vector<std::future<RestartOutcome>> futs;
        for (int t = 0; t < params.restarts; ++t)
            futs.push_back(std::async(std::launch::async, run_one, t));
        for (int t = 0; t < params.restarts; ++t) outcomes[t] = futs[t].get();
    } else {
        for (int t = 0; t < params.restarts; ++t) outcomes[t] = run_one(t);
    }

    // deterministic reduction: exact objective, then lexicographic edge list
    int best = 0;
    for (int t = 1; t < params.restarts; ++t) {
        const auto& a = outcomes[t];
        const auto& b = outcomes[best];
        bool better;
        if (a.objective_exact != b.objective_exact)
            better = a.objective_exact < b.objective_exact;
        else if (params.objective == CoverObjective::max_product &&
                 a.score.sum_products != b.score.sum_products)
            better = a.score.sum_products < b.score.sum_products;
        else
            better = a.cover.edges < b.cover.edges;
        if (better) best = t;
    }

    OptimizeResult res;
    res.best = outcomes[best].cover;
    res.score = outcomes[best].score;
    res.objective_value = outcomes[best].objective_exact;
    res.best_restart = best;
    res.trace = outcomes[best].trace;
    for (const auto& o : outcomes) res.accepted_moves += o.accepts;
    return res;
}

} // namespace prefcover
