#include "prefcover/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace prefcover {

Rational Cover::vertex_value(int j) const {
    // theta + (1/(r+1) - theta) * j / n
    Rational step = (Rational(1, r + 1) - theta) / n;
    return theta + step * j;
}

void Cover::canonicalize() {
    for (auto& e : edges) std::sort(e.begin(), e.end());
    std::sort(edges.begin(), edges.end());
}

void Cover::validate() const {
    if (r < 1 || n < 1) throw parameter_error("cover needs r >= 1 and n >= 1");
    if (theta < 0 || theta * (r + 1) >= 1)
        throw parameter_error("cover: theta must lie in [0, 1/(r+1))");
    if (static_cast<int>(edges.size()) != n)
        throw parameter_error("cover: expected n edges");
    std::vector<char> seen(r * n + 1, 0);
    for (const auto& e : edges) {
        if (static_cast<int>(e.size()) != r)
            throw parameter_error("cover: every edge must have r vertices");
        for (int v : e) {
            if (v < 1 || v > r * n || seen[v])
                throw parameter_error("cover: edges must partition [rn]");
            seen[v] = 1;
        }
    }
}

CoverScore h_of(const Cover& q) {
    q.validate();
    CoverScore s;
    s.sum_products = 0;
    bool first = true;
    for (int i = 0; i < q.n; ++i) {
        Rational prod = 1;
        for (int v : q.edges[i]) prod *= q.vertex_value(v);
        s.sum_products += prod;
        if (first || prod > s.hmax) {
            s.hmax = prod;
            s.argmax_edge = i;
            first = false;
        }
    }
    s.sum_log_vertices = 0;
    for (int j = 1; j <= q.r * q.n; ++j)
        s.sum_log_vertices += -std::log(to_double(q.vertex_value(j)));
    return s;
}

Cover similar(const Cover& q, const Rational& theta2) {
    q.validate();
    Cover out = q;
    out.theta = theta2;
    out.validate();
    return out;
}

Cover replicate_cover(const Cover& q, int k) {
    q.validate();
    if (k < 1) throw parameter_error("replicate_cover: k >= 1 required");
    Cover out;
    out.r = q.r;
    out.n = q.n * k;
    out.theta = q.theta;
    for (const auto& e : q.edges) {
        for (int t = 0; t < k; ++t) {
            std::vector<int> ne;
            ne.reserve(q.r);
            for (int v : e) ne.push_back(v * k - t);
            out.edges.push_back(std::move(ne));
        }
    }
    out.canonicalize();
    out.validate();
    return out;
}

namespace {

BigInt matching_count(int r, int n) {
    // (rn)! / (n! * (r!)^n)
    BigInt num = 1;
    for (int i = 2; i <= r * n; ++i) num *= i;
    BigInt den = 1;
    for (int i = 2; i <= n; ++i) den *= i;
    BigInt rf = 1;
    for (int i = 2; i <= r; ++i) rf *= i;
    for (int i = 0; i < n; ++i) den *= rf;
    return num / den;
}

struct GridNumerators {
    // vertex j carries value num[j] / D with D = den(theta) * n * (r+1)
    std::vector<long long> num; // 1-based
    BigInt D;
    int bits_per_factor = 0;
};

GridNumerators grid_numerators(int r, const Rational& theta, int n) {
    GridNumerators g;
    BigInt p = rat_num(theta), q = rat_den(theta);
    BigInt D = q * n * (r + 1);
    if (D > BigInt(std::numeric_limits<long long>::max() / 2))
        throw resource_error("cover grid: theta denominator too large for exact scan");
    long long pd = (p * n * (r + 1)).convert_to<long long>();
    long long slope = (q - p * (r + 1)).convert_to<long long>();
    g.D = D;
    g.num.assign(r * n + 1, 0);
    for (int j = 1; j <= r * n; ++j) g.num[j] = pd + slope * j;
    long long mx = g.num[r * n];
    int bits = 0;
    while (mx > 0) { mx >>= 1; ++bits; }
    g.bits_per_factor = bits;
    return g;
}

struct ExactSearch {
    int r, n, rn;
    const std::vector<long long>* val;
    std::vector<char> used;
    std::vector<std::vector<int>> cur;
    std::vector<std::vector<int>> best_edges;
    unsigned __int128 best = 0;
    bool found = false;
    unsigned long long leaves = 0;
    unsigned __int128 cur_max = 0;

    void run() {
        cur.clear();
        step(0);
    }

    void step(int assigned) {
        if (assigned == n) {
            // strict improvement only; ties keep the first (lexicographically
            // least) witness
            best = cur_max;
            best_edges = cur;
            found = true;
            ++leaves;
            return;
        }
        int v0 = 1;
        while (used[v0]) ++v0;
        used[v0] = 1;
        cur.push_back({v0});
        extend(assigned, v0, (unsigned __int128)(*val)[v0]);
        cur.pop_back();
        used[v0] = 0;
    }

    void extend(int assigned, int last, unsigned __int128 prod) {
        if (static_cast<int>(cur.back().size()) == r) {
            if (found && prod >= best) return; // cannot strictly improve
            unsigned __int128 save = cur_max;
            if (prod > cur_max) cur_max = prod;
            step(assigned + 1);
            cur_max = save;
            return;
        }
        for (int v = last + 1; v <= rn; ++v) {
            if (used[v]) continue;
            used[v] = 1;
            cur.back().push_back(v);
            extend(assigned, v, prod * (unsigned __int128)(*val)[v]);
            cur.back().pop_back();
            used[v] = 0;
        }
    }
};

} // namespace

HExactResult h_exact(int r, const Rational& theta, int n, double budget) {
    if (r < 1 || n < 1) throw parameter_error("h_exact: r >= 1 and n >= 1 required");
    if (theta < 0 || theta * (r + 1) >= 1)
        throw std::domain_error("h_exact: theta must lie in [0, 1/(r+1))");
    BigInt count = matching_count(r, n);
    if (Rational(count) > Rational(budget * 1e0))
        throw resource_error("h_exact: matching count " + count.str() +
                             " exceeds budget " + std::to_string((long long)budget));
    GridNumerators g = grid_numerators(r, theta, n);
    if (r * g.bits_per_factor > 126)
        throw resource_error("h_exact: edge products exceed 128-bit range");

    ExactSearch s;
    s.r = r;
    s.n = n;
    s.rn = r * n;
    s.val = &g.num;
    s.used.assign(s.rn + 1, 0);
    s.run();

    HExactResult out;
    out.matchings = count > BigInt(UINT64_MAX) ? UINT64_MAX
                                               : count.convert_to<unsigned long long>();
    out.witness.r = r;
    out.witness.n = n;
    out.witness.theta = theta;
    out.witness.edges = s.best_edges;
    out.witness.canonicalize();
    out.witness.validate();
    out.value = h_of(out.witness).hmax;
    return out;
}

// ---------------------------------------------------------------------------
// preference order -> cover
// ---------------------------------------------------------------------------

Cover preference_to_cover(const PreferenceOrder& P, const Rational& theta) {
    P.validate();
    const int r = P.r, m = P.m;
    if (r < 2) throw parameter_error("preference_to_cover: r >= 2 required");
    if (theta < 0 || theta * r >= 1)
        throw std::domain_error("preference_to_cover: theta must lie in [0, 1/r)");
    long long k = std::max<long long>(0, ceil_ll(theta * m) - 1);
    long long n = m - r * k;
    if (n < 1) throw parameter_error("preference_to_cover: theta too large for this m");

    const long long rm = static_cast<long long>(r) * m;
    // merge the r orders onto the common grid {i/rm}: tuple x becomes
    // {x_1, x_2 - 1/rm, ..., x_r - (r-1)/rm}
    auto tuples = tuples_of(P);
    std::vector<std::vector<int>> edges;
    edges.reserve(m);
    for (const auto& t : tuples) {
        std::vector<int> e(r);
        for (int i = 0; i < r; ++i)
            e[i] = r * t.pos[i] - i;
        std::sort(e.begin(), e.end());
        edges.push_back(std::move(e));
    }

    const long long A_hi = r * k;                    // A = [1, rk]
    const long long B_lo = rm - m + 1;               // B = top m grid points
    const long long C_lo = rm - m - r * (r - 2) * k; // C sits just below B
    auto inB = [&](int v) { return v >= B_lo; };
    auto inC = [&](int v) { return v > C_lo && v < B_lo; };

    auto count_B = [&](const std::vector<int>& e) {
        int c = 0;
        for (int v : e) c += inB(v);
        return c;
    };
    auto meets_A = [&](const std::vector<int>& e) {
        return e.front() <= A_hi; // sorted edges
    };

    // B-saturation: move top vertices around until every edge meets B once
    for (long long guard = 0;; ++guard) {
        if (guard > 4LL * m) throw std::logic_error("B-saturation failed to terminate");
        int ei = -1;
        for (int i = 0; i < m; ++i)
            if (count_B(edges[i]) == 0) { ei = i; break; }
        if (ei < 0) break;
        int fi = -1;
        for (int i = 0; i < m; ++i)
            if (count_B(edges[i]) >= 2) { fi = i; break; }
        if (fi < 0) throw std::logic_error("B-saturation: no donor edge");
        int u = edges[ei].back();          // greatest element of e (not in B)
        int v = edges[fi][r - 2];          // second-greatest element of f (in B)
        edges[ei].back() = v;
        edges[fi][r - 2] = u;
        std::sort(edges[ei].begin(), edges[ei].end());
        std::sort(edges[fi].begin(), edges[fi].end());
    }

    // C-packing: concentrate C vertices on the edges that meet A
    if (k > 0 && r > 2) {
        for (long long guard = 0;; ++guard) {
            if (guard > 4LL * rm) throw std::logic_error("C-packing failed to terminate");
            int fi = -1;
            for (int i = 0; i < m; ++i) {
                if (!meets_A(edges[i])) continue;
                int c = 0;
                for (int v : edges[i]) c += inC(v);
                if (c < r - 2) { fi = i; break; }
            }
            if (fi < 0) break;
            int ei = -1;
            for (int i = 0; i < m; ++i) {
                if (meets_A(edges[i])) continue;
                bool hasC = false;
                for (int v : edges[i]) hasC |= inC(v);
                if (hasC) { ei = i; break; }
            }
            if (ei < 0) throw std::logic_error("C-packing: no donor edge");
            int v = 0;
            for (int x : edges[ei])
                if (inC(x)) { v = x; break; }
            int w = edges[fi].front(); // an A vertex of f
            int u = 0;
            for (int x : edges[fi])
                if (!inB(x) && !inC(x) && x != w) { u = x; break; }
            if (u == 0) throw std::logic_error("C-packing: no spare vertex");
            auto& Ev = edges[ei];
            auto& Fv = edges[fi];
            *std::find(Ev.begin(), Ev.end(), v) = u;
            *std::find(Fv.begin(), Fv.end(), u) = v;
            std::sort(Ev.begin(), Ev.end());
            std::sort(Fv.begin(), Fv.end());
        }
    }

    // keep the A-free edges, strip their B vertex, shift the grid
    Cover mid;
    mid.r = r - 1;
    mid.n = static_cast<int>(n);
    mid.theta = make_rational(k, m);
    for (const auto& e : edges) {
        if (meets_A(e)) continue;
        std::vector<int> ne;
        ne.reserve(r - 1);
        for (int i = 0; i + 1 < r; ++i) { // drop the max, which sits in B
            if (inC(e[i]) || inB(e[i]))
                throw std::logic_error("cover extraction: unexpected C/B vertex");
            ne.push_back(static_cast<int>(e[i] - A_hi));
        }
        if (!inB(e.back())) throw std::logic_error("cover extraction: edge max not in B");
        mid.edges.push_back(std::move(ne));
    }
    mid.canonicalize();
    mid.validate();
    return similar(mid, theta);
}

// ---------------------------------------------------------------------------
// cover -> preference order
// ---------------------------------------------------------------------------

CoverToPreferenceResult cover_to_preference(const Cover& q, long long m_budget) {
    q.validate();
    const int rc = q.r;       // cover arity
    const int r = rc + 1;     // preference arity
    const int n = q.n;
    const Rational& theta = q.theta;

    long long m = -1, k = -1;
    for (long long cand = 1; cand <= m_budget; ++cand) {
        long long kk = std::max<long long>(0, ceil_ll(theta * cand) - 1);
        if (cand - r * kk == n) { m = cand; k = kk; break; }
    }
    if (m < 0)
        throw parameter_error("cover_to_preference: no feasible m up to budget " +
                              std::to_string(m_budget));

    const long long rm = r * m;
    Cover base = similar(q, make_rational(k, m)); // grid embeds at offset rk

    const long long A_hi = r * k;
    const long long B_lo = rm - m + 1;
    const long long C_lo = rm - m - r * (r - 2) * k; // first C index minus one

    std::vector<std::vector<int>> edges;
    edges.reserve(m);
    for (int i = 0; i < n; ++i) {
        std::vector<int> e;
        e.reserve(r);
        for (int v : base.edges[i]) e.push_back(static_cast<int>(v + A_hi));
        e.push_back(static_cast<int>(B_lo + i));
        std::sort(e.begin(), e.end());
        edges.push_back(std::move(e));
    }
    for (long long t = 1; t <= r * k; ++t) {
        std::vector<int> e;
        e.push_back(static_cast<int>(t));                  // A vertex
        for (int c = 0; c < r - 2; ++c)                    // r-2 C vertices
            e.push_back(static_cast<int>(C_lo + (t - 1) * (r - 2) + c + 1));
        e.push_back(static_cast<int>(B_lo + n + t - 1));   // B vertex
        std::sort(e.begin(), e.end());
        edges.push_back(std::move(e));
    }

    // each edge contributes its r cyclic rotations as position tuples;
    // labelling elements by their first coordinate makes order 1 the identity
    CoverToPreferenceResult out;
    out.m = static_cast<int>(m);
    PreferenceOrder& P = out.order;
    P.r = r;
    P.m = static_cast<int>(rm);
    P.orders.assign(r, std::vector<int>(rm, 0));
    for (const auto& e : edges) {
        for (int rot = 0; rot < r; ++rot) {
            int elem = e[rot]; // first coordinate after rotating by `rot`
            for (int i = 0; i < r; ++i) {
                int pos = e[(rot + i) % r];
                P.orders[i][pos - 1] = elem;
            }
        }
    }
    P.validate();
    return out;
}

nlohmann::ordered_json cover_to_json(const Cover& q) {
    nlohmann::ordered_json j;
    j["r"] = q.r;
    j["theta"] = {{"num", rat_num(q.theta).convert_to<long long>()},
                  {"den", rat_den(q.theta).convert_to<long long>()}};
    j["n"] = q.n;
    j["edges"] = q.edges;
    return j;
}

Cover cover_from_json(const nlohmann::ordered_json& j) {
    Cover q;
    q.r = j.at("r").get<int>();
    q.n = j.at("n").get<int>();
    q.theta = make_rational(j.at("theta").at("num").get<long long>(),
                            j.at("theta").at("den").get<long long>());
    q.edges = j.at("edges").get<std::vector<std::vector<int>>>();
    q.canonicalize();
    q.validate();
    return q;
}

} // namespace prefcover
