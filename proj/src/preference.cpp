#include "prefcover/preference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>

namespace prefcover {

void PreferenceOrder::validate() const {
    if (r < 1 || m < 1) throw parameter_error("preference order needs r >= 1 and m >= 1");
    if (static_cast<int>(orders.size()) != r)
        throw parameter_error("preference order: expected " + std::to_string(r) + " orders");
    std::vector<char> seen(m + 1);
    for (const auto& ord : orders) {
        if (static_cast<int>(ord.size()) != m)
            throw parameter_error("preference order: each order must list m elements");
        std::fill(seen.begin(), seen.end(), 0);
        for (int x : ord) {
            if (x < 1 || x > m || seen[x])
                throw parameter_error("preference order: order is not a permutation of [m]");
            seen[x] = 1;
        }
    }
}

NamedOrder named_order_from_string(const std::string& s) {
    if (s == "identity") return NamedOrder::identity;
    if (s == "reverse") return NamedOrder::reverse;
    if (s == "rotation") return NamedOrder::rotation;
    if (s == "pa") return NamedOrder::pa;
    if (s == "pb") return NamedOrder::pb;
    if (s == "pc") return NamedOrder::pc;
    throw parameter_error("unknown named order: " + s);
}

std::string to_string(NamedOrder n) {
    switch (n) {
        case NamedOrder::identity: return "identity";
        case NamedOrder::reverse: return "reverse";
        case NamedOrder::rotation: return "rotation";
        case NamedOrder::pa: return "pa";
        case NamedOrder::pb: return "pb";
        case NamedOrder::pc: return "pc";
    }
    return "?";
}

int rpos_num(const PreferenceOrder& P, int i, int k) {
    if (i < 0 || i >= P.r) throw parameter_error("rpos: order index out of range");
    if (k < 1 || k > P.m) throw parameter_error("rpos: element out of range");
    const auto& ord = P.orders[i];
    for (int j = 0; j < P.m; ++j)
        if (ord[j] == k) return j + 1;
    throw parameter_error("rpos: element missing from order");
}

Rational rpos(const PreferenceOrder& P, int i, int k) {
    return make_rational(rpos_num(P, i, k), P.m);
}

namespace {

std::vector<int> identity_perm(int m) {
    std::vector<int> v(m);
    std::iota(v.begin(), v.end(), 1);
    return v;
}

// bottom-to-top listing of the identity rotated so that element k lands at
// position ((k + s - 1) mod m) + 1
std::vector<int> rotation_perm(int m, int s) {
    s %= m;
    std::vector<int> v(m);
    for (int j = 0; j < m; ++j) v[j] = (j - s + m) % m + 1;
    return v;
}

} // namespace

PreferenceOrder make_named_order(NamedOrder name, int r, int m, int shift) {
    if (r < 1 || m < 1) throw parameter_error("make_named_order: r >= 1 and m >= 1 required");
    PreferenceOrder P;
    P.r = r;
    P.m = m;
    switch (name) {
        case NamedOrder::identity:
            for (int i = 0; i < r; ++i) P.orders.push_back(identity_perm(m));
            break;
        case NamedOrder::reverse: {
            auto rev = identity_perm(m);
            std::reverse(rev.begin(), rev.end());
            for (int i = 0; i < r; ++i) P.orders.push_back(rev);
            break;
        }
        case NamedOrder::rotation: {
            if (shift < 1 || shift > m)
                throw parameter_error("make_named_order: rotation needs shift in [1, m]");
            for (int i = 0; i < r; ++i)
                P.orders.push_back(rotation_perm(m, i * shift));
            break;
        }
        case NamedOrder::pa: {
            if (r != 2) throw parameter_error("make_named_order: pa requires r = 2");
            P.orders.push_back(identity_perm(m));
            auto rev = identity_perm(m);
            std::reverse(rev.begin(), rev.end());
            P.orders.push_back(rev);
            break;
        }
        case NamedOrder::pb: {
            if (r != 3) throw parameter_error("make_named_order: pb requires r = 3");
            if (m % 3 != 0) throw parameter_error("make_named_order: pb requires m divisible by 3");
            int p = m / 3;
            for (int i = 0; i < 3; ++i) P.orders.push_back(rotation_perm(m, i * p));
            break;
        }
        case NamedOrder::pc: {
            if (r != 3) throw parameter_error("make_named_order: pc requires r = 3");
            if (m % 3 != 0) throw parameter_error("make_named_order: pc requires m divisible by 3");
            int p = m / 3;
            for (int i = 0; i < 3; ++i) {
                auto ord = rotation_perm(m, i * p);
                std::reverse(ord.begin(), ord.begin() + p);
                P.orders.push_back(ord);
            }
            break;
        }
    }
    P.validate();
    return P;
}

std::vector<PositionTuple> tuples_of(const PreferenceOrder& P) {
    P.validate();
    std::vector<PositionTuple> out(P.m);
    for (int k = 0; k < P.m; ++k) {
        out[k].m = P.m;
        out[k].pos.assign(P.r, 0);
    }
    for (int i = 0; i < P.r; ++i)
        for (int j = 0; j < P.m; ++j)
            out[P.orders[i][j] - 1].pos[i] = j + 1;
    return out;
}

int i_max(const PositionTuple& x) {
    if (x.pos.empty()) throw parameter_error("i_max of empty tuple");
    int best = 0;
    for (int i = 1; i < static_cast<int>(x.pos.size()); ++i)
        if (x.pos[i] > x.pos[best]) best = i;
    return best;
}

FPResult f_P_min_position(const PreferenceOrder& P, long long min_pos_num) {
    P.validate();
    auto tuples = tuples_of(P);
    bool any = false;
    BigInt best = -1;
    int best_elem = -1;
    for (int k = 0; k < P.m; ++k) {
        const auto& t = tuples[k];
        int lo = *std::min_element(t.pos.begin(), t.pos.end());
        if (lo < min_pos_num) continue;
        int im = i_max(t);
        BigInt prod = 1;
        for (int i = 0; i < P.r; ++i)
            if (i != im) prod *= t.pos[i];
        if (!any || prod > best) {
            any = true;
            best = prod;
            best_elem = k;
        }
    }
    if (!any)
        throw parameter_error("f_P: no tuple clears the position cutoff");
    FPResult res;
    BigInt den = 1;
    for (int i = 1; i < P.r; ++i) den *= P.m;
    res.value = Rational(best, den);
    res.witness = tuples[best_elem];
    res.element = best_elem + 1;
    return res;
}

FPResult f_P(const PreferenceOrder& P, const Rational& theta) {
    if (theta < 0 || theta * P.r > 1)
        throw std::domain_error("f_P: theta must lie in [0, 1/r]");
    long long q0 = ceil_ll(theta * P.m);
    return f_P_min_position(P, q0);
}

namespace {

// factorial as long double (exact up to 20! in double range concerns are moot
// here; used only for budget arithmetic)
long double factorial_ld(int m) {
    long double f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

std::string format_count(long double c) {
    if (c < 1e18L) {
        unsigned long long v = static_cast<unsigned long long>(c + 0.5L);
        return std::to_string(v);
    }
    std::ostringstream os;
    os.precision(4);
    os << c;
    return os.str();
}

// permutation of [1..m] with the given lexicographic rank (factoradic)
std::vector<int> unrank_permutation(int m, unsigned long long rank) {
    std::vector<int> pool = identity_perm(m);
    std::vector<unsigned long long> fact(m, 1);
    for (int i = 1; i < m; ++i) fact[i] = fact[i - 1] * i;
    std::vector<int> out;
    out.reserve(m);
    for (int i = m - 1; i >= 0; --i) {
        unsigned long long f = fact[i];
        int idx = static_cast<int>(rank / f);
        rank %= f;
        out.push_back(pool[idx]);
        pool.erase(pool.begin() + idx);
    }
    return out;
}

struct ExactChunkResult {
    long long best = std::numeric_limits<long long>::max();
    std::vector<std::vector<int>> witness_inv; // inv[i][k-1] = position of k, i >= 1
    unsigned long long candidates = 0;
    bool found = false;
};

// Enumerates candidates whose first free order (inverse permutation) has a
// lexicographic rank in [rank_lo, rank_hi); remaining orders run over all
// permutations.  q0 = feasibility cutoff on position numerators.
ExactChunkResult f_exact_chunk(int r, int m, long long q0,
                               unsigned long long rank_lo,
                               unsigned long long rank_hi) {
    ExactChunkResult res;
    const int extra = r - 1;
    std::vector<std::vector<int>> inv(extra);
    inv[0] = unrank_permutation(m, rank_lo);
    for (int i = 1; i < extra; ++i) inv[i] = identity_perm(m);
    unsigned long long first_count = rank_hi - rank_lo;

    std::vector<long long> prod(m);
    bool done_first = first_count == 0;
    while (!done_first) {
        // inner odometer over orders 1..extra-1; evaluate each setting
        bool done_inner = false;
        while (!done_inner) {
            ++res.candidates;
            long long cand_max = -1;
            for (int k = 1; k <= m && cand_max < res.best; ++k) {
                long long mx = k;
                int im = 0;
                bool feasible = k >= q0;
                for (int i = 0; i < extra; ++i) {
                    int p = inv[i][k - 1];
                    if (p < q0) { feasible = false; break; }
                    if (p > mx) { mx = p; im = i + 1; }
                }
                if (!feasible) continue;
                long long pr = 1;
                if (im != 0) pr = k;
                for (int i = 0; i < extra; ++i)
                    if (i + 1 != im) pr *= inv[i][k - 1];
                if (pr > cand_max) cand_max = pr;
            }
            if (cand_max >= 0 && cand_max < res.best) {
                res.best = cand_max;
                res.witness_inv = inv;
                res.found = true;
            }
            // advance inner orders (odometer, last order fastest)
            done_inner = true;
            for (int i = extra - 1; i >= 1; --i) {
                if (std::next_permutation(inv[i].begin(), inv[i].end())) {
                    done_inner = false;
                    break;
                }
                // wrapped: reset and carry on to the next wheel
            }
        }
        if (--first_count == 0) break;
        std::next_permutation(inv[0].begin(), inv[0].end());
    }
    return res;
}

} // namespace

FExactResult f_exact(int r, const Rational& theta, int m, double budget, int threads) {
    if (r < 2) throw parameter_error("f_exact: r >= 2 required");
    if (m < 1) throw parameter_error("f_exact: m >= 1 required");
    if (theta < 0 || theta * r > 1)
        throw std::domain_error("f_exact: theta must lie in [0, 1/r]");
    long double mf = factorial_ld(m);
    long double count = powl(mf, r - 1);
    if (count > static_cast<long double>(budget))
        throw resource_error("f_exact: candidate count " + format_count(count) +
                             " exceeds budget " + format_count(budget));
    long double prod_bound = powl(static_cast<long double>(m), r - 1);
    if (prod_bound > 4.0e18L)
        throw resource_error("f_exact: position products exceed 64-bit range");

    long long q0 = ceil_ll(theta * m);
    unsigned long long total_first = static_cast<unsigned long long>(mf + 0.5L);

    int nthreads = std::max(1, threads);
    nthreads = static_cast<int>(std::min<unsigned long long>(nthreads, total_first));
    std::vector<ExactChunkResult> parts;
    if (nthreads == 1) {
        parts.push_back(f_exact_chunk(r, m, q0, 0, total_first));
    } else {
        std::vector<std::future<ExactChunkResult>> futs;
        unsigned long long chunk = (total_first + nthreads - 1) / nthreads;
        for (int tdx = 0; tdx < nthreads; ++tdx) {
            unsigned long long lo = chunk * tdx;
            unsigned long long hi = std::min(total_first, lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, f_exact_chunk, r, m, q0, lo, hi));
        }
        for (auto& f : futs) parts.push_back(f.get());
    }

    // deterministic reduction: min value; ties resolved by earliest chunk,
    // i.e. the lexicographically least witness in enumeration order
    const ExactChunkResult* winner = nullptr;
    unsigned long long candidates = 0;
    for (const auto& p : parts) {
        candidates += p.candidates;
        if (!p.found) continue;
        if (!winner || p.best < winner->best) winner = &p;
    }
    if (!winner) throw parameter_error("f_exact: no feasible tuple at this theta");

    FExactResult out;
    BigInt den = 1;
    for (int i = 1; i < r; ++i) den *= m;
    out.value = Rational(BigInt(winner->best), den);
    out.candidates = candidates;
    out.witness.r = r;
    out.witness.m = m;
    out.witness.orders.assign(r, std::vector<int>(m));
    out.witness.orders[0] = identity_perm(m);
    for (int i = 1; i < r; ++i)
        for (int k = 1; k <= m; ++k)
            out.witness.orders[i][winner->witness_inv[i - 1][k - 1] - 1] = k;
    out.witness.validate();
    return out;
}

PreferenceOrder replicate(const PreferenceOrder& P, int k) {
    P.validate();
    if (k < 1) throw parameter_error("replicate: k >= 1 required");
    PreferenceOrder Q;
    Q.r = P.r;
    Q.m = P.m * k;
    Q.orders.assign(P.r, std::vector<int>(Q.m));
    for (int i = 0; i < P.r; ++i) {
        for (int j = 0; j < P.m; ++j) {
            int elem = P.orders[i][j];
            int p = j + 1; // position numerator in P
            for (int t = 0; t < k; ++t)
                Q.orders[i][k * p - t - 1] = elem + t * P.m;
        }
    }
    Q.validate();
    return Q;
}

nlohmann::ordered_json preference_to_json(const PreferenceOrder& P) {
    nlohmann::ordered_json j;
    j["r"] = P.r;
    j["m"] = P.m;
    j["orders"] = P.orders;
    return j;
}

PreferenceOrder preference_from_json(const nlohmann::ordered_json& j) {
    PreferenceOrder P;
    P.r = j.at("r").get<int>();
    P.m = j.at("m").get<int>();
    P.orders = j.at("orders").get<std::vector<std::vector<int>>>();
    P.validate();
    return P;
}

} // namespace prefcover
