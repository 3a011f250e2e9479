#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "prefcover/rational.hpp"

namespace prefcover {

// r total orders of the ground set [m] = {1..m}.  orders[i] lists the
// elements of order i bottom-to-top, so orders[i][j] sits at relative
// position (j+1)/m.
struct PreferenceOrder {
    int r = 0;
    int m = 0;
    std::vector<std::vector<int>> orders;

    void validate() const; // throws parameter_error on malformed input
};

// Relative positions of one element across the r orders; pos[i] is the
// numerator over m, i.e. the tuple entry is pos[i]/m.
struct PositionTuple {
    int m = 0;
    std::vector<int> pos;

    Rational coord(int i) const { return make_rational(pos[i], m); }
};

enum class NamedOrder { identity, reverse, rotation, pa, pb, pc };

NamedOrder named_order_from_string(const std::string& s);
std::string to_string(NamedOrder n);

// Position numerator of element k in order i (both APIs 0-based in i,
// 1-based in k to match the ground-set labelling).
int rpos_num(const PreferenceOrder& P, int i, int k);
Rational rpos(const PreferenceOrder& P, int i, int k);

// rotation uses `shift` s in [1, m]; order i is rotated by (i)*s... see impl
PreferenceOrder make_named_order(NamedOrder name, int r, int m, int shift = 0);

// Tuple of element k is returned at index k-1.
std::vector<PositionTuple> tuples_of(const PreferenceOrder& P);

// Smallest index attaining the maximum coordinate (0-based).
int i_max(const PositionTuple& x);

struct FPResult {
    Rational value;
    PositionTuple witness;
    int element = 0; // ground-set element realizing the max
};

// max over tuples with all coordinates >= theta of the product of all
// coordinates except the i_max one.  Requires 0 <= theta <= 1/r.
FPResult f_P(const PreferenceOrder& P, const Rational& theta);

// Same with the feasibility cutoff given directly as a position numerator:
// tuples qualify when min_i pos[i] >= min_pos_num.
FPResult f_P_min_position(const PreferenceOrder& P, long long min_pos_num);

struct FExactResult {
    Rational value;
    PreferenceOrder witness;
    unsigned long long candidates = 0; // candidate orders examined
};

// Exact minimum of f_P(theta) over all (r,m)-preference orders, first order
// fixed to the identity (relabelling invariance).  Refuses with
// resource_error when (m!)^(r-1) exceeds `budget`.
FExactResult f_exact(int r, const Rational& theta, int m, double budget = 1e9,
                     int threads = 1);

// Lift to ground set [k*m]: element j at position x becomes elements
// j, j+m, ..., j+(k-1)m at positions x, x-1/km, ..., x-(k-1)/km.
PreferenceOrder replicate(const PreferenceOrder& P, int k);

nlohmann::ordered_json preference_to_json(const PreferenceOrder& P);
PreferenceOrder preference_from_json(const nlohmann::ordered_json& j);

} // namespace prefcover
