#pragma once

#include <array>

#include "boxlab/box.hpp"

namespace boxlab {

/// The four CHSH symmetrizations |sum of correlators with one minus sign|.
/// values[k] carries the minus sign on the k-th correlator of
/// E(0,0), E(0,1), E(1,0), E(1,1); values[kStandardChsh] is the usual form
/// E(0,0) + E(0,1) - E(1,0) + E(1,1).
struct ChshReport {
    static constexpr int kStandardChsh = 2;

    std::array<Rational, 4> values;
    Rational lambda_max;

    const Rational& standard() const { return values[kStandardChsh]; }
};

ChshReport chsh(const Box& box);

struct SignalReport {
    Rational s_AtoB;
    Rational s_BtoA;
    Rational s;
};

/// s_AtoB = max_b |P(B=0|0,b) - P(B=0|1,b)|, s_BtoA symmetric, s their maximum.
SignalReport signal(const Box& box);

enum class UnpredictabilityVariant {
    /// max over settings of the min over parties of min(P(o=0), 1-P(o=0)).
    formula,
    /// max over parties and settings, i.e. the larger of the two local values.
    per_party,
};

Rational unpredictability(const Box& box, UnpredictabilityVariant variant = UnpredictabilityVariant::formula);

enum class Party { A, B };

struct UncertaintyReport {
    std::array<Rational, 2> delta_A;  // indexed by Alice's setting a
    std::array<Rational, 2> delta_B;  // indexed by Bob's setting b
    Rational u_A;
    Rational u_B;

    const Rational& delta(Party party, int setting) const {
        return party == Party::A ? delta_A[setting] : delta_B[setting];
    }
    const Rational& u(Party party) const { return party == Party::A ? u_A : u_B; }
};

/// delta_A[a] = max_b min_A P(A|a,b), delta_B[b] = max_a min_B P(B|a,b),
/// u_A = delta_A[0] + delta_A[1], u_B likewise.
UncertaintyReport uncertainty(const Box& box);

/// Admits a local hidden-variable model: no signal and all four CHSH values <= 2.
bool lhv_admissible(const Box& box);

}  // namespace boxlab
