#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "boxlab/rational.hpp"

namespace boxlab {

inline constexpr int kSettings = 4;
inline constexpr int kOutcomes = 4;
inline constexpr int kEntries = kSettings * kOutcomes;

/// Setting index 2a+b; outcome index 2A+B; entry index 4*setting+outcome.
constexpr int setting_index(int a, int b) { return 2 * a + b; }
constexpr int outcome_index(int A, int B) { return 2 * A + B; }
constexpr int entry_index(int a, int b, int A, int B) {
    return kOutcomes * setting_index(a, b) + outcome_index(A, B);
}

/// A two-input/two-output bipartite correlation P(A,B|a,b) with exact entries.
///
/// Instances can only be created through validating factories, so every Box
/// in the program has nonnegative entries and each of the four setting
/// columns sums to exactly one.
class Box {
public:
    using Entries = std::array<Rational, kEntries>;

    /// Entries in (a,b,A,B) order, i.e. indexed by entry_index().
    /// Throws Error(NegativeEntry) or Error(NotNormalized).
    static Box from_table(Entries entries);
    static Box from_table(std::span<const Rational> entries);

    /// All sixteen entries equal to 1/4.
    static Box uniform();

    const Rational& p(int a, int b, int A, int B) const { return p_[entry_index(a, b, A, B)]; }
    const Rational& at(int setting, int outcome) const { return p_[kOutcomes * setting + outcome]; }
    const Entries& entries() const { return p_; }

    /// P(A|a,b) and P(B|a,b).
    Rational marginal_A(int a, int b, int A) const;
    Rational marginal_B(int a, int b, int B) const;

    /// E(a,b) = sum (-1)^(A xor B) P(A,B|a,b): table bit 0 is outcome +1, bit 1 is -1.
    Rational correlator(int a, int b) const;

    friend bool operator==(const Box&, const Box&) = default;

private:
    explicit Box(Entries entries) : p_(std::move(entries)) {}

    Entries p_;
};

enum class Direction { none, AtoB, BtoA, both };

std::string_view to_string(Direction direction);

/// One of the 256 deterministic strategies A = f(a,b), B = g(a,b).
///
/// Truth tables are 4-bit values whose most significant bit is the output at
/// (a,b) = (0,0), followed by (0,1), (1,0), (1,1). The id is 16*f + g.
class DeterministicBox {
public:
    /// Throws Error(BadParameter) unless 0 <= id < 256.
    static DeterministicBox from_id(int id);
    static DeterministicBox from_tables(std::uint8_t f, std::uint8_t g);

    int id() const { return 16 * f_ + g_; }
    std::uint8_t f() const { return f_; }
    std::uint8_t g() const { return g_; }
    int cost_bits() const { return cost_bits_; }
    Direction direction() const { return direction_; }

    int output_A(int a, int b) const { return (f_ >> (3 - setting_index(a, b))) & 1; }
    int output_B(int a, int b) const { return (g_ >> (3 - setting_index(a, b))) & 1; }
    /// Outcome index 2A+B produced at the given setting index.
    int outcome(int setting) const { return outcome_index(output_A(setting >> 1, setting & 1), output_B(setting >> 1, setting & 1)); }

    Box to_box() const;

    friend bool operator==(const DeterministicBox& x, const DeterministicBox& y) { return x.id() == y.id(); }

private:
    DeterministicBox(std::uint8_t f, std::uint8_t g);

    std::uint8_t f_;
    std::uint8_t g_;
    int cost_bits_;
    Direction direction_;
};

struct Classification {
    int cost_bits;
    Direction direction;

    friend bool operator==(const Classification&, const Classification&) = default;
};

/// Bits of communication a deterministic strategy needs: one for each output
/// that depends on the remote party's input.
Classification classify(const DeterministicBox& d);

/// All 256 strategies ordered by id.
std::vector<DeterministicBox> enumerate_deterministic();

struct NamedStrategy {
    std::string_view name;
    int id;
};

/// d0_0..d7_0 (local, CHSH value +2) followed by d0_1..d7_1 (one-way
/// signaling, CHSH value +4); the first four one-bit strategies signal A to B.
std::span<const NamedStrategy, 16> named_strategies();

/// Id of a named strategy; throws Error(UnknownName).
int strategy_id(std::string_view name);

struct WeightedBox {
    Rational weight;
    Box box;
};

/// Entrywise convex combination. Throws Error(BadWeights) if any weight is
/// negative or the weights do not sum to exactly one.
Box mix(std::span<const WeightedBox> terms);

/// Both marginal families are independent of the remote setting.
bool is_no_signaling(const Box& box);

/// A relabeling of inputs, input-dependent outputs, and parties.
///
/// relabel(P, r) reads each entry (a,b,A,B) from the source event obtained by
/// flipping a and b, then flipping A by flip_A[source a] and B by flip_B[source b],
/// and finally exchanging the parties when swap_parties is set.
struct Relabeling {
    bool flip_a = false;
    bool flip_b = false;
    std::array<bool, 2> flip_A{};
    std::array<bool, 2> flip_B{};
    bool swap_parties = false;

    static Relabeling identity() { return {}; }

    /// The full group: 2 * 8 * 8 = 128 elements.
    static std::vector<Relabeling> all();

    /// relabel(relabel(P, *this), next) == relabel(P, then(next)).
    Relabeling then(const Relabeling& next) const;
    Relabeling inverse() const;

    /// Entry index of the source box that lands on `entry` after relabeling.
    int source_entry(int entry) const;

    friend bool operator==(const Relabeling&, const Relabeling&) = default;
};

Box relabel(const Box& box, const Relabeling& r);

}  // namespace boxlab
