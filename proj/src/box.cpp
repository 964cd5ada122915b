#include "boxlab/box.hpp"

#include <string>
#include <vector>

#include "boxlab/error.hpp"

namespace boxlab {

Box Box::from_table(Entries entries) {
    for (int i = 0; i < kEntries; ++i) {
        if (entries[i].get_den() == 0) {
            throw Error(ErrorCode::BadParameter, "entry " + std::to_string(i) + " has a zero denominator");
        }
        entries[i].canonicalize();
    }
    for (int i = 0; i < kEntries; ++i) {
        if (sgn(entries[i]) < 0) {
            throw Error(ErrorCode::NegativeEntry,
                        "entry " + std::to_string(i) + " is " + to_string(entries[i]));
        }
    }
    for (int s = 0; s < kSettings; ++s) {
        Rational sum = 0;
        for (int o = 0; o < kOutcomes; ++o) sum += entries[kOutcomes * s + o];
        if (sum != 1) {
            throw Error(ErrorCode::NotNormalized, "setting column (a,b)=(" + std::to_string(s >> 1) + "," +
                                                      std::to_string(s & 1) + ") sums to " + to_string(sum));
        }
    }
    return Box(std::move(entries));
}

Box Box::from_table(std::span<const Rational> entries) {
    if (entries.size() != kEntries) {
        throw Error(ErrorCode::BadParameter, "a box has 16 entries, got " + std::to_string(entries.size()));
    }
    Entries copy;
    for (int i = 0; i < kEntries; ++i) copy[i] = entries[i];
    return from_table(std::move(copy));
}

Box Box::uniform() {
    Entries e;
    e.fill(Rational(1, 4));
    return Box(std::move(e));
}

Rational Box::marginal_A(int a, int b, int A) const { return p(a, b, A, 0) + p(a, b, A, 1); }

Rational Box::marginal_B(int a, int b, int B) const { return p(a, b, 0, B) + p(a, b, 1, B); }

Rational Box::correlator(int a, int b) const {
    return p(a, b, 0, 0) + p(a, b, 1, 1) - p(a, b, 0, 1) - p(a, b, 1, 0);
}

std::string_view to_string(Direction direction) {
    switch (direction) {
        case Direction::none: return "none";
        case Direction::AtoB: return "AtoB";
        case Direction::BtoA: return "BtoA";
        case Direction::both: return "both";
    }
    return "none";
}

namespace {

// f depends on b when some row a has f(a,0) != f(a,1).
bool depends_on_b(std::uint8_t table) {
    auto bit = [table](int a, int b) { return (table >> (3 - setting_index(a, b))) & 1; };
    return bit(0, 0) != bit(0, 1) || bit(1, 0) != bit(1, 1);
}

bool depends_on_a(std::uint8_t table) {
    auto bit = [table](int a, int b) { return (table >> (3 - setting_index(a, b))) & 1; };
    return bit(0, 0) != bit(1, 0) || bit(0, 1) != bit(1, 1);
}

}  // namespace

DeterministicBox::DeterministicBox(std::uint8_t f, std::uint8_t g) : f_(f), g_(g) {
    // Alice's output needing b is a message from Bob, and vice versa.
    const bool needs_b_to_a = depends_on_b(f);
    const bool needs_a_to_b = depends_on_a(g);
    cost_bits_ = static_cast<int>(needs_b_to_a) + static_cast<int>(needs_a_to_b);
    if (needs_a_to_b && needs_b_to_a) {
        direction_ = Direction::both;
    } else if (needs_a_to_b) {
        direction_ = Direction::AtoB;
    } else if (needs_b_to_a) {
        direction_ = Direction::BtoA;
    } else {
        direction_ = Direction::none;
    }
}

DeterministicBox DeterministicBox::from_id(int id) {
    if (id < 0 || id > 255) {
        throw Error(ErrorCode::BadParameter, "deterministic box id out of range: " + std::to_string(id));
    }
    return DeterministicBox(static_cast<std::uint8_t>(id >> 4), static_cast<std::uint8_t>(id & 15));
}

DeterministicBox DeterministicBox::from_tables(std::uint8_t f, std::uint8_t g) {
    if (f > 15 || g > 15) throw Error(ErrorCode::BadParameter, "truth tables are 4-bit values");
    return DeterministicBox(f, g);
}

Box DeterministicBox::to_box() const {
    Box::Entries e;
    e.fill(Rational(0));
    for (int s = 0; s < kSettings; ++s) e[kOutcomes * s + outcome(s)] = 1;
    return Box::from_table(std::move(e));
}

Classification classify(const DeterministicBox& d) { return {d.cost_bits(), d.direction()}; }

std::vector<DeterministicBox> enumerate_deterministic() {
    std::vector<DeterministicBox> out;
    out.reserve(256);
    for (int id = 0; id < 256; ++id) out.push_back(DeterministicBox::from_id(id));
    return out;
}

namespace {

constexpr std::array<NamedStrategy, 16> kNamedStrategies = {{
    {"d0_0", 0},   {"d1_0", 48},  {"d2_0", 10},  {"d3_0", 202}, {"d4_0", 53},  {"d5_0", 245},
    {"d6_0", 207}, {"d7_0", 255}, {"d0_1", 2},   {"d1_1", 206}, {"d2_1", 49},  {"d3_1", 253},
    {"d4_1", 32},  {"d5_1", 138}, {"d6_1", 117}, {"d7_1", 223},
}};

}  // namespace

std::span<const NamedStrategy, 16> named_strategies() { return kNamedStrategies; }

int strategy_id(std::string_view name) {
    for (const auto& s : kNamedStrategies) {
        if (s.name == name) return s.id;
    }
    throw Error(ErrorCode::UnknownName, "no strategy named '" + std::string(name) + "'");
}

Box mix(std::span<const WeightedBox> terms) {
    if (terms.empty()) throw Error(ErrorCode::BadWeights, "empty mixture");
    std::vector<Rational> weights;
    weights.reserve(terms.size());
    Rational total = 0;
    for (const auto& t : terms) {
        if (t.weight.get_den() == 0) throw Error(ErrorCode::BadWeights, "weight with zero denominator");
        Rational w = t.weight;
        w.canonicalize();
        if (sgn(w) < 0) throw Error(ErrorCode::BadWeights, "negative weight " + to_string(w));
        total += w;
        weights.push_back(std::move(w));
    }
    if (total != 1) throw Error(ErrorCode::BadWeights, "weights sum to " + to_string(total));

    Box::Entries e;
    e.fill(Rational(0));
    for (std::size_t k = 0; k < terms.size(); ++k) {
        if (sgn(weights[k]) == 0) continue;
        for (int i = 0; i < kEntries; ++i) e[i] += weights[k] * terms[k].box.entries()[i];
    }
    return Box::from_table(std::move(e));
}

bool is_no_signaling(const Box& box) {
    for (int a = 0; a < 2; ++a) {
        if (box.marginal_A(a, 0, 0) != box.marginal_A(a, 1, 0)) return false;
    }
    for (int b = 0; b < 2; ++b) {
        if (box.marginal_B(0, b, 0) != box.marginal_B(1, b, 0)) return false;
    }
    return true;
}

// Relabelings act on events as  source = S^swap(T(event)), where T flips
// inputs and input-conditioned outputs and S exchanges the parties.
// S T(fa,fb,FA,FB) = T(fb,fa,FB,FA) S, which is all the algebra below needs.

namespace {

Relabeling swapped_flips(const Relabeling& r) {
    Relabeling out;
    out.flip_a = r.flip_b;
    out.flip_b = r.flip_a;
    out.flip_A = r.flip_B;
    out.flip_B = r.flip_A;
    return out;
}

}  // namespace

std::vector<Relabeling> Relabeling::all() {
    std::vector<Relabeling> out;
    out.reserve(128);
    for (int bits = 0; bits < 128; ++bits) {
        Relabeling r;
        r.flip_a = bits & 1;
        r.flip_b = (bits >> 1) & 1;
        r.flip_A = {static_cast<bool>((bits >> 2) & 1), static_cast<bool>((bits >> 3) & 1)};
        r.flip_B = {static_cast<bool>((bits >> 4) & 1), static_cast<bool>((bits >> 5) & 1)};
        r.swap_parties = (bits >> 6) & 1;
        out.push_back(r);
    }
    return out;
}

Relabeling Relabeling::then(const Relabeling& next) const {
    // Reading through `next` and then through *this gives
    // sigma_this(sigma_next(e)) = S^(s1^s2) T1' T2 with T1' = T1 conjugated by S^s2.
    const Relabeling first = next.swap_parties ? swapped_flips(*this) : *this;
    Relabeling out;
    out.flip_a = first.flip_a != next.flip_a;
    out.flip_b = first.flip_b != next.flip_b;
    for (int x = 0; x < 2; ++x) {
        out.flip_A[x] = next.flip_A[x ^ static_cast<int>(first.flip_a)] != first.flip_A[x];
        out.flip_B[x] = next.flip_B[x ^ static_cast<int>(first.flip_b)] != first.flip_B[x];
    }
    out.swap_parties = swap_parties != next.swap_parties;
    return out;
}

Relabeling Relabeling::inverse() const {
    // sigma^-1 = T^-1 S^swap = S^swap (T^-1 conjugated by S^swap).
    Relabeling flips_inverse;
    flips_inverse.flip_a = flip_a;
    flips_inverse.flip_b = flip_b;
    for (int x = 0; x < 2; ++x) {
        flips_inverse.flip_A[x] = flip_A[x ^ static_cast<int>(flip_a)];
        flips_inverse.flip_B[x] = flip_B[x ^ static_cast<int>(flip_b)];
    }
    Relabeling out = swap_parties ? swapped_flips(flips_inverse) : flips_inverse;
    out.swap_parties = swap_parties;
    return out;
}

int Relabeling::source_entry(int entry) const {
    const int setting = entry / kOutcomes;
    const int outcome = entry % kOutcomes;
    int a = (setting >> 1) ^ static_cast<int>(flip_a);
    int b = (setting & 1) ^ static_cast<int>(flip_b);
    int A = (outcome >> 1) ^ static_cast<int>(flip_A[a]);
    int B = (outcome & 1) ^ static_cast<int>(flip_B[b]);
    if (swap_parties) {
        std::swap(a, b);
        std::swap(A, B);
    }
    return entry_index(a, b, A, B);
}

Box relabel(const Box& box, const Relabeling& r) {
    Box::Entries e;
    for (int i = 0; i < kEntries; ++i) e[i] = box.entries()[r.source_entry(i)];
    return Box::from_table(std::move(e));
}

}  // namespace boxlab
