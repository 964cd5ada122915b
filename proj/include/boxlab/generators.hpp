#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "boxlab/box.hpp"

namespace boxlab {

/// d0_0..d7_0, d0_1..d7_1, "pr" (= 1/2 d0_1 + 1/2 d3_1) and "noise" (uniform).
/// Throws Error(UnknownName).
Box canonical(std::string_view name);
std::vector<std::string> canonical_names();

/// v * pr + (1 - v) * noise. Throws Error(BadParameter) unless 0 <= v <= 1.
Box isotropic(const Rational& v);

/// Measurement angles (theta_a0, theta_a1, theta_b0, theta_b1) in radians.
using Angles = std::array<double, 4>;

/// (0, pi/2, pi/4, -pi/4), reaching 2 sqrt 2.
Angles tsirelson_angles();

/// The rational closest to x among those with denominator <= max_den; ties
/// go to the smaller denominator. x is taken as the exact binary value of the
/// double. Throws Error(BadParameter) if max_den < 1 or x is not finite.
Rational nearest_rational(double x, long max_den);

/// Uniform marginals and E(a,b) = cos(theta_a - theta_b), each correlator
/// rounded by nearest_rational(., max_den) and clamped to [-1, 1]; entries are
/// (1 +- E)/4. Throws Error(BadParameter) if max_den < 1.
Box quantum_box(const Angles& angles, long max_den);

enum class RandomFamily { general, no_signaling, chsh16_mixture, oneway_slice };

std::string_view to_string(RandomFamily family);
/// Throws Error(BadParameter).
RandomFamily parse_random_family(std::string_view text);

/// Numerators are drawn from [0, kSampleRange] before normalizing.
inline constexpr std::uint64_t kSampleRange = std::uint64_t{1} << 16;

/// The 16 local deterministic boxes followed by the 8 PR variants.
const std::vector<Box>& no_signaling_vertices();

/// The 8 PR variants: the relabeling orbit of canonical("pr") in first-seen order.
std::vector<Box> pr_variants();

/// Generators of the mixture families: ids of the 16 named strategies, and
/// of the 8 local plus the 4 A-to-B strategies d0_1..d3_1.
std::vector<int> chsh16_generator_ids();
std::vector<int> oneway_generator_ids();

/// Deterministic stream of boxes from one family.
///
/// general draws each setting column as four integers in [0, kSampleRange]
/// (redrawn if all zero) and normalizes. The mixture families pick a support
/// size k in [1, n], k distinct generators, and integer weights in
/// [1, kSampleRange], then normalize.
class Sampler {
public:
    Sampler(RandomFamily family, std::uint64_t seed);

    Box next();
    RandomFamily family() const { return family_; }

private:
    std::uint64_t draw(std::uint64_t lo, std::uint64_t hi);
    Box next_general();
    Box next_mixture(const std::vector<Box>& generators);

    RandomFamily family_;
    std::mt19937_64 rng_;
};

/// count boxes from Sampler(family, seed). Throws Error(BadParameter) if count < 1.
std::vector<Box> sample(RandomFamily family, std::uint64_t seed, long count);

struct CanonicalSpec {
    std::string name;
};
struct IsotropicSpec {
    Rational v;
};
struct QuantumSpec {
    Angles angles;
    long max_den = 1000000;
};
struct RandomSpec {
    RandomFamily family = RandomFamily::general;
    std::uint64_t seed = 0;
};
using FamilySpec = std::variant<CanonicalSpec, IsotropicSpec, QuantumSpec, RandomSpec>;

/// {"kind":"canonical","name":...} | {"kind":"isotropic","v":"n/d"} |
/// {"kind":"quantum","angles":[4 numbers] or "tsirelson","denom":N} |
/// {"kind":"random","sub":...,"seed":N}
nlohmann::json family_to_json(const FamilySpec& spec);
/// Throws Error(ParseError) on schema problems and Error(BadParameter) on
/// out-of-range values.
FamilySpec family_from_json(const nlohmann::json& doc);

/// count boxes for random specs; exactly one box otherwise.
std::vector<Box> generate(const FamilySpec& spec, long count = 1);

}  // namespace boxlab
