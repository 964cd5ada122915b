#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "boxlab/box.hpp"
#include "boxlab/cost.hpp"
#include "boxlab/generators.hpp"

namespace boxlab {

enum class PropertyId {
    S_LE_C,            // s <= C
    S_2I_GE_C,         // s + 2I >= C
    I_GE_HALF_ETA,     // I >= eta/2
    S_2U_GE_C,         // s + 2U >= C
    U_GE_HALF_ETA,     // U >= eta/2
    OW_BOUND,          // U >= C/2
    NONUNIQUE_DECOMP,  // two optimal decompositions with different supports
    MIX_COST,          // C(p d + q d') = p + q
    MIX_SIGNAL,        // s(p d + q d') = max(p,q) or |p - q|
};

std::string_view to_string(PropertyId id);
/// Throws Error(ParseError).
PropertyId parse_property_id(std::string_view text);

enum class Domain { oneway_slice, chsh16, general };

std::string_view to_string(Domain domain);
/// Throws Error(ParseError).
Domain parse_domain(std::string_view text);
/// Domain whose asserted properties apply to boxes drawn from a family.
Domain domain_of(RandomFamily family);

enum class Strictness { asserted, exploratory };

std::string_view to_string(Strictness strictness);

struct PropertyResult {
    PropertyId id;
    /// "formula"/"per_party" for I, "A"/"B" for U, empty otherwise.
    std::string variant;
    bool holds = true;
    /// Margin by which the inequality holds; negative exactly when violated.
    /// For equalities, the signed difference (holds iff zero).
    Rational slack;
    Strictness strictness = Strictness::exploratory;
    /// U-based checks on chsh16: the same slack with C taken over the chsh16 basis.
    std::optional<Rational> chsh16_slack;

    /// "I_GE_HALF_ETA[formula]" style key.
    std::string label() const;
};

nlohmann::json result_to_json(const PropertyResult& r);

/// Evaluates the per-box inequalities (S_LE_C through OW_BOUND, each
/// unpredictability variant and each party) with exact arithmetic.
///
/// S_LE_C is asserted everywhere. The I and U_A checks are asserted on
/// oneway_slice and chsh16, the U_B checks on chsh16 only. OW_BOUND is
/// asserted for both parties whenever s = 0. Everything else is exploratory.
std::vector<PropertyResult> check_box(const Box& box, Domain domain);

/// MIX_COST and MIX_SIGNAL on p d0_1 + (1-p) d2_1 (variant "d0_1+d2_1") and
/// p d0_1 + (1-p) d3_1 (variant "d0_1+d3_1"): C = 1 under both bases,
/// s = max(p, 1-p) and |2p - 1| respectively. All asserted equalities.
/// Throws Error(BadWeights) unless 0 <= p <= 1.
std::vector<PropertyResult> check_mixture_identities(const Rational& p);

/// NONUNIQUE_DECOMP, exploratory: holds when two optimal decompositions with
/// different supports exist; slack is their cost difference (always 0).
PropertyResult check_nonunique(const Box& box, Basis basis);

/// Box plus the domain it is checked against.
struct LabeledBox {
    Box box;
    Domain domain;
};

struct FuzzOptions {
    /// Replaces the family sampler. Receives the sampler built from the spec.
    std::function<LabeledBox(Sampler&)> sampler_hook;
    /// Exploratory violations keep at most this many witnesses per property label.
    std::size_t exploratory_witness_limit = 8;
};

struct PropertyCounts {
    long checked = 0;
    long held = 0;
    long violated = 0;
};

struct Witness {
    long sample = 0;
    PropertyResult result;
    Box box;
    Domain domain = Domain::general;
};

struct FindingsReport {
    RandomSpec family;
    /// Samples requested and samples actually checked (fewer after an abort).
    long requested = 0;
    long samples = 0;
    std::map<std::string, PropertyCounts> per_property;
    std::vector<Witness> asserted_violations;
    std::vector<Witness> exploratory_violations;
    bool aborted = false;

    bool passed() const { return asserted_violations.empty(); }
};

inline constexpr std::string_view kFindingsFormat = "findings-v1";

/// Checks `count` boxes from the family. Stops at the first sample with an
/// asserted violation. Throws Error(BadParameter) if count < 1.
FindingsReport fuzz(const RandomSpec& spec, long count, const FuzzOptions& options = {});

/// Result fields plus "sample", "domain" and the box in box-v1 form.
nlohmann::json witness_to_json(const Witness& w);
nlohmann::json findings_to_json(const FindingsReport& report);

struct ReproCheck {
    std::string section;
    std::string name;
    std::string expected;
    std::string actual;
    bool passed = false;
};

/// A stated value the implementation cannot reproduce, with the computed one.
struct Discrepancy {
    std::string name;
    std::string stated;
    std::string computed;
    std::string note;
};

struct ReproReport {
    std::vector<ReproCheck> checks;
    std::vector<Discrepancy> discrepancies;

    bool passed() const;
};

/// Tables, census, mixture grids, PR panel, isotropic sweep, Tsirelson point,
/// non-uniqueness witness and equality cases.
ReproReport reproduce_reference();

nlohmann::json repro_to_json(const ReproReport& report);

}  // namespace boxlab
