#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "boxlab/box.hpp"
#include "boxlab/cost.hpp"
#include "boxlab/measures.hpp"

namespace boxlab {

struct AnalysisFlags {
    bool no_signaling = false;
    bool lhv = false;
    /// I (formula variant) > 0.
    bool weakly_nonclassical = false;
    /// eta > 0.
    bool strongly_nonclassical = false;
    /// C(full256) - log2(dim) when a dimension was given; approximate.
    std::optional<double> eta_star;
    std::optional<int> dim;
};

struct AnalysisReport {
    Box box;
    ChshReport chsh;
    SignalReport signal;
    CostReport cost_full;
    /// nullopt when the box is outside the chsh16 hull.
    std::optional<CostReport> cost_chsh16;
    Rational unpredictability_formula;
    Rational unpredictability_per_party;
    UncertaintyReport uncertainty;
    AnalysisFlags flags;
};

/// Throws Error(BadDimension) for dim < 2.
AnalysisReport analyze(const Box& box, std::optional<int> dim = std::nullopt);

nlohmann::json analysis_to_json(const AnalysisReport& report);
std::string analysis_to_text(const AnalysisReport& report);

/// eta* rendered with 12 significant digits.
std::string format_eta_star(double value);

enum class SweepFamily { isotropic, mix_d0_1_d2_1, mix_d0_1_d3_1 };

std::string_view to_string(SweepFamily family);
/// "isotropic", "mix02", "mix03". Throws Error(BadParameter).
SweepFamily parse_sweep_family(std::string_view text);

/// Box at parameter t in [0,1]: isotropic(t) or t d0_1 + (1-t) d2_1 / d3_1.
Box sweep_box(SweepFamily family, const Rational& t);

/// Header "param,lambda_max,s,C,eta,I,U_A,U_B" with 12-place decimals, then
/// the same columns exactly as "num/den" with an "_exact" suffix. One row per
/// t = k/steps, k = 0..steps. Throws Error(BadParameter) if steps < 1.
std::string sweep_csv(SweepFamily family, int steps);

/// Entry point of the boxlab tool. Returns 0 on success, 1 when a check
/// fails (fuzz asserted violation, repro mismatch), 2 on usage or input errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace boxlab
