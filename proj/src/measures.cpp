#include "boxlab/measures.hpp"

namespace boxlab {

ChshReport chsh(const Box& box) {
    const std::array<Rational, 4> e = {box.correlator(0, 0), box.correlator(0, 1), box.correlator(1, 0),
                                       box.correlator(1, 1)};
    const Rational total = e[0] + e[1] + e[2] + e[3];
    ChshReport report;
    report.lambda_max = 0;
    for (int k = 0; k < 4; ++k) {
        report.values[k] = abs_value(Rational(total - 2 * e[k]));
        if (report.values[k] > report.lambda_max) report.lambda_max = report.values[k];
    }
    return report;
}

SignalReport signal(const Box& box) {
    SignalReport report;
    report.s_AtoB = 0;
    report.s_BtoA = 0;
    for (int b = 0; b < 2; ++b) {
        Rational shift = abs_value(Rational(box.marginal_B(0, b, 0) - box.marginal_B(1, b, 0)));
        if (shift > report.s_AtoB) report.s_AtoB = shift;
    }
    for (int a = 0; a < 2; ++a) {
        Rational shift = abs_value(Rational(box.marginal_A(a, 0, 0) - box.marginal_A(a, 1, 0)));
        if (shift > report.s_BtoA) report.s_BtoA = shift;
    }
    report.s = max_of(report.s_AtoB, report.s_BtoA);
    return report;
}

namespace {

Rational closeness_to_fair(const Rational& p0) { return min_of(p0, Rational(1 - p0)); }

}  // namespace

Rational unpredictability(const Box& box, UnpredictabilityVariant variant) {
    Rational best = 0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            Rational alice = closeness_to_fair(box.marginal_A(a, b, 0));
            Rational bob = closeness_to_fair(box.marginal_B(a, b, 0));
            const Rational& local =
                variant == UnpredictabilityVariant::formula ? min_of(alice, bob) : max_of(alice, bob);
            if (local > best) best = local;
        }
    }
    return best;
}

UncertaintyReport uncertainty(const Box& box) {
    UncertaintyReport report;
    for (int x = 0; x < 2; ++x) {
        report.delta_A[x] = 0;
        report.delta_B[x] = 0;
        for (int y = 0; y < 2; ++y) {
            Rational alice = min_of(box.marginal_A(x, y, 0), box.marginal_A(x, y, 1));
            Rational bob = min_of(box.marginal_B(y, x, 0), box.marginal_B(y, x, 1));
            if (alice > report.delta_A[x]) report.delta_A[x] = alice;
            if (bob > report.delta_B[x]) report.delta_B[x] = bob;
        }
    }
    report.u_A = report.delta_A[0] + report.delta_A[1];
    report.u_B = report.delta_B[0] + report.delta_B[1];
    return report;
}

bool lhv_admissible(const Box& box) {
    if (sgn(signal(box).s) > 0) return false;
    for (const auto& v : chsh(box).values) {
        if (v > 2) return false;
    }
    return true;
}

}  // namespace boxlab
