#include "fw/steprules.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace fw {

DualAverages dual_averages(const std::vector<double>& stepsizes) {
    DualAverages da;
    da.alphas.reserve(stepsizes.size());
    da.betas.reserve(stepsizes.size() + 1);
    double beta = 1.0;  // β_1
    da.betas.push_back(beta);
    for (double a : stepsizes) {
        if (!(a >= 0.0 && a < 1.0))
            throw std::domain_error("dual_averages: step-size outside [0,1)");
        double beta_next = beta / (1.0 - a);  // β_{i+1}
        da.alphas.push_back(beta * a / (1.0 - a));
        da.betas.push_back(beta_next);
        beta = beta_next;
    }
    return da;
}

double standard_step(int i) {
    if (i < 1) throw std::invalid_argument("standard_step: i must be >= 1");
    return 2.0 / (i + 2.0);
}

double averaging_step(int i) {
    if (i < 1) throw std::invalid_argument("averaging_step: i must be >= 1");
    return 1.0 / (i + 1.0);
}

double optimized_constant(int k_total) {
    if (k_total < 1) throw std::invalid_argument("optimized_constant: k_total must be >= 1");
    return 1.0 - std::pow(k_total + 1.0, -1.0 / k_total);
}

std::optional<double> warm_start_step(int i, double c1, double gap1) {
    if (i < 1) throw std::invalid_argument("warm_start_step: i must be >= 1");
    if (c1 <= 0.0) throw std::invalid_argument("warm_start_step: C_1 must be positive");
    if (gap1 <= 0.0) return std::nullopt;
    return 2.0 / (2.0 * c1 / gap1 + i + 1.0);
}

std::optional<double> dynamic_step(double ck, double gapk) {
    if (ck <= 0.0) throw std::invalid_argument("dynamic_step: C_k must be positive");
    if (gapk <= 0.0) return std::nullopt;
    return 2.0 / (2.0 * ck / gapk + 2.0);
}

namespace {

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    double mid = 0.5 * (a + b);
    // Pick the best among the bracket endpoints and midpoint.
    double best = mid, fbest = f(mid);
    for (double x : {lo, a, b, hi}) {
        double fx = f(x);
        if (fx > fbest) {
            fbest = fx;
            best = x;
        }
    }
    return best;
}

}  // namespace

double line_search(const ObjectiveOracle& objective, const Vector& lambda,
                   const Vector& lambda_tilde, const CandidateSet& candidates) {
    Vector d = sub(lambda_tilde, lambda);

    auto value_at = [&](double alpha) {
        Vector x = lambda;
        axpy(alpha, d, x);
        return objective.value(x);
    };

    if (!candidates.finite.empty()) {
        double best = candidates.finite.front();
        double fbest = value_at(best);
        for (double a : candidates.finite) {
            if (!(a >= 0.0 && a < 1.0))
                throw std::invalid_argument("line_search: candidate outside [0,1)");
            double fa = value_at(a);
            if (fa > fbest || (fa == fbest && a < best)) {
                fbest = fa;
                best = a;
            }
        }
        return best;
    }

    double lo = candidates.lo, hi = candidates.hi;
    if (!(lo >= 0.0 && hi < 1.0 && lo <= hi))
        throw std::invalid_argument("line_search: empty or invalid candidate interval");

    if (norm2(d) == 0.0) return lo;  // degenerate direction, any α optimal

    if (auto hd = objective.hessian_apply(d)) {
        // φ(α) = φ(0) + φ'(0)α − ½qα² with q = −d^T H d ≥ 0 for concave h.
        double slope = dot(objective.gradient(lambda).coeffs, d);
        double q = -dot(d, *hd);
        double alpha;
        if (q <= 0.0)
            alpha = slope > 0.0 ? hi : lo;
        else
            alpha = std::clamp(slope / q, lo, hi);
        return alpha;
    }
    return golden_section_max(value_at, lo, hi, 1e-10);
}

std::string to_string(StepRuleKind kind) {
    switch (kind) {
        case StepRuleKind::Standard: return "standard";
        case StepRuleKind::Averaging: return "averaging";
        case StepRuleKind::Constant: return "constant";
        case StepRuleKind::OptimizedConstant: return "optimized_constant";
        case StepRuleKind::WarmStartStatic: return "warm_start_static";
        case StepRuleKind::Dynamic: return "dynamic";
        case StepRuleKind::LineSearch: return "line_search";
    }
    return "unknown";
}

StepRuleKind step_rule_kind_from_string(const std::string& s) {
    if (s == "standard") return StepRuleKind::Standard;
    if (s == "averaging") return StepRuleKind::Averaging;
    if (s == "constant") return StepRuleKind::Constant;
    if (s == "optimized_constant") return StepRuleKind::OptimizedConstant;
    if (s == "warm_start_static") return StepRuleKind::WarmStartStatic;
    if (s == "dynamic") return StepRuleKind::Dynamic;
    if (s == "line_search") return StepRuleKind::LineSearch;
    throw std::invalid_argument("unknown step rule kind: " + s);
}

}  // namespace fw
