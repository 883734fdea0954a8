#include "fw/inexact.hpp"

#include <stdexcept>

namespace fw {

InexactnessSpec InexactnessSpec::constant_lmo_delta(double delta, std::uint64_t seed) {
    if (delta < 0.0) throw std::invalid_argument("InexactnessSpec: delta must be nonnegative");
    InexactnessSpec s;
    s.lmo_delta = [delta](int) { return delta; };
    s.seed = seed;
    return s;
}

InexactnessSpec InexactnessSpec::delta_oracle(double delta, std::uint64_t seed) {
    if (delta < 0.0) throw std::invalid_argument("InexactnessSpec: delta must be nonnegative");
    InexactnessSpec s;
    s.gradient_model = GradientModel::DeltaOracle;
    s.gradient_delta = delta;
    s.seed = seed;
    return s;
}

InexactnessSpec InexactnessSpec::dl_oracle_spec(double delta, double lipschitz) {
    if (delta < 0.0) throw std::invalid_argument("InexactnessSpec: delta must be nonnegative");
    if (lipschitz < 0.0) throw std::invalid_argument("InexactnessSpec: L must be nonnegative");
    InexactnessSpec s;
    s.gradient_model = GradientModel::DLOracle;
    s.gradient_delta = delta;
    s.gradient_lipschitz = lipschitz;
    return s;
}

std::pair<DecisionPoint, double> approx_lmo(const FeasibleRegion& region,
                                            const LinearFunctional& c, double delta) {
    if (delta < 0.0) throw std::invalid_argument("approx_lmo: delta must be nonnegative");
    auto verts = region.vertices();
    if (!verts) {
        // No finite vertex set: the exact oracle trivially satisfies the
        // delta-approximation inequality with zero slack.
        return {region.lmo(c), 0.0};
    }
    const auto& vs = *verts;
    std::vector<double> vals(vs.size());
    double maxval = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        vals[i] = dot(c.coeffs, vs[i].coords);
        maxval = std::max(maxval, vals[i]);
    }
    // Worst vertex still admissible: minimal value with c^T v ≥ max − δ,
    // ties by enumeration order.
    std::size_t pick = vs.size();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vals[i] >= maxval - delta && (pick == vs.size() || vals[i] < vals[pick])) pick = i;
    }
    double cert = std::max(0.0, maxval - vals[pick]);
    return {vs[pick], cert};
}

LinearFunctional delta_gradient(const ObjectiveOracle& objective, const FeasibleRegion& region,
                                const Vector& lambda, double delta, Rng& rng) {
    if (delta < 0.0) throw std::invalid_argument("delta_gradient: delta must be nonnegative");
    LinearFunctional g = objective.gradient(lambda);
    double diam = region.diameter();
    if (delta == 0.0 || diam == 0.0) return g;

    Vector e = rng.gaussian_vector(g.coeffs.size());
    double dual = region.norm_kind() == NormKind::L1 ? norm_inf(e) : norm2(e);
    while (dual == 0.0) {
        e = rng.gaussian_vector(g.coeffs.size());
        dual = region.norm_kind() == NormKind::L1 ? norm_inf(e) : norm2(e);
    }
    double scale = (delta / diam) / dual;
    for (std::size_t i = 0; i < e.size(); ++i) g.coeffs[i] += scale * e[i];
    return g;
}

std::pair<double, LinearFunctional> dl_oracle(const ObjectiveOracle& objective,
                                              const Vector& lambda, double delta,
                                              double lipschitz) {
    if (delta < 0.0) throw std::invalid_argument("dl_oracle: delta must be nonnegative");
    if (auto declared = objective.lipschitz(); declared && lipschitz < *declared - 1e-12)
        throw std::invalid_argument("dl_oracle: L below the objective's Lipschitz constant");
    return {objective.value(lambda) + delta, objective.gradient(lambda)};
}

}  // namespace fw
