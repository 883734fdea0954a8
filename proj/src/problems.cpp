#include "fw/problems.hpp"

#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "fw/guarantees.hpp"
#include "fw/rng.hpp"

namespace fw {

namespace {

using nlohmann::json;

// Random orthogonal matrix via Gram-Schmidt on a seeded Gaussian matrix.
Matrix random_orthogonal(std::size_t n, Rng& rng) {
    Matrix g(n, n);
    for (auto& x : g.data()) x = rng.gaussian();
    // Columns of g, orthonormalized.
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < j; ++l) {
            double proj = 0.0;
            for (std::size_t i = 0; i < n; ++i) proj += g(i, j) * g(i, l);
            for (std::size_t i = 0; i < n; ++i) g(i, j) -= proj * g(i, l);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += g(i, j) * g(i, j);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) throw std::runtime_error("random_orthogonal: degenerate draw");
        for (std::size_t i = 0; i < n; ++i) g(i, j) /= nrm;
    }
    return g;
}

std::string spectrum_kind_name(SpectrumSpec::Kind k) {
    switch (k) {
        case SpectrumSpec::Kind::Identity: return "identity";
        case SpectrumSpec::Kind::Diagonal: return "diagonal";
        case SpectrumSpec::Kind::RandomRotation: return "random_rotation";
    }
    return "unknown";
}

SpectrumSpec::Kind spectrum_kind_from(const std::string& s) {
    if (s == "identity") return SpectrumSpec::Kind::Identity;
    if (s == "diagonal") return SpectrumSpec::Kind::Diagonal;
    if (s == "random_rotation") return SpectrumSpec::Kind::RandomRotation;
    throw std::invalid_argument("unknown spectrum kind: " + s);
}

}  // namespace

Problem make_quadratic_simplex(int n, const SpectrumSpec& spectrum, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("make_quadratic_simplex: n must be >= 2");
    Rng rng(seed);

    Vector eigenvalues = spectrum.eigenvalues;
    if (spectrum.kind != SpectrumSpec::Kind::Identity && eigenvalues.empty()) {
        eigenvalues.resize(static_cast<std::size_t>(n));
        for (auto& e : eigenvalues) e = rng.uniform(0.5, std::max(spectrum.scale, 0.5));
    }
    if (spectrum.kind != SpectrumSpec::Kind::Identity &&
        eigenvalues.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("make_quadratic_simplex: eigenvalue count mismatch");
    for (double e : eigenvalues)
        if (e < 0.0)
            throw std::invalid_argument("make_quadratic_simplex: negative eigenvalue (not concave)");

    Matrix q;
    std::optional<double> hstar;
    switch (spectrum.kind) {
        case SpectrumSpec::Kind::Identity: {
            if (spectrum.scale < 0.0)
                throw std::invalid_argument("make_quadratic_simplex: negative scale");
            q = Matrix::identity(static_cast<std::size_t>(n));
            for (auto& x : q.data()) x *= spectrum.scale;
            // min over Δ_n of ½σ‖λ‖² is at the center.
            hstar = -spectrum.scale / (2.0 * n);
            break;
        }
        case SpectrumSpec::Kind::Diagonal: {
            q = Matrix::diagonal(eigenvalues);
            // λ*_i ∝ 1/q_i when all q_i > 0.
            bool all_pos = true;
            double inv_sum = 0.0;
            for (double e : eigenvalues) {
                if (e <= 0.0) all_pos = false;
                else inv_sum += 1.0 / e;
            }
            if (all_pos) hstar = -0.5 / inv_sum;
            break;
        }
        case SpectrumSpec::Kind::RandomRotation: {
            Matrix u = random_orthogonal(static_cast<std::size_t>(n), rng);
            q = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < q.rows(); ++i)
                for (std::size_t j = 0; j < q.cols(); ++j) {
                    double s = 0.0;
                    for (std::size_t l = 0; l < q.rows(); ++l)
                        s += u(i, l) * eigenvalues[l] * u(j, l);
                    q(i, j) = s;
                }
            // Symmetrize away Gram-Schmidt roundoff.
            for (std::size_t i = 0; i < q.rows(); ++i)
                for (std::size_t j = i + 1; j < q.cols(); ++j) {
                    double s = 0.5 * (q(i, j) + q(j, i));
                    q(i, j) = s;
                    q(j, i) = s;
                }
            break;
        }
    }

    auto region = std::make_shared<SimplexRegion>(static_cast<std::size_t>(n));
    auto objective = std::make_shared<QuadraticObjective>(q, Vector(static_cast<std::size_t>(n), 0.0));

    Problem p;
    std::ostringstream id;
    id << "quadratic_simplex_n" << n << "_" << spectrum_kind_name(spectrum.kind);
    p.id = id.str();
    p.objective = objective;
    p.region = region;
    p.hstar = hstar;
    p.quadratic_q = q;
    p.exact_curvature = curvature_exact_quadratic(q, *region);
    json spec{{"kind", "quadratic_simplex"},
              {"n", n},
              {"spectrum", spectrum_kind_name(spectrum.kind)},
              {"scale", spectrum.scale},
              {"seed", seed}};
    if (!spectrum.eigenvalues.empty()) spec["eigenvalues"] = spectrum.eigenvalues;
    p.spec_json = spec.dump();
    return p;
}

Problem make_minmax(int m, int n, std::uint64_t seed) {
    if (m < 1 || n < 1) throw std::invalid_argument("make_minmax: dimensions must be positive");
    Rng rng(seed);

    // A is n×m so that φ(x,λ) = ½‖x‖² + λ^T(b − Ax) with x ∈ R^m, λ ∈ Δ_n.
    Matrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
    for (auto& x : a.data()) x = rng.gaussian() / std::sqrt(static_cast<double>(m));
    Vector b(static_cast<std::size_t>(n));
    for (auto& x : b) x = rng.gaussian();

    // Induced h(λ) = b^T λ − ½‖A^T λ‖², i.e. Q = A A^T.
    Matrix q(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < q.rows(); ++i)
        for (std::size_t j = i; j < q.cols(); ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < a.cols(); ++l) s += a(i, l) * a(j, l);
            q(i, j) = s;
            q(j, i) = s;
        }

    auto region = std::make_shared<SimplexRegion>(static_cast<std::size_t>(n));
    auto objective = std::make_shared<QuadraticObjective>(q, b);

    Problem p;
    std::ostringstream id;
    id << "minmax_m" << m << "_n" << n;
    p.id = id.str();
    p.objective = objective;
    p.region = region;
    p.quadratic_q = q;
    p.exact_curvature = curvature_exact_quadratic(q, *region);
    // B^m(λ) = ½‖x‖² + max_{μ∈Δ}μ^T(b − Ax) with optimal response x = A^T λ.
    Matrix a_copy = a;
    Vector b_copy = b;
    p.minmax_bound = [a_copy, b_copy](const Vector& lambda) {
        Vector x = a_copy.apply_transpose(lambda);
        Vector r = a_copy.apply(x);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < r.size(); ++i) best = std::max(best, b_copy[i] - r[i]);
        return 0.5 * dot(x, x) + best;
    };
    p.spec_json = json{{"kind", "minmax"}, {"m", m}, {"n", n}, {"seed", seed}}.dump();
    return p;
}

Problem make_l1_regression(int rows, int cols, double tau, double noise, std::uint64_t seed) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("make_l1_regression: dimensions must be positive");
    if (tau <= 0.0) throw std::invalid_argument("make_l1_regression: tau must be positive");
    if (noise < 0.0) throw std::invalid_argument("make_l1_regression: noise must be nonnegative");
    Rng rng(seed);

    Matrix x(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (auto& v : x.data()) v = rng.gaussian() / std::sqrt(static_cast<double>(rows));

    // Sparse ground truth with ‖β‖₁ = τ/2, comfortably inside the ball.
    Vector beta(static_cast<std::size_t>(cols), 0.0);
    int nnz = std::max(1, cols / 4);
    for (int j = 0; j < nnz; ++j)
        beta[static_cast<std::size_t>(j)] = (j % 2 == 0 ? 1.0 : -1.0) * (tau / 2.0) / nnz;

    Vector y = x.apply(beta);
    for (auto& v : y) v += noise * rng.gaussian();

    // h(λ) = −½‖y − Xλ‖² = −½‖y‖² + (X^T y)^T λ − ½ λ^T (X^T X) λ.
    Matrix gram = x.gram();
    Vector xty = x.apply_transpose(y);
    double c0 = -0.5 * dot(y, y);

    auto region = std::make_shared<L1BallRegion>(static_cast<std::size_t>(cols), tau);
    auto objective = std::make_shared<QuadraticObjective>(gram, xty, c0);

    Problem p;
    std::ostringstream id;
    id << "l1_regression_" << rows << "x" << cols;
    p.id = id.str();
    p.objective = objective;
    p.region = region;
    p.quadratic_q = gram;
    p.exact_curvature = curvature_exact_quadratic(gram, *region);
    if (noise == 0.0) p.hstar = 0.0;  // perfect fit attainable inside the ball
    p.spec_json = json{{"kind", "l1_regression"},
                       {"rows", rows},
                       {"cols", cols},
                       {"tau", tau},
                       {"noise", noise},
                       {"seed", seed}}
                      .dump();
    return p;
}

Problem problem_from_json(const std::string& spec_json) {
    json j;
    try {
        j = json::parse(spec_json);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("problem spec: invalid JSON: ") + e.what());
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "quadratic_simplex") {
        SpectrumSpec spec;
        spec.kind = spectrum_kind_from(j.value("spectrum", "identity"));
        spec.scale = j.value("scale", 1.0);
        if (j.contains("eigenvalues")) spec.eigenvalues = j["eigenvalues"].get<Vector>();
        return make_quadratic_simplex(j.at("n").get<int>(), spec, j.value("seed", 0ULL));
    }
    if (kind == "minmax")
        return make_minmax(j.at("m").get<int>(), j.at("n").get<int>(), j.value("seed", 0ULL));
    if (kind == "l1_regression")
        return make_l1_regression(j.at("rows").get<int>(), j.at("cols").get<int>(),
                                  j.at("tau").get<double>(), j.value("noise", 0.0),
                                  j.value("seed", 0ULL));
    throw std::invalid_argument("problem spec: unknown kind: " + kind);
}

}  // namespace fw
