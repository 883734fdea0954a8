#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fw/inexact.hpp"
#include "fw/linalg.hpp"
#include "fw/objective.hpp"
#include "fw/region.hpp"
#include "fw/rng.hpp"

using namespace fw;

namespace {

Matrix random_psd(std::size_t n, Rng& rng) {
    Matrix a(n, n);
    for (auto& x : a.data()) x = rng.gaussian();
    // A^T A with the rows as the design; guarantees PSD and symmetry.
    return a.gram();
}

Vector random_simplex_point(std::size_t n, Rng& rng) {
    Vector x(n);
    double s = 0.0;
    for (auto& v : x) {
        v = -std::log(rng.uniform() + 1e-300);
        s += v;
    }
    for (auto& v : x) v /= s;
    return x;
}

}  // namespace

TEST_CASE("simplex oracle picks the argmax vertex") {
    CHECK(lmo_simplex({{1.0, 3.0, 2.0}}).coords == Vector{0.0, 1.0, 0.0});
    CHECK(lmo_simplex({{5.0, 5.0, 5.0}}).coords == Vector{1.0, 0.0, 0.0});  // tie: lowest index
    CHECK(lmo_simplex({{-1.0, -2.0}}).coords == Vector{1.0, 0.0});
    CHECK_THROWS_AS(lmo_simplex({{}}), std::invalid_argument);
}

TEST_CASE("l1 ball oracle picks the signed max-magnitude axis") {
    CHECK(lmo_l1ball({{1.0, -3.0, 2.0}}, 1.0).coords == Vector{0.0, -1.0, 0.0});
    CHECK(lmo_l1ball({{0.0, 0.0}}, 2.0).coords == Vector{2.0, 0.0});  // sign(0) = +1
    CHECK(lmo_l1ball({{4.0, 4.0}}, 0.5).coords == Vector{0.5, 0.0});  // tie: lowest index
    CHECK_THROWS_AS(lmo_l1ball({{1.0}}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lmo_l1ball({{1.0}}, -1.0), std::invalid_argument);
}

TEST_CASE("spectrahedron oracle returns the leading eigenvector projector") {
    Matrix c1 = Matrix::diagonal({3.0, 1.0});
    auto p1 = lmo_spectrahedron(c1, 1e-12);
    CHECK(p1.coords[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(p1.coords[3] == doctest::Approx(0.0).epsilon(1e-10));
    // Objective value C • vv^T = v^T C v.
    double v1 = 3.0 * p1.coords[0] + p1.coords[1] + p1.coords[2] + p1.coords[3];
    CHECK(v1 == doctest::Approx(3.0).epsilon(1e-10));

    // Degenerate spectrum: only the objective value is determined.
    auto p2 = lmo_spectrahedron(Matrix::identity(2), 1e-12);
    CHECK(p2.coords[0] + p2.coords[3] == doctest::Approx(1.0).epsilon(1e-10));

    Matrix c3(2, 2);
    c3(0, 0) = 2.0; c3(0, 1) = 1.0; c3(1, 0) = 1.0; c3(1, 1) = 2.0;
    auto p3 = lmo_spectrahedron(c3, 1e-12);
    // v = (1,1)/sqrt(2), so every entry of vv^T is 1/2.
    for (double x : p3.coords) CHECK(x == doctest::Approx(0.5).epsilon(1e-8));

    Matrix bad(2, 2);
    bad(0, 1) = 1.0;  // asymmetric
    CHECK_THROWS_AS(lmo_spectrahedron(bad, 1e-12), std::invalid_argument);
}

TEST_CASE("spectrahedron oracle value matches an independent eigensolver") {
    Rng rng(99);
    for (std::size_t n = 2; n <= 8; ++n) {
        Matrix c(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                double v = rng.gaussian();
                c(i, j) = v;
                c(j, i) = v;
            }
        const double tol = 1e-12;
        auto p = lmo_spectrahedron(c, tol);
        double val = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) val += c(i, j) * p.coords[i * n + j];
        double lam_max = jacobi_eigenvalues(c).back();
        CHECK(std::fabs(val - lam_max) <= tol * c.frobenius_norm() * (1.0 + double(n)) + 1e-9);

        SpectrahedronRegion region(n);
        CHECK(region.contains(p.coords, 1e-9));
    }
}

TEST_CASE("polytope oracle outputs are vertices matching brute force") {
    Rng rng(7);
    SimplexRegion simplex(9);
    L1BallRegion ball(6, 1.75);
    auto simplex_vs = *simplex.vertices();
    auto ball_vs = *ball.vertices();
    for (int t = 0; t < 200; ++t) {
        LinearFunctional c{rng.gaussian_vector(9)};
        auto out = simplex.lmo(c);
        CHECK(simplex.contains(out.coords, 1e-9));
        double best = -1e300;
        for (const auto& v : simplex_vs) best = std::max(best, dot(c.coeffs, v.coords));
        CHECK(dot(c.coeffs, out.coords) == doctest::Approx(best).epsilon(1e-14));

        LinearFunctional c2{rng.gaussian_vector(6)};
        auto out2 = ball.lmo(c2);
        CHECK(ball.contains(out2.coords, 1e-9));
        double best2 = -1e300;
        for (const auto& v : ball_vs) best2 = std::max(best2, dot(c2.coeffs, v.coords));
        CHECK(dot(c2.coeffs, out2.coords) == doctest::Approx(best2).epsilon(1e-14));
    }
}

TEST_CASE("declared diameters equal brute-force vertex-pair maxima") {
    SimplexRegion simplex(5);
    auto svs = *simplex.vertices();
    double best = 0.0;
    for (const auto& a : svs)
        for (const auto& b : svs) best = std::max(best, norm1(sub(a.coords, b.coords)));
    CHECK(simplex.diameter() == best);

    L1BallRegion ball(4, 3.0);
    auto bvs = *ball.vertices();
    best = 0.0;
    for (const auto& a : bvs)
        for (const auto& b : bvs) best = std::max(best, norm1(sub(a.coords, b.coords)));
    CHECK(ball.diameter() == best);
}

TEST_CASE("approximate oracle returns the worst admissible vertex") {
    SimplexRegion simplex(3);
    LinearFunctional c{{1.0, 3.0, 2.0}};

    auto [p1, cert1] = approx_lmo(simplex, c, 0.5);
    CHECK(p1.coords == Vector{0.0, 1.0, 0.0});
    CHECK(cert1 == 0.0);

    auto [p2, cert2] = approx_lmo(simplex, c, 1.0);
    CHECK(p2.coords == Vector{0.0, 0.0, 1.0});
    CHECK(cert2 == doctest::Approx(1.0).epsilon(1e-15));

    // Zero slack is bit-identical to the exact oracle.
    auto [p3, cert3] = approx_lmo(simplex, c, 0.0);
    CHECK(p3.coords == simplex.lmo(c).coords);
    CHECK(cert3 == 0.0);
}

TEST_CASE("approximate oracle certificate stays within the slack") {
    Rng rng(21);
    SimplexRegion simplex(8);
    for (int t = 0; t < 500; ++t) {
        LinearFunctional c{rng.gaussian_vector(8)};
        double delta = rng.uniform() * 2.0;
        auto [p, cert] = approx_lmo(simplex, c, delta);
        CHECK(cert >= 0.0);
        CHECK(cert <= delta);
        double exact = dot(c.coeffs, simplex.lmo(c).coords);
        CHECK(dot(c.coeffs, p.coords) >= exact - delta - 1e-12 * std::fabs(exact));
    }
}

TEST_CASE("inexact gradient has the configured dual-norm magnitude") {
    SimplexRegion simplex(2);
    QuadraticObjective h(Matrix::identity(2), {0.0, 0.0});
    Vector lambda{0.25, 0.75};

    Rng rng0(5);
    auto g0 = delta_gradient(h, simplex, lambda, 0.0, rng0);
    CHECK(g0.coeffs == h.gradient(lambda).coeffs);

    // Diam = 2 in l1, dual norm is l-infinity: the perturbation magnitude is
    // exactly delta / Diam = 0.3.
    Rng rng1(5);
    auto g1 = delta_gradient(h, simplex, lambda, 0.6, rng1);
    Vector e = sub(g1.coeffs, h.gradient(lambda).coeffs);
    CHECK(norm_inf(e) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("inexact gradient satisfies the defining pairing inequality") {
    Rng rng(31);
    SimplexRegion simplex(6);
    Matrix q = random_psd(6, rng);
    QuadraticObjective h(q, rng.gaussian_vector(6));
    const double delta = 0.37;
    for (int t = 0; t < 10000; ++t) {
        Vector bar = random_simplex_point(6, rng);
        Vector other = random_simplex_point(6, rng);
        Rng grng(static_cast<std::uint64_t>(t));
        auto g = delta_gradient(h, simplex, bar, delta, grng);
        Vector e = sub(h.gradient(bar).coeffs, g.coeffs);
        CHECK(std::fabs(dot(e, sub(other, bar))) <= delta + 1e-12);
    }
}

TEST_CASE("offset value oracle obeys both defining inequalities") {
    Rng rng(13);
    Matrix q = random_psd(4, rng);
    QuadraticObjective h(q, rng.gaussian_vector(4));
    double lip = *h.lipschitz();

    Vector lam{0.1, 0.2, 0.3, 0.4};
    auto [v0, g0] = dl_oracle(h, lam, 0.0, lip);
    CHECK(v0 == h.value(lam));
    CHECK(g0.coeffs == h.gradient(lam).coeffs);

    auto [v1, g1] = dl_oracle(h, lam, 0.1, lip);
    CHECK(v1 - h.value(lam) == doctest::Approx(0.1).epsilon(1e-15));

    CHECK_THROWS_AS(dl_oracle(h, lam, 0.1, lip * 0.5), std::invalid_argument);

    const double delta = 0.05;
    for (int t = 0; t < 10000; ++t) {
        Vector bar = random_simplex_point(4, rng);
        Vector other = random_simplex_point(4, rng);
        auto [hv, g] = dl_oracle(h, bar, delta, lip);
        Vector d = sub(other, bar);
        double lin = hv + dot(g.coeffs, d);
        // Upper: h(other) <= h_val + g^T d.
        CHECK(h.value(other) <= lin + 1e-12);
        // Lower: h(other) >= h_val + g^T d - L/2 ||d||^2 - delta.
        CHECK(h.value(other) >= lin - 0.5 * lip * dot(d, d) - delta - 1e-12);
    }
}

TEST_CASE("quadratic objective passes concavity and finite-difference audits") {
    Rng rng(77);
    for (int inst = 0; inst < 5; ++inst) {
        std::size_t n = 3 + static_cast<std::size_t>(inst);
        Matrix q = random_psd(n, rng);
        QuadraticObjective h(q, rng.gaussian_vector(n));

        for (int t = 0; t < 200; ++t) {
            Vector a = random_simplex_point(n, rng);
            Vector b = random_simplex_point(n, rng);
            double mu = rng.uniform();
            Vector mix(n);
            for (std::size_t i = 0; i < n; ++i) mix[i] = mu * a[i] + (1.0 - mu) * b[i];
            CHECK(h.value(mix) >= mu * h.value(a) + (1.0 - mu) * h.value(b) - 1e-9);
        }

        Vector x = random_simplex_point(n, rng);
        Vector g = h.gradient(x).coeffs;
        const double eps = 1e-6;
        for (std::size_t i = 0; i < n; ++i) {
            Vector xp = x, xm = x;
            xp[i] += eps;
            xm[i] -= eps;
            double fd = (h.value(xp) - h.value(xm)) / (2.0 * eps);
            CHECK(fd == doctest::Approx(g[i]).epsilon(1e-5));
        }
    }
}
