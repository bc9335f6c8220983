#include <catch2/catch_amalgamated.hpp>

#include "qmt/density.hpp"
#include "qmt/entropy.hpp"
#include "qmt/spectral.hpp"
#include "qmt/tensor.hpp"
#include "test_helpers.hpp"

using namespace qmt;
using qmt::test::require_close;
using Catch::Approx;

TEST_CASE("layout validation and arithmetic") {
    SystemLayout l{{"A", 2}, {"B", 3}, {"C", 2}};
    REQUIRE(l.total_dim() == 12);
    REQUIRE(l.index_of("B") == 1);
    REQUIRE(l.sublayout({"C", "A"}).labels() == std::vector<std::string>{"A", "C"});
    REQUIRE(l.complement({"B"}).total_dim() == 4);
    REQUIRE_THROWS_AS(SystemLayout({{"A", 2}, {"A", 2}}), std::invalid_argument);
    REQUIRE_THROWS_AS(SystemLayout({{"A", 0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(l.index_of("Z"), std::invalid_argument);
}

TEST_CASE("tensor product basics") {
    const DensityOperator half_a = maximally_mixed({{"A", 2}});
    const DensityOperator half_b = maximally_mixed({{"B", 2}});
    const DensityOperator prod = tensor(half_a, half_b);
    require_close(prod.matrix, Matrix::Identity(4, 4) / 4.0, 1e-15, "I/2 (x) I/2");

    const DensityOperator zero = basis_state(0, {{"A", 2}});
    const DensityOperator one = basis_state(1, {{"B", 2}});
    const DensityOperator zo = tensor(zero, one);
    Matrix expect = Matrix::Zero(4, 4);
    expect(1, 1) = 1.0;  // |01>
    require_close(zo.matrix, expect, 1e-15, "|01><01|");

    REQUIRE_THROWS_AS(tensor(half_a, half_a), std::invalid_argument);
}

TEST_CASE("tensor then partial trace round-trips") {
    for (std::uint64_t seed : {11u, 22u, 33u}) {
        const DensityOperator a = random_density(SystemLayout{{"A", 3}}, seed);
        const DensityOperator b = random_density(SystemLayout{{"B", 4}}, seed + 100);
        const DensityOperator ab = tensor(a, b);
        const DensityOperator back = partial_trace(ab, {"B"});
        require_close(back.matrix, a.matrix, 1e-14, "Tr_B (rho_A (x) rho_B)");
        REQUIRE(std::abs(back.matrix.trace().real() - 1.0) <= 1e-12);
    }
}

TEST_CASE("partial trace of maximally entangled and GHZ states") {
    const DensityOperator bell = qmt::test::bell_phi_plus();
    require_close(partial_trace(bell, {"A"}).matrix, Matrix::Identity(2, 2) / 2.0, 1e-14,
                  "Tr_A |phi+>");

    // GHZ contraction done by hand as an independent oracle: entries of
    // Tr_C come from summing the two diagonal C blocks of the 8x8 matrix.
    const DensityOperator g = qmt::test::ghz();
    Matrix byhand = Matrix::Zero(4, 4);
    for (long r = 0; r < 4; ++r) {
        for (long c = 0; c < 4; ++c) {
            byhand(r, c) = g.matrix(2 * r, 2 * c) + g.matrix(2 * r + 1, 2 * c + 1);
        }
    }
    const DensityOperator traced = partial_trace(g, {"C"});
    require_close(traced.matrix, byhand, 1e-15, "Tr_C GHZ vs hand contraction");
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 0) = expect(3, 3) = 0.5;
    require_close(traced.matrix, expect, 1e-15, "Tr_C GHZ");

    REQUIRE_THROWS_AS(partial_trace(g, {"Z"}), std::invalid_argument);
}

TEST_CASE("partial trace composes") {
    for (std::uint64_t seed : {5u, 6u, 7u, 8u}) {
        const DensityOperator rho = random_density(SystemLayout{{"A", 2}, {"B", 3}, {"C", 2}}, seed);
        const DensityOperator one_shot = partial_trace(rho, {"A", "B"});
        const DensityOperator two_step = partial_trace(partial_trace(rho, {"A"}), {"B"});
        require_close(one_shot.matrix, two_step.matrix, 1e-12, "trace composition");
    }
}

TEST_CASE("permutation and embedding") {
    Rng rng(99);
    const DensityOperator a = random_density(SystemLayout{{"A", 2}}, 1);
    const DensityOperator b = random_density(SystemLayout{{"B", 3}}, 2);
    const DensityOperator ab = tensor(a, b);

    const LabeledOperator swapped = permute_subsystems(ab.labeled(), {"B", "A"});
    require_close(swapped.mat, kron(b.matrix, a.matrix), 1e-15, "swap of a product");

    const LabeledOperator twice = permute_subsystems(swapped, {"A", "B"});
    require_close(twice.mat, ab.matrix, 1e-15, "permutation round-trip");

    const SystemLayout global{{"A", 2}, {"B", 3}, {"C", 2}};
    const LabeledOperator padded = embed(a.labeled(), global);
    require_close(padded.mat, kron(a.matrix, Matrix::Identity(6, 6)), 1e-15, "pad A");

    // embedding an operator whose own order differs from the global order
    const DensityOperator c = random_density(SystemLayout{{"C", 2}}, 3);
    const DensityOperator ca = tensor(c, a);  // layout [C, A]
    const LabeledOperator emb = embed(ca.labeled(), global);
    const Matrix expect = kron(kron(a.matrix, Matrix::Identity(3, 3)), c.matrix);
    require_close(emb.mat, expect, 1e-15, "embed [C,A] into [A,B,C]");

    // embedded operators commute when their label sets are disjoint
    const DensityOperator bop = random_density(SystemLayout{{"B", 3}}, 4);
    const Matrix x = embed(ca.labeled(), global).mat;
    const Matrix y = embed(bop.labeled(), global).mat;
    require_close(x * y, y * x, 1e-15, "disjoint embeds commute");
}

TEST_CASE("merge_consecutive fuses slots without touching the matrix") {
    const DensityOperator rho = random_density(SystemLayout{{"P", 2}, {"Q", 2}, {"R", 3}}, 17);
    const LabeledOperator merged =
        merge_consecutive(rho.labeled(), {{"PQ", {"P", "Q"}}, {"R", {"R"}}});
    REQUIRE(merged.layout == SystemLayout{{"PQ", 4}, {"R", 3}});
    require_close(merged.mat, rho.matrix, 0.0, "merge leaves entries alone");
    REQUIRE_THROWS_AS(merge_consecutive(rho.labeled(), {{"PR", {"P", "R"}}, {"Q", {"Q"}}}),
                      std::invalid_argument);
}

TEST_CASE("spectral decomposition") {
    const Spectrum s = spectral(Matrix::Identity(2, 2) / 2.0);
    REQUIRE(s.eigenvalues(0) == Approx(0.5));
    REQUIRE(s.eigenvalues(1) == Approx(0.5));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 0.7;
    d(1, 1) = 0.3;
    const Spectrum sd = spectral(d);
    REQUIRE(sd.eigenvalues(0) == Approx(0.7));
    REQUIRE(sd.eigenvalues(1) == Approx(0.3));
    REQUIRE(std::abs(sd.eigenvectors(0, 0)) == Approx(1.0));

    Rng rng(4);
    Matrix g = ginibre(6, 6, rng);
    const Matrix h = g + g.adjoint();
    const Spectrum sh = spectral(h);
    require_close(sh.reconstruct(), h, 1e-10, "V diag(l) V^dag");
    for (long i = 0; i + 1 < sh.dim(); ++i) REQUIRE(sh.eigenvalues(i) >= sh.eigenvalues(i + 1));

    Matrix nh = Matrix::Zero(2, 2);
    nh(0, 1) = 1.0;
    REQUIRE_THROWS_AS(spectral(nh), std::invalid_argument);
}

TEST_CASE("operator functions on the support") {
    require_close(sqrt_psd(Matrix::Identity(3, 3) / 4.0), Matrix::Identity(3, 3) / 2.0, 1e-14,
                  "sqrt(I/4)");

    Matrix d = Matrix::Zero(4, 4);
    d(0, 0) = d(1, 1) = 0.5;
    const Matrix ld = log2_psd(d);
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 0) = expect(1, 1) = -1.0;
    require_close(ld, expect, 1e-14, "log2 with kernel zeroed");

    // rho^{it} is unitary on the support
    for (std::uint64_t seed : {3u, 4u}) {
        const DensityOperator rho = random_density(6, 4, seed);
        const Matrix u = cpow_psd(rho.matrix, Complex(0.0, 1.0));
        const Matrix proj = spectral(rho.matrix).support_projector();
        require_close(u * u.adjoint(), proj, 1e-10, "rho^{it} unitarity");
    }

    // sqrt squared reproduces the input on its support
    for (std::uint64_t seed : {9u, 10u}) {
        const DensityOperator rho = random_density(6, 3, seed);
        const Matrix r = sqrt_psd(rho.matrix);
        require_close(r * r, rho.matrix, 1e-10, "sqrt^2");
    }

    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    REQUIRE_THROWS_AS(sqrt_psd(neg), std::invalid_argument);
}

TEST_CASE("trace distance") {
    const DensityOperator z = basis_state(0, {{"A", 2}});
    const DensityOperator o = basis_state(1, {{"A", 2}});
    REQUIRE(trace_distance(z, z) == Approx(0.0).margin(1e-15));
    REQUIRE(trace_distance(z, o) == Approx(1.0));

    Eigen::VectorXcd plus(2);
    plus << 1.0, 1.0;
    const DensityOperator p = pure_state(plus, {{"A", 2}});
    REQUIRE(trace_distance(z, p) == Approx(0.7071067811865476).epsilon(1e-12));
    REQUIRE(trace_distance(p, z) == Approx(trace_distance(z, p)));

    // unitary invariance
    Rng rng(12);
    const DensityOperator r1 = random_density(4, 4, 21);
    const DensityOperator r2 = random_density(4, 4, 22);
    const Matrix u = haar_unitary(4, rng);
    const auto rot = [&](const DensityOperator& r) {
        return make_density(u * r.matrix * u.adjoint(), r.layout);
    };
    REQUIRE(std::abs(trace_distance(rot(r1), rot(r2)) - trace_distance(r1, r2)) <= 1e-12);

    // triangle inequality
    const DensityOperator r3 = random_density(4, 2, 23);
    REQUIRE(trace_distance(r1, r3) <=
            trace_distance(r1, r2) + trace_distance(r2, r3) + 1e-12);

    REQUIRE_THROWS_AS(trace_distance(z, random_density(SystemLayout{{"B", 2}}, 1)),
                      std::invalid_argument);
}

TEST_CASE("normality test") {
    Rng rng(8);
    Matrix g = ginibre(4, 4, rng);
    const Matrix h = g + g.adjoint();
    const auto rh = is_normal(h, 1e-12);
    REQUIRE(rh.normal);
    REQUIRE(rh.residual <= 1e-14);

    Matrix nil = Matrix::Zero(2, 2);
    nil(0, 1) = 1.0;
    const auto rn = is_normal(nil, 1e-8);
    REQUIRE_FALSE(rn.normal);
    REQUIRE(rn.residual == Approx(std::sqrt(2.0)));  // ||diag(1,-1)||_F / 1

    REQUIRE_THROWS_AS(is_normal(Matrix::Zero(2, 3), 1e-8), std::invalid_argument);
}

TEST_CASE("random densities are valid and deterministic") {
    const DensityOperator full = random_density(5, 5, 77);
    const Spectrum s = spectral(full.matrix);
    REQUIRE(s.eigenvalues(s.dim() - 1) > 0.0);
    REQUIRE(std::abs(full.matrix.trace().real() - 1.0) <= 1e-12);

    const DensityOperator pure = random_density(5, 1, 78);
    REQUIRE(spectral(pure.matrix).eigenvalues(0) == Approx(1.0));

    const DensityOperator again = random_density(5, 5, 77);
    REQUIRE(full.matrix == again.matrix);  // bit-identical

    REQUIRE_THROWS_AS(random_density(4, 5, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(random_density(4, 0, 1), std::invalid_argument);
}

TEST_CASE("density validation errors name the violated invariant") {
    Matrix bad_trace = Matrix::Identity(2, 2);
    REQUIRE_THROWS_WITH(make_density(bad_trace, SystemLayout{{"A", 2}}),
                        Catch::Matchers::ContainsSubstring("trace_tol"));

    Matrix not_psd = Matrix::Zero(2, 2);
    not_psd(0, 0) = 1.5;
    not_psd(1, 1) = -0.5;
    REQUIRE_THROWS_WITH(make_density(not_psd, SystemLayout{{"A", 2}}),
                        Catch::Matchers::ContainsSubstring("psd_tol"));

    Matrix not_herm = Matrix::Zero(2, 2);
    not_herm(0, 0) = 1.0;
    not_herm(0, 1) = 0.5;
    REQUIRE_THROWS_WITH(make_density(not_herm, SystemLayout{{"A", 2}}),
                        Catch::Matchers::ContainsSubstring("herm_tol"));
}
