#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "biloc/algebra.hpp"

using namespace biloc;

TEST_CASE("tensor scenario dimensions and block structure") {
    ScenarioPtr s = make_tensor_scenario(2, 2, 2, 2);
    CHECK(s->dim == 16);
    CHECK(s->alg_A.blocks == std::vector<std::pair<int, int>>{{2, 8}});
    CHECK(s->alg_B.blocks == std::vector<std::pair<int, int>>{{4, 4}});
    CHECK(s->alg_C.blocks == std::vector<std::pair<int, int>>{{2, 8}});

    ScenarioPtr deg = make_tensor_scenario(1, 1, 1, 1);
    CHECK(deg->dim == 1);
    CHECK(deg->alg_A.is_abelian());

    ScenarioPtr q = make_tensor_scenario(3, 2, 2, 2);
    CHECK(q->dim == 24);
    CHECK(q->alg_A.blocks == std::vector<std::pair<int, int>>{{3, 8}});
}

TEST_CASE("scenario too large is rejected") {
    CHECK_THROWS_AS(make_tensor_scenario(8, 8, 8, 8), domain_error);
}

TEST_CASE("make_block_algebra basic forms") {
    Mat id4 = Mat::Identity(4, 4);
    MatrixAlgebra diag = make_block_algebra(4, {{1, 1}, {1, 1}, {1, 1}, {1, 1}}, id4);
    CHECK(diag.is_abelian());
    CHECK_FALSE(diag.contains_m2());
    CHECK(diag.span_dim() == 4);

    MatrixAlgebra m2 = make_block_algebra(4, {{2, 2}}, id4);
    CHECK_FALSE(m2.is_abelian());
    CHECK(m2.contains_m2());
    CHECK(m2.span_dim() == 4);

    MatrixAlgebra odd = make_block_algebra(4, {{3, 1}, {1, 1}}, id4);
    CHECK_FALSE(odd.is_abelian());
    CHECK(odd.contains_m2());

    CHECK_THROWS_AS(make_block_algebra(4, {{2, 1}}, id4), domain_error);
    Mat bad = 2.0 * id4;
    CHECK_THROWS_AS(make_block_algebra(4, {{2, 2}}, bad), domain_error);
}

TEST_CASE("abelian blocks imply pairwise commuting basis") {
    Rng rng(2);
    Mat u = random_unitary(5, rng);
    MatrixAlgebra alg = make_block_algebra(5, {{1, 2}, {1, 3}}, u);
    REQUIRE(alg.is_abelian());
    for (const Mat& x : alg.basis)
        for (const Mat& y : alg.basis)
            CHECK(operator_norm(x * y - y * x) < 1e-12);
}

TEST_CASE("mutual commutation of tensor scenarios") {
    ScenarioPtr s = make_tensor_scenario(2, 2, 2, 2);
    CHECK(check_mutual_commutation(*s) <= 1e-12 * 16);
    CHECK(s->commuting());

    ScenarioPtr deg = make_tensor_scenario(1, 1, 1, 1);
    CHECK(check_mutual_commutation(*deg) <= 1e-15);
}

TEST_CASE("same nonabelian algebra on two slots fails commutation") {
    // two copies of M_2 ⊗ I on the same leg; ||[σx, σz]|| = 2 shows up as a
    // unit-size residual on the shared matrix units
    ScenarioPtr t = make_tensor_scenario(2, 1, 1, 2);
    MatrixAlgebra a = t->alg_A;
    auto bad = std::make_shared<Scenario>(t->dim, a, a, t->alg_C);
    CHECK(check_mutual_commutation(*bad) > 0.5);
    CHECK_FALSE(bad->commuting());
}

TEST_CASE("conditional expectation onto scalars and idempotence") {
    Mat id3 = Mat::Identity(3, 3);
    MatrixAlgebra scalars = make_block_algebra(3, {{1, 3}}, id3);
    Rng rng(7);
    Mat x = random_hermitian(3, rng);
    Mat e = scalars.conditional_expectation(x);
    CHECK(operator_norm(e - (x.trace() / 3.0) * id3) < 1e-12);

    ScenarioPtr s = make_tensor_scenario(2, 1, 1, 2);
    Mat y = random_hermitian(4, rng);
    Mat e1 = s->alg_A.conditional_expectation(y);
    CHECK(operator_norm(s->alg_A.conditional_expectation(e1) - e1) < 1e-12);
}

TEST_CASE("conditional expectation kills the off-algebra tensor factor") {
    // alg = M2 ⊗ I on dim 4; E(σx ⊗ σx) = σx tr(σx)/2 ⊗ I = 0
    ScenarioPtr s = make_tensor_scenario(2, 1, 1, 2);
    Mat xx = kron(pauli(1), pauli(1));
    CHECK(operator_norm(s->alg_A.conditional_expectation(xx)) < 1e-12);

    Mat nonherm = Mat::Zero(4, 4);
    nonherm(0, 1) = 1.0;
    CHECK_THROWS_AS(conditional_expectation(s->alg_A, nonherm), domain_error);
}

TEST_CASE("conditional expectation properties on random inputs") {
    ScenarioPtr s = make_tensor_scenario(2, 2, 1, 2);
    const MatrixAlgebra& alg = s->alg_B;
    Mat id = Mat::Identity(s->dim, s->dim);
    CHECK(operator_norm(alg.conditional_expectation(id) - id) < 1e-10);

    Rng rng(13);
    for (int it = 0; it < 20; ++it) {
        Mat x = random_hermitian(s->dim, rng);
        Mat e = alg.conditional_expectation(x);
        // idempotent
        CHECK(operator_norm(alg.conditional_expectation(e) - e) < 1e-10);
        // self-adjoint for the trace pairing against algebra elements
        Mat y = alg.conditional_expectation(random_hermitian(s->dim, rng));
        cplx lhs = (e * y).trace();
        cplx rhs = (x * alg.conditional_expectation(y)).trace();
        CHECK(std::abs(lhs - rhs) < 1e-10);
        // order-interval preserving
        Mat contraction = x / std::max(1.0, max_abs_eigenvalue(x));
        CHECK(max_abs_eigenvalue(alg.conditional_expectation(contraction)) <= 1.0 + 1e-10);
    }
}

TEST_CASE("membership residual") {
    ScenarioPtr s = make_tensor_scenario(2, 1, 1, 2);
    Rng rng(23);
    // element of the span -> 0
    Mat inside = s->alg_A.basis[0] + 0.5 * s->alg_A.basis[3];
    CHECK(s->alg_A.membership_residual(inside) < 1e-12);
    // identity belongs to any unital algebra
    CHECK(s->alg_A.membership_residual(Mat::Identity(4, 4)) < 1e-12);

    // diagonal algebra on dim 2: E(σx) = 0, so the residual is ||σx|| = 1
    MatrixAlgebra diag = make_block_algebra(2, {{1, 1}, {1, 1}}, Mat::Identity(2, 2));
    CHECK(diag.membership_residual(pauli(1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sign elements stay in the algebra with unit spectrum") {
    ScenarioPtr s = make_tensor_scenario(2, 2, 2, 2);
    Rng rng(31);
    for (int p = 0; p < 3; ++p) {
        const MatrixAlgebra& alg = s->party(p);
        Mat x = alg.random_sign_element(rng);
        CHECK(alg.membership_residual(x) < 1e-10);
        CHECK(operator_norm(x * x - Mat::Identity(s->dim, s->dim)) < 1e-10);
    }
}

TEST_CASE("anticommuting corner pair exists whenever a block has n >= 2") {
    Rng rng(41);
    Mat u = random_unitary(5, rng);
    MatrixAlgebra alg = make_block_algebra(5, {{3, 1}, {1, 2}}, u);
    REQUIRE(alg.contains_m2());
    auto [x, y] = alg.anticommuting_pair();
    CHECK(alg.membership_residual(x) < 1e-10);
    CHECK(alg.membership_residual(y) < 1e-10);
    CHECK(operator_norm(x * y + y * x) < 1e-12);
    // both square to the same corner projection
    Mat p = x * x;
    CHECK(operator_norm(p - y * y) < 1e-12);
    CHECK(operator_norm(p * p - p) < 1e-12);
    CHECK(operator_norm(x) == doctest::Approx(1.0).epsilon(1e-12));

    MatrixAlgebra diag = make_block_algebra(2, {{1, 1}, {1, 1}}, Mat::Identity(2, 2));
    CHECK_THROWS_AS(diag.anticommuting_pair(), domain_error);
}

TEST_CASE("partitioned scenarios commute and carry the right blocks") {
    ScenarioPtr s = make_partitioned_scenario({3, 2, 2, 3}, {1, 1, 1}, {4}, {2, 1});
    CHECK(s->dim == 36);
    CHECK(s->alg_A.is_abelian());
    CHECK(s->alg_A.blocks.size() == 3);
    CHECK(s->alg_C.blocks == std::vector<std::pair<int, int>>{{2, 12}, {1, 12}});
    CHECK(check_mutual_commutation(*s) <= commute_tol(s->dim));
}
