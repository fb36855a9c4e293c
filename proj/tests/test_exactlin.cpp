#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dtflow/errors.hpp"
#include "dtflow/exactlin.hpp"
#include "dtflow/rng.hpp"

using namespace dtflow;

namespace {

IntMatrix mat(size_t r, size_t c, std::vector<long> vals) {
    IntMatrix m(r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m.at(i, j) = Int(vals[i * c + j]);
    return m;
}

IntVec vec(std::vector<long> vals) {
    IntVec out;
    for (long v : vals) out.push_back(Int(v));
    return out;
}

IntMatrix random_matrix(SplitMix64& rng, size_t r, size_t c, long span) {
    IntMatrix m(r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j)
            m.at(i, j) = Int(static_cast<long>(rng.next() % (2 * span + 1))) - span;
    return m;
}

IntMatrix diagonal_matrix(size_t r, size_t c, const std::vector<Int>& diag) {
    IntMatrix m(r, c);
    for (size_t i = 0; i < diag.size(); ++i) m.at(i, i) = diag[i];
    return m;
}

}  // namespace

TEST_CASE("smith normal form on small examples") {
    auto s = smith_normal_form(mat(2, 2, {2, 0, 0, 3}));
    CHECK(s.diagonal == std::vector<Int>{1, 6});

    auto id = smith_normal_form(IntMatrix::identity(2));
    CHECK(id.diagonal == std::vector<Int>{1, 1});

    auto m = smith_normal_form(mat(2, 2, {2, 4, 6, 8}));
    CHECK(m.diagonal == std::vector<Int>{2, 4});
}

TEST_CASE("smith normal form reconstruction and divisibility chain") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        size_t r = 1 + rng.next() % 5;
        size_t c = 1 + rng.next() % 5;
        IntMatrix m = random_matrix(rng, r, c, 6);
        SmithForm s = smith_normal_form(m);
        CHECK(multiply(multiply(s.left, m), s.right) ==
              diagonal_matrix(r, c, s.diagonal));
        CHECK(multiply(s.left, s.left_inv) == IntMatrix::identity(r));
        for (size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
            if (s.diagonal[i + 1] == 0) continue;
            CHECK(s.diagonal[i] != 0);
            CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
        }
        for (size_t i = 0; i < s.diagonal.size(); ++i) CHECK(s.diagonal[i] >= 0);
    }
}

TEST_CASE("cokernel orders") {
    CHECK(cokernel_order(mat(2, 2, {2, 0, 0, 3})) == Order{true, 6});
    CHECK(cokernel_order(IntMatrix::identity(3)) == Order{true, 1});
    CHECK(cokernel_order(mat(2, 1, {2, -2})) == Order::infinite());
}

TEST_CASE("kernel bases") {
    auto k = kernel_basis(mat(1, 2, {1, 1}));
    REQUIRE(k.generators.size() == 1);
    bool ok = k.generators[0] == vec({1, -1}) || k.generators[0] == vec({-1, 1});
    CHECK(ok);

    CHECK(kernel_basis(IntMatrix::identity(2)).generators.empty());

    auto k2 = kernel_basis(mat(1, 2, {2, -2}));
    REQUIRE(k2.generators.size() == 1);
    bool ok2 = k2.generators[0] == vec({1, 1}) || k2.generators[0] == vec({-1, -1});
    CHECK(ok2);
}

TEST_CASE("saturation") {
    Sublattice s{2, {vec({2, 4})}};
    CHECK(lattice_equal(saturate(s), Sublattice{2, {vec({1, 2})}}));

    Sublattice full{2, {vec({1, 0}), vec({0, 1})}};
    CHECK(lattice_equal(saturate(full), full));

    Sublattice mixed{2, {vec({2, -2}), vec({1, 0})}};
    CHECK(lattice_equal(saturate(mixed), full));

    SplitMix64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        size_t n = 2 + rng.next() % 3;
        Sublattice t{n, {}};
        size_t gens = 1 + rng.next() % n;
        for (size_t g = 0; g < gens; ++g) {
            IntVec v(n);
            for (size_t i = 0; i < n; ++i)
                v[i] = Int(static_cast<long>(rng.next() % 9)) - 4;
            t.generators.push_back(std::move(v));
        }
        if (lattice_rank(t) == 0) continue;
        Sublattice sat = saturate(t);
        CHECK(lattice_equal(saturate(sat), sat));
        CHECK(index_in_saturation(sat) == 1);
    }
}

TEST_CASE("index in saturation") {
    CHECK(index_in_saturation(Sublattice{2, {vec({-4, 2})}}) == 2);
    CHECK(index_in_saturation(Sublattice{3, {vec({1, 0, 0}), vec({0, 1, 0}),
                                             vec({0, 0, 1})}}) == 1);
    CHECK(index_in_saturation(Sublattice{2, {vec({2, -2}), vec({1, 0})}}) == 2);
    CHECK_THROWS_AS(index_in_saturation(Sublattice::zero(2)), ZeroLatticeError);
}

TEST_CASE("lattice sum index") {
    CHECK(lattice_sum_index(Sublattice{2, {vec({0, 1})}},
                            Sublattice{2, {vec({-2, 1})}}) == Order{true, 2});
    CHECK(lattice_sum_index(Sublattice{2, {vec({1, 0})}},
                            Sublattice{2, {vec({0, 1})}}) == Order{true, 1});
    CHECK(lattice_sum_index(Sublattice{2, {vec({1, 0})}},
                            Sublattice{2, {vec({2, 0})}}) == Order::infinite());
}

TEST_CASE("divisibility") {
    CHECK(divisibility(vec({-4, 2})) == 2);
    CHECK(divisibility(vec({2, 4, 6})) == 2);
    CHECK(divisibility(vec({1, 0, 0})) == 1);
    CHECK_THROWS_AS(divisibility(vec({0, 0})), ZeroVectorError);
}

TEST_CASE("quotient cokernel order") {
    CHECK(quotient_cokernel_order(IntMatrix::identity(2), {}) == Order{true, 1});
    CHECK(quotient_cokernel_order(IntMatrix(2, 0), {vec({2, -2})}) ==
          Order::infinite());

    // two-vertex gluing system at dimension 2: edge block difference rows,
    // then legs (1,0), (0,1) at the lower vertex and (0,1) at the top vertex
    IntMatrix gl = mat(5, 4, {1, 0, -1, 0,
                              0, 1, 0, -1,
                              0, 0, 1, 0,
                              0, 0, 0, 1,
                              0, 1, 0, 0});
    CHECK(quotient_cokernel_order(gl, {vec({2, -2, 0, 0, 0})}) == Order{true, 2});
}

TEST_CASE("lattice sum saturation factorization") {
    SplitMix64 rng(17);
    int tested = 0;
    while (tested < 50) {
        size_t n = 2 + rng.next() % 3;
        auto random_lattice = [&](size_t gens) {
            Sublattice s{n, {}};
            for (size_t g = 0; g < gens; ++g) {
                IntVec v(n);
                for (size_t i = 0; i < n; ++i)
                    v[i] = Int(static_cast<long>(rng.next() % 7)) - 3;
                s.generators.push_back(std::move(v));
            }
            return s;
        };
        Sublattice a = random_lattice(1 + rng.next() % n);
        Sublattice b = random_lattice(1 + rng.next() % n);
        Order full = lattice_sum_index(a, b);
        if (!full.finite || lattice_rank(a) == 0 || lattice_rank(b) == 0) continue;
        Order sat_sum = lattice_sum_index(saturate(a), saturate(b));
        REQUIRE(sat_sum.finite);

        // |(a^sat + b^sat) / (a + b)| via the relation-augmented cokernel:
        // express the sum in the saturated sum's basis
        std::vector<IntVec> basis = hermite_basis(lattice_sum(saturate(a), saturate(b)));
        IntMatrix bm = IntMatrix::from_columns(n, basis);
        Sublattice coarse = lattice_sum(a, b);
        std::vector<IntVec> coords;
        for (const auto& g : coarse.generators) {
            RatVec rhs(n);
            for (size_t i = 0; i < n; ++i) rhs[i] = Rat(g[i]);
            auto sol = solve_rational(bm, rhs);
            REQUIRE(sol.has_value());
            IntVec c(sol->size());
            for (size_t i = 0; i < sol->size(); ++i) {
                REQUIRE(denominator((*sol)[i]) == 1);
                c[i] = numerator((*sol)[i]);
            }
            coords.push_back(std::move(c));
        }
        Order inner = quotient_cokernel_order(
            IntMatrix::from_columns(basis.size(), coords), {});
        REQUIRE(inner.finite);
        CHECK(full.value == sat_sum.value * inner.value);
        ++tested;
    }
}

TEST_CASE("hermite bases and rational solving") {
    Sublattice a{2, {vec({2, 0}), vec({4, 2})}};
    Sublattice b{2, {vec({2, 2}), vec({0, -2})}};
    CHECK(lattice_equal(a, b));
    CHECK_FALSE(lattice_equal(a, Sublattice{2, {vec({1, 0}), vec({0, 1})}}));

    CHECK(in_rational_span(Sublattice{2, {vec({2, -2})}}, vec({-3, 3})));
    CHECK_FALSE(in_rational_span(Sublattice{2, {vec({2, -2})}}, vec({1, 1})));

    auto sol = solve_rational(mat(2, 2, {2, 0, 0, 4}), {Rat(1), Rat(2)});
    REQUIRE(sol.has_value());
    CHECK((*sol)[0] == Rat(1, 2));
    CHECK((*sol)[1] == Rat(1, 2));
    CHECK_FALSE(solve_rational(mat(2, 1, {1, 1}), {Rat(0), Rat(1)}).has_value());
}
