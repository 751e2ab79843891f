// test_spinspace.cpp — block bookkeeping against exact recursions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "dicke/spinspace.hpp"

using namespace dicke;

namespace {

// Multiplicities by adding one spin-1/2 at a time: m(n, j) = m(n-1, j-1/2) +
// m(n-1, j+1/2). Exact, independent of the closed form under test.
std::map<int, mpz_class> clebsch_multiplicities(int n_qubits) {
    std::map<int, mpz_class> m{{1, mpz_class{1}}};
    for (int n = 2; n <= n_qubits; ++n) {
        std::map<int, mpz_class> next;
        for (const auto& [tj, count] : m) {
            next[tj + 1] += count;
            if (tj >= 1) next[tj - 1] += count;
        }
        next.erase(-1);
        m = std::move(next);
    }
    return m;
}

}  // namespace

TEST_CASE("degeneracy matches the one-spin-at-a-time recursion") {
    for (int n = 1; n <= 14; ++n) {
        const auto exact = clebsch_multiplicities(n);
        const DickeLedger ledger = enumerate_blocks(n);
        REQUIRE(ledger.blocks.size() == exact.size());
        for (const DickeBlock& b : ledger.blocks) {
            INFO("N = " << n << ", 2J = " << b.twice_j);
            CHECK(b.degeneracy == exact.at(b.twice_j));
        }
    }
}

TEST_CASE("degeneracies sum to the full Hilbert space dimension") {
    for (int n = 1; n <= 14; ++n) {
        mpz_class total = 0;
        for (const DickeBlock& b : enumerate_blocks(n).blocks)
            total += b.degeneracy * (b.twice_j + 1);
        mpz_class expect;
        mpz_ui_pow_ui(expect.get_mpz_t(), 2, static_cast<unsigned long>(n));
        CHECK(total == expect);
    }
}

TEST_CASE("six-qubit degeneracies") {
    CHECK(degeneracy(6, 6) == 1);
    CHECK(degeneracy(6, 4) == 5);
    CHECK(degeneracy(6, 2) == 9);
    CHECK(degeneracy(6, 0) == 5);
}

TEST_CASE("blocks are ordered J descending with m ascending") {
    const DickeLedger ledger = enumerate_blocks(7);
    for (std::size_t b = 1; b < ledger.blocks.size(); ++b)
        CHECK(ledger.blocks[b].twice_j < ledger.blocks[b - 1].twice_j);
    for (const DickeBlock& b : ledger.blocks) {
        REQUIRE(b.twice_m.size() == static_cast<std::size_t>(b.twice_j) + 1);
        CHECK(b.twice_m.front() == -b.twice_j);
        CHECK(b.twice_m.back() == b.twice_j);
        for (std::size_t k = 1; k < b.twice_m.size(); ++k)
            CHECK(b.twice_m[k] == b.twice_m[k - 1] + 2);
    }
}

TEST_CASE("index_of and state_at are inverse bijections") {
    for (int n : {1, 2, 3, 5, 8}) {
        const DickeLedger ledger = enumerate_blocks(n);
        std::size_t expect_size = 0;
        for (const DickeBlock& b : ledger.blocks)
            expect_size += static_cast<std::size_t>(b.twice_j) + 1;
        REQUIRE(ledger.size() == expect_size);
        for (std::size_t i = 0; i < ledger.size(); ++i) {
            const auto [tj, tm] = ledger.state_at(i);
            CHECK(ledger.index_of(tj, tm) == i);
        }
    }
}

TEST_CASE("ladder amplitudes match the angular momentum algebra") {
    // |<J, m±1|J±|J, m>|^2 = J(J+1) - m(m±1), in twice-integer form
    for (int tj = 0; tj <= 16; ++tj) {
        for (int tm = -tj; tm <= tj; tm += 2) {
            const double jj = 0.25 * tj * (tj + 2);
            const double up = jj - 0.25 * tm * (tm + 2);
            const double dn = jj - 0.25 * tm * (tm - 2);
            CHECK(ladder_squared(tj, tm, Ladder::raise) == doctest::Approx(up).epsilon(1e-15));
            CHECK(ladder_squared(tj, tm, Ladder::lower) == doctest::Approx(dn).epsilon(1e-15));
        }
        if (tj > 0) {
            CHECK(ladder_squared(tj, tj, Ladder::raise) == 0.0);
            CHECK(ladder_squared(tj, -tj, Ladder::lower) == 0.0);
        }
    }
}

TEST_CASE("ladder_element carries the target label") {
    const LadderElement up = ladder_element(4, 0, Ladder::raise);
    CHECK(up.twice_j == 4);
    CHECK(up.twice_m == 2);
    CHECK(up.squared_amplitude == doctest::Approx(6.0));
    const LadderElement dn = ladder_element(3, 1, Ladder::lower);
    CHECK(dn.twice_m == -1);
}

TEST_CASE("domain and cap errors") {
    CHECK_THROWS_AS(enumerate_blocks(0), std::domain_error);
    CHECK_THROWS_AS(enumerate_blocks(-3), std::domain_error);
    CHECK_THROWS_AS(enumerate_blocks(10, 5), std::length_error);
    CHECK_THROWS_AS(degeneracy(4, 1), std::domain_error);   // parity
    CHECK_THROWS_AS(degeneracy(4, 6), std::domain_error);   // J > N/2
    CHECK_THROWS_AS(degeneracy(0, 0), std::domain_error);
    CHECK_THROWS_AS(ladder_squared(3, 4, Ladder::raise), std::domain_error);
    CHECK_THROWS_AS(ladder_squared(3, 2, Ladder::raise), std::domain_error);  // parity
}

TEST_CASE("ledger block lookup") {
    const DickeLedger ledger = enumerate_blocks(6);
    CHECK(ledger.has_block(6));
    CHECK(ledger.has_block(0));
    CHECK_FALSE(ledger.has_block(1));
    CHECK_FALSE(ledger.has_block(8));
    const DickeBlock& b = ledger.block_of(2);
    CHECK(b.degeneracy == 9);
}
