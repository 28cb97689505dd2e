#include <doctest.h>

#include <random>

#include "switchsim/pauli.hpp"

using namespace switchsim;

namespace {

PauliOperator random_pauli(int n, std::mt19937_64& rng) {
    std::string s;
    const char letters[] = "IXYZ";
    for (int q = 0; q < n; ++q) s += letters[rng() % 4];
    const char* phases[] = {"+", "-", "+i", "-i"};
    return PauliOperator::from_string(n, phases[rng() % 4] + s);
}

}  // namespace

TEST_CASE("single-qubit product rules") {
    auto x = PauliOperator::single(1, 1, PauliLetter::X);
    auto z = PauliOperator::single(1, 1, PauliLetter::Z);
    auto xz = pauli_product(x, z);
    CHECK(xz.letter(1) == PauliLetter::Y);
    CHECK(xz.phase() == std::complex<double>(0, -1));  // XZ = -iY

    auto zx = pauli_product(z, x);
    CHECK(zx.letter(1) == PauliLetter::Y);
    CHECK(zx.phase() == std::complex<double>(0, 1));
}

TEST_CASE("steane plaquette product has +1 phase") {
    auto px = PauliOperator::from_support(7, {1, 2, 6, 7}, PauliLetter::X);
    auto pz = PauliOperator::from_support(7, {1, 2, 6, 7}, PauliLetter::Z);
    auto prod = pauli_product(px, pz);
    CHECK(prod.phase() == std::complex<double>(1, 0));  // (-i)^4 = 1
    for (int q : {1, 2, 6, 7}) CHECK(prod.letter(q) == PauliLetter::Y);
    CHECK(prod.weight() == 4);
}

TEST_CASE("identity is a unit") {
    std::mt19937_64 rng(5);
    auto id = PauliOperator::identity(9);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_pauli(9, rng);
        CHECK(pauli_product(id, a) == a);
        CHECK(pauli_product(a, id) == a);
    }
}

TEST_CASE("product is associative including phase") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_pauli(6, rng);
        auto b = random_pauli(6, rng);
        auto c = random_pauli(6, rng);
        CHECK(pauli_product(pauli_product(a, b), c) == pauli_product(a, pauli_product(b, c)));
    }
}

TEST_CASE("commutation matches product phase relation") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_pauli(5, rng);
        auto b = random_pauli(5, rng);
        auto ab = pauli_product(a, b);
        auto ba = pauli_product(b, a);
        if (commutes(a, b)) {
            CHECK(ab == ba);
        } else {
            CHECK(ab.phase() == -ba.phase());
        }
    }
}

TEST_CASE("commutation examples") {
    auto x1 = PauliOperator::single(3, 1, PauliLetter::X);
    auto z1 = PauliOperator::single(3, 1, PauliLetter::Z);
    CHECK_FALSE(commutes(x1, z1));

    auto px = PauliOperator::from_support(7, {1, 2, 6, 7}, PauliLetter::X);
    auto pz = PauliOperator::from_support(7, {1, 2, 6, 7}, PauliLetter::Z);
    CHECK(commutes(px, pz));  // overlap 4 is even

    auto xbar = PauliOperator::from_support(7, {1, 2, 3}, PauliLetter::X);
    auto ybar = PauliOperator::from_support(7, {1, 2, 3}, PauliLetter::Y, -1);
    CHECK_FALSE(commutes(xbar, ybar));
}

TEST_CASE("weight and support") {
    auto p = PauliOperator::from_string(5, "-XIZYI");
    CHECK(p.weight() == 3);
    CHECK(p.support() == std::vector<int>{1, 3, 4});
    CHECK(PauliOperator::identity(5).weight() == 0);
    CHECK(p.str() == "-XIZYI");
}

TEST_CASE("size mismatch is rejected") {
    auto a = PauliOperator::identity(3);
    auto b = PauliOperator::identity(4);
    CHECK_THROWS_AS(pauli_product(a, b), std::invalid_argument);
    CHECK_THROWS_AS(commutes(a, b), std::invalid_argument);
}
