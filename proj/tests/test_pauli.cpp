#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cold/pauli.hpp"

using namespace cold;

namespace {

PauliString random_string(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<uint32_t> mask(0, (1u << n) - 1);
    return PauliString(n, mask(rng), mask(rng));
}

PauliSum random_sum(std::mt19937_64& rng, int n, int terms) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    PauliSum s(n);
    for (int i = 0; i < terms; ++i) s.add(random_string(rng, n), coeff(rng));
    return s;
}

double matrix_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("letters round-trip and single-site constructors") {
    PauliString p = PauliString::from_letters("XIZY");
    CHECK(p.n_sites() == 4);
    CHECK(p.letters() == "XIZY");
    CHECK(p.letter(0) == 'X');
    CHECK(p.letter(2) == 'Z');
    CHECK(p.letter(3) == 'Y');

    CHECK(PauliString::site(3, 1, 'Y').letters() == "IYI");
    CHECK(PauliString::identity(2).is_identity());
    CHECK_THROWS(PauliString::from_letters("XQ"));
    CHECK_THROWS(PauliString::site(3, 5, 'X'));
}

TEST_CASE("single-site products follow the Pauli algebra") {
    auto X = PauliString::from_letters("X");
    auto Y = PauliString::from_letters("Y");
    auto Z = PauliString::from_letters("Z");
    auto I = PauliString::identity(1);

    auto xy = string_product(X, Y);
    CHECK(xy.string == Z);
    CHECK(xy.phase == Complex(0, 1));  // XY = iZ
    auto yx = string_product(Y, X);
    CHECK(yx.string == Z);
    CHECK(yx.phase == Complex(0, -1));  // YX = -iZ
    auto zx = string_product(Z, X);
    CHECK(zx.string == Y);
    CHECK(zx.phase == Complex(0, 1));  // ZX = iY
    auto xx = string_product(X, X);
    CHECK(xx.string == I);
    CHECK(xx.phase == Complex(1, 0));
}

TEST_CASE("string_product agrees with dense matrices") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + int(rng() % 4);
        PauliString p = random_string(rng, n), q = random_string(rng, n);
        StringProduct pq = string_product(p, q);
        Eigen::MatrixXcd lhs = to_matrix(p) * to_matrix(q);
        Eigen::MatrixXcd rhs = pq.phase * to_matrix(pq.string);
        REQUIRE(matrix_diff(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("commutes_with matches the dense commutator") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + int(rng() % 4);
        PauliString p = random_string(rng, n), q = random_string(rng, n);
        Eigen::MatrixXcd c = to_matrix(p) * to_matrix(q) - to_matrix(q) * to_matrix(p);
        bool dense_commutes = c.cwiseAbs().maxCoeff() < 1e-12;
        REQUIRE(p.commutes_with(q) == dense_commutes);
    }
}

TEST_CASE("to_matrix singles have the standard forms") {
    Eigen::MatrixXcd x = to_matrix(PauliString::from_letters("X"));
    Eigen::MatrixXcd y = to_matrix(PauliString::from_letters("Y"));
    Eigen::MatrixXcd z = to_matrix(PauliString::from_letters("Z"));
    CHECK(x(0, 1) == Complex(1, 0));
    CHECK(x(1, 0) == Complex(1, 0));
    CHECK(y(0, 1) == Complex(0, -1));
    CHECK(y(1, 0) == Complex(0, 1));
    CHECK(z(0, 0) == Complex(1, 0));
    CHECK(z(1, 1) == Complex(-1, 0));
}

TEST_CASE("site 0 is the most significant qubit") {
    // Z on site 0 of two sites: diag(1, 1, -1, -1).
    Eigen::MatrixXcd m = to_matrix(PauliString::from_letters("ZI"));
    CHECK(m(0, 0) == Complex(1, 0));
    CHECK(m(1, 1) == Complex(1, 0));
    CHECK(m(2, 2) == Complex(-1, 0));
    CHECK(m(3, 3) == Complex(-1, 0));
}

TEST_CASE("PauliSum arithmetic matches dense arithmetic") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + int(rng() % 3);
        PauliSum a = random_sum(rng, n, 5), b = random_sum(rng, n, 5);
        CHECK(matrix_diff(to_matrix(a + b), to_matrix(a) + to_matrix(b)) < 1e-12);
        CHECK(matrix_diff(to_matrix(a - b), to_matrix(a) - to_matrix(b)) < 1e-12);
        CHECK(matrix_diff(to_matrix(a * Complex(0, 2)),
                          Complex(0, 2) * to_matrix(a)) < 1e-12);
        CHECK(matrix_diff(to_matrix(product(a, b)), to_matrix(a) * to_matrix(b)) < 1e-10);
        Eigen::MatrixXcd comm =
            to_matrix(a) * to_matrix(b) - to_matrix(b) * to_matrix(a);
        CHECK(matrix_diff(to_matrix(commutator(a, b)), comm) < 1e-10);
    }
}

TEST_CASE("trace_pair equals the dense trace") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + int(rng() % 3);
        PauliSum a = random_sum(rng, n, 6), b = random_sum(rng, n, 6);
        Complex dense = (to_matrix(a) * to_matrix(b)).trace();
        Complex fast = trace_pair(a, b);
        CHECK(std::abs(dense - fast) < 1e-10);
    }
}

TEST_CASE("add merges duplicates and prune drops tiny terms") {
    PauliSum s(2);
    PauliString xx = PauliString::from_letters("XX");
    s.add(xx, 1.5);
    s.add(xx, -1.5 + 1e-18);
    CHECK(s.size() == 1);
    s.prune();
    CHECK(s.empty());
}

TEST_CASE("hermiticity detection") {
    PauliSum h(2);
    h.add(PauliString::from_letters("XY"), 0.7);
    CHECK(h.is_hermitian());
    h.add(PauliString::from_letters("ZZ"), Complex(0, 1e-6));
    CHECK(!h.is_hermitian());
    CHECK(h.max_abs_imag() == doctest::Approx(1e-6));
}

TEST_CASE("to_text renders sorted coefficient lines") {
    PauliSum s(2);
    s.add(PauliString::from_letters("ZI"), -1.0);
    s.add(PauliString::from_letters("XX"), 0.25);
    std::string text = s.to_text();
    CHECK(text.find("XX") != std::string::npos);
    CHECK(text.find("ZI") != std::string::npos);
    CHECK(text.find("XX") < text.find("ZI"));  // sorted by letters
}

TEST_CASE("commutator of commuting sums vanishes") {
    PauliSum a(3), b(3);
    a.add(PauliString::from_letters("ZZI"), 1.0);
    b.add(PauliString::from_letters("IZZ"), 2.0);
    PauliSum c = commutator(a, b);
    c.prune();
    CHECK(c.empty());
}

TEST_CASE("mismatched site counts are rejected") {
    PauliSum a(2), b(3);
    a.add(PauliString::from_letters("XX"), 1.0);
    b.add(PauliString::from_letters("XXX"), 1.0);
    CHECK_THROWS(a + b);
    CHECK_THROWS(product(a, b));
}
