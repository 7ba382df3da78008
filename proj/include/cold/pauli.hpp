#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace cold {

using Complex = std::complex<double>;

// An N-site Pauli string in the symplectic (x,z) mask encoding:
//   I=(0,0)  X=(1,0)  Y=(1,1)  Z=(0,1), bit i <-> site i.
// The string itself is phase-free; phases live in PauliSum coefficients.
class PauliString {
public:
    PauliString() = default;
    PauliString(int n_sites, uint32_t x_mask, uint32_t z_mask)
        : n_(n_sites), x_(x_mask), z_(z_mask) {
        if (n_sites < 1 || n_sites > 30)
            throw std::invalid_argument("PauliString: bad site count");
    }

    // From a letter string like "XIZ" (site 0 first).
    static PauliString from_letters(const std::string& letters);

    static PauliString identity(int n) { return PauliString(n, 0, 0); }
    // Single-site operator, identity elsewhere.
    static PauliString site(int n, int i, char letter);

    int n_sites() const { return n_; }
    uint32_t x_mask() const { return x_; }
    uint32_t z_mask() const { return z_; }
    bool is_identity() const { return x_ == 0 && z_ == 0; }

    char letter(int i) const;
    std::string letters() const;

    bool commutes_with(const PauliString& other) const;

    bool operator==(const PauliString& o) const {
        return n_ == o.n_ && x_ == o.x_ && z_ == o.z_;
    }
    bool operator!=(const PauliString& o) const { return !(*this == o); }

private:
    int n_ = 1;
    uint32_t x_ = 0;
    uint32_t z_ = 0;
};

struct PauliStringHash {
    size_t operator()(const PauliString& p) const {
        uint64_t v = (uint64_t(p.x_mask()) << 32) | p.z_mask();
        v *= 0x9e3779b97f4a7c15ull;
        v ^= v >> 29;
        return size_t(v) ^ (size_t(p.n_sites()) << 1);
    }
};

// p*q = phase * r, phase in {1,-1,i,-i}.
struct StringProduct {
    Complex phase;
    PauliString string;
};
StringProduct string_product(const PauliString& p, const PauliString& q);

// Weighted sum of Pauli strings. Hermitian iff all coefficients are real.
class PauliSum {
public:
    PauliSum() = default;
    explicit PauliSum(int n_sites) : n_(n_sites) {}

    static PauliSum term(const PauliString& p, Complex c);

    int n_sites() const { return n_; }
    size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    const std::unordered_map<PauliString, Complex, PauliStringHash>& terms() const {
        return terms_;
    }

    Complex coefficient(const PauliString& p) const;
    void add(const PauliString& p, Complex c);

    PauliSum& operator+=(const PauliSum& other);
    PauliSum& operator-=(const PauliSum& other);
    PauliSum& operator*=(Complex c);
    PauliSum operator+(const PauliSum& other) const;
    PauliSum operator-(const PauliSum& other) const;
    PauliSum operator*(Complex c) const;

    // Drops |c| < 1e-15 entries.
    void prune(double threshold = 1e-15);

    bool is_hermitian(double tol = 1e-12) const;
    double max_abs_imag() const;

    // "coeff  letters" per line, sorted by letters; for debug dumps.
    std::string to_text() const;

private:
    int n_ = 0;
    std::unordered_map<PauliString, Complex, PauliStringHash> terms_;
};

PauliSum operator*(Complex c, const PauliSum& a);

// Full operator product a*b (Pauli closure).
PauliSum product(const PauliSum& a, const PauliSum& b);

// [a,b] = ab - ba.
PauliSum commutator(const PauliSum& a, const PauliSum& b);

// Tr[a*b] = 2^N sum_P a_P b_P (canonical strings are trace-orthogonal).
Complex trace_pair(const PauliSum& a, const PauliSum& b);

// Dense realization; site 0 is the most significant qubit.
// Throws if n_sites exceeds the cap (default 14).
Eigen::MatrixXcd to_matrix(const PauliSum& a, int max_sites = 14);
Eigen::MatrixXcd to_matrix(const PauliString& p);

}  // namespace cold
