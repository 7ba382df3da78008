#include "cold/pauli.hpp"

#include <algorithm>
#include <sstream>

namespace cold {

namespace {

// site code: x + 2z  ->  I=0, X=1, Z=2, Y=3
constexpr int kCodeI = 0, kCodeX = 1, kCodeZ = 2, kCodeY = 3;

char code_to_letter(int c) {
    static const char tab[4] = {'I', 'X', 'Z', 'Y'};
    return tab[c];
}

// i-power of the single-site product a*b (result masks follow from XOR).
int product_phase_power(int a, int b) {
    if (a == kCodeI || b == kCodeI || a == b) return 0;
    // X*Y=iZ, Y*Z=iX, Z*X=iY are the +i cases (cyclic X->Y->Z).
    static const int cyc[4] = {0, kCodeY, kCodeX, kCodeZ};  // successor of X,Z,Y
    return cyc[a] == b ? 1 : 3;
}

}  // namespace

PauliString PauliString::from_letters(const std::string& letters) {
    uint32_t x = 0, z = 0;
    for (size_t i = 0; i < letters.size(); ++i) {
        switch (letters[i]) {
            case 'I': break;
            case 'X': x |= 1u << i; break;
            case 'Y': x |= 1u << i; z |= 1u << i; break;
            case 'Z': z |= 1u << i; break;
            default: throw std::invalid_argument("PauliString: bad letter");
        }
    }
    return PauliString(int(letters.size()), x, z);
}

PauliString PauliString::site(int n, int i, char letter) {
    if (i < 0 || i >= n) throw std::invalid_argument("PauliString::site: index");
    std::string s(size_t(n), 'I');
    s[size_t(i)] = letter;
    return from_letters(s);
}

char PauliString::letter(int i) const {
    int c = int((x_ >> i) & 1u) + 2 * int((z_ >> i) & 1u);
    return code_to_letter(c);
}

std::string PauliString::letters() const {
    std::string s;
    s.reserve(size_t(n_));
    for (int i = 0; i < n_; ++i) s.push_back(letter(i));
    return s;
}

bool PauliString::commutes_with(const PauliString& o) const {
    // Symplectic form: strings anticommute iff the site-wise conflict count is odd.
    uint32_t conflict = (x_ & o.z_) ^ (z_ & o.x_);
    return (__builtin_popcount(conflict) & 1) == 0;
}

StringProduct string_product(const PauliString& p, const PauliString& q) {
    if (p.n_sites() != q.n_sites())
        throw std::invalid_argument("string_product: length mismatch");
    int power = 0;
    for (int i = 0; i < p.n_sites(); ++i) {
        int a = int((p.x_mask() >> i) & 1u) + 2 * int((p.z_mask() >> i) & 1u);
        int b = int((q.x_mask() >> i) & 1u) + 2 * int((q.z_mask() >> i) & 1u);
        power += product_phase_power(a, b);
    }
    static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return {ipow[power & 3],
            PauliString(p.n_sites(), p.x_mask() ^ q.x_mask(), p.z_mask() ^ q.z_mask())};
}

PauliSum PauliSum::term(const PauliString& p, Complex c) {
    PauliSum s(p.n_sites());
    s.add(p, c);
    return s;
}

Complex PauliSum::coefficient(const PauliString& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? Complex(0, 0) : it->second;
}

void PauliSum::add(const PauliString& p, Complex c) {
    if (n_ == 0) n_ = p.n_sites();
    if (p.n_sites() != n_) throw std::invalid_argument("PauliSum::add: length mismatch");
    terms_[p] += c;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
    if (n_ == 0) n_ = other.n_;
    if (!other.empty() && other.n_ != n_)
        throw std::invalid_argument("PauliSum: length mismatch");
    for (const auto& [p, c] : other.terms_) terms_[p] += c;
    return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
    if (n_ == 0) n_ = other.n_;
    if (!other.empty() && other.n_ != n_)
        throw std::invalid_argument("PauliSum: length mismatch");
    for (const auto& [p, c] : other.terms_) terms_[p] -= c;
    return *this;
}

PauliSum& PauliSum::operator*=(Complex c) {
    for (auto& [p, v] : terms_) v *= c;
    return *this;
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
    PauliSum r = *this;
    r += other;
    return r;
}

PauliSum PauliSum::operator-(const PauliSum& other) const {
    PauliSum r = *this;
    r -= other;
    return r;
}

PauliSum PauliSum::operator*(Complex c) const {
    PauliSum r = *this;
    r *= c;
    return r;
}

PauliSum operator*(Complex c, const PauliSum& a) { return a * c; }

void PauliSum::prune(double threshold) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < threshold)
            it = terms_.erase(it);
        else
            ++it;
    }
}

bool PauliSum::is_hermitian(double tol) const { return max_abs_imag() <= tol; }

double PauliSum::max_abs_imag() const {
    double m = 0;
    for (const auto& [p, c] : terms_) m = std::max(m, std::abs(c.imag()));
    return m;
}

std::string PauliSum::to_text() const {
    std::vector<std::pair<std::string, Complex>> rows;
    rows.reserve(terms_.size());
    for (const auto& [p, c] : terms_) rows.emplace_back(p.letters(), c);
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::ostringstream os;
    for (const auto& [s, c] : rows) {
        if (std::abs(c.imag()) < 1e-15)
            os << c.real();
        else
            os << "(" << c.real() << (c.imag() >= 0 ? "+" : "") << c.imag() << "i)";
        os << "  " << s << "\n";
    }
    return os.str();
}

PauliSum product(const PauliSum& a, const PauliSum& b) {
    if (a.n_sites() != b.n_sites() && !a.empty() && !b.empty())
        throw std::invalid_argument("product: length mismatch");
    PauliSum r(a.n_sites());
    for (const auto& [p, cp] : a.terms())
        for (const auto& [q, cq] : b.terms()) {
            auto [phase, s] = string_product(p, q);
            r.add(s, cp * cq * phase);
        }
    r.prune();
    return r;
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
    if (a.n_sites() != b.n_sites() && !a.empty() && !b.empty())
        throw std::invalid_argument("commutator: length mismatch");
    PauliSum r(a.n_sites());
    for (const auto& [p, cp] : a.terms())
        for (const auto& [q, cq] : b.terms()) {
            if (p.commutes_with(q)) continue;  // pq - qp = 0
            auto [phase, s] = string_product(p, q);
            // anticommuting strings: [p,q] = 2 phase s
            r.add(s, 2.0 * cp * cq * phase);
        }
    r.prune();
    return r;
}

Complex trace_pair(const PauliSum& a, const PauliSum& b) {
    if (a.n_sites() != b.n_sites() && !a.empty() && !b.empty())
        throw std::invalid_argument("trace_pair: length mismatch");
    Complex acc(0, 0);
    const PauliSum& small = a.size() <= b.size() ? a : b;
    const PauliSum& large = a.size() <= b.size() ? b : a;
    for (const auto& [p, c] : small.terms()) acc += c * large.coefficient(p);
    return acc * std::pow(2.0, a.n_sites());
}

Eigen::MatrixXcd to_matrix(const PauliString& p) {
    const int n = p.n_sites();
    const int64_t dim = int64_t(1) << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    // Site i lives on bit (n-1-i): site 0 is the most significant qubit.
    uint64_t xflip = 0, yzmask = 0;
    int ycount = 0;
    for (int i = 0; i < n; ++i) {
        uint64_t bit = uint64_t(1) << (n - 1 - i);
        bool x = (p.x_mask() >> i) & 1u, z = (p.z_mask() >> i) & 1u;
        if (x) xflip |= bit;
        if (z) yzmask |= bit;
        if (x && z) ++ycount;
    }
    static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    Complex front = ipow[ycount & 3];
    for (int64_t col = 0; col < dim; ++col) {
        int par = __builtin_popcountll(uint64_t(col) & yzmask) & 1;
        m(int64_t(uint64_t(col) ^ xflip), col) = par ? -front : front;
    }
    return m;
}

Eigen::MatrixXcd to_matrix(const PauliSum& a, int max_sites) {
    if (a.n_sites() > max_sites)
        throw std::invalid_argument("to_matrix: dimension cap exceeded");
    const int64_t dim = int64_t(1) << a.n_sites();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [p, c] : a.terms()) m += c * to_matrix(p);
    return m;
}

}  // namespace cold
