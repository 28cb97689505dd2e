#include "switchsim/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace switchsim {

namespace {

int words_for(int n) { return (n + 63) / 64; }

int popcount_and(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    int c = 0;
    for (size_t w = 0; w < a.size(); ++w) c += std::popcount(a[w] & b[w]);
    return c;
}

}  // namespace

PauliOperator::PauliOperator(int n) : n_(n), x_(words_for(n), 0), z_(words_for(n), 0) {
    if (n <= 0) throw std::invalid_argument("PauliOperator: qubit count must be positive");
}

PauliOperator PauliOperator::identity(int n) { return PauliOperator(n); }

PauliOperator PauliOperator::single(int n, int qubit, PauliLetter letter) {
    PauliOperator p(n);
    p.check_qubit(qubit);
    int b = qubit - 1;
    switch (letter) {
        case PauliLetter::I: break;
        case PauliLetter::X: p.x_[b / 64] |= 1ULL << (b % 64); break;
        case PauliLetter::Z: p.z_[b / 64] |= 1ULL << (b % 64); break;
        case PauliLetter::Y:
            // Y = i XZ
            p.x_[b / 64] |= 1ULL << (b % 64);
            p.z_[b / 64] |= 1ULL << (b % 64);
            p.phase_exp_ = 1;
            break;
    }
    return p;
}

PauliOperator PauliOperator::from_support(int n, const std::vector<int>& support,
                                          PauliLetter letter, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    PauliOperator p(n);
    for (int q : support) p = p * single(n, q, letter);
    if (sign == -1) p.phase_exp_ = (p.phase_exp_ + 2) % 4;
    return p;
}

PauliOperator PauliOperator::from_string(int n, const std::string& text) {
    size_t pos = 0;
    int phase_exp = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        if (text[pos] == '-') phase_exp = 2;
        ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
        phase_exp = (phase_exp + 1) % 4;
        ++pos;
    }
    if (static_cast<int>(text.size() - pos) != n)
        throw std::invalid_argument("pauli string length does not match qubit count");
    PauliOperator p(n);
    for (int q = 1; q <= n; ++q) {
        PauliLetter l;
        switch (text[pos + q - 1]) {
            case 'I': case '_': l = PauliLetter::I; break;
            case 'X': l = PauliLetter::X; break;
            case 'Y': l = PauliLetter::Y; break;
            case 'Z': l = PauliLetter::Z; break;
            default: throw std::invalid_argument("invalid pauli letter");
        }
        if (l != PauliLetter::I) p = p * single(n, q, l);
    }
    p.phase_exp_ = (p.phase_exp_ + phase_exp) % 4;
    return p;
}

void PauliOperator::check_qubit(int qubit) const {
    if (qubit < 1 || qubit > n_) throw std::invalid_argument("qubit index out of range");
}

bool PauliOperator::x_bit(int qubit) const {
    check_qubit(qubit);
    int b = qubit - 1;
    return (x_[b / 64] >> (b % 64)) & 1;
}

bool PauliOperator::z_bit(int qubit) const {
    check_qubit(qubit);
    int b = qubit - 1;
    return (z_[b / 64] >> (b % 64)) & 1;
}

PauliLetter PauliOperator::letter(int qubit) const {
    bool x = x_bit(qubit), z = z_bit(qubit);
    if (x && z) return PauliLetter::Y;
    if (x) return PauliLetter::X;
    if (z) return PauliLetter::Z;
    return PauliLetter::I;
}

std::complex<double> PauliOperator::phase() const {
    // letter form: i^phase_exp_ * (XZ)^{#Y sites} with XZ = -i Y.
    int y_sites = popcount_and(x_, z_);
    int k = ((phase_exp_ - y_sites) % 4 + 4) % 4;
    static const std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[k];
}

int PauliOperator::weight() const {
    int w = 0;
    for (size_t i = 0; i < x_.size(); ++i) w += std::popcount(x_[i] | z_[i]);
    return w;
}

std::vector<int> PauliOperator::support() const {
    std::vector<int> s;
    for (int q = 1; q <= n_; ++q)
        if (letter(q) != PauliLetter::I) s.push_back(q);
    return s;
}

bool PauliOperator::is_identity() const {
    for (size_t i = 0; i < x_.size(); ++i)
        if (x_[i] | z_[i]) return false;
    return true;
}

bool PauliOperator::commutes_with(const PauliOperator& other) const {
    if (n_ != other.n_) throw std::invalid_argument("commutes: qubit counts differ");
    int anti = popcount_and(x_, other.z_) + popcount_and(z_, other.x_);
    return anti % 2 == 0;
}

PauliOperator PauliOperator::operator*(const PauliOperator& other) const {
    if (n_ != other.n_) throw std::invalid_argument("pauli_product: qubit counts differ");
    PauliOperator r(n_);
    // (i^a X^x1 Z^z1)(i^b X^x2 Z^z2) = i^{a+b} (-1)^{|z1 & x2|} X^{x1^x2} Z^{z1^z2}
    int swaps = popcount_and(z_, other.x_);
    r.phase_exp_ = (phase_exp_ + other.phase_exp_ + 2 * swaps) % 4;
    for (size_t w = 0; w < x_.size(); ++w) {
        r.x_[w] = x_[w] ^ other.x_[w];
        r.z_[w] = z_[w] ^ other.z_[w];
    }
    return r;
}

bool PauliOperator::operator==(const PauliOperator& other) const {
    return n_ == other.n_ && phase_exp_ == other.phase_exp_ && x_ == other.x_ && z_ == other.z_;
}

std::string PauliOperator::str() const {
    std::string s;
    auto ph = phase();
    if (ph == std::complex<double>(1, 0)) s += "+";
    else if (ph == std::complex<double>(-1, 0)) s += "-";
    else if (ph == std::complex<double>(0, 1)) s += "+i";
    else s += "-i";
    static const char letters[] = "IXYZ";
    for (int q = 1; q <= n_; ++q) s += letters[static_cast<int>(letter(q))];
    return s;
}

PauliOperator pauli_product(const PauliOperator& a, const PauliOperator& b) { return a * b; }

bool commutes(const PauliOperator& a, const PauliOperator& b) { return a.commutes_with(b); }

size_t PauliHash::operator()(const PauliOperator& p) const {
    size_t h = std::hash<int>()(p.phase_exp_);
    for (uint64_t w : p.x_) h ^= std::hash<uint64_t>()(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    for (uint64_t w : p.z_) h ^= std::hash<uint64_t>()(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

}  // namespace switchsim
