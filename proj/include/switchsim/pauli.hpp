#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace switchsim {

enum class PauliLetter : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

// Signed n-qubit Pauli word. Qubits are indexed 1..n to match the code
// lattice labellings used throughout; phase is an exact element of
// {+1, -1, +i, -i}. Internally the word is stored in symplectic form,
// P = i^k * prod_q X_q^{x_q} Z_q^{z_q}.
class PauliOperator {
public:
    PauliOperator() = default;
    explicit PauliOperator(int n);

    static PauliOperator identity(int n);
    // Single-letter word, e.g. single(7, 3, PauliLetter::X) == X_3.
    static PauliOperator single(int n, int qubit, PauliLetter letter);
    // Same letter on every qubit of `support`, phase +1 (sign=-1 flips it).
    static PauliOperator from_support(int n, const std::vector<int>& support,
                                      PauliLetter letter, int sign = +1);
    // Parse "XIZY", "-YYY", "+iXZ", "-iZZ" (leftmost letter = qubit 1).
    static PauliOperator from_string(int n, const std::string& text);

    int n() const { return n_; }
    PauliLetter letter(int qubit) const;
    // Phase of the word in letter form: P = phase * prod letters.
    std::complex<double> phase() const;
    int weight() const;
    std::vector<int> support() const;

    bool x_bit(int qubit) const;
    bool z_bit(int qubit) const;

    bool is_identity() const;  // identity letters; phase may be any
    bool commutes_with(const PauliOperator& other) const;

    PauliOperator operator*(const PauliOperator& other) const;
    bool operator==(const PauliOperator& other) const;

    std::string str() const;

private:
    int n_ = 0;
    int phase_exp_ = 0;  // i^phase_exp_, mod 4
    std::vector<uint64_t> x_, z_;

    friend struct PauliHash;
    void check_qubit(int qubit) const;
};

PauliOperator pauli_product(const PauliOperator& a, const PauliOperator& b);
bool commutes(const PauliOperator& a, const PauliOperator& b);

struct PauliHash {
    size_t operator()(const PauliOperator& p) const;
};

}  // namespace switchsim
