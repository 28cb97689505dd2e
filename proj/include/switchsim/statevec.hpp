#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "switchsim/circuit.hpp"
#include "switchsim/pauli.hpp"

namespace switchsim {

using cplx = std::complex<double>;

// Vector whose resize leaves elements uninitialized; merge and kernel
// passes overwrite every entry, so zero-filling multi-megabyte buffers
// would be pure waste.
template <class T>
struct UninitAlloc {
    using value_type = T;
    UninitAlloc() = default;
    template <class U>
    UninitAlloc(const UninitAlloc<U>&) {}
    T* allocate(size_t n) { return std::allocator<T>().allocate(n); }
    void deallocate(T* p, size_t n) { std::allocator<T>().deallocate(p, n); }
    template <class U>
    void construct(U*) noexcept {}
    template <class U, class... Args>
    void construct(U* p, Args&&... args) {
        ::new (static_cast<void*>(p)) U(std::forward<Args>(args)...);
    }
    bool operator==(const UninitAlloc&) const { return true; }
    bool operator!=(const UninitAlloc&) const { return false; }
};

using AmpVec = std::vector<cplx, UninitAlloc<cplx>>;

// One dense amplitude block over a subset of qubits; qubits[b] owns bit b
// of the index. `scale` is a lazily applied normalization factor so a
// fused measure can defer its 1/sqrt(p) renormalization, and `offset`
// lets a collapse keep the surviving half of a split buffer in place.
struct DenseBlock {
    std::vector<int> qubits;
    AmpVec buf;
    size_t offset = 0;
    double scale = 1.0;

    size_t dim() const { return size_t(1) << qubits.size(); }
    cplx* data() { return buf.data() + offset; }
    const cplx* data() const { return buf.data() + offset; }
    int bit_of(int qubit) const;
    double norm() const;
};

// Product-state-factorized register: the global state is the tensor
// product of disjoint dense blocks. Blocks merge lazily when a two-qubit
// gate spans them; measuring a qubit collapses it and removes it from its
// block. A RegisterState is confined to one execution stream.
class RegisterState {
public:
    explicit RegisterState(int n_qubits);
    ~RegisterState();
    RegisterState(const RegisterState&) = delete;
    RegisterState& operator=(const RegisterState&) = delete;
    RegisterState(RegisterState&&) noexcept = default;
    RegisterState& operator=(RegisterState&&) noexcept = default;

    int n_qubits() const { return n_qubits_; }
    bool is_live(int qubit) const;
    std::vector<int> live_qubits() const;

    void prep(int qubit, bool plus);
    void apply_gate1(InstrKind kind, int qubit);
    void apply_cnot(int control, int target);
    // Maximal run of CNOTs with pairwise-disjoint supports, applied as a
    // single index-permutation pass after merging the involved blocks.
    void apply_cnot_run(const std::vector<std::pair<int, int>>& pairs);
    // True when the run's controls and targets live in two separate blocks
    // and the fused readout entry points below may be used.
    bool can_fuse_switch_readout(const std::vector<std::pair<int, int>>& pairs, int qubit_a,
                                 int qubit_b) const;
    // CNOT run plus the first two H+measure steps of the control block's
    // readout, all in the merge pass.
    std::pair<int, int> merge_cnot_readout_pair(const std::vector<std::pair<int, int>>& pairs,
                                                int qubit_a, int qubit_b, double u_a, double u_b);
    void apply_pauli(const PauliOperator& word);

    // u is a uniform draw in [0,1); outcome bit is 1 iff u < P(1).
    int measure_z(int qubit, double u);
    // H then measure, one fused pass with deferred renormalization.
    int measure_x_fused(int qubit, double u);
    // Two back-to-back H+measure steps in one pass; distribution and draw
    // order match the sequential calls exactly.
    std::pair<int, int> measure_x_pair(int qubit_a, int qubit_b, double u_a, double u_b);
    // Non-destructive projective measurement of a Hermitian Pauli word;
    // returns +1 or -1.
    int measure_pauli(const PauliOperator& word, double u);

    // Amplitudes over `qubits` (which must form exactly one block),
    // permuted so qubits[0] is the lowest bit. Normalized.
    std::vector<cplx> statevector(const std::vector<int>& qubits) const;
    double fidelity_with(const std::vector<int>& qubits, const std::vector<cplx>& target) const;

    const DenseBlock& block_of(int qubit) const;
    void merge_all();
    double max_block_norm_error() const;

private:
    int n_qubits_;
    std::vector<int> block_index_;        // qubit -> slot or -1
    std::vector<std::unique_ptr<DenseBlock>> blocks_;

    DenseBlock& mutable_block_of(int qubit);
    int merge(const std::vector<int>& slots);  // returns surviving slot
    bool cnot_run_splits_blocks(const std::vector<std::pair<int, int>>& pairs) const;
    void merge_cnot_transversal(const std::vector<std::pair<int, int>>& pairs);
    void drop_qubit_entry(DenseBlock& block, int qubit);
    void release_block(int slot);
};

}  // namespace switchsim
