#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "switchsim/builders.hpp"
#include "switchsim/circuit.hpp"
#include "switchsim/codes.hpp"
#include "switchsim/decoder.hpp"
#include "switchsim/noise.hpp"
#include "switchsim/statevec.hpp"

namespace switchsim {

// Codeword construction from stabilizer projectors; independent of the
// circuit builders, so circuit outputs can be checked against it.
std::vector<cplx> codeword_zero(const StabilizerCode& code);
std::vector<cplx> codeword_plus(const StabilizerCode& code);
// (|0bar> + e^{i pi/4} |1bar>)/sqrt 2
std::vector<cplx> codeword_t(const StabilizerCode& code);
void apply_pauli_to_vector(std::vector<cplx>& vec, const PauliOperator& word);

struct ShotResult {
    ShotRecord record;
    std::unique_ptr<RegisterState> state;  // populated only when requested
};

ShotRecord run_shot(const Circuit& circuit, const NoiseModel& noise, uint64_t seed);
ShotResult run_shot_keep_state(const Circuit& circuit, const NoiseModel& noise, uint64_t seed);

// Shot i uses derive_seed(base_seed, i); shots are independent and the
// output order is deterministic. n_threads <= 0 uses the hardware count.
std::vector<ShotRecord> run_batch(const Circuit& circuit, const NoiseModel& noise, int n_shots,
                                  uint64_t base_seed, int n_threads = 0);

enum class FaultPosition { AfterInstruction, MeasurementBitFlip };

struct FaultSpec {
    int instr_index = -1;
    FaultPosition position = FaultPosition::AfterInstruction;
    PauliLetter p0 = PauliLetter::I;  // on q0
    PauliLetter p1 = PauliLetter::I;  // on q1 (CNOT target side)

    std::string str() const;
};

// One entry per (gate, nontrivial Pauli on its support): 3 per 1q gate,
// 15 per CNOT; one state-flip fault per preparation (X after |0>, Z after
// |+>); one bit flip per measurement.
std::vector<FaultSpec> enumerate_fault_locations(const Circuit& circuit);

// Noiseless execution with one inserted fault; measurement branches are
// still Born-sampled. Throws on invalid locations or identity Paulis.
ShotResult run_with_fault(const Circuit& circuit, const FaultSpec& fault, uint64_t seed);

struct FaultDisposition {
    FaultSpec fault;
    int rejected = 0;
    int accepted_correct = 0;
    int accepted_wrong = 0;
    bool both_frames_seen = false;
};

struct FtOptions {
    bool reuse = false;
    bool ablate_stabilizer_round = false;
    int reps = 12;           // branch samples per fault (before frame top-up)
    int max_reps = 96;       // cap while chasing the rarer Xbar frame
    uint64_t base_seed = 2026;
    int n_threads = 0;
    bool stop_at_first_violation = false;
    double fidelity_tol = 1e-9;
};

struct FtReport {
    int fault_count = 0;
    int reps = 0;
    long total_rejected = 0;
    long total_accepted_correct = 0;
    long total_accepted_wrong = 0;
    FaultDisposition control;  // zero-fault reference row
    std::vector<FaultDisposition> per_fault;
    std::vector<std::string> violations;
    bool pass() const { return total_accepted_wrong == 0 && control.accepted_wrong == 0; }
};

// Exhaustive single-fault check of the magic-prep circuit: for every fault
// and branch sample, if the shot passes pre-selection then the frame- and
// EC-corrected Steane block must be exactly the magic state.
FtReport ft_check(const FtOptions& options);

// Ideal error correction on a live code block at qubits base..base+n-1:
// projectively measures every generator and applies the lookup-table
// corrections for both sectors.
void ideal_error_correct(RegisterState& state, const StabilizerCode& code, int base,
                         uint64_t seed);

// Frame correction (Zbar if a=1) followed by an ideal error-correction
// round on the live Steane block at qubits base..base+6; returns the state
// fidelity with the magic state afterwards.
double corrected_magic_fidelity(RegisterState& state, int steane_base, int frame_a,
                                uint64_t ec_seed);

}  // namespace switchsim
