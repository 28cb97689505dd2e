#pragma once

#include <string>
#include <vector>

namespace switchsim {

enum class InstrKind {
    PrepZ,   // |0>
    PrepX,   // |+>
    H,
    S,
    SDag,
    T,
    TDag,
    X,
    Z,
    Cnot,    // qubits = {control, target}
    MeasZ,
    MeasX,
    Tick,
};

bool is_unitary_gate(InstrKind k);
bool is_measurement(InstrKind k);
bool is_preparation(InstrKind k);
int arity(InstrKind k);
const char* kind_name(InstrKind k);

struct Instruction {
    InstrKind kind;
    int q0 = 0;      // 1-based; control for Cnot
    int q1 = 0;      // target for Cnot, unused otherwise
    int cbit = -1;   // 0-based classical destination, measurements only

    static Instruction gate1(InstrKind k, int q) { return {k, q, 0, -1}; }
    static Instruction cnot(int control, int target) { return {InstrKind::Cnot, control, target, -1}; }
    static Instruction meas(InstrKind k, int q, int cbit) { return {k, q, 0, cbit}; }
    static Instruction tick() { return {InstrKind::Tick, 0, 0, -1}; }
};

enum class QubitRole { SteaneData, QrmData, AncillaSyndrome, AncillaFlag };

enum class Basis { X, Y, Z };
enum class ExperimentKind { MagicPrep, SingleCopyX, SingleCopyY, SingleCopyZ, TwoCopy };

const char* experiment_name(ExperimentKind k);
ExperimentKind experiment_from_name(const std::string& name);
Basis single_copy_basis(ExperimentKind k);

// A named contiguous run of classical bits.
struct Segment {
    std::string name;
    int start = 0;
    int size = 0;
};

struct Circuit {
    int n_qubits = 0;                    // indices 1..n_qubits
    std::vector<QubitRole> roles;        // size n_qubits, roles[q-1]
    std::vector<Instruction> instructions;
    std::vector<Segment> classical_layout;
    bool reuse = false;

    int n_cbits() const;
    const Segment& segment(const std::string& name) const;
    bool has_segment(const std::string& name) const;
    int cbit(const std::string& segment_name, int offset = 0) const;

    // Throws std::invalid_argument on arity violations, operand range
    // errors, gates acting on measured-and-not-reprepared qubits, or a
    // classical layout that does not cover every measurement exactly once.
    void validate() const;
};

}  // namespace switchsim
