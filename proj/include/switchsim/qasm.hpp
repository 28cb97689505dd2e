#pragma once

#include <map>
#include <string>

#include "switchsim/circuit.hpp"

namespace switchsim {

// Deterministic OPENQASM 2.0 text for a circuit: single quantum register
// q[n], one classical register c matching the layout, preparations as
// reset (+h for |+>), MeasX as h+measure, TICK as a barrier over the
// qubits still live at that point.
std::string emit_qasm(const Circuit& circuit);

struct QasmStats {
    int n_qubits = 0;
    int n_cbits = 0;
    std::map<std::string, int> op_counts;  // gate name -> occurrences
    int total_ops() const;
};

// Structural re-parse of QASM 2.0 text as emitted above; throws on
// malformed input.
QasmStats parse_qasm_stats(const std::string& text);

}  // namespace switchsim
