#pragma once

#include "switchsim/circuit.hpp"

namespace switchsim {

// Ancilla wires for the four-stabilizer round. With reuse, the parallel
// sub-round recycles the wires of the first two via reset.
struct RoundAncillas {
    int s13, f13;
    int s8, f8;
    int s2, s3, fpar;
};

struct BuildOptions {
    bool reuse = false;
    bool ablate_stabilizer_round = false;  // test hook: drop the Z round
};

// Flag-verified encoder for |0bar> of the Steane code on qubits
// base..base+6 (local 1..7); one verification flag measured into flag_cbit.
void prep_steane_zero(Circuit& c, int base, int flag_qubit, int flag_cbit);

// Flag-verified encoder for |+bar> of the qRM code on base..base+14.
void prep_qrm_plus(Circuit& c, int base, int flag_qubit, int flag_cbit);

// Flag-based extraction of {p13, p8} then {p2, p3} on a qRM block.
// Syndrome cbits synd_cbit0..+3 in order (p13, p8, p2, p3); flag cbits
// flag_cbit0..+2 in order (p13-flag, p8-flag, parallel-flag).
void qrm_z_stabilizer_round(Circuit& c, int base, const RoundAncillas& anc, bool reuse,
                            int synd_cbit0, int flag_cbit0);

// Tbar = T_1 Tdag_2 T_3 ... T_15 on a qRM block.
void transversal_t(Circuit& c, int base);

// Seven CNOTs, qRM base-face qubit i as control, Steane qubit i as target.
void switch_cnot(Circuit& c, int qrm_base, int steane_base);

// Seven CNOTs between two Steane blocks, copy 1 controls.
void steane_pair_cnot(Circuit& c, int base1, int base2);

// Measure every qubit of a block once; X realized as H+measure, Y as
// Sdag+H+measure, Z as a bare measure. cbits are cbit0..cbit0+count-1 in
// qubit order.
void destructive_measurement(Circuit& c, int base, int count, Basis basis, int cbit0);

Circuit build_experiment(ExperimentKind kind, bool reuse);
Circuit build_experiment(ExperimentKind kind, const BuildOptions& opts);

}  // namespace switchsim
