#include "switchsim/builders.hpp"

#include <stdexcept>

namespace switchsim {

namespace {

// Fan-out ladder rows for the Steane |0bar> encoder: each row is an X
// plaquette with a private pivot. Target orders pin which residuals a
// mid-row X fault can leave; every uncorrectable one anticommutes with the
// Z_3 Z_6 Z_7 verification word, and every Z residual picked up through a
// shared target is weight-1 equivalent modulo the stabilizer group and
// Zbar.
struct Row {
    int pivot;
    std::vector<int> targets;
};

const std::vector<Row> kSteaneRows = {
    {3, {7, 2, 4}},  // p2^X
    {5, {4, 7, 6}},  // p3^X
    {1, {2, 6, 7}},  // p1^X
};
const std::vector<int> kSteaneVerify = {3, 6, 7};  // Z3 Z6 Z7 = Zbar * p1^Z

// Rows for the qRM |+bar> encoder span <c1..c4, Xbar>; pivots 1,5,3,15,2.
// Within each row the running prefix of targets never has a trivial
// {p2,p3,p8,p13} syndrome, so every propagated X suffix left by a pivot
// fault is caught by the stabilizer round before the T layer.
const std::vector<Row> kQrmRows = {
    {1, {4, 9, 10, 7, 13, 12}},       // Xbar c2 c3
    {5, {4, 14, 6, 7, 11, 12, 13}},   // c2
    {3, {6, 9, 7, 8, 11, 12}},        // Xbar c1 c2
    {15, {8, 11, 13, 12, 9, 10, 14}}, // c4
    {2, {4, 6, 8, 10, 12, 14}},       // Xbar c1 c2 c3
};
// Verification measures Xbar = X1..X7 from a |+> ancilla; the CNOT order
// keeps every X suffix a fault on the ancilla can spread visible to the
// stabilizer round.
const std::vector<int> kQrmVerify = {2, 4, 3, 5, 6, 7, 1};

const std::vector<int> kP2 = {2, 3, 4, 7};
const std::vector<int> kP3 = {4, 5, 6, 7};
const std::vector<int> kP8 = {4, 5, 11, 12};
const std::vector<int> kP13 = {8, 12, 13, 15};

void emit_ladder(Circuit& c, int base, const std::vector<Row>& rows) {
    for (const Row& row : rows)
        c.instructions.push_back(Instruction::gate1(InstrKind::PrepX, base + row.pivot - 1));
    // Non-pivot qubits.
    std::vector<bool> is_pivot(64, false);
    int n = 0;
    for (const Row& row : rows) {
        is_pivot[row.pivot] = true;
        for (int t : row.targets) n = std::max(n, t);
        n = std::max(n, row.pivot);
    }
    for (int q = 1; q <= n; ++q)
        if (!is_pivot[q]) c.instructions.push_back(Instruction::gate1(InstrKind::PrepZ, base + q - 1));
    for (const Row& row : rows)
        for (int t : row.targets)
            c.instructions.push_back(Instruction::cnot(base + row.pivot - 1, base + t - 1));
}

void flagged_z_extraction(Circuit& c, int base, const std::vector<int>& support, int s, int f,
                          int synd_cbit, int flag_cbit) {
    c.instructions.push_back(Instruction::gate1(InstrKind::PrepZ, s));
    c.instructions.push_back(Instruction::gate1(InstrKind::PrepX, f));
    auto data_cnot = [&](int i) {
        c.instructions.push_back(Instruction::cnot(base + support[i] - 1, s));
    };
    auto flag_cnot = [&] { c.instructions.push_back(Instruction::cnot(f, s)); };
    data_cnot(0);
    flag_cnot();
    data_cnot(1);
    data_cnot(2);
    flag_cnot();
    data_cnot(3);
    c.instructions.push_back(Instruction::meas(InstrKind::MeasZ, s, synd_cbit));
    c.instructions.push_back(Instruction::gate1(InstrKind::H, f));
    c.instructions.push_back(Instruction::meas(InstrKind::MeasZ, f, flag_cbit));
}

void parallel_flagged_z_extraction(Circuit& c, int base, const std::vector<int>& sup_a,
                                   const std::vector<int>& sup_b, int sa, int sb, int f,
                                   int cbit_a, int cbit_b, int flag_cbit) {
    c.instructions.push_back(Instruction::gate1(InstrKind::PrepZ, sa));
    c.instructions.push_back(Instruction::gate1(InstrKind::PrepZ, sb));
    c.instructions.push_back(Instruction::gate1(InstrKind::PrepX, f));
    auto extraction = [&](const std::vector<int>& sup, int s) {
        c.instructions.push_back(Instruction::cnot(base + sup[0] - 1, s));
        c.instructions.push_back(Instruction::cnot(f, s));
        c.instructions.push_back(Instruction::cnot(base + sup[1] - 1, s));
        c.instructions.push_back(Instruction::cnot(base + sup[2] - 1, s));
        c.instructions.push_back(Instruction::cnot(f, s));
        c.instructions.push_back(Instruction::cnot(base + sup[3] - 1, s));
    };
    extraction(sup_a, sa);
    extraction(sup_b, sb);
    c.instructions.push_back(Instruction::meas(InstrKind::MeasZ, sa, cbit_a));
    c.instructions.push_back(Instruction::meas(InstrKind::MeasZ, sb, cbit_b));
    c.instructions.push_back(Instruction::gate1(InstrKind::H, f));
    c.instructions.push_back(Instruction::meas(InstrKind::MeasZ, f, flag_cbit));
}

}  // namespace

void prep_steane_zero(Circuit& c, int base, int flag_qubit, int flag_cbit) {
    emit_ladder(c, base, kSteaneRows);
    c.instructions.push_back(Instruction::gate1(InstrKind::PrepZ, flag_qubit));
    for (int q : kSteaneVerify)
        c.instructions.push_back(Instruction::cnot(base + q - 1, flag_qubit));
    c.instructions.push_back(Instruction::meas(InstrKind::MeasZ, flag_qubit, flag_cbit));
}

void prep_qrm_plus(Circuit& c, int base, int flag_qubit, int flag_cbit) {
    emit_ladder(c, base, kQrmRows);
    c.instructions.push_back(Instruction::gate1(InstrKind::PrepX, flag_qubit));
    for (int q : kQrmVerify)
        c.instructions.push_back(Instruction::cnot(flag_qubit, base + q - 1));
    c.instructions.push_back(Instruction::gate1(InstrKind::H, flag_qubit));
    c.instructions.push_back(Instruction::meas(InstrKind::MeasZ, flag_qubit, flag_cbit));
}

void qrm_z_stabilizer_round(Circuit& c, int base, const RoundAncillas& anc, bool reuse,
                            int synd_cbit0, int flag_cbit0) {
    flagged_z_extraction(c, base, kP13, anc.s13, anc.f13, synd_cbit0 + 0, flag_cbit0 + 0);
    flagged_z_extraction(c, base, kP8, anc.s8, anc.f8, synd_cbit0 + 1, flag_cbit0 + 1);
    (void)reuse;  // with reuse the caller aliases s2/s3/fpar onto measured wires
    parallel_flagged_z_extraction(c, base, kP2, kP3, anc.s2, anc.s3, anc.fpar, synd_cbit0 + 2,
                                  synd_cbit0 + 3, flag_cbit0 + 2);
}

void transversal_t(Circuit& c, int base) {
    for (int q = 1; q <= 15; ++q)
        c.instructions.push_back(
            Instruction::gate1(q % 2 == 1 ? InstrKind::T : InstrKind::TDag, base + q - 1));
}

void switch_cnot(Circuit& c, int qrm_base, int steane_base) {
    for (int i = 0; i < 7; ++i)
        c.instructions.push_back(Instruction::cnot(qrm_base + i, steane_base + i));
}

void steane_pair_cnot(Circuit& c, int base1, int base2) {
    for (int i = 0; i < 7; ++i)
        c.instructions.push_back(Instruction::cnot(base1 + i, base2 + i));
}

void destructive_measurement(Circuit& c, int base, int count, Basis basis, int cbit0) {
    for (int i = 0; i < count; ++i) {
        int q = base + i;
        if (basis == Basis::Y) c.instructions.push_back(Instruction::gate1(InstrKind::SDag, q));
        if (basis != Basis::Z) c.instructions.push_back(Instruction::gate1(InstrKind::H, q));
        c.instructions.push_back(Instruction::meas(InstrKind::MeasZ, q, cbit0 + i));
    }
}

namespace {

// One magic-state pipeline: preps, stabilizer round, Tbar, switching CNOT,
// destructive X readout of the qRM block. The Steane block stays live.
struct PipelineBits {
    int steane_data;  // cbit offsets within this copy's record
    int qrm_data;
    int z_stabs;
    int flags;
};

void emit_pipeline(Circuit& c, int steane_base, int qrm_base, int anc_base,
                   const BuildOptions& opts, const PipelineBits& bits) {
    int steane_flag = anc_base + 0;
    int qrm_flag = anc_base + 1;
    RoundAncillas anc{};
    if (opts.reuse) {
        anc = {anc_base + 2, anc_base + 3, anc_base + 4, anc_base + 5,
               anc_base + 2, anc_base + 4, anc_base + 3};
    } else {
        anc = {anc_base + 2, anc_base + 3, anc_base + 4, anc_base + 5,
               anc_base + 6, anc_base + 7, anc_base + 8};
    }

    prep_steane_zero(c, steane_base, steane_flag, bits.flags + 0);
    prep_qrm_plus(c, qrm_base, qrm_flag, bits.flags + 1);
    c.instructions.push_back(Instruction::tick());
    if (!opts.ablate_stabilizer_round) {
        qrm_z_stabilizer_round(c, qrm_base, anc, opts.reuse, bits.z_stabs, bits.flags + 2);
        c.instructions.push_back(Instruction::tick());
    }
    transversal_t(c, qrm_base);
    c.instructions.push_back(Instruction::tick());
    switch_cnot(c, qrm_base, steane_base);
    c.instructions.push_back(Instruction::tick());
    destructive_measurement(c, qrm_base, 15, Basis::X, bits.qrm_data);
}

void add_copy_roles(Circuit& c, bool reuse) {
    for (int i = 0; i < 7; ++i) c.roles.push_back(QubitRole::SteaneData);
    for (int i = 0; i < 15; ++i) c.roles.push_back(QubitRole::QrmData);
    c.roles.push_back(QubitRole::AncillaFlag);  // steane init flag
    c.roles.push_back(QubitRole::AncillaFlag);  // qrm init flag
    if (reuse) {
        c.roles.push_back(QubitRole::AncillaSyndrome);
        c.roles.push_back(QubitRole::AncillaFlag);
        c.roles.push_back(QubitRole::AncillaSyndrome);
        c.roles.push_back(QubitRole::AncillaFlag);
    } else {
        c.roles.push_back(QubitRole::AncillaSyndrome);  // s13
        c.roles.push_back(QubitRole::AncillaFlag);      // f13
        c.roles.push_back(QubitRole::AncillaSyndrome);  // s8
        c.roles.push_back(QubitRole::AncillaFlag);      // f8
        c.roles.push_back(QubitRole::AncillaSyndrome);  // s2
        c.roles.push_back(QubitRole::AncillaSyndrome);  // s3
        c.roles.push_back(QubitRole::AncillaFlag);      // fpar
    }
}

void add_copy_layout(Circuit& c, const std::string& prefix, int start, bool magic_prep,
                     bool ablated) {
    int at = start;
    auto seg = [&](const std::string& name, int size) {
        c.classical_layout.push_back({prefix + name, at, size});
        at += size;
    };
    if (!magic_prep) seg("steane-data", 7);
    seg("qrm-data", 15);
    if (!ablated) seg("z-stabilizers", 4);
    seg("flags/init-steane", 1);
    seg("flags/init-qrm", 1);
    if (!ablated) {
        seg("flags/p13", 1);
        seg("flags/p8", 1);
        seg("flags/parallel", 1);
    }
}

}  // namespace

Circuit build_experiment(ExperimentKind kind, bool reuse) {
    BuildOptions opts;
    opts.reuse = reuse;
    return build_experiment(kind, opts);
}

Circuit build_experiment(ExperimentKind kind, const BuildOptions& opts) {
    Circuit c;
    c.reuse = opts.reuse;
    const int copy_qubits = opts.reuse ? 28 : 31;
    const bool magic_prep = kind == ExperimentKind::MagicPrep;
    const bool two_copy = kind == ExperimentKind::TwoCopy;
    const bool ablated = opts.ablate_stabilizer_round;
    const int n_copies = two_copy ? 2 : 1;

    c.n_qubits = copy_qubits * n_copies;
    int copy_cbits = (magic_prep ? 24 : 31) - (ablated ? 7 : 0);
    for (int copy = 0; copy < n_copies; ++copy) {
        add_copy_roles(c, opts.reuse);
        add_copy_layout(c, two_copy ? "copy" + std::to_string(copy + 1) + "/" : "",
                        copy * copy_cbits, magic_prep, ablated);
    }

    for (int copy = 0; copy < n_copies; ++copy) {
        int qbase = copy * copy_qubits;
        int cbase = copy * copy_cbits;
        PipelineBits bits{};
        bits.steane_data = cbase;  // unused for magic-prep
        bits.qrm_data = cbase + (magic_prep ? 0 : 7);
        bits.z_stabs = bits.qrm_data + 15;
        bits.flags = ablated ? bits.z_stabs : bits.z_stabs + 4;
        emit_pipeline(c, qbase + 1, qbase + 8, qbase + 23, opts, bits);
        if (kind == ExperimentKind::SingleCopyX || kind == ExperimentKind::SingleCopyY ||
            kind == ExperimentKind::SingleCopyZ) {
            c.instructions.push_back(Instruction::tick());
            destructive_measurement(c, qbase + 1, 7, single_copy_basis(kind), bits.steane_data);
        }
    }
    if (two_copy) {
        c.instructions.push_back(Instruction::tick());
        steane_pair_cnot(c, 1, copy_qubits + 1);
        c.instructions.push_back(Instruction::tick());
        destructive_measurement(c, 1, 7, Basis::X, 0);
        destructive_measurement(c, copy_qubits + 1, 7, Basis::Z, copy_cbits);
    }
    c.validate();
    return c;
}

}  // namespace switchsim
