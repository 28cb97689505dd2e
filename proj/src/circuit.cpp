#include "switchsim/circuit.hpp"

#include <stdexcept>

namespace switchsim {

bool is_unitary_gate(InstrKind k) {
    switch (k) {
        case InstrKind::H:
        case InstrKind::S:
        case InstrKind::SDag:
        case InstrKind::T:
        case InstrKind::TDag:
        case InstrKind::X:
        case InstrKind::Z:
        case InstrKind::Cnot:
            return true;
        default:
            return false;
    }
}

bool is_measurement(InstrKind k) { return k == InstrKind::MeasZ || k == InstrKind::MeasX; }

bool is_preparation(InstrKind k) { return k == InstrKind::PrepZ || k == InstrKind::PrepX; }

int arity(InstrKind k) {
    if (k == InstrKind::Tick) return 0;
    if (k == InstrKind::Cnot) return 2;
    return 1;
}

const char* kind_name(InstrKind k) {
    switch (k) {
        case InstrKind::PrepZ: return "prep_z";
        case InstrKind::PrepX: return "prep_x";
        case InstrKind::H: return "h";
        case InstrKind::S: return "s";
        case InstrKind::SDag: return "sdg";
        case InstrKind::T: return "t";
        case InstrKind::TDag: return "tdg";
        case InstrKind::X: return "x";
        case InstrKind::Z: return "z";
        case InstrKind::Cnot: return "cx";
        case InstrKind::MeasZ: return "meas_z";
        case InstrKind::MeasX: return "meas_x";
        case InstrKind::Tick: return "tick";
    }
    return "?";
}

const char* experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::MagicPrep: return "magic-prep";
        case ExperimentKind::SingleCopyX: return "single-copy-x";
        case ExperimentKind::SingleCopyY: return "single-copy-y";
        case ExperimentKind::SingleCopyZ: return "single-copy-z";
        case ExperimentKind::TwoCopy: return "two-copy";
    }
    return "?";
}

ExperimentKind experiment_from_name(const std::string& name) {
    if (name == "magic-prep") return ExperimentKind::MagicPrep;
    if (name == "single-copy-x") return ExperimentKind::SingleCopyX;
    if (name == "single-copy-y") return ExperimentKind::SingleCopyY;
    if (name == "single-copy-z") return ExperimentKind::SingleCopyZ;
    if (name == "two-copy") return ExperimentKind::TwoCopy;
    throw std::invalid_argument("unknown experiment kind: " + name);
}

Basis single_copy_basis(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::SingleCopyX: return Basis::X;
        case ExperimentKind::SingleCopyY: return Basis::Y;
        case ExperimentKind::SingleCopyZ: return Basis::Z;
        default: throw std::invalid_argument("experiment has no single-copy basis");
    }
}

int Circuit::n_cbits() const {
    int n = 0;
    for (const auto& s : classical_layout) n += s.size;
    return n;
}

bool Circuit::has_segment(const std::string& name) const {
    for (const auto& s : classical_layout)
        if (s.name == name) return true;
    return false;
}

const Segment& Circuit::segment(const std::string& name) const {
    for (const auto& s : classical_layout)
        if (s.name == name) return s;
    throw std::invalid_argument("no classical segment named " + name);
}

int Circuit::cbit(const std::string& segment_name, int offset) const {
    const Segment& s = segment(segment_name);
    if (offset < 0 || offset >= s.size)
        throw std::invalid_argument("segment offset out of range");
    return s.start + offset;
}

void Circuit::validate() const {
    if (static_cast<int>(roles.size()) != n_qubits)
        throw std::invalid_argument("roles size does not match qubit count");

    int nc = n_cbits();
    std::vector<bool> segment_covered(nc, false);
    {
        int expected_start = 0;
        for (const auto& s : classical_layout) {
            if (s.start != expected_start)
                throw std::invalid_argument("classical segments not contiguous");
            expected_start += s.size;
            for (int i = s.start; i < s.start + s.size; ++i) segment_covered[i] = true;
        }
    }

    enum class QState { Unprepared, Live, Measured };
    std::vector<QState> state(n_qubits + 1, QState::Unprepared);
    std::vector<bool> cbit_written(nc, false);

    auto require_live = [&](int q, const char* what) {
        if (q < 1 || q > n_qubits) throw std::invalid_argument(std::string(what) + ": operand out of range");
        if (state[q] != QState::Live)
            throw std::invalid_argument(std::string(what) + ": qubit " + std::to_string(q) +
                                        " is not live");
    };

    for (const auto& in : instructions) {
        switch (in.kind) {
            case InstrKind::Tick:
                break;
            case InstrKind::PrepZ:
            case InstrKind::PrepX:
                if (in.q0 < 1 || in.q0 > n_qubits)
                    throw std::invalid_argument("prep: operand out of range");
                if (state[in.q0] == QState::Live)
                    throw std::invalid_argument("prep on live qubit " + std::to_string(in.q0));
                state[in.q0] = QState::Live;
                break;
            case InstrKind::Cnot:
                require_live(in.q0, "cnot control");
                require_live(in.q1, "cnot target");
                if (in.q0 == in.q1) throw std::invalid_argument("cnot control equals target");
                break;
            case InstrKind::MeasZ:
            case InstrKind::MeasX:
                require_live(in.q0, "measurement");
                if (in.cbit < 0 || in.cbit >= nc)
                    throw std::invalid_argument("measurement cbit out of layout range");
                if (cbit_written[in.cbit])
                    throw std::invalid_argument("cbit written twice: " + std::to_string(in.cbit));
                cbit_written[in.cbit] = true;
                state[in.q0] = QState::Measured;
                break;
            default:
                require_live(in.q0, kind_name(in.kind));
                break;
        }
    }
    for (int i = 0; i < nc; ++i)
        if (!cbit_written[i])
            throw std::invalid_argument("classical bit never written: " + std::to_string(i));
}

}  // namespace switchsim
