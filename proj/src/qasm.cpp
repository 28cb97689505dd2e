#include "switchsim/qasm.hpp"

#include <sstream>
#include <stdexcept>

namespace switchsim {

std::string emit_qasm(const Circuit& circuit) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\n";
    out << "include \"qelib1.inc\";\n";
    out << "qreg q[" << circuit.n_qubits << "];\n";
    out << "creg c[" << circuit.n_cbits() << "];\n";

    enum class QState { Unprepared, Live, Measured };
    std::vector<QState> state(circuit.n_qubits + 1, QState::Unprepared);
    auto q = [](int qubit) { return "q[" + std::to_string(qubit - 1) + "]"; };

    for (const auto& in : circuit.instructions) {
        switch (in.kind) {
            case InstrKind::PrepZ:
                out << "reset " << q(in.q0) << ";\n";
                state[in.q0] = QState::Live;
                break;
            case InstrKind::PrepX:
                out << "reset " << q(in.q0) << ";\n";
                out << "h " << q(in.q0) << ";\n";
                state[in.q0] = QState::Live;
                break;
            case InstrKind::H:
                out << "h " << q(in.q0) << ";\n";
                break;
            case InstrKind::S:
                out << "s " << q(in.q0) << ";\n";
                break;
            case InstrKind::SDag:
                out << "sdg " << q(in.q0) << ";\n";
                break;
            case InstrKind::T:
                out << "t " << q(in.q0) << ";\n";
                break;
            case InstrKind::TDag:
                out << "tdg " << q(in.q0) << ";\n";
                break;
            case InstrKind::X:
                out << "x " << q(in.q0) << ";\n";
                break;
            case InstrKind::Z:
                out << "z " << q(in.q0) << ";\n";
                break;
            case InstrKind::Cnot:
                out << "cx " << q(in.q0) << "," << q(in.q1) << ";\n";
                break;
            case InstrKind::MeasX:
                out << "h " << q(in.q0) << ";\n";
                [[fallthrough]];
            case InstrKind::MeasZ:
                out << "measure " << q(in.q0) << " -> c[" << in.cbit << "];\n";
                state[in.q0] = QState::Measured;
                break;
            case InstrKind::Tick: {
                out << "barrier";
                bool first = true;
                for (int qi = 1; qi <= circuit.n_qubits; ++qi) {
                    if (state[qi] != QState::Live) continue;
                    out << (first ? " " : ",") << q(qi);
                    first = false;
                }
                out << ";\n";
                break;
            }
        }
    }
    return out.str();
}

int QasmStats::total_ops() const {
    int n = 0;
    for (const auto& [name, count] : op_counts) n += count;
    return n;
}

QasmStats parse_qasm_stats(const std::string& text) {
    QasmStats stats;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.rfind("//", 0) == 0) continue;
        if (line.back() != ';')
            throw std::runtime_error("qasm line " + std::to_string(lineno) + ": missing ';'");
        line.pop_back();
        std::istringstream ls(line);
        std::string op;
        ls >> op;
        if (op == "OPENQASM") {
            saw_header = true;
            continue;
        }
        if (op == "include") continue;
        if (op == "qreg" || op == "creg") {
            std::string decl;
            ls >> decl;
            auto lb = decl.find('['), rb = decl.find(']');
            if (lb == std::string::npos || rb == std::string::npos || rb < lb)
                throw std::runtime_error("qasm line " + std::to_string(lineno) + ": bad register");
            int size = std::stoi(decl.substr(lb + 1, rb - lb - 1));
            (op == "qreg" ? stats.n_qubits : stats.n_cbits) = size;
            continue;
        }
        std::string rest;
        std::getline(ls, rest);
        if (rest.find("q[") == std::string::npos)
            throw std::runtime_error("qasm line " + std::to_string(lineno) + ": no operand");
        ++stats.op_counts[op];
    }
    if (!saw_header) throw std::runtime_error("qasm: missing OPENQASM header");
    return stats;
}

}  // namespace switchsim
