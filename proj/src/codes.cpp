#include "switchsim/codes.hpp"

#include <stdexcept>

namespace switchsim {

namespace {

LabeledPauli plaquette(int n, const std::string& label, const std::vector<int>& support,
                       PauliLetter letter) {
    return {label, PauliOperator::from_support(n, support, letter)};
}

}  // namespace

StabilizerCode steane_code() {
    StabilizerCode c;
    c.name = "steane";
    c.n = 7;
    c.k = 1;
    c.d = 3;
    const std::vector<std::pair<std::string, std::vector<int>>> plaquettes = {
        {"p1", {1, 2, 6, 7}},
        {"p2", {2, 3, 4, 7}},
        {"p3", {4, 5, 6, 7}},
    };
    for (const auto& [label, support] : plaquettes) {
        c.z_generators.push_back(plaquette(7, label + "^Z", support, PauliLetter::Z));
        c.x_generators.push_back(plaquette(7, label + "^X", support, PauliLetter::X));
    }
    c.logical_x = PauliOperator::from_support(7, {1, 2, 3}, PauliLetter::X);
    c.logical_y = PauliOperator::from_support(7, {1, 2, 3}, PauliLetter::Y, -1);
    c.logical_z = PauliOperator::from_support(7, {1, 2, 3}, PauliLetter::Z);
    return c;
}

StabilizerCode qrm_code() {
    StabilizerCode c;
    c.name = "qrm";
    c.n = 15;
    c.k = 1;
    c.d = 3;
    const std::vector<std::vector<int>> zp = {
        {1, 2, 6, 7},     // p1
        {2, 3, 4, 7},     // p2
        {4, 5, 6, 7},     // p3
        {1, 6, 8, 13},    // p4
        {1, 2, 8, 9},     // p5
        {2, 3, 9, 10},    // p6
        {3, 4, 10, 11},   // p7
        {4, 5, 11, 12},   // p8
        {5, 6, 12, 13},   // p9
        {6, 7, 13, 14},   // p10
        {2, 7, 9, 14},    // p11
        {4, 7, 11, 14},   // p12
        {8, 12, 13, 15},  // p13
        {8, 9, 10, 15},   // p14
        {10, 11, 12, 15}, // p15
        {8, 9, 13, 14},   // p16
        {9, 10, 11, 14},  // p17
        {11, 12, 13, 14}, // p18
    };
    for (size_t i = 0; i < zp.size(); ++i)
        c.z_generators.push_back(plaquette(15, "p" + std::to_string(i + 1), zp[i], PauliLetter::Z));
    c.independent_z_subset = {"p1", "p2", "p3", "p7", "p8", "p9", "p13", "p16", "p17", "p18"};
    const std::vector<std::vector<int>> cells = {
        {1, 2, 6, 7, 8, 9, 13, 14},     // c1
        {4, 5, 6, 7, 11, 12, 13, 14},   // c2
        {2, 3, 4, 7, 9, 10, 11, 14},    // c3
        {8, 9, 10, 11, 12, 13, 14, 15}, // c4
    };
    for (size_t i = 0; i < cells.size(); ++i)
        c.x_generators.push_back(plaquette(15, "c" + std::to_string(i + 1), cells[i], PauliLetter::X));
    c.logical_x = PauliOperator::from_support(15, {1, 2, 3, 4, 5, 6, 7}, PauliLetter::X);
    c.logical_z = PauliOperator::from_support(15, {1, 2, 3}, PauliLetter::Z);
    // Ybar = i Xbar Zbar; the overall sign follows from Y = iXZ sitewise.
    c.logical_y = PauliOperator::from_string(15, "-YYYXXXXIIIIIIII");
    return c;
}

uint32_t syndrome(const StabilizerCode& code, const PauliOperator& error, Sector sector) {
    if (error.n() != code.n) throw std::invalid_argument("syndrome: qubit count mismatch");
    const auto& gens = code.generators(sector);
    uint32_t bits = 0;
    for (size_t i = 0; i < gens.size(); ++i)
        if (!error.commutes_with(gens[i].op)) bits |= 1u << i;
    return bits;
}

const PauliOperator& SyndromeTable::correction(uint32_t synd) const {
    auto it = entries.find(synd);
    if (it == entries.end()) throw std::invalid_argument("syndrome not present in lookup table");
    return it->second;
}

SyndromeTable build_lookup_table(const StabilizerCode& code, Sector sector) {
    SyndromeTable table;
    table.sector = sector;
    table.n_generators = static_cast<int>(code.generators(sector).size());
    table.entries[0] = PauliOperator::identity(code.n);
    PauliLetter letter = sector == Sector::ZDetecting ? PauliLetter::X : PauliLetter::Z;
    for (int q = 1; q <= code.n; ++q) {
        PauliOperator err = PauliOperator::single(code.n, q, letter);
        uint32_t s = syndrome(code, err, sector);
        auto [it, inserted] = table.entries.emplace(s, err);
        if (!inserted && !(it->second == err))
            throw std::runtime_error("code definition error: weight-1 syndrome collision");
    }
    return table;
}

namespace {

void check(CodeReport& report, bool ok, const std::string& what) {
    if (!ok) {
        report.pass = false;
        report.failures.push_back(what);
    }
}

}  // namespace

CodeReport verify_code(const StabilizerCode& code) {
    CodeReport report;
    std::vector<const PauliOperator*> gens;
    for (const auto& g : code.z_generators) gens.push_back(&g.op);
    for (const auto& g : code.x_generators) gens.push_back(&g.op);

    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = i + 1; j < gens.size(); ++j)
            check(report, gens[i]->commutes_with(*gens[j]),
                  "generators " + std::to_string(i) + "," + std::to_string(j) + " anticommute");

    for (const auto* g : gens) {
        check(report, code.logical_x.commutes_with(*g), "logical X anticommutes with a generator");
        check(report, code.logical_z.commutes_with(*g), "logical Z anticommutes with a generator");
        check(report, code.logical_y.commutes_with(*g), "logical Y anticommutes with a generator");
    }
    check(report, !code.logical_x.commutes_with(code.logical_z), "logical X and Z commute");
    check(report, !code.logical_x.commutes_with(code.logical_y), "logical X and Y commute");
    check(report, !code.logical_y.commutes_with(code.logical_z), "logical Y and Z commute");

    // Distance: no Pauli of weight < d may commute with every generator
    // while anticommuting with a logical representative. d = 3 here, so
    // enumerate weights 1 and 2.
    auto dangerous = [&](const PauliOperator& e) {
        for (const auto* g : gens)
            if (!e.commutes_with(*g)) return false;
        return !e.commutes_with(code.logical_x) || !e.commutes_with(code.logical_z) ||
               !e.commutes_with(code.logical_y);
    };
    const PauliLetter letters[3] = {PauliLetter::X, PauliLetter::Y, PauliLetter::Z};
    for (int q = 1; q <= code.n && report.pass; ++q)
        for (auto l : letters)
            check(report, !dangerous(PauliOperator::single(code.n, q, l)),
                  "weight-1 logical at qubit " + std::to_string(q));
    for (int q1 = 1; q1 <= code.n && report.pass; ++q1)
        for (int q2 = q1 + 1; q2 <= code.n; ++q2)
            for (auto l1 : letters)
                for (auto l2 : letters)
                    check(report,
                          !dangerous(PauliOperator::single(code.n, q1, l1) *
                                     PauliOperator::single(code.n, q2, l2)),
                          "weight-2 logical at qubits " + std::to_string(q1) + "," +
                              std::to_string(q2));
    return report;
}

}  // namespace switchsim
