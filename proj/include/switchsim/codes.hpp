#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "switchsim/pauli.hpp"

namespace switchsim {

struct LabeledPauli {
    std::string label;
    PauliOperator op;
};

// Which error type a syndrome extraction detects. Z-type generators detect
// X components, X-type generators detect Z components.
enum class Sector { ZDetecting, XDetecting };

struct StabilizerCode {
    std::string name;
    int n = 0, k = 0, d = 0;
    std::vector<LabeledPauli> z_generators;
    std::vector<LabeledPauli> x_generators;
    std::vector<std::string> independent_z_subset;
    PauliOperator logical_x, logical_y, logical_z;

    const std::vector<LabeledPauli>& generators(Sector sector) const {
        return sector == Sector::ZDetecting ? z_generators : x_generators;
    }
};

// [[7,1,3]] 2D color code: three weight-4 Z plaquettes, three X plaquettes,
// logicals Xbar = X1X2X3, Ybar = -Y1Y2Y3, Zbar = Z1Z2Z3.
StabilizerCode steane_code();

// [[15,1,3]] 3D color code: all 18 weight-4 Z plaquettes p1..p18 (ten of
// which are independent), four weight-8 X cells c1..c4, Xbar = X1..X7,
// Zbar = Z1Z2Z3.
StabilizerCode qrm_code();

// Bit i is set iff `error` anticommutes with the i-th generator of the
// chosen sector (bit 0 = first generator).
uint32_t syndrome(const StabilizerCode& code, const PauliOperator& error, Sector sector);

struct SyndromeTable {
    Sector sector;
    int n_generators = 0;
    std::map<uint32_t, PauliOperator> entries;  // syndrome -> correction

    const PauliOperator& correction(uint32_t synd) const;
    bool contains(uint32_t synd) const { return entries.count(synd) != 0; }
};

// All-zero syndrome -> identity, plus one entry per weight-1 error of the
// detected type. Throws if two inequivalent weight-1 errors collide.
SyndromeTable build_lookup_table(const StabilizerCode& code, Sector sector);

struct CodeReport {
    bool pass = true;
    std::vector<std::string> failures;
};

// Checks generator commutation, logical (anti)commutation and distance 3 by
// enumerating every Pauli of weight <= 2.
CodeReport verify_code(const StabilizerCode& code);

}  // namespace switchsim
