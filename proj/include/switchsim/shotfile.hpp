#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "switchsim/circuit.hpp"
#include "switchsim/decoder.hpp"
#include "switchsim/noise.hpp"
#include "switchsim/stats.hpp"

namespace switchsim {

// Shot files: '#'-prefixed key=value header lines, then one fixed-width
// {0,1} record per line in canonical layout order.
struct ShotFileHeader {
    ExperimentKind kind = ExperimentKind::SingleCopyX;
    bool reuse = false;
    bool ablated = false;
    uint64_t seed = 0;
    int shots = 0;
    NoiseModel noise;
};

void write_shot_file(std::ostream& out, const ShotFileHeader& header,
                     const std::vector<ShotRecord>& records);

struct ShotFile {
    ShotFileHeader header;
    std::vector<ShotRecord> records;
};

// Throws std::runtime_error naming the offending line on malformed input.
ShotFile read_shot_file(std::istream& in);

struct DecodeFileHeader {
    ExperimentKind kind = ExperimentKind::SingleCopyX;
    DecodeMode mode = DecodeMode::EC;
    int shots = 0;
    int accepted = 0;
};

struct DecodeFile {
    DecodeFileHeader header;
    std::vector<DecodedShot> shots;
};

void write_decode_file(std::ostream& out, const DecodeFileHeader& header,
                       const std::vector<DecodedShot>& shots);
DecodeFile read_decode_file(std::istream& in);

std::string render_report_text(const CertificationReport& report);
// Columns: quantity, value, sem, acceptance_rate.
std::string render_report_csv(const CertificationReport& report);

}  // namespace switchsim
