#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "switchsim/circuit.hpp"

namespace switchsim {

enum class DecodeMode { EC, PS };

const char* decode_mode_name(DecodeMode m);
DecodeMode decode_mode_from_name(const std::string& name);

// Canonical record layout. Bit value 1 corresponds to measurement
// eigenvalue -1 everywhere. Segment order within one copy:
//   steane-data[7], qrm-data[15], z-stabilizers[4] (p13, p8, p2, p3),
//   flags[5] (init-steane, init-qrm, p13, p8, parallel).
// A magic-prep record has no steane-data segment; an ablated circuit has
// neither z-stabilizers nor round flags.
struct ShotLayout {
    int copies = 1;
    int copy_stride = 31;
    int steane_data = 0;  // -1 when absent
    int qrm_data = 7;
    int z_stabs = 22;     // -1 when absent
    int flags = 26;
    int n_flags = 5;

    int record_len() const { return copies * copy_stride; }

    static ShotLayout single_copy();
    static ShotLayout two_copy();
    static ShotLayout magic_prep();
    static ShotLayout for_experiment(ExperimentKind kind, bool ablated = false);

    bool operator==(const ShotLayout&) const = default;
};

struct ShotRecord {
    std::vector<uint8_t> bits;
};

// Throws on length mismatch or characters outside {0,1}.
ShotRecord parse_shot(const std::string& line, const ShotLayout& layout);
std::string format_shot(const ShotRecord& record);

enum class RejectReason { None, Flag, ZStabilizer, XSyndrome, SteaneSyndrome };
const char* reject_reason_name(RejectReason r);

struct Preselection {
    bool accepted = false;
    RejectReason reason = RejectReason::None;
};

// Flags first, then the four Z-stabilizer bits, for one copy.
Preselection preselect(const ShotRecord& shot, const ShotLayout& layout, int copy = 0);

struct QrmPost {
    uint32_t x_syndrome = 0;  // bit j = parity over cell c_{j+1}
    int x_logical = +1;       // (-1)^{parity of bits 1..7}
};

QrmPost qrm_destructive_postprocess(std::span<const uint8_t> bits15);

struct SteaneReadout {
    bool accepted = false;    // PS mode may reject
    uint32_t syndrome = 0;    // bit i = parity over plaquette p_{i+1}
    int logical = +1;
};

// EC flips the lookup-indicated bit then reads the logical; PS rejects on
// a nontrivial syndrome. The logical is the parity of bits 1..3, with an
// extra global -1 in the Y basis.
SteaneReadout steane_logical_readout(std::span<const uint8_t> bits7, Basis basis, DecodeMode mode);

struct DecodedShot {
    bool accepted = false;
    RejectReason reason = RejectReason::None;
    int frame_a[2] = {-1, -1};             // a_i = (1 - Xbar_i^qRM)/2
    std::optional<int> logical;            // single-copy
    std::optional<std::pair<int, int>> xz; // two-copy (Xbar_1, Zbar_2)
    bool singlet = false;
};

DecodedShot decode_single_copy(const ShotRecord& shot, Basis basis, DecodeMode mode,
                               const ShotLayout& layout = ShotLayout::single_copy());
DecodedShot decode_two_copy(const ShotRecord& shot, DecodeMode mode,
                            const ShotLayout& layout = ShotLayout::two_copy());

// Pre-selection plus destructive-syndrome screening of a record with no
// steane-data segment; used by the fault-tolerance checker.
struct MagicPrepDecode {
    bool accepted = false;
    RejectReason reason = RejectReason::None;
    int frame_a = 0;
};

MagicPrepDecode decode_magic_prep(const ShotRecord& shot, const ShotLayout& layout);

}  // namespace switchsim
