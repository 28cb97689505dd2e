#include "switchsim/decoder.hpp"

#include <stdexcept>

namespace switchsim {

namespace {

const int kPlaquettes[3][4] = {{1, 2, 6, 7}, {2, 3, 4, 7}, {4, 5, 6, 7}};
const int kCells[4][8] = {
    {1, 2, 6, 7, 8, 9, 13, 14},
    {4, 5, 6, 7, 11, 12, 13, 14},
    {2, 3, 4, 7, 9, 10, 11, 14},
    {8, 9, 10, 11, 12, 13, 14, 15},
};

// Steane syndrome (p1,p2,p3 parities) -> 1-based qubit to flip. Membership
// patterns of the seven qubits are distinct, so the map is a bijection.
int lookup_qubit(uint32_t synd) {
    static const int table[8] = {0, 1, 3, 2, 5, 6, 4, 7};
    return table[synd & 7];
}

}  // namespace

const char* decode_mode_name(DecodeMode m) { return m == DecodeMode::EC ? "ec" : "ps"; }

DecodeMode decode_mode_from_name(const std::string& name) {
    if (name == "ec" || name == "EC") return DecodeMode::EC;
    if (name == "ps" || name == "PS") return DecodeMode::PS;
    throw std::invalid_argument("unknown decode mode: " + name);
}

const char* reject_reason_name(RejectReason r) {
    switch (r) {
        case RejectReason::None: return "none";
        case RejectReason::Flag: return "flag";
        case RejectReason::ZStabilizer: return "z-stabilizer";
        case RejectReason::XSyndrome: return "x-syndrome";
        case RejectReason::SteaneSyndrome: return "steane-syndrome";
    }
    return "?";
}

ShotLayout ShotLayout::single_copy() { return ShotLayout{}; }

ShotLayout ShotLayout::two_copy() {
    ShotLayout l;
    l.copies = 2;
    return l;
}

ShotLayout ShotLayout::magic_prep() {
    ShotLayout l;
    l.copy_stride = 24;
    l.steane_data = -1;
    l.qrm_data = 0;
    l.z_stabs = 15;
    l.flags = 19;
    return l;
}

ShotLayout ShotLayout::for_experiment(ExperimentKind kind, bool ablated) {
    ShotLayout l = kind == ExperimentKind::MagicPrep ? magic_prep()
                   : kind == ExperimentKind::TwoCopy ? two_copy()
                                                     : single_copy();
    if (ablated) {
        l.copy_stride -= 7;
        l.z_stabs = -1;
        l.flags -= 4;
        l.n_flags = 2;
    }
    return l;
}

ShotRecord parse_shot(const std::string& line, const ShotLayout& layout) {
    if (static_cast<int>(line.size()) != layout.record_len())
        throw std::invalid_argument("record length " + std::to_string(line.size()) +
                                    " does not match layout length " +
                                    std::to_string(layout.record_len()));
    ShotRecord rec;
    rec.bits.reserve(line.size());
    for (char ch : line) {
        if (ch != '0' && ch != '1')
            throw std::invalid_argument(std::string("invalid record character '") + ch + "'");
        rec.bits.push_back(ch == '1');
    }
    return rec;
}

std::string format_shot(const ShotRecord& record) {
    std::string s;
    s.reserve(record.bits.size());
    for (uint8_t b : record.bits) s.push_back(b ? '1' : '0');
    return s;
}

Preselection preselect(const ShotRecord& shot, const ShotLayout& layout, int copy) {
    const int base = copy * layout.copy_stride;
    for (int i = 0; i < layout.n_flags; ++i)
        if (shot.bits[base + layout.flags + i]) return {false, RejectReason::Flag};
    if (layout.z_stabs >= 0)
        for (int i = 0; i < 4; ++i)
            if (shot.bits[base + layout.z_stabs + i]) return {false, RejectReason::ZStabilizer};
    return {true, RejectReason::None};
}

QrmPost qrm_destructive_postprocess(std::span<const uint8_t> bits15) {
    if (bits15.size() != 15) throw std::invalid_argument("expected 15 qRM data bits");
    QrmPost post;
    for (int j = 0; j < 4; ++j) {
        int parity = 0;
        for (int q : kCells[j]) parity ^= bits15[q - 1];
        if (parity) post.x_syndrome |= 1u << j;
    }
    int parity = 0;
    for (int q = 1; q <= 7; ++q) parity ^= bits15[q - 1];
    post.x_logical = parity ? -1 : +1;
    return post;
}

SteaneReadout steane_logical_readout(std::span<const uint8_t> bits7, Basis basis,
                                     DecodeMode mode) {
    if (bits7.size() != 7) throw std::invalid_argument("expected 7 Steane data bits");
    SteaneReadout r;
    uint8_t bits[8];
    for (int q = 1; q <= 7; ++q) bits[q] = bits7[q - 1];
    for (int i = 0; i < 3; ++i) {
        int parity = 0;
        for (int q : kPlaquettes[i]) parity ^= bits[q];
        if (parity) r.syndrome |= 1u << i;
    }
    if (r.syndrome != 0) {
        if (mode == DecodeMode::PS) {
            r.accepted = false;
            return r;
        }
        bits[lookup_qubit(r.syndrome)] ^= 1;
    }
    r.accepted = true;
    int parity = bits[1] ^ bits[2] ^ bits[3];
    r.logical = parity ? -1 : +1;
    if (basis == Basis::Y) r.logical = -r.logical;
    return r;
}

namespace {

struct CopyDecode {
    bool accepted;
    RejectReason reason;
    int a;
    std::span<const uint8_t> steane_bits;
};

CopyDecode decode_copy(const ShotRecord& shot, const ShotLayout& layout, int copy) {
    CopyDecode d{false, RejectReason::None, 0, {}};
    auto pre = preselect(shot, layout, copy);
    if (!pre.accepted) {
        d.reason = pre.reason;
        return d;
    }
    const int base = copy * layout.copy_stride;
    auto qrm = qrm_destructive_postprocess(
        std::span<const uint8_t>(shot.bits).subspan(base + layout.qrm_data, 15));
    if (qrm.x_syndrome != 0) {
        d.reason = RejectReason::XSyndrome;
        return d;
    }
    d.a = (1 - qrm.x_logical) / 2;
    if (layout.steane_data >= 0)
        d.steane_bits = std::span<const uint8_t>(shot.bits).subspan(base + layout.steane_data, 7);
    d.accepted = true;
    return d;
}

}  // namespace

DecodedShot decode_single_copy(const ShotRecord& shot, Basis basis, DecodeMode mode,
                               const ShotLayout& layout) {
    DecodedShot out;
    auto copy = decode_copy(shot, layout, 0);
    if (!copy.accepted) {
        out.reason = copy.reason;
        return out;
    }
    auto steane = steane_logical_readout(copy.steane_bits, basis, mode);
    if (!steane.accepted) {
        out.reason = RejectReason::SteaneSyndrome;
        return out;
    }
    out.accepted = true;
    out.frame_a[0] = copy.a;
    int logical = steane.logical;
    // The Zbar frame is never physically applied; it flips Xbar and Ybar.
    if (copy.a == 1 && basis != Basis::Z) logical = -logical;
    out.logical = logical;
    return out;
}

DecodedShot decode_two_copy(const ShotRecord& shot, DecodeMode mode, const ShotLayout& layout) {
    DecodedShot out;
    if (layout.copies != 2) throw std::invalid_argument("two-copy decode needs a 2-copy layout");
    CopyDecode copies[2];
    for (int i = 0; i < 2; ++i) {
        copies[i] = decode_copy(shot, layout, i);
        if (!copies[i].accepted) {
            out.reason = copies[i].reason;
            return out;
        }
    }
    auto x1 = steane_logical_readout(copies[0].steane_bits, Basis::X, mode);
    if (!x1.accepted) {
        out.reason = RejectReason::SteaneSyndrome;
        return out;
    }
    auto z2 = steane_logical_readout(copies[1].steane_bits, Basis::Z, mode);
    if (!z2.accepted) {
        out.reason = RejectReason::SteaneSyndrome;
        return out;
    }
    out.accepted = true;
    out.frame_a[0] = copies[0].a;
    out.frame_a[1] = copies[1].a;
    int xval = x1.logical;
    if ((copies[0].a + copies[1].a) % 2 == 1) xval = -xval;
    out.xz = {xval, z2.logical};
    out.singlet = (xval == -1 && z2.logical == -1);
    return out;
}

MagicPrepDecode decode_magic_prep(const ShotRecord& shot, const ShotLayout& layout) {
    MagicPrepDecode out;
    auto copy = decode_copy(shot, layout, 0);
    out.accepted = copy.accepted;
    out.reason = copy.reason;
    out.frame_a = copy.a;
    return out;
}

}  // namespace switchsim
