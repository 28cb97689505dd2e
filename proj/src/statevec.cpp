#include "switchsim/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace switchsim {

namespace {

// Per-thread cache of large amplitude buffers. A 22-qubit merge allocates
// 64 MB; recycling across shots keeps the page-fault cost off the shot
// path.
thread_local std::vector<AmpVec> g_buffer_pool;

AmpVec acquire_buffer(size_t n) {
    if (n >= 4096) {
        size_t best = g_buffer_pool.size();
        for (size_t i = 0; i < g_buffer_pool.size(); ++i) {
            if (g_buffer_pool[i].capacity() < n) continue;
            if (best == g_buffer_pool.size() ||
                g_buffer_pool[i].capacity() < g_buffer_pool[best].capacity())
                best = i;
        }
        if (best < g_buffer_pool.size()) {
            AmpVec v = std::move(g_buffer_pool[best]);
            g_buffer_pool.erase(g_buffer_pool.begin() + best);
            v.resize(n);
            return v;
        }
    }
    AmpVec v;
    v.resize(n);
    return v;
}

void release_buffer(AmpVec&& v) {
    if (v.capacity() < 4096) return;
    if (g_buffer_pool.size() >= 6) {
        auto smallest = std::min_element(
            g_buffer_pool.begin(), g_buffer_pool.end(),
            [](const AmpVec& a, const AmpVec& b) { return a.capacity() < b.capacity(); });
        if (smallest->capacity() >= v.capacity()) return;
        g_buffer_pool.erase(smallest);
    }
    v.clear();
    g_buffer_pool.push_back(std::move(v));
}

struct Mat2 {
    cplx m00, m01, m10, m11;
};

Mat2 gate_matrix(InstrKind kind) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const cplx i(0, 1);
    switch (kind) {
        case InstrKind::H: return {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
        case InstrKind::S: return {1, 0, 0, i};
        case InstrKind::SDag: return {1, 0, 0, -i};
        case InstrKind::T: return {1, 0, 0, std::polar(1.0, std::numbers::pi / 4)};
        case InstrKind::TDag: return {1, 0, 0, std::polar(1.0, -std::numbers::pi / 4)};
        case InstrKind::X: return {0, 1, 1, 0};
        case InstrKind::Z: return {1, 0, 0, -1};
        default: throw std::invalid_argument("not a single-qubit unitary");
    }
}

inline size_t insert_bit(size_t i, size_t mask) {
    size_t lo = mask - 1;
    return ((i & ~lo) << 1) | (i & lo);
}

}  // namespace

int DenseBlock::bit_of(int qubit) const {
    for (size_t b = 0; b < qubits.size(); ++b)
        if (qubits[b] == qubit) return static_cast<int>(b);
    throw std::invalid_argument("qubit not in block");
}

double DenseBlock::norm() const {
    double s = 0;
    const cplx* amp = data();
    for (size_t i = 0, n = dim(); i < n; ++i) s += std::norm(amp[i]);
    return std::sqrt(s) * scale;
}

RegisterState::RegisterState(int n_qubits) : n_qubits_(n_qubits), block_index_(n_qubits + 1, -1) {
    if (n_qubits < 1) throw std::invalid_argument("register needs at least one qubit");
}

RegisterState::~RegisterState() {
    for (auto& b : blocks_)
        if (b) release_buffer(std::move(b->buf));
}

bool RegisterState::is_live(int qubit) const {
    if (qubit < 1 || qubit > n_qubits_) throw std::invalid_argument("qubit out of range");
    return block_index_[qubit] >= 0;
}

std::vector<int> RegisterState::live_qubits() const {
    std::vector<int> qs;
    for (int q = 1; q <= n_qubits_; ++q)
        if (block_index_[q] >= 0) qs.push_back(q);
    return qs;
}

DenseBlock& RegisterState::mutable_block_of(int qubit) {
    if (!is_live(qubit))
        throw std::invalid_argument("operation on dead qubit " + std::to_string(qubit));
    return *blocks_[block_index_[qubit]];
}

const DenseBlock& RegisterState::block_of(int qubit) const {
    return const_cast<RegisterState*>(this)->mutable_block_of(qubit);
}

void RegisterState::release_block(int slot) {
    release_buffer(std::move(blocks_[slot]->buf));
    blocks_[slot].reset();
}

void RegisterState::prep(int qubit, bool plus) {
    if (is_live(qubit))
        throw std::invalid_argument("prep on live qubit " + std::to_string(qubit));
    auto block = std::make_unique<DenseBlock>();
    block->qubits = {qubit};
    block->buf = acquire_buffer(2);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    block->buf[0] = plus ? inv_sqrt2 : 1.0;
    block->buf[1] = plus ? inv_sqrt2 : 0.0;
    int slot = -1;
    for (size_t i = 0; i < blocks_.size(); ++i)
        if (!blocks_[i]) { slot = static_cast<int>(i); break; }
    if (slot < 0) {
        blocks_.push_back(nullptr);
        slot = static_cast<int>(blocks_.size()) - 1;
    }
    blocks_[slot] = std::move(block);
    block_index_[qubit] = slot;
}

void RegisterState::apply_gate1(InstrKind kind, int qubit) {
    DenseBlock& block = mutable_block_of(qubit);
    const size_t mask = 1ULL << block.bit_of(qubit);
    cplx* amp = block.data();
    const size_t half = block.dim() >> 1;
    switch (kind) {
        case InstrKind::S:
        case InstrKind::SDag:
        case InstrKind::T:
        case InstrKind::TDag:
        case InstrKind::Z: {
            const cplx phase = gate_matrix(kind).m11;
            for (size_t i = 0; i < half; ++i) {
                size_t i1 = insert_bit(i, mask) | mask;
                amp[i1] *= phase;
            }
            break;
        }
        case InstrKind::X: {
            for (size_t i = 0; i < half; ++i) {
                size_t i0 = insert_bit(i, mask);
                std::swap(amp[i0], amp[i0 | mask]);
            }
            break;
        }
        default: {
            const Mat2 m = gate_matrix(kind);
            for (size_t i = 0; i < half; ++i) {
                size_t i0 = insert_bit(i, mask);
                size_t i1 = i0 | mask;
                cplx a = amp[i0], b = amp[i1];
                amp[i0] = m.m00 * a + m.m01 * b;
                amp[i1] = m.m10 * a + m.m11 * b;
            }
            break;
        }
    }
}

int RegisterState::merge(const std::vector<int>& slots) {
    std::vector<int> distinct;
    for (int s : slots)
        if (std::find(distinct.begin(), distinct.end(), s) == distinct.end()) distinct.push_back(s);
    if (distinct.size() == 1) return distinct[0];

    auto merged = std::make_unique<DenseBlock>();
    size_t dim = 1;
    for (int s : distinct) {
        for (int q : blocks_[s]->qubits) merged->qubits.push_back(q);
        dim *= blocks_[s]->dim();
    }
    merged->buf = acquire_buffer(dim);

    // Tensor product, first listed block in the low bits.
    merged->buf[0] = 1.0;
    size_t built = 1;
    double scale = 1.0;
    for (int s : distinct) {
        const DenseBlock& b = *blocks_[s];
        scale *= b.scale;
        const size_t bd = b.dim();
        const cplx* factor = b.data();
        // Expand in place from the highest factor index downward.
        for (size_t hi = bd; hi-- > 0;) {
            const cplx f = factor[hi];
            const cplx* src = merged->buf.data();
            cplx* dst = merged->buf.data() + hi * built;
            if (hi == 0) {
                for (size_t lo = 0; lo < built; ++lo) dst[lo] = src[lo] * f;
            } else {
                for (size_t lo = built; lo-- > 0;) dst[lo] = src[lo] * f;
            }
        }
        built *= bd;
    }
    merged->scale = scale;

    int keep = distinct[0];
    for (int q : merged->qubits) block_index_[q] = keep;
    for (size_t i = 1; i < distinct.size(); ++i) release_block(distinct[i]);
    release_buffer(std::move(blocks_[keep]->buf));
    blocks_[keep] = std::move(merged);
    return keep;
}

void RegisterState::apply_cnot(int control, int target) {
    if (control == target) throw std::invalid_argument("cnot control equals target");
    if (!is_live(control) || !is_live(target))
        throw std::invalid_argument("cnot on dead qubit");
    int slot = merge({block_index_[target], block_index_[control]});
    DenseBlock& block = *blocks_[slot];
    const size_t cmask = 1ULL << block.bit_of(control);
    const size_t tmask = 1ULL << block.bit_of(target);
    cplx* amp = block.data();
    const size_t dim = block.dim();
    for (size_t i = 0; i < dim; ++i) {
        if ((i & cmask) && !(i & tmask)) std::swap(amp[i], amp[i | tmask]);
    }
}

bool RegisterState::cnot_run_splits_blocks(const std::vector<std::pair<int, int>>& pairs) const {
    if (pairs.size() < 2) return false;
    for (const auto& [c, t] : pairs)
        if (!is_live(c) || !is_live(t)) return false;
    int tslot = block_index_[pairs[0].second];
    int cslot = block_index_[pairs[0].first];
    if (tslot == cslot) return false;
    for (const auto& [c, t] : pairs)
        if (block_index_[t] != tslot || block_index_[c] != cslot) return false;
    return true;
}

void RegisterState::apply_cnot_run(const std::vector<std::pair<int, int>>& pairs) {
    if (pairs.empty()) return;
    if (pairs.size() == 1) {
        apply_cnot(pairs[0].first, pairs[0].second);
        return;
    }
    std::vector<int> slots, operands;
    for (const auto& [c, t] : pairs) {
        if (!is_live(c) || !is_live(t)) throw std::invalid_argument("cnot run on dead qubit");
        operands.push_back(c);
        operands.push_back(t);
        slots.push_back(block_index_[t]);
        slots.push_back(block_index_[c]);
    }
    std::sort(operands.begin(), operands.end());
    if (std::adjacent_find(operands.begin(), operands.end()) != operands.end())
        throw std::invalid_argument("cnot run requires pairwise-disjoint supports");

    // Transversal pattern: all targets in one block, all controls in
    // another. The permutation folds into the tensor-product write of the
    // merge itself.
    if (cnot_run_splits_blocks(pairs)) {
        merge_cnot_transversal(pairs);
        return;
    }
    int slot = merge(slots);
    DenseBlock& block = *blocks_[slot];
    std::vector<std::pair<size_t, size_t>> masks;  // (control mask, target mask)
    for (const auto& [c, t] : pairs)
        masks.push_back({1ULL << block.bit_of(c), 1ULL << block.bit_of(t)});
    cplx* amp = block.data();
    const size_t dim = block.dim();
    // Controls and targets are disjoint, so i -> i ^ f(i) with f depending
    // only on control bits is an involution: one swap pass.
    for (size_t i = 0; i < dim; ++i) {
        size_t flip = 0;
        for (const auto& [cm, tm] : masks)
            if (i & cm) flip |= tm;
        size_t j = i ^ flip;
        if (j > i) std::swap(amp[i], amp[j]);
    }
}

void RegisterState::merge_cnot_transversal(const std::vector<std::pair<int, int>>& pairs) {
    const int tslot = block_index_[pairs[0].second];
    const int cslot = block_index_[pairs[0].first];
    const DenseBlock& tgt = *blocks_[tslot];
    const DenseBlock& ctl = *blocks_[cslot];
    const size_t tdim = tgt.dim(), cdim = ctl.dim();
    const int tbits = static_cast<int>(tgt.qubits.size());

    std::vector<std::pair<size_t, size_t>> masks;
    for (const auto& [c, t] : pairs)
        masks.push_back({size_t(1) << ctl.bit_of(c), size_t(1) << tgt.bit_of(t)});

    auto merged = std::make_unique<DenseBlock>();
    merged->qubits = tgt.qubits;
    merged->qubits.insert(merged->qubits.end(), ctl.qubits.begin(), ctl.qubits.end());
    merged->buf = acquire_buffer(tdim * cdim);
    merged->scale = tgt.scale * ctl.scale;
    cplx* out = merged->buf.data();
    const cplx* t_amp = tgt.data();
    const cplx* c_amp = ctl.data();
    for (size_t hi = 0; hi < cdim; ++hi) {
        size_t flip = 0;
        for (const auto& [cm, tm] : masks)
            if (hi & cm) flip |= tm;
        const cplx f = c_amp[hi];
        cplx* row = out + (hi << tbits);
        for (size_t lo = 0; lo < tdim; ++lo) row[lo] = f * t_amp[lo ^ flip];
    }
    for (int q : merged->qubits) block_index_[q] = tslot;
    release_block(cslot);
    release_buffer(std::move(blocks_[tslot]->buf));
    blocks_[tslot] = std::move(merged);
}

bool RegisterState::can_fuse_switch_readout(const std::vector<std::pair<int, int>>& pairs,
                                            int qubit_a, int qubit_b) const {
    if (!cnot_run_splits_blocks(pairs)) return false;
    if (qubit_a == qubit_b) return false;
    const int cslot = block_index_[pairs[0].first];
    if (block_index_[qubit_a] != cslot || block_index_[qubit_b] != cslot) return false;
    return blocks_[cslot]->dim() >= 4;
}

std::pair<int, int> RegisterState::merge_cnot_readout_pair(
    const std::vector<std::pair<int, int>>& pairs, int qubit_a, int qubit_b, double u_a,
    double u_b) {
    if (!can_fuse_switch_readout(pairs, qubit_a, qubit_b))
        throw std::invalid_argument("fused switch readout preconditions not met");
    const int tslot = block_index_[pairs[0].second];
    const int cslot = block_index_[pairs[0].first];
    const DenseBlock& tgt = *blocks_[tslot];
    const DenseBlock& ctl = *blocks_[cslot];
    const size_t tdim = tgt.dim(), cdim = ctl.dim();
    const size_t ma = size_t(1) << ctl.bit_of(qubit_a);
    const size_t mb = size_t(1) << ctl.bit_of(qubit_b);
    const size_t mlo = std::min(ma, mb), mhi = std::max(ma, mb);

    std::vector<std::pair<size_t, size_t>> masks;
    for (const auto& [c, t] : pairs)
        masks.push_back({size_t(1) << ctl.bit_of(c), size_t(1) << tgt.bit_of(t)});
    auto flip_of = [&](size_t hi) {
        size_t flip = 0;
        for (const auto& [cm, tm] : masks)
            if (hi & cm) flip |= tm;
        return flip;
    };

    const size_t quarter = (tdim * cdim) >> 2;
    const size_t c_quarter = cdim >> 2;
    AmpVec out = acquire_buffer(tdim * cdim);
    cplx* streams[4];
    for (int s = 0; s < 4; ++s) streams[s] = out.data() + s * quarter;
    const double c = tgt.scale * ctl.scale / 2.0;
    const cplx* t_amp = tgt.data();
    const cplx* c_amp = ctl.data();
    double norms[4] = {0, 0, 0, 0};
    for (size_t hi_c = 0; hi_c < c_quarter; ++hi_c) {
        const size_t h00 = insert_bit(insert_bit(hi_c, mlo), mhi);
        const size_t h10 = h00 | ma, h01 = h00 | mb, h11 = h00 | ma | mb;
        const cplx f00 = c_amp[h00] * c, f10 = c_amp[h10] * c;
        const cplx f01 = c_amp[h01] * c, f11 = c_amp[h11] * c;
        const size_t r00 = flip_of(h00), r10 = flip_of(h10);
        const size_t r01 = flip_of(h01), r11 = flip_of(h11);
        const size_t row = hi_c * tdim;
        for (size_t lo = 0; lo < tdim; ++lo) {
            const cplx a00 = f00 * t_amp[lo ^ r00];
            const cplx a10 = f10 * t_amp[lo ^ r10];
            const cplx a01 = f01 * t_amp[lo ^ r01];
            const cplx a11 = f11 * t_amp[lo ^ r11];
            const cplx v00 = a00 + a10 + a01 + a11;
            const cplx v10 = a00 - a10 + a01 - a11;
            const cplx v01 = a00 + a10 - a01 - a11;
            const cplx v11 = a00 - a10 - a01 + a11;
            streams[0][row + lo] = v00;
            streams[1][row + lo] = v10;
            streams[2][row + lo] = v01;
            streams[3][row + lo] = v11;
            norms[0] += std::norm(v00);
            norms[1] += std::norm(v10);
            norms[2] += std::norm(v01);
            norms[3] += std::norm(v11);
        }
    }
    const double total = norms[0] + norms[1] + norms[2] + norms[3];
    const int bit_a = u_a < (norms[1] + norms[3]) / total ? 1 : 0;
    const double cond = norms[2 + bit_a] / (norms[bit_a] + norms[2 + bit_a]);
    const int bit_b = u_b < cond ? 1 : 0;
    const int sel = bit_a + 2 * bit_b;

    auto merged = std::make_unique<DenseBlock>();
    merged->qubits = tgt.qubits;
    for (int q : ctl.qubits)
        if (q != qubit_a && q != qubit_b) merged->qubits.push_back(q);
    merged->buf = std::move(out);
    merged->offset = sel * quarter;
    merged->scale = 1.0 / std::sqrt(norms[sel]);
    for (int q : merged->qubits) block_index_[q] = tslot;
    block_index_[qubit_a] = -1;
    block_index_[qubit_b] = -1;
    release_block(cslot);
    release_buffer(std::move(blocks_[tslot]->buf));
    blocks_[tslot] = std::move(merged);
    return {bit_a, bit_b};
}

void RegisterState::apply_pauli(const PauliOperator& word) {
    for (int q : word.support()) {
        DenseBlock& block = mutable_block_of(q);
        const size_t mask = 1ULL << block.bit_of(q);
        cplx* amp = block.data();
        const size_t half = block.dim() >> 1;
        switch (word.letter(q)) {
            case PauliLetter::X:
                for (size_t i = 0; i < half; ++i) {
                    size_t i0 = insert_bit(i, mask);
                    std::swap(amp[i0], amp[i0 | mask]);
                }
                break;
            case PauliLetter::Z:
                for (size_t i = 0; i < half; ++i) amp[insert_bit(i, mask) | mask] *= -1.0;
                break;
            case PauliLetter::Y:
                for (size_t i = 0; i < half; ++i) {
                    size_t i0 = insert_bit(i, mask);
                    size_t i1 = i0 | mask;
                    cplx a = amp[i0];
                    amp[i0] = cplx(0, -1) * amp[i1];
                    amp[i1] = cplx(0, 1) * a;
                }
                break;
            default:
                break;
        }
    }
}

void RegisterState::drop_qubit_entry(DenseBlock& block, int qubit) {
    block.qubits.erase(std::find(block.qubits.begin(), block.qubits.end(), qubit));
    int slot = block_index_[qubit];
    block_index_[qubit] = -1;
    if (block.qubits.empty()) release_block(slot);
}

int RegisterState::measure_z(int qubit, double u) {
    DenseBlock& block = mutable_block_of(qubit);
    const size_t mask = 1ULL << block.bit_of(qubit);
    const cplx* amp = block.data();
    const size_t dim = block.dim();
    double p1 = 0, total = 0;
    for (size_t i = 0; i < dim; ++i) {
        double n = std::norm(amp[i]);
        total += n;
        if (i & mask) p1 += n;
    }
    p1 /= total;
    const int outcome = u < p1 ? 1 : 0;

    const double keep_prob = outcome ? p1 : 1.0 - p1;
    const double renorm = 1.0 / std::sqrt(total * keep_prob);
    const size_t half = dim >> 1;
    const size_t sel = outcome ? mask : 0;
    cplx* out = block.buf.data();  // compact to the buffer head
    for (size_t i = 0; i < half; ++i) {
        size_t src = insert_bit(i, mask) | sel;
        out[i] = amp[src] * renorm;
    }
    block.offset = 0;
    block.scale = 1.0;
    drop_qubit_entry(block, qubit);
    return outcome;
}

int RegisterState::measure_x_fused(int qubit, double u) {
    DenseBlock& block = mutable_block_of(qubit);
    if (block.dim() == 2) {
        apply_gate1(InstrKind::H, qubit);
        return measure_z(qubit, u);
    }
    const size_t mask = 1ULL << block.bit_of(qubit);
    const size_t dim = block.dim();
    const size_t half = dim >> 1;
    AmpVec scratch = acquire_buffer(dim);
    const cplx* amp = block.data();
    cplx* lo = scratch.data();
    cplx* hi = scratch.data() + half;
    const double c = block.scale / std::numbers::sqrt2;
    double p0 = 0, p1 = 0;
    for (size_t i = 0; i < half; ++i) {
        size_t i0 = insert_bit(i, mask);
        cplx a = amp[i0], b = amp[i0 | mask];
        cplx v0 = (a + b) * c;
        cplx v1 = (a - b) * c;
        lo[i] = v0;
        hi[i] = v1;
        p0 += std::norm(v0);
        p1 += std::norm(v1);
    }
    const int outcome = u < p1 / (p0 + p1) ? 1 : 0;
    release_buffer(std::move(block.buf));
    block.buf = std::move(scratch);
    block.offset = outcome ? half : 0;
    block.scale = 1.0 / std::sqrt(outcome ? p1 : p0);
    drop_qubit_entry(block, qubit);
    return outcome;
}

std::pair<int, int> RegisterState::measure_x_pair(int qubit_a, int qubit_b, double u_a,
                                                  double u_b) {
    if (qubit_a == qubit_b) throw std::invalid_argument("measure_x_pair on one qubit");
    if (!is_live(qubit_a) || !is_live(qubit_b) ||
        block_index_[qubit_a] != block_index_[qubit_b] || block_of(qubit_a).dim() < 8) {
        int a = measure_x_fused(qubit_a, u_a);
        int b = measure_x_fused(qubit_b, u_b);
        return {a, b};
    }
    DenseBlock& block = mutable_block_of(qubit_a);
    const size_t ma = 1ULL << block.bit_of(qubit_a);
    const size_t mb = 1ULL << block.bit_of(qubit_b);
    const size_t mlo = std::min(ma, mb), mhi = std::max(ma, mb);
    const size_t dim = block.dim();
    const size_t quarter = dim >> 2;

    AmpVec scratch = acquire_buffer(dim);
    const cplx* amp = block.data();
    cplx* streams[4];
    for (int q = 0; q < 4; ++q) streams[q] = scratch.data() + q * quarter;
    const double c = block.scale / 2.0;
    double norms[4] = {0, 0, 0, 0};
    for (size_t i = 0; i < quarter; ++i) {
        size_t base = insert_bit(insert_bit(i, mlo), mhi);
        cplx a00 = amp[base];
        cplx a10 = amp[base | ma];
        cplx a01 = amp[base | mb];
        cplx a11 = amp[base | ma | mb];
        cplx v00 = (a00 + a10 + a01 + a11) * c;
        cplx v10 = (a00 - a10 + a01 - a11) * c;
        cplx v01 = (a00 + a10 - a01 - a11) * c;
        cplx v11 = (a00 - a10 - a01 + a11) * c;
        streams[0][i] = v00;
        streams[1][i] = v10;
        streams[2][i] = v01;
        streams[3][i] = v11;
        norms[0] += std::norm(v00);
        norms[1] += std::norm(v10);
        norms[2] += std::norm(v01);
        norms[3] += std::norm(v11);
    }
    const double total = norms[0] + norms[1] + norms[2] + norms[3];
    const int bit_a = u_a < (norms[1] + norms[3]) / total ? 1 : 0;
    const double cond = norms[2 + bit_a] / (norms[bit_a] + norms[2 + bit_a]);
    const int bit_b = u_b < cond ? 1 : 0;
    const int sel = bit_a + 2 * bit_b;
    release_buffer(std::move(block.buf));
    block.buf = std::move(scratch);
    block.offset = sel * quarter;
    block.scale = 1.0 / std::sqrt(norms[sel]);
    drop_qubit_entry(block, qubit_a);
    drop_qubit_entry(block, qubit_b);
    return {bit_a, bit_b};
}

int RegisterState::measure_pauli(const PauliOperator& word, double u) {
    auto phase = word.phase();
    if (phase != cplx(1, 0) && phase != cplx(-1, 0))
        throw std::invalid_argument("measure_pauli needs a Hermitian word (phase +-1)");
    auto support = word.support();
    if (support.empty()) return +1;
    std::vector<int> slots;
    for (int q : support) {
        if (!is_live(q)) throw std::invalid_argument("measure_pauli on dead qubit");
        slots.push_back(block_index_[q]);
    }
    int slot = merge(slots);
    DenseBlock& block = *blocks_[slot];
    const size_t dim = block.dim();
    cplx* amp = block.data();

    // phi = P psi, built sitewise on a copy.
    AmpVec phi_buf = acquire_buffer(dim);
    cplx* phi = phi_buf.data();
    std::copy(amp, amp + dim, phi);
    for (int q : support) {
        const size_t mask = 1ULL << block.bit_of(q);
        const size_t half = dim >> 1;
        switch (word.letter(q)) {
            case PauliLetter::X:
                for (size_t i = 0; i < half; ++i) {
                    size_t i0 = insert_bit(i, mask);
                    std::swap(phi[i0], phi[i0 | mask]);
                }
                break;
            case PauliLetter::Z:
                for (size_t i = 0; i < half; ++i) phi[insert_bit(i, mask) | mask] *= -1.0;
                break;
            case PauliLetter::Y:
                for (size_t i = 0; i < half; ++i) {
                    size_t i0 = insert_bit(i, mask);
                    size_t i1 = i0 | mask;
                    cplx a = phi[i0];
                    phi[i0] = cplx(0, -1) * phi[i1];
                    phi[i1] = cplx(0, 1) * a;
                }
                break;
            default:
                break;
        }
    }
    if (phase == cplx(-1, 0))
        for (size_t i = 0; i < dim; ++i) phi[i] = -phi[i];

    double expect = 0, total = 0;
    for (size_t i = 0; i < dim; ++i) {
        expect += (std::conj(amp[i]) * phi[i]).real();
        total += std::norm(amp[i]);
    }
    expect /= total;
    const double p_plus = std::clamp(0.5 * (1.0 + expect), 0.0, 1.0);
    const int outcome = u < p_plus ? +1 : -1;
    const double sign = outcome;
    const double keep = outcome > 0 ? p_plus : 1.0 - p_plus;
    const double renorm = 1.0 / std::sqrt(4.0 * total * keep);
    for (size_t i = 0; i < dim; ++i) amp[i] = (amp[i] + sign * phi[i]) * renorm;
    block.scale = 1.0;
    release_buffer(std::move(phi_buf));
    return outcome;
}

std::vector<cplx> RegisterState::statevector(const std::vector<int>& qubits) const {
    if (qubits.empty()) throw std::invalid_argument("statevector: empty qubit list");
    const DenseBlock& block = block_of(qubits[0]);
    if (block.qubits.size() != qubits.size())
        throw std::invalid_argument("statevector: qubit list does not match a block");
    std::vector<int> shift(qubits.size());
    for (size_t b = 0; b < qubits.size(); ++b) shift[b] = block.bit_of(qubits[b]);
    const size_t dim = block.dim();
    const cplx* amp = block.data();
    std::vector<cplx> out(dim);
    double total = 0;
    for (size_t i = 0; i < dim; ++i) total += std::norm(amp[i]);
    const double renorm = 1.0 / std::sqrt(total);
    for (size_t i = 0; i < dim; ++i) {
        size_t j = 0;
        for (size_t b = 0; b < shift.size(); ++b)
            if (i >> b & 1) j |= 1ULL << shift[b];
        out[i] = amp[j] * renorm;
    }
    return out;
}

double RegisterState::fidelity_with(const std::vector<int>& qubits,
                                    const std::vector<cplx>& target) const {
    auto psi = statevector(qubits);
    if (psi.size() != target.size()) throw std::invalid_argument("fidelity: dimension mismatch");
    cplx overlap = 0;
    for (size_t i = 0; i < psi.size(); ++i) overlap += std::conj(target[i]) * psi[i];
    return std::norm(overlap);
}

void RegisterState::merge_all() {
    std::vector<int> slots;
    for (int q = 1; q <= n_qubits_; ++q)
        if (block_index_[q] >= 0) slots.push_back(block_index_[q]);
    if (!slots.empty()) merge(slots);
}

double RegisterState::max_block_norm_error() const {
    double worst = 0;
    for (const auto& b : blocks_)
        if (b) worst = std::max(worst, std::abs(b->norm() - 1.0));
    return worst;
}

}  // namespace switchsim
