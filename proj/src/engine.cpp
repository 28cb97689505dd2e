#include "switchsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "switchsim/rng.hpp"

namespace switchsim {

namespace {

void project_stabilizer(std::vector<cplx>& vec, const PauliOperator& word) {
    std::vector<cplx> image = vec;
    apply_pauli_to_vector(image, word);
    for (size_t i = 0; i < vec.size(); ++i) vec[i] = 0.5 * (vec[i] + image[i]);
}

void normalize(std::vector<cplx>& vec) {
    double n = 0;
    for (const cplx& a : vec) n += std::norm(a);
    if (n <= 0) throw std::runtime_error("cannot normalize zero vector");
    double f = 1.0 / std::sqrt(n);
    for (cplx& a : vec) a *= f;
}

}  // namespace

void apply_pauli_to_vector(std::vector<cplx>& vec, const PauliOperator& word) {
    const size_t dim = vec.size();
    for (int q = 1; q <= word.n(); ++q) {
        const size_t mask = 1ULL << (q - 1);
        switch (word.letter(q)) {
            case PauliLetter::X:
                for (size_t i = 0; i < dim; ++i)
                    if (!(i & mask)) std::swap(vec[i], vec[i | mask]);
                break;
            case PauliLetter::Z:
                for (size_t i = 0; i < dim; ++i)
                    if (i & mask) vec[i] = -vec[i];
                break;
            case PauliLetter::Y:
                for (size_t i = 0; i < dim; ++i)
                    if (!(i & mask)) {
                        cplx a = vec[i];
                        vec[i] = cplx(0, -1) * vec[i | mask];
                        vec[i | mask] = cplx(0, 1) * a;
                    }
                break;
            default:
                break;
        }
    }
    auto phase = word.phase();
    if (phase != cplx(1, 0))
        for (cplx& a : vec) a *= phase;
}

std::vector<cplx> codeword_zero(const StabilizerCode& code) {
    std::vector<cplx> vec(size_t(1) << code.n, 0.0);
    vec[0] = 1.0;
    for (const auto& g : code.x_generators) project_stabilizer(vec, g.op);
    normalize(vec);
    return vec;
}

std::vector<cplx> codeword_plus(const StabilizerCode& code) {
    const size_t dim = size_t(1) << code.n;
    std::vector<cplx> vec(dim, 1.0 / std::sqrt(double(dim)));
    for (const auto& g : code.z_generators) project_stabilizer(vec, g.op);
    normalize(vec);
    return vec;
}

std::vector<cplx> codeword_t(const StabilizerCode& code) {
    auto zero = codeword_zero(code);
    auto one = zero;
    apply_pauli_to_vector(one, code.logical_x);
    const cplx w = std::polar(1.0 / std::numbers::sqrt2, std::numbers::pi / 4);
    for (size_t i = 0; i < zero.size(); ++i)
        zero[i] = zero[i] / std::numbers::sqrt2 + w * one[i];
    normalize(zero);
    return zero;
}

std::string FaultSpec::str() const {
    static const char letters[] = "IXYZ";
    std::string s = "instr " + std::to_string(instr_index);
    if (position == FaultPosition::MeasurementBitFlip) return s + " bitflip";
    s += " pauli ";
    s += letters[static_cast<int>(p0)];
    s += letters[static_cast<int>(p1)];
    return s;
}

namespace {

PauliLetter random_letter(ShotRng& rng) {
    static const PauliLetter l[3] = {PauliLetter::X, PauliLetter::Y, PauliLetter::Z};
    return l[rng.below(3)];
}

// Executes one trajectory. Noise draws happen in instruction order, the
// channel decision before the Born sample of the same instruction.
class Executor {
public:
    Executor(const Circuit& circuit, const NoiseModel& noise, uint64_t seed,
             const FaultSpec* fault)
        : circuit_(circuit),
          noise_(noise),
          rng_(seed),
          state_(circuit.n_qubits),
          bits_(circuit.n_cbits(), 0),
          touched_(circuit.n_qubits + 1, false),
          fault_(fault) {}

    void run() {
        const auto& ins = circuit_.instructions;
        size_t i = 0;
        while (i < ins.size()) {
            // Maximal run of CNOTs with pairwise-disjoint supports becomes
            // a single permutation pass; when the run is immediately
            // followed by the control block's X-basis readout, the first
            // two measurements fold into the merge as well.
            if (ins[i].kind == InstrKind::Cnot) {
                size_t j = i;
                std::vector<std::pair<int, int>> pairs;
                std::vector<bool> used(circuit_.n_qubits + 1, false);
                bool fault_in_run = false;
                while (j < ins.size() && ins[j].kind == InstrKind::Cnot &&
                       !used[ins[j].q0] && !used[ins[j].q1]) {
                    used[ins[j].q0] = used[ins[j].q1] = true;
                    pairs.push_back({ins[j].q0, ins[j].q1});
                    fault_in_run = fault_in_run || fault_at(static_cast<int>(j));
                    ++j;
                }
                for (size_t k = i; k < j; ++k) {
                    touch(ins[k].q0);
                    touch(ins[k].q1);
                }
                bool readout_follows =
                    !fault_in_run && !noise_.crosstalk_noise && j + 3 < ins.size() &&
                    ins[j].kind == InstrKind::H && ins[j + 1].kind == InstrKind::MeasZ &&
                    ins[j + 1].q0 == ins[j].q0 && ins[j + 2].kind == InstrKind::H &&
                    ins[j + 3].kind == InstrKind::MeasZ && ins[j + 3].q0 == ins[j + 2].q0 &&
                    !fault_at(static_cast<int>(j)) && !fault_at(static_cast<int>(j + 2)) &&
                    state_.can_fuse_switch_readout(pairs, ins[j].q0, ins[j + 2].q0);
                if (readout_follows) {
                    // channel decisions for the whole fused region, drawn
                    // in gate order
                    std::vector<std::pair<int, PauliLetter>> injected;
                    for (size_t k = i; k < j; ++k) injected_2q_noise(ins[k], injected);
                    bool h_noise = false;
                    if (injected.empty()) h_noise = gate_noise_triggers();
                    if (injected.empty() && !h_noise) h_noise = gate_noise_triggers();
                    if (injected.empty() && !h_noise) {
                        touch(ins[j].q0);
                        touch(ins[j + 2].q0);
                        double u0 = rng_.uniform();
                        double u1 = rng_.uniform();
                        auto [b0, b1] =
                            state_.merge_cnot_readout_pair(pairs, ins[j].q0, ins[j + 2].q0, u0, u1);
                        record_measurement(ins[j + 1], b0, static_cast<int>(j + 1));
                        record_measurement(ins[j + 3], b1, static_cast<int>(j + 3));
                        i = j + 4;
                        continue;
                    }
                    // a channel fired: take the plain path, replaying the
                    // sampled CNOT paulis in order
                    state_.apply_cnot_run(pairs);
                    for (const auto& [q, letter] : injected)
                        state_.apply_pauli(PauliOperator::single(circuit_.n_qubits, q, letter));
                    i = j;
                    continue;
                }
                state_.apply_cnot_run(pairs);
                for (size_t k = i; k < j; ++k) {
                    maybe_fault(static_cast<int>(k), ins[k]);
                    noise_2q(ins[k].q0, ins[k].q1);
                }
                i = j;
                continue;
            }
            // Runs of H-then-measure on distinct qubits become fused
            // readout passes, two qubits per pass. Channel decisions for
            // the collected H gates are drawn upfront in gate order.
            if (ins[i].kind == InstrKind::H && i + 1 < ins.size() &&
                ins[i + 1].kind == InstrKind::MeasZ && ins[i + 1].q0 == ins[i].q0 &&
                !fault_at(static_cast<int>(i)) && !noise_.crosstalk_noise &&
                !gate_noise_triggers()) {
                size_t j = i;
                std::vector<size_t> meas_at;  // index of each MeasZ
                meas_at.push_back(j + 1);
                touch(ins[j].q0);
                j += 2;
                while (j + 1 < ins.size() && ins[j].kind == InstrKind::H &&
                       ins[j + 1].kind == InstrKind::MeasZ && ins[j + 1].q0 == ins[j].q0 &&
                       !fault_at(static_cast<int>(j)) && !gate_noise_triggers()) {
                    touch(ins[j].q0);
                    meas_at.push_back(j + 1);
                    j += 2;
                }
                size_t k = 0;
                for (; k + 1 < meas_at.size(); k += 2) {
                    const Instruction& m0 = ins[meas_at[k]];
                    const Instruction& m1 = ins[meas_at[k + 1]];
                    double u0 = rng_.uniform();
                    double u1 = rng_.uniform();
                    auto [b0, b1] = state_.measure_x_pair(m0.q0, m1.q0, u0, u1);
                    record_measurement(m0, b0, static_cast<int>(meas_at[k]));
                    record_measurement(m1, b1, static_cast<int>(meas_at[k + 1]));
                }
                if (k < meas_at.size()) {
                    const Instruction& m = ins[meas_at[k]];
                    int b = state_.measure_x_fused(m.q0, rng_.uniform());
                    record_measurement(m, b, static_cast<int>(meas_at[k]));
                }
                i = j;
                continue;
            }
            step(static_cast<int>(i));
            ++i;
        }
    }

    std::vector<uint8_t> take_bits() { return std::move(bits_); }
    RegisterState& state() { return state_; }

private:
    const Circuit& circuit_;
    const NoiseModel& noise_;
    ShotRng rng_;
    RegisterState state_;
    std::vector<uint8_t> bits_;
    std::vector<bool> touched_;
    const FaultSpec* fault_;

    void touch(int q) { touched_[q] = true; }

    bool fault_at(int idx) const {
        return fault_ && fault_->instr_index == idx &&
               fault_->position == FaultPosition::AfterInstruction;
    }

    void maybe_fault(int idx, const Instruction& in) {
        if (!fault_at(idx)) return;
        if (fault_->p0 != PauliLetter::I)
            state_.apply_pauli(PauliOperator::single(circuit_.n_qubits, in.q0, fault_->p0));
        if (fault_->p1 != PauliLetter::I)
            state_.apply_pauli(PauliOperator::single(circuit_.n_qubits, in.q1, fault_->p1));
    }

    bool gate_noise_triggers() {
        if (!noise_.gate_noise || noise_.p1 <= 0) return false;
        return rng_.uniform() < noise_.p1;
    }

    void noise_1q_post_draw(int q) {
        state_.apply_pauli(PauliOperator::single(circuit_.n_qubits, q, random_letter(rng_)));
        touch(q);
    }

    void noise_1q(int q) {
        if (gate_noise_triggers()) noise_1q_post_draw(q);
    }

    void noise_2q(int q0, int q1) {
        if (!noise_.gate_noise || noise_.p2 <= 0) return;
        if (rng_.uniform() >= noise_.p2) return;
        int idx = rng_.below(15) + 1;  // 1..15 over (p0, p1) pairs, II excluded
        PauliLetter a = static_cast<PauliLetter>(idx >> 2);
        PauliLetter b = static_cast<PauliLetter>(idx & 3);
        if (a != PauliLetter::I)
            state_.apply_pauli(PauliOperator::single(circuit_.n_qubits, q0, a));
        if (b != PauliLetter::I)
            state_.apply_pauli(PauliOperator::single(circuit_.n_qubits, q1, b));
    }

    // Sample one CNOT's channel without applying it; paulis on disjoint
    // pairs commute with the rest of the run.
    void injected_2q_noise(const Instruction& in, std::vector<std::pair<int, PauliLetter>>& out) {
        if (!noise_.gate_noise || noise_.p2 <= 0) return;
        if (rng_.uniform() >= noise_.p2) return;
        int idx = rng_.below(15) + 1;
        PauliLetter a = static_cast<PauliLetter>(idx >> 2);
        PauliLetter b = static_cast<PauliLetter>(idx & 3);
        if (a != PauliLetter::I) out.push_back({in.q0, a});
        if (b != PauliLetter::I) out.push_back({in.q1, b});
    }

    void depolarize_set(const std::vector<int>& qubits, double p) {
        for (int q : qubits) {
            if (rng_.uniform() < p)
                state_.apply_pauli(PauliOperator::single(circuit_.n_qubits, q, random_letter(rng_)));
        }
    }

    void record_measurement(const Instruction& in, int outcome, int idx) {
        if (noise_.readout_noise) {
            double p = outcome ? noise_.p_meas1 : noise_.p_meas0;
            if (rng_.uniform() < p) outcome ^= 1;
        }
        if (fault_ && fault_->instr_index == idx &&
            fault_->position == FaultPosition::MeasurementBitFlip)
            outcome ^= 1;
        bits_[in.cbit] = static_cast<uint8_t>(outcome);
        if (noise_.crosstalk_noise && noise_.p_crosstalk > 0) {
            auto live = state_.live_qubits();
            if (!live.empty()) depolarize_set(live, noise_.p_crosstalk);
        }
    }

    void step(int idx) {
        const Instruction& in = circuit_.instructions[idx];
        switch (in.kind) {
            case InstrKind::Tick: {
                if (noise_.idle_noise && noise_.p_idle > 0) {
                    std::vector<int> idle;
                    for (int q : state_.live_qubits())
                        if (!touched_[q]) idle.push_back(q);
                    depolarize_set(idle, noise_.p_idle);
                }
                std::fill(touched_.begin(), touched_.end(), false);
                return;
            }
            case InstrKind::PrepZ:
            case InstrKind::PrepX:
                state_.prep(in.q0, in.kind == InstrKind::PrepX);
                touch(in.q0);
                maybe_fault(idx, in);
                return;
            case InstrKind::MeasZ:
            case InstrKind::MeasX: {
                touch(in.q0);
                int outcome = in.kind == InstrKind::MeasX
                                  ? state_.measure_x_fused(in.q0, rng_.uniform())
                                  : state_.measure_z(in.q0, rng_.uniform());
                record_measurement(in, outcome, idx);
                return;
            }
            case InstrKind::Cnot:
                state_.apply_cnot(in.q0, in.q1);
                touch(in.q0);
                touch(in.q1);
                maybe_fault(idx, in);
                noise_2q(in.q0, in.q1);
                return;
            default:
                state_.apply_gate1(in.kind, in.q0);
                touch(in.q0);
                maybe_fault(idx, in);
                noise_1q(in.q0);
                return;
        }
    }
};

}  // namespace

ShotRecord run_shot(const Circuit& circuit, const NoiseModel& noise, uint64_t seed) {
    noise.validate();
    Executor exec(circuit, noise, seed, nullptr);
    exec.run();
    ShotRecord rec;
    rec.bits = exec.take_bits();
    return rec;
}

ShotResult run_shot_keep_state(const Circuit& circuit, const NoiseModel& noise, uint64_t seed) {
    noise.validate();
    auto exec = std::make_unique<Executor>(circuit, noise, seed, nullptr);
    exec->run();
    ShotResult result;
    result.record.bits = exec->take_bits();
    result.state = std::make_unique<RegisterState>(std::move(exec->state()));
    return result;
}

std::vector<ShotRecord> run_batch(const Circuit& circuit, const NoiseModel& noise, int n_shots,
                                  uint64_t base_seed, int n_threads) {
    if (n_shots < 1) throw std::invalid_argument("run_batch: n_shots must be >= 1");
    noise.validate();
    if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, n_shots));

    std::vector<ShotRecord> records(n_shots);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n_shots) break;
            records[i] = run_shot(circuit, noise, derive_seed(base_seed, i));
        }
    };
    std::vector<std::thread> threads;
    for (int t = 1; t < n_threads; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    return records;
}

std::vector<FaultSpec> enumerate_fault_locations(const Circuit& circuit) {
    std::vector<FaultSpec> faults;
    static const PauliLetter letters[3] = {PauliLetter::X, PauliLetter::Y, PauliLetter::Z};
    for (size_t i = 0; i < circuit.instructions.size(); ++i) {
        const auto& in = circuit.instructions[i];
        int idx = static_cast<int>(i);
        if (in.kind == InstrKind::Cnot) {
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    if (a == 0 && b == 0) continue;
                    faults.push_back({idx, FaultPosition::AfterInstruction,
                                      static_cast<PauliLetter>(a), static_cast<PauliLetter>(b)});
                }
        } else if (is_unitary_gate(in.kind)) {
            for (PauliLetter l : letters)
                faults.push_back({idx, FaultPosition::AfterInstruction, l, PauliLetter::I});
        } else if (in.kind == InstrKind::PrepZ) {
            faults.push_back({idx, FaultPosition::AfterInstruction, PauliLetter::X, PauliLetter::I});
        } else if (in.kind == InstrKind::PrepX) {
            faults.push_back({idx, FaultPosition::AfterInstruction, PauliLetter::Z, PauliLetter::I});
        } else if (is_measurement(in.kind)) {
            faults.push_back({idx, FaultPosition::MeasurementBitFlip});
        }
    }
    return faults;
}

ShotResult run_with_fault(const Circuit& circuit, const FaultSpec& fault, uint64_t seed) {
    if (fault.instr_index < 0 ||
        fault.instr_index >= static_cast<int>(circuit.instructions.size()))
        throw std::invalid_argument("fault location out of range");
    const auto& in = circuit.instructions[fault.instr_index];
    if (fault.position == FaultPosition::AfterInstruction) {
        if (fault.p0 == PauliLetter::I && fault.p1 == PauliLetter::I)
            throw std::invalid_argument("identity-Pauli fault is not a fault");
        if (in.kind == InstrKind::Tick || is_measurement(in.kind))
            throw std::invalid_argument("pauli fault at a non-gate location");
        if (fault.p1 != PauliLetter::I && in.kind != InstrKind::Cnot)
            throw std::invalid_argument("two-qubit fault on a one-qubit instruction");
    } else {
        if (!is_measurement(in.kind))
            throw std::invalid_argument("bit-flip fault at a non-measurement location");
    }
    auto exec = std::make_unique<Executor>(circuit, NoiseModel::off(), seed, &fault);
    exec->run();
    ShotResult result;
    result.record.bits = exec->take_bits();
    result.state = std::make_unique<RegisterState>(std::move(exec->state()));
    return result;
}

namespace {

PauliOperator embed_at(const PauliOperator& local, int n, int base) {
    PauliOperator global = PauliOperator::identity(n);
    for (int q : local.support())
        global = global * PauliOperator::single(n, base + q - 1, local.letter(q));
    return global;
}

}  // namespace

void ideal_error_correct(RegisterState& state, const StabilizerCode& code, int base,
                         uint64_t seed) {
    const SyndromeTable z_table = build_lookup_table(code, Sector::ZDetecting);
    const SyndromeTable x_table = build_lookup_table(code, Sector::XDetecting);
    const int n = state.n_qubits();
    ShotRng rng(seed);
    uint32_t z_synd = 0, x_synd = 0;
    for (size_t i = 0; i < code.z_generators.size(); ++i)
        if (state.measure_pauli(embed_at(code.z_generators[i].op, n, base), rng.uniform()) < 0)
            z_synd |= 1u << i;
    for (size_t i = 0; i < code.x_generators.size(); ++i)
        if (state.measure_pauli(embed_at(code.x_generators[i].op, n, base), rng.uniform()) < 0)
            x_synd |= 1u << i;
    if (z_synd) state.apply_pauli(embed_at(z_table.correction(z_synd), n, base));
    if (x_synd) state.apply_pauli(embed_at(x_table.correction(x_synd), n, base));
}

double corrected_magic_fidelity(RegisterState& state, int steane_base, int frame_a,
                                uint64_t ec_seed) {
    static const StabilizerCode steane = steane_code();
    static const std::vector<cplx> target = codeword_t(steane);

    if (frame_a)
        state.apply_pauli(embed_at(steane.logical_z, state.n_qubits(), steane_base));
    ideal_error_correct(state, steane, steane_base, ec_seed);

    std::vector<int> qubits(7);
    for (int i = 0; i < 7; ++i) qubits[i] = steane_base + i;
    return state.fidelity_with(qubits, target);
}

FtReport ft_check(const FtOptions& options) {
    BuildOptions build;
    build.reuse = options.reuse;
    build.ablate_stabilizer_round = options.ablate_stabilizer_round;
    const Circuit circuit = build_experiment(ExperimentKind::MagicPrep, build);
    const ShotLayout layout =
        ShotLayout::for_experiment(ExperimentKind::MagicPrep, options.ablate_stabilizer_round);

    FtReport report;
    auto faults = enumerate_fault_locations(circuit);
    report.fault_count = static_cast<int>(faults.size());
    report.reps = options.reps;

    std::atomic<bool> stop{false};

    auto evaluate = [&](const FaultSpec* fault, uint64_t seed_tag, FaultDisposition& row) {
        bool frame_seen[2] = {false, false};
        int samples = 0;
        while (samples < options.reps ||
               (samples < options.max_reps &&
                (row.accepted_correct + row.accepted_wrong) > 0 &&
                (!frame_seen[0] || !frame_seen[1]))) {
            uint64_t seed = derive_seed(options.base_seed, seed_tag * 1024 + samples);
            ++samples;
            ShotResult result = fault ? run_with_fault(circuit, *fault, seed)
                                      : run_shot_keep_state(circuit, NoiseModel::off(), seed);
            auto decode = decode_magic_prep(result.record, layout);
            if (!decode.accepted) {
                ++row.rejected;
                continue;
            }
            frame_seen[decode.frame_a] = true;
            double fid = corrected_magic_fidelity(*result.state, 1, decode.frame_a, seed ^ 1);
            if (fid >= 1.0 - options.fidelity_tol) {
                ++row.accepted_correct;
            } else {
                ++row.accepted_wrong;
                if (options.stop_at_first_violation) stop.store(true);
            }
        }
        row.both_frames_seen = frame_seen[0] && frame_seen[1];
    };

    evaluate(nullptr, 0, report.control);

    report.per_fault.resize(faults.size());
    std::atomic<size_t> next{0};
    int n_threads = options.n_threads;
    if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, n_threads);
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= faults.size() || stop.load()) break;
            report.per_fault[i].fault = faults[i];
            evaluate(&faults[i], i + 1, report.per_fault[i]);
        }
    };
    std::vector<std::thread> threads;
    for (int t = 1; t < n_threads; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    for (const auto& row : report.per_fault) {
        report.total_rejected += row.rejected;
        report.total_accepted_correct += row.accepted_correct;
        report.total_accepted_wrong += row.accepted_wrong;
        if (row.accepted_wrong)
            report.violations.push_back(row.fault.str() + " -> " +
                                        std::to_string(row.accepted_wrong) + " accepted-and-wrong");
    }
    return report;
}

}  // namespace switchsim
