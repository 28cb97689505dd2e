// Batch front-end: builds and emits circuits, runs simulated experiments,
// persists shot files, decodes them, analyzes certification statistics and
// runs the fault-tolerance checker.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 property violation.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "switchsim/builders.hpp"
#include "switchsim/engine.hpp"
#include "switchsim/qasm.hpp"
#include "switchsim/shotfile.hpp"

using namespace switchsim;

namespace {

struct NoiseFlags {
    std::string preset = "default";  // default | off
    double p1 = -1, p2 = -1, p_meas1 = -1, p_meas0 = -1, p_idle = -1, p_crosstalk = -1;
    bool crosstalk = false;

    NoiseModel build() const {
        NoiseModel n = preset == "off" ? NoiseModel::off() : NoiseModel::defaults();
        if (p1 >= 0) n.p1 = p1;
        if (p2 >= 0) n.p2 = p2;
        if (p_meas1 >= 0) n.p_meas1 = p_meas1;
        if (p_meas0 >= 0) n.p_meas0 = p_meas0;
        if (p_idle >= 0) n.p_idle = p_idle;
        if (p_crosstalk >= 0) n.p_crosstalk = p_crosstalk;
        if (crosstalk) n.crosstalk_noise = true;
        n.validate();
        return n;
    }
};

void add_noise_options(CLI::App* cmd, NoiseFlags& flags) {
    cmd->add_option("--noise", flags.preset, "noise preset: default or off")
        ->check(CLI::IsMember({"default", "off"}));
    cmd->add_option("--p1", flags.p1, "single-qubit depolarizing rate");
    cmd->add_option("--p2", flags.p2, "two-qubit depolarizing rate");
    cmd->add_option("--p-meas1", flags.p_meas1, "readout flip rate for true 1");
    cmd->add_option("--p-meas0", flags.p_meas0, "readout flip rate for true 0");
    cmd->add_option("--p-idle", flags.p_idle, "per-tick idle depolarizing rate");
    cmd->add_option("--p-crosstalk", flags.p_crosstalk, "mid-circuit crosstalk rate");
    cmd->add_flag("--crosstalk", flags.crosstalk, "enable the crosstalk channel");
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

DecodeFile load_decode(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open decode file: " + path);
    try {
        return read_decode_file(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"code-switching magic state simulator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags override");

    // emit
    auto* emit = app.add_subcommand("emit", "write an experiment circuit as OPENQASM 2.0");
    std::string emit_kind, emit_out = "-";
    bool emit_reuse = false, emit_no_reuse = false;
    emit->add_option("kind", emit_kind, "experiment kind")->required();
    emit->add_flag("--reuse", emit_reuse, "recycle ancillas via reset");
    emit->add_flag("--no-reuse", emit_no_reuse, "dedicated ancilla per measurement");
    emit->add_option("-o,--output", emit_out, "output path ('-' for stdout)");

    // run
    auto* run = app.add_subcommand("run", "simulate an experiment and write a shot file");
    std::string run_kind, run_out;
    int run_shots = 10000;
    uint64_t run_seed = 1;
    bool run_reuse = false;
    int run_threads = 0;
    NoiseFlags run_noise;
    run->add_option("kind", run_kind, "experiment kind")->required();
    run->add_option("--shots", run_shots, "number of shots")->check(CLI::PositiveNumber);
    run->add_option("--seed", run_seed, "base seed");
    run->add_flag("--reuse", run_reuse, "recycle ancillas via reset");
    run->add_option("--threads", run_threads, "worker threads (0 = hardware)");
    run->add_option("-o,--output", run_out, "shot file path")->required();
    add_noise_options(run, run_noise);

    // decode
    auto* decode = app.add_subcommand("decode", "decode a shot file");
    std::string decode_in, decode_out, decode_mode = "ec";
    decode->add_option("shotfile", decode_in, "input shot file")->required();
    decode->add_option("--mode", decode_mode, "ec or ps")->check(CLI::IsMember({"ec", "ps"}));
    decode->add_option("-o,--output", decode_out, "decode summary path")->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "certification report from decode outputs");
    std::string an_x, an_y, an_z, an_two, an_out = "-", an_csv, an_mode = "ec";
    analyze->add_option("--x", an_x, "single-copy-x decode file")->required();
    analyze->add_option("--y", an_y, "single-copy-y decode file")->required();
    analyze->add_option("--z", an_z, "single-copy-z decode file")->required();
    analyze->add_option("--two-copy", an_two, "two-copy decode file")->required();
    analyze->add_option("--mode", an_mode, "ec or ps")->check(CLI::IsMember({"ec", "ps"}));
    analyze->add_option("-o,--output", an_out, "text report path ('-' for stdout)");
    analyze->add_option("--csv", an_csv, "CSV report path");

    // ftcheck
    auto* ft = app.add_subcommand("ftcheck", "exhaustive single-fault check of magic-prep");
    std::string ft_out = "-", ft_ablate;
    int ft_reps = 12, ft_threads = 0;
    uint64_t ft_seed = 2026;
    bool ft_reuse = false;
    ft->add_option("--reps", ft_reps, "branch samples per fault")->check(CLI::PositiveNumber);
    ft->add_option("--seed", ft_seed, "base seed");
    ft->add_option("--threads", ft_threads, "worker threads (0 = hardware)");
    ft->add_flag("--reuse", ft_reuse, "check the ancilla-reuse circuit");
    ft->add_option("--ablate", ft_ablate, "drop a gadget (stabilizer-round)")
        ->check(CLI::IsMember({"stabilizer-round"}));
    ft->add_option("-o,--output", ft_out, "report path ('-' for stdout)");

    CLI11_PARSE(app, argc, argv);

    if (emit->parsed()) {
        ExperimentKind kind = experiment_from_name(emit_kind);
        Circuit circuit = build_experiment(kind, emit_reuse && !emit_no_reuse);
        std::string text = emit_qasm(circuit);
        if (emit_out == "-") {
            std::cout << text;
        } else {
            auto out = open_output(emit_out);
            out << text;
        }
        return 0;
    }

    if (run->parsed()) {
        ExperimentKind kind = experiment_from_name(run_kind);
        Circuit circuit = build_experiment(kind, run_reuse);
        NoiseModel noise = run_noise.build();
        auto records = run_batch(circuit, noise, run_shots, run_seed, run_threads);
        ShotFileHeader header;
        header.kind = kind;
        header.reuse = run_reuse;
        header.seed = run_seed;
        header.shots = run_shots;
        header.noise = noise;
        auto out = open_output(run_out);
        write_shot_file(out, header, records);
        return 0;
    }

    if (decode->parsed()) {
        std::ifstream in(decode_in);
        if (!in) throw std::runtime_error("cannot open shot file: " + decode_in);
        ShotFile file;
        try {
            file = read_shot_file(in);
        } catch (const std::exception& e) {
            throw std::runtime_error(decode_in + ": " + e.what());
        }
        DecodeMode mode = decode_mode_from_name(decode_mode);
        const ShotLayout layout =
            ShotLayout::for_experiment(file.header.kind, file.header.ablated);
        std::vector<DecodedShot> decoded;
        decoded.reserve(file.records.size());
        int accepted = 0;
        for (const auto& rec : file.records) {
            DecodedShot d;
            switch (file.header.kind) {
                case ExperimentKind::TwoCopy:
                    d = decode_two_copy(rec, mode, layout);
                    break;
                case ExperimentKind::MagicPrep: {
                    auto m = decode_magic_prep(rec, layout);
                    d.accepted = m.accepted;
                    d.reason = m.reason;
                    if (m.accepted) {
                        d.frame_a[0] = m.frame_a;
                        d.logical = m.frame_a ? -1 : +1;  // Xbar^qRM readout
                    }
                    break;
                }
                default:
                    d = decode_single_copy(rec, single_copy_basis(file.header.kind), mode, layout);
                    break;
            }
            if (d.accepted) ++accepted;
            decoded.push_back(d);
        }
        DecodeFileHeader header;
        header.kind = file.header.kind;
        header.mode = mode;
        header.shots = static_cast<int>(decoded.size());
        header.accepted = accepted;
        auto out = open_output(decode_out);
        write_decode_file(out, header, decoded);
        return 0;
    }

    if (analyze->parsed()) {
        DecodeMode mode = decode_mode_from_name(an_mode);
        DecodeFile fx = load_decode(an_x), fy = load_decode(an_y), fz = load_decode(an_z);
        DecodeFile f2 = load_decode(an_two);
        for (const auto* f : {&fx, &fy, &fz, &f2})
            if (f->header.mode != mode)
                throw std::runtime_error("decode file mode does not match --mode");
        if (fx.header.kind != ExperimentKind::SingleCopyX ||
            fy.header.kind != ExperimentKind::SingleCopyY ||
            fz.header.kind != ExperimentKind::SingleCopyZ ||
            f2.header.kind != ExperimentKind::TwoCopy)
            throw std::runtime_error("decode file experiment kinds do not match their roles");
        auto report = summarize(basis_summary_from(fx.shots), basis_summary_from(fy.shots),
                                basis_summary_from(fz.shots), two_copy_summary_from(f2.shots),
                                mode);
        std::string text = render_report_text(report);
        if (an_out == "-") {
            std::cout << text;
        } else {
            auto out = open_output(an_out);
            out << text;
        }
        if (!an_csv.empty()) {
            auto out = open_output(an_csv);
            out << render_report_csv(report);
        }
        return 0;
    }

    if (ft->parsed()) {
        FtOptions options;
        options.reps = ft_reps;
        options.base_seed = ft_seed;
        options.n_threads = ft_threads;
        options.reuse = ft_reuse;
        options.ablate_stabilizer_round = ft_ablate == "stabilizer-round";
        options.stop_at_first_violation = options.ablate_stabilizer_round;
        FtReport report = ft_check(options);

        std::ostringstream text;
        text << "faults: " << report.fault_count << "\n";
        text << "reps per fault: " << report.reps << "\n";
        text << "control: accepted-and-correct " << report.control.accepted_correct
             << ", accepted-and-wrong " << report.control.accepted_wrong << "\n";
        text << "rejected: " << report.total_rejected << "\n";
        text << "accepted-and-correct: " << report.total_accepted_correct << "\n";
        text << "accepted-and-wrong: " << report.total_accepted_wrong << "\n";
        for (const auto& v : report.violations) text << "violation: " << v << "\n";
        text << (report.pass() ? "PASS" : "FAIL") << "\n";
        if (ft_out == "-") {
            std::cout << text.str();
        } else {
            auto out = open_output(ft_out);
            out << text.str();
        }
        return report.pass() ? 0 : 3;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
