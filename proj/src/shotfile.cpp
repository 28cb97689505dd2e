#include "switchsim/shotfile.hpp"

#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace switchsim {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::map<std::string, std::string> read_header(std::istream& in, int& lineno,
                                               std::string& pending_line) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] != '#') {
            pending_line = line;
            break;
        }
        size_t start = line.find_first_not_of("# ");
        if (start == std::string::npos) continue;
        size_t eq = line.find('=', start);
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(lineno) + ": malformed header");
        kv[line.substr(start, eq - start)] = line.substr(eq + 1);
    }
    return kv;
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error("missing header key: " + key);
    return it->second;
}

}  // namespace

void write_shot_file(std::ostream& out, const ShotFileHeader& header,
                     const std::vector<ShotRecord>& records) {
    const NoiseModel& n = header.noise;
    out << "# experiment=" << experiment_name(header.kind) << "\n";
    out << "# layout=v1\n";
    out << "# reuse=" << (header.reuse ? 1 : 0) << "\n";
    if (header.ablated) out << "# ablated=1\n";
    out << "# seed=" << header.seed << "\n";
    out << "# shots=" << header.shots << "\n";
    out << "# noise.p1=" << fmt("%.9g", n.p1) << "\n";
    out << "# noise.p2=" << fmt("%.9g", n.p2) << "\n";
    out << "# noise.p_meas1=" << fmt("%.9g", n.p_meas1) << "\n";
    out << "# noise.p_meas0=" << fmt("%.9g", n.p_meas0) << "\n";
    out << "# noise.p_idle=" << fmt("%.9g", n.p_idle) << "\n";
    out << "# noise.p_crosstalk=" << fmt("%.9g", n.p_crosstalk) << "\n";
    out << "# noise.gate=" << (n.gate_noise ? 1 : 0) << "\n";
    out << "# noise.readout=" << (n.readout_noise ? 1 : 0) << "\n";
    out << "# noise.idle=" << (n.idle_noise ? 1 : 0) << "\n";
    out << "# noise.crosstalk=" << (n.crosstalk_noise ? 1 : 0) << "\n";
    for (const auto& rec : records) out << format_shot(rec) << "\n";
}

ShotFile read_shot_file(std::istream& in) {
    ShotFile file;
    int lineno = 0;
    std::string pending;
    auto kv = read_header(in, lineno, pending);

    file.header.kind = experiment_from_name(require(kv, "experiment"));
    if (require(kv, "layout") != "v1") throw std::runtime_error("unsupported layout version");
    file.header.reuse = require(kv, "reuse") == "1";
    file.header.ablated = kv.count("ablated") && kv.at("ablated") == "1";
    file.header.seed = std::stoull(require(kv, "seed"));
    file.header.shots = std::stoi(require(kv, "shots"));
    NoiseModel& n = file.header.noise;
    n.p1 = std::stod(require(kv, "noise.p1"));
    n.p2 = std::stod(require(kv, "noise.p2"));
    n.p_meas1 = std::stod(require(kv, "noise.p_meas1"));
    n.p_meas0 = std::stod(require(kv, "noise.p_meas0"));
    n.p_idle = std::stod(require(kv, "noise.p_idle"));
    n.p_crosstalk = std::stod(require(kv, "noise.p_crosstalk"));
    n.gate_noise = require(kv, "noise.gate") == "1";
    n.readout_noise = require(kv, "noise.readout") == "1";
    n.idle_noise = require(kv, "noise.idle") == "1";
    n.crosstalk_noise = require(kv, "noise.crosstalk") == "1";

    const ShotLayout layout = ShotLayout::for_experiment(file.header.kind, file.header.ablated);
    auto add_record = [&](const std::string& line, int at) {
        try {
            file.records.push_back(parse_shot(line, layout));
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(at) + ": " + e.what());
        }
    };
    if (!pending.empty()) add_record(pending, lineno);
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        add_record(line, lineno);
    }
    if (static_cast<int>(file.records.size()) != file.header.shots)
        throw std::runtime_error("record count " + std::to_string(file.records.size()) +
                                 " does not match header shots=" +
                                 std::to_string(file.header.shots));
    return file;
}

void write_decode_file(std::ostream& out, const DecodeFileHeader& header,
                       const std::vector<DecodedShot>& shots) {
    out << "# experiment=" << experiment_name(header.kind) << "\n";
    out << "# mode=" << decode_mode_name(header.mode) << "\n";
    out << "# shots=" << header.shots << "\n";
    out << "# accepted=" << header.accepted << "\n";
    char rate[32];
    std::snprintf(rate, sizeof rate, "%.6f",
                  header.shots ? double(header.accepted) / header.shots : 0.0);
    out << "# acceptance_rate=" << rate << "\n";
    for (size_t i = 0; i < shots.size(); ++i) {
        const DecodedShot& d = shots[i];
        out << i;
        if (!d.accepted) {
            out << " reject " << reject_reason_name(d.reason) << "\n";
        } else if (d.xz) {
            out << " accept " << (d.xz->first > 0 ? "+1" : "-1") << " "
                << (d.xz->second > 0 ? "+1" : "-1") << " " << (d.singlet ? 1 : 0) << "\n";
        } else {
            out << " accept " << (*d.logical > 0 ? "+1" : "-1") << "\n";
        }
    }
}

DecodeFile read_decode_file(std::istream& in) {
    DecodeFile file;
    int lineno = 0;
    std::string pending;
    auto kv = read_header(in, lineno, pending);
    file.header.kind = experiment_from_name(require(kv, "experiment"));
    file.header.mode = decode_mode_from_name(require(kv, "mode"));
    file.header.shots = std::stoi(require(kv, "shots"));
    file.header.accepted = std::stoi(require(kv, "accepted"));

    auto parse_row = [&](const std::string& line, int at) {
        std::istringstream ls(line);
        size_t idx;
        std::string status;
        if (!(ls >> idx >> status))
            throw std::runtime_error("line " + std::to_string(at) + ": malformed decode row");
        DecodedShot d;
        if (status == "reject") {
            std::string reason;
            ls >> reason;
            d.accepted = false;
            d.reason = RejectReason::Flag;
            for (RejectReason r : {RejectReason::Flag, RejectReason::ZStabilizer,
                                   RejectReason::XSyndrome, RejectReason::SteaneSyndrome})
                if (reason == reject_reason_name(r)) d.reason = r;
        } else if (status == "accept") {
            d.accepted = true;
            if (file.header.kind == ExperimentKind::TwoCopy) {
                int x, z, s;
                if (!(ls >> x >> z >> s))
                    throw std::runtime_error("line " + std::to_string(at) + ": malformed row");
                d.xz = {x, z};
                d.singlet = s != 0;
            } else {
                int v;
                if (!(ls >> v))
                    throw std::runtime_error("line " + std::to_string(at) + ": malformed row");
                d.logical = v;
            }
        } else {
            throw std::runtime_error("line " + std::to_string(at) + ": unknown status " + status);
        }
        file.shots.push_back(d);
    };
    if (!pending.empty()) parse_row(pending, lineno);
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        parse_row(line, lineno);
    }
    if (static_cast<int>(file.shots.size()) != file.header.shots)
        throw std::runtime_error("decode row count does not match header");
    return file;
}

std::string render_report_text(const CertificationReport& r) {
    std::ostringstream out;
    out << "mode: " << (r.mode == DecodeMode::EC ? "error-correction" : "post-selection") << "\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "F lower bound    %.5f (sem %.2e)   acceptance %.2f%%\n",
                  r.fid.bound, r.fid.sem, 100.0 * r.avg_single_copy_rate);
    out << buf;
    std::snprintf(buf, sizeof buf, "epsilon          %.3e (sem %.3e)   acceptance %.2f%%\n",
                  r.eps.p_f, r.eps.sem, 100.0 * r.two_copy.acceptance_rate());
    out << buf;
    std::snprintf(buf, sizeof buf, "delta term       %.3e (sem %.3e)\n", r.fid.delta_term,
                  r.fid.delta_term_sem);
    out << buf;
    const BasisSummary* rows[3] = {&r.x, &r.y, &r.z};
    const char* names[3] = {"<X>", "<Y>", "<Z>"};
    for (int i = 0; i < 3; ++i) {
        std::snprintf(buf, sizeof buf, "%s              %+.4f (sem %.4f)   acceptance %.2f%%\n",
                      names[i], rows[i]->mean, rows[i]->sem, 100.0 * rows[i]->acceptance_rate());
        out << buf;
    }
    return out.str();
}

std::string render_report_csv(const CertificationReport& r) {
    std::ostringstream out;
    out << "quantity,value,sem,acceptance_rate\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "fidelity_lower_bound,%.9g,%.9g,%.9g\n", r.fid.bound, r.fid.sem,
                  r.avg_single_copy_rate);
    out << buf;
    std::snprintf(buf, sizeof buf, "epsilon,%.9g,%.9g,%.9g\n", r.eps.p_f, r.eps.sem,
                  r.two_copy.acceptance_rate());
    out << buf;
    std::snprintf(buf, sizeof buf, "delta_term,%.9g,%.9g,\n", r.fid.delta_term,
                  r.fid.delta_term_sem);
    out << buf;
    const BasisSummary* rows[3] = {&r.x, &r.y, &r.z};
    const char* names[3] = {"mean_x", "mean_y", "mean_z"};
    for (int i = 0; i < 3; ++i) {
        std::snprintf(buf, sizeof buf, "%s,%.9g,%.9g,%.9g\n", names[i], rows[i]->mean,
                      rows[i]->sem, rows[i]->acceptance_rate());
        out << buf;
    }
    return out.str();
}

}  // namespace switchsim
