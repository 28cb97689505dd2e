#include <doctest.h>

#include <sstream>

#include "switchsim/builders.hpp"
#include "switchsim/engine.hpp"
#include "switchsim/shotfile.hpp"

using namespace switchsim;

TEST_CASE("shot file round trip") {
    auto circuit = build_experiment(ExperimentKind::SingleCopyX, true);
    auto records = run_batch(circuit, NoiseModel::defaults(), 25, 5, 2);
    ShotFileHeader header;
    header.kind = ExperimentKind::SingleCopyX;
    header.reuse = true;
    header.seed = 5;
    header.shots = 25;
    header.noise = NoiseModel::defaults();

    std::ostringstream out;
    write_shot_file(out, header, records);

    std::istringstream in(out.str());
    auto file = read_shot_file(in);
    CHECK(file.header.kind == ExperimentKind::SingleCopyX);
    CHECK(file.header.reuse);
    CHECK(file.header.seed == 5);
    CHECK(file.header.noise.p2 == NoiseModel::defaults().p2);
    REQUIRE(file.records.size() == records.size());
    for (size_t i = 0; i < records.size(); ++i) CHECK(file.records[i].bits == records[i].bits);

    // byte-identical re-serialization
    std::ostringstream again;
    write_shot_file(again, file.header, file.records);
    CHECK(again.str() == out.str());
}

TEST_CASE("malformed shot lines are reported with their line number") {
    std::string text =
        "# experiment=single-copy-x\n# layout=v1\n# reuse=0\n# seed=1\n# shots=2\n"
        "# noise.p1=0\n# noise.p2=0\n# noise.p_meas1=0\n# noise.p_meas0=0\n"
        "# noise.p_idle=0\n# noise.p_crosstalk=0\n"
        "# noise.gate=0\n# noise.readout=0\n# noise.idle=0\n# noise.crosstalk=0\n";
    std::string good(31, '0');
    std::string bad(30, '0');
    std::istringstream in(text + good + "\n" + bad + "\n");
    try {
        read_shot_file(in);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 17") != std::string::npos);
    }
}

TEST_CASE("decode file round trip") {
    std::vector<DecodedShot> shots;
    DecodedShot acc;
    acc.accepted = true;
    acc.logical = -1;
    shots.push_back(acc);
    DecodedShot rej;
    rej.accepted = false;
    rej.reason = RejectReason::XSyndrome;
    shots.push_back(rej);

    DecodeFileHeader header;
    header.kind = ExperimentKind::SingleCopyY;
    header.mode = DecodeMode::PS;
    header.shots = 2;
    header.accepted = 1;

    std::ostringstream out;
    write_decode_file(out, header, shots);
    std::istringstream in(out.str());
    auto file = read_decode_file(in);
    CHECK(file.header.mode == DecodeMode::PS);
    REQUIRE(file.shots.size() == 2);
    CHECK(file.shots[0].accepted);
    CHECK(*file.shots[0].logical == -1);
    CHECK_FALSE(file.shots[1].accepted);
    CHECK(file.shots[1].reason == RejectReason::XSyndrome);
}

TEST_CASE("two-copy decode file rows carry both logicals") {
    std::vector<DecodedShot> shots;
    DecodedShot d;
    d.accepted = true;
    d.xz = {-1, -1};
    d.singlet = true;
    shots.push_back(d);
    DecodeFileHeader header;
    header.kind = ExperimentKind::TwoCopy;
    header.mode = DecodeMode::EC;
    header.shots = 1;
    header.accepted = 1;
    std::ostringstream out;
    write_decode_file(out, header, shots);
    std::istringstream in(out.str());
    auto file = read_decode_file(in);
    CHECK(file.shots[0].singlet);
    CHECK(file.shots[0].xz == std::pair<int, int>{-1, -1});
}

TEST_CASE("report rendering") {
    BasisSummary x{10000, 8356, 0.6993, 0.0078};
    BasisSummary y{10000, 8124, 0.7193, 0.0077};
    BasisSummary z{10000, 8296, 0.0000, 0.0109};
    TwoCopySummary two{10000, 6573, 3};
    auto report = summarize(x, y, z, two, DecodeMode::EC);

    auto text = render_report_text(report);
    CHECK(text.find("0.99949") != std::string::npos);
    CHECK(text.find("error-correction") != std::string::npos);

    auto csv = render_report_csv(report);
    CHECK(csv.rfind("quantity,value,sem,acceptance_rate\n", 0) == 0);
    CHECK(csv.find("fidelity_lower_bound,0.99949") != std::string::npos);
    CHECK(csv.find("epsilon,") != std::string::npos);
    CHECK(csv.find("mean_y,0.7193,") != std::string::npos);
}
