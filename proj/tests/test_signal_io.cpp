#include <doctest.h>

#include "histofeat/errors.hpp"
#include "histofeat/rng.hpp"
#include "histofeat/signal_io.hpp"

#include "temp_dir.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

using namespace histofeat;

static std::vector<double> awkward_values() {
    Rng rng(31337);
    std::vector<double> xs;
    for (int i = 0; i < 500; ++i) xs.push_back(rng.next_gaussian() * 1e3);
    xs.push_back(0.0);
    xs.push_back(-0.0);
    xs.push_back(1e-308);
    xs.push_back(-2.2250738585072014e-308);
    xs.push_back(1.7976931348623157e308);
    xs.push_back(0.1);
    xs.push_back(1.0 / 3.0);
    return xs;
}

static void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
}

TEST_CASE("format guess keys off the extension") {
    CHECK(guess_signal_format("a/b/c.csv") == SignalFormat::csv);
    CHECK(guess_signal_format("a/b/c.txt") == SignalFormat::csv);
    CHECK(guess_signal_format("noext") == SignalFormat::csv);
    CHECK(guess_signal_format("a/b/c.f64le") == SignalFormat::f64le);
    CHECK(guess_signal_format("a/b/c.bin") == SignalFormat::f64le);
}

TEST_CASE("csv round trip is bit exact") {
    temp_dir dir("csvrt");
    SignalSeries s;
    s.values = awkward_values();
    s.sample_rate_hz = 12000.0;
    write_signal(s, dir.file("sig.csv"), SignalFormat::csv);
    SignalSeries back = read_signal(dir.file("sig.csv"), SignalFormat::csv, 12000.0, "lab", "src");
    REQUIRE(back.values.size() == s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        CHECK(std::memcmp(&back.values[i], &s.values[i], sizeof(double)) == 0);
    }
    CHECK(back.sample_rate_hz == 12000.0);
    CHECK(back.state_label == "lab");
    CHECK(back.source_id == "src");
}

TEST_CASE("csv reader skips comments and blank lines") {
    temp_dir dir("csvskip");
    write_text(dir.file("sig.csv"), "# header\n\n1.5\n\n# more\n-2.5\n");
    auto s = read_signal(dir.file("sig.csv"), SignalFormat::csv);
    REQUIRE(s.values.size() == 2);
    CHECK(s.values[0] == 1.5);
    CHECK(s.values[1] == -2.5);
}

TEST_CASE("csv reader names the file and line of a bad token") {
    temp_dir dir("csvbad");
    write_text(dir.file("sig.csv"), "1.0\nbogus\n3.0\n");
    try {
        (void)read_signal(dir.file("sig.csv"), SignalFormat::csv);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        std::string msg = e.what();
        CHECK(msg.find("sig.csv:2") != std::string::npos);
        CHECK(msg.find("bogus") != std::string::npos);
    }
}

TEST_CASE("csv reader rejects non-finite samples") {
    temp_dir dir("csvinf");
    write_text(dir.file("sig.csv"), "1.0\ninf\n");
    CHECK_THROWS_WITH_AS((void)read_signal(dir.file("sig.csv"), SignalFormat::csv),
                         doctest::Contains("non-finite"), IoError);
    write_text(dir.file("nan.csv"), "nan\n");
    CHECK_THROWS_AS((void)read_signal(dir.file("nan.csv"), SignalFormat::csv), IoError);
}

TEST_CASE("empty input is an error in both formats") {
    temp_dir dir("empty");
    write_text(dir.file("sig.csv"), "# nothing here\n");
    CHECK_THROWS_WITH_AS((void)read_signal(dir.file("sig.csv"), SignalFormat::csv),
                         doctest::Contains("empty"), IoError);

    SignalSeries s; // zero-record file writes fine but is rejected on read
    write_signal(s, dir.file("out.f64le"), SignalFormat::f64le);
    CHECK_THROWS_WITH_AS((void)read_signal(dir.file("out.f64le"), SignalFormat::f64le),
                         doctest::Contains("empty"), IoError);
}

TEST_CASE("missing file is an io error naming the path") {
    CHECK_THROWS_WITH_AS((void)read_signal("/nonexistent/nowhere.csv", SignalFormat::csv),
                         doctest::Contains("nowhere.csv"), IoError);
}

TEST_CASE("f64le round trip is bit exact") {
    temp_dir dir("binrt");
    SignalSeries s;
    s.values = awkward_values();
    write_signal(s, dir.file("sig.f64le"), SignalFormat::f64le);
    auto back = read_signal(dir.file("sig.f64le"), SignalFormat::f64le);
    REQUIRE(back.values.size() == s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        CHECK(std::memcmp(&back.values[i], &s.values[i], sizeof(double)) == 0);
    }
}

TEST_CASE("f64le layout: magic, little-endian count, then payload") {
    temp_dir dir("binlay");
    SignalSeries s;
    s.values = {1.0, -2.5};
    write_signal(s, dir.file("sig.f64le"), SignalFormat::f64le);

    std::ifstream in(dir.file("sig.f64le"), std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() == 16 + 2 * 8);
    CHECK(bytes[0] == 'H');
    CHECK(bytes[1] == 'F');
    CHECK(bytes[2] == 'T');
    CHECK(bytes[3] == '1');
    for (int i = 4; i < 8; ++i) CHECK(bytes[i] == 0);
    CHECK(bytes[8] == 2); // count, little endian
    for (int i = 9; i < 16; ++i) CHECK(bytes[i] == 0);

    double first = 0.0;
    std::memcpy(&first, bytes.data() + 16, sizeof first);
    CHECK(first == 1.0);
}

TEST_CASE("f64le bad magic and truncation diagnostics") {
    temp_dir dir("binerr");

    // Wrong magic.
    {
        std::ofstream out(dir.file("bad.f64le"), std::ios::binary);
        const unsigned char hdr[16] = {'X', 'X', 'X', 'X', 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0};
        out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
        double v = 1.0;
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    CHECK_THROWS_WITH_AS((void)read_signal(dir.file("bad.f64le"), SignalFormat::f64le),
                         doctest::Contains("magic"), IoError);

    // Declared 3 records, only 1 present.
    {
        std::ofstream out(dir.file("short.f64le"), std::ios::binary);
        const unsigned char hdr[16] = {'H', 'F', 'T', '1', 0, 0, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0};
        out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
        double v = 1.0;
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    try {
        (void)read_signal(dir.file("short.f64le"), SignalFormat::f64le);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        std::string msg = e.what();
        CHECK(msg.find("3") != std::string::npos);
        CHECK(msg.find("short.f64le") != std::string::npos);
    }

    // Header shorter than 16 bytes.
    {
        std::ofstream out(dir.file("stub.f64le"), std::ios::binary);
        out.write("HFT1", 4);
    }
    CHECK_THROWS_AS((void)read_signal(dir.file("stub.f64le"), SignalFormat::f64le), IoError);

    // Trailing bytes after the declared payload.
    {
        SignalSeries s;
        s.values = {1.0};
        write_signal(s, dir.file("trail.f64le"), SignalFormat::f64le);
        std::ofstream out(dir.file("trail.f64le"), std::ios::binary | std::ios::app);
        out.write("junk", 4);
    }
    CHECK_THROWS_WITH_AS((void)read_signal(dir.file("trail.f64le"), SignalFormat::f64le),
                         doctest::Contains("trailing"), IoError);
}

TEST_CASE("feature csv round trip preserves every bit and the labels") {
    temp_dir dir("featrt");
    std::vector<std::vector<double>> rows{{1.0 / 3.0, -2e-13}, {3.25, 1e200}};
    std::vector<std::string> labels{"healthy", "ball"};
    write_feature_csv(rows, labels, 2, dir.file("f.csv"));
    FeatureCsv back = read_feature_csv(dir.file("f.csv"));
    REQUIRE(back.rows.size() == 2);
    REQUIRE(back.labels.size() == 2);
    CHECK(back.labels[0] == "healthy");
    CHECK(back.labels[1] == "ball");
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            CHECK(std::memcmp(&back.rows[r][c], &rows[r][c], sizeof(double)) == 0);
        }
    }
}

TEST_CASE("feature csv header is validated on read") {
    temp_dir dir("feathdr");
    write_text(dir.file("f.csv"), "a,b,label\n1,2,x\n");
    CHECK_THROWS_AS((void)read_feature_csv(dir.file("f.csv")), IoError);
    write_text(dir.file("g.csv"), "f1,f2\n1,2\n");
    CHECK_THROWS_AS((void)read_feature_csv(dir.file("g.csv")), IoError);
}

TEST_CASE("feature csv writer rejects ragged input") {
    temp_dir dir("featrag");
    std::vector<std::vector<double>> rows{{1.0, 2.0}, {3.0}};
    std::vector<std::string> labels{"a", "b"};
    CHECK_THROWS_AS(write_feature_csv(rows, labels, 2, dir.file("f.csv")), DataError);
}

TEST_CASE("report json keeps the documented key order") {
    temp_dir dir("report");
    EvalReport rep;
    rep.per_class_tpr = {1.0, 0.5};
    rep.per_class_fpr = {0.0, 0.25};
    rep.fold_accuracies = {90.0, 100.0};
    rep.acc_mean = 95.0;
    rep.acc_sd = 5.0;
    rep.classifier = "rf";
    rep.k = 2;
    rep.seed = 9;
    write_report(rep, dir.file("report.json"));

    std::ifstream in(dir.file("report.json"));
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::string> keys{"per_class_tpr", "per_class_fpr", "fold_accuracies",
                                  "acc_mean",      "acc_sd",        "classifier",
                                  "k",             "seed"};
    std::size_t pos = 0;
    for (const auto& key : keys) {
        std::size_t at = body.find("\"" + key + "\"");
        REQUIRE(at != std::string::npos);
        CHECK(at > pos);
        pos = at;
    }
    CHECK(body.find("\"rf\"") != std::string::npos);
}

TEST_CASE("projection csv has the x,y,label header") {
    temp_dir dir("proj");
    write_projection_csv({1.0, 2.0}, {3.0, 4.0}, {"a", "b"}, dir.file("p.csv"));
    std::ifstream in(dir.file("p.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,label");
    std::getline(in, line);
    CHECK(line.find("1") != std::string::npos);
    CHECK(line.rfind(",a") == line.size() - 2);
}
