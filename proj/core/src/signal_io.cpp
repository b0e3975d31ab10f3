#include "histofeat/signal_io.hpp"

#include "histofeat/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace histofeat {

namespace {

constexpr std::uint64_t k_f64le_magic = 0x31544648ull; // "HFT1" + four zero bytes, little endian

std::uint64_t load_le_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

void store_le_u64(std::uint64_t v, unsigned char* p) {
    for (int i = 0; i < 8; ++i) {
        p[i] = static_cast<unsigned char>(v & 0xff);
        v >>= 8;
    }
}

double bits_to_double(std::uint64_t bits) {
    double d;
    std::memcpy(&d, &bits, sizeof d);
    return d;
}

std::uint64_t double_to_bits(double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    return bits;
}

// Trims ASCII whitespace from both ends.
std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double_strict(std::string_view token, const std::string& path, std::size_t line_no) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw IoError(path + ":" + std::to_string(line_no) + ": not a number: '" + std::string(token) + "'");
    }
    return value;
}

std::vector<double> read_csv_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        double v = parse_double_strict(body, path, line_no);
        if (!std::isfinite(v)) {
            throw IoError(path + ":" + std::to_string(line_no) + ": non-finite sample");
        }
        values.push_back(v);
    }
    if (in.bad()) throw IoError("read failure on " + path);
    return values;
}

std::vector<double> read_f64le_values(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);

    unsigned char header[16];
    in.read(reinterpret_cast<char*>(header), sizeof header);
    if (in.gcount() != static_cast<std::streamsize>(sizeof header)) {
        throw IoError(path + ": truncated header (need 16 bytes, got " + std::to_string(in.gcount()) + ")");
    }
    std::uint64_t magic = load_le_u64(header);
    if (magic != k_f64le_magic) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(magic));
        throw IoError(path + ": bad magic " + buf + " at offset 0");
    }
    std::uint64_t count = load_le_u64(header + 8);

    std::vector<double> values;
    values.reserve(count);
    unsigned char rec[8];
    for (std::uint64_t i = 0; i < count; ++i) {
        in.read(reinterpret_cast<char*>(rec), sizeof rec);
        if (in.gcount() != static_cast<std::streamsize>(sizeof rec)) {
            std::uint64_t offset = 16 + i * 8;
            throw IoError(path + ": truncated at offset " + std::to_string(offset) + " (declared " +
                          std::to_string(count) + " samples, got " + std::to_string(i) + ")");
        }
        double v = bits_to_double(load_le_u64(rec));
        if (!std::isfinite(v)) {
            std::uint64_t offset = 16 + i * 8;
            throw IoError(path + ": non-finite sample at offset " + std::to_string(offset));
        }
        values.push_back(v);
    }
    // Trailing bytes mean the declared count disagrees with the payload.
    in.read(reinterpret_cast<char*>(rec), 1);
    if (in.gcount() != 0) {
        throw IoError(path + ": trailing data after " + std::to_string(count) +
                      " declared samples (offset " + std::to_string(16 + count * 8) + ")");
    }
    return values;
}

void format_double(char (&buf)[64], double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
}

} // namespace

SignalFormat guess_signal_format(const std::string& path) {
    auto ends_with = [&](const char* suffix) {
        std::size_t n = std::strlen(suffix);
        return path.size() >= n && path.compare(path.size() - n, n, suffix) == 0;
    };
    if (ends_with(".f64le") || ends_with(".bin")) return SignalFormat::f64le;
    return SignalFormat::csv;
}

SignalSeries read_signal(const std::string& path, SignalFormat format, double sample_rate_hz,
                         const std::string& state_label, const std::string& source_id) {
    SignalSeries series;
    series.values = format == SignalFormat::csv ? read_csv_values(path) : read_f64le_values(path);
    if (series.values.empty()) throw IoError(path + ": empty signal");
    series.sample_rate_hz = sample_rate_hz;
    series.state_label = state_label;
    series.source_id = source_id.empty() ? path : source_id;
    return series;
}

void write_signal(const SignalSeries& series, const std::string& path, SignalFormat format) {
    if (format == SignalFormat::csv) {
        std::ofstream out(path);
        if (!out) throw IoError("cannot open " + path + " for writing");
        char buf[64];
        for (double v : series.values) {
            format_double(buf, v);
            out << buf << '\n';
        }
        if (!out) throw IoError("write failure on " + path);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    unsigned char header[16];
    store_le_u64(k_f64le_magic, header);
    store_le_u64(static_cast<std::uint64_t>(series.values.size()), header + 8);
    out.write(reinterpret_cast<const char*>(header), sizeof header);
    unsigned char rec[8];
    for (double v : series.values) {
        store_le_u64(double_to_bits(v), rec);
        out.write(reinterpret_cast<const char*>(rec), sizeof rec);
    }
    if (!out) throw IoError("write failure on " + path);
}

void write_feature_csv(const std::vector<std::vector<double>>& rows,
                       const std::vector<std::string>& labels, std::size_t cols,
                       const std::string& path) {
    if (rows.size() != labels.size()) {
        throw DataError("write_feature_csv: " + std::to_string(rows.size()) + " rows but " +
                        std::to_string(labels.size()) + " labels");
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (std::size_t k = 0; k < cols; ++k) {
        if (k) out << ',';
        out << 'f' << (k + 1);
    }
    out << ",label\n";
    char buf[64];
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw DataError("write_feature_csv: row " + std::to_string(r) + " has " +
                            std::to_string(rows[r].size()) + " values, expected " + std::to_string(cols));
        }
        for (std::size_t k = 0; k < cols; ++k) {
            if (k) out << ',';
            format_double(buf, rows[r][k]);
            out << buf;
        }
        out << ',' << labels[r] << '\n';
    }
    if (!out) throw IoError("write failure on " + path);
}

void write_feature_matrix(const FeatureMatrix& matrix, const std::string& path) {
    std::vector<std::string> labels(matrix.rows(), matrix.state_label);
    write_feature_csv(matrix.entries, labels, matrix.cols(), path);
}

FeatureCsv read_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": missing header");

    auto split = [](std::string_view body) {
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= body.size(); ++i) {
            if (i == body.size() || body[i] == ',') {
                fields.push_back(trim(body.substr(start, i - start)));
                start = i + 1;
            }
        }
        return fields;
    };

    auto header = split(trim(line));
    if (header.size() < 2 || header.back() != "label") {
        throw IoError(path + ":1: expected header 'f1,...,fm,label'");
    }
    std::size_t cols = header.size() - 1;
    for (std::size_t k = 0; k < cols; ++k) {
        std::string want = "f" + std::to_string(k + 1);
        if (header[k] != want) {
            throw IoError(path + ":1: column " + std::to_string(k + 1) + " named '" +
                          std::string(header[k]) + "', expected '" + want + "'");
        }
    }

    FeatureCsv csv;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = trim(line);
        if (body.empty()) continue;
        auto fields = split(body);
        if (fields.size() != cols + 1) {
            throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(cols + 1) + " fields, got " + std::to_string(fields.size()));
        }
        std::vector<double> row(cols);
        for (std::size_t k = 0; k < cols; ++k) {
            row[k] = parse_double_strict(fields[k], path, line_no);
        }
        csv.rows.push_back(std::move(row));
        csv.labels.emplace_back(fields.back());
    }
    if (in.bad()) throw IoError("read failure on " + path);
    return csv;
}

void write_report(const EvalReport& report, const std::string& path) {
    nlohmann::ordered_json j;
    j["per_class_tpr"] = report.per_class_tpr;
    j["per_class_fpr"] = report.per_class_fpr;
    j["fold_accuracies"] = report.fold_accuracies;
    j["acc_mean"] = report.acc_mean;
    j["acc_sd"] = report.acc_sd;
    j["classifier"] = report.classifier;
    j["k"] = report.k;
    j["seed"] = report.seed;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failure on " + path);
}

void write_projection_csv(const std::vector<double>& xs, const std::vector<double>& ys,
                          const std::vector<std::string>& labels, const std::string& path) {
    if (xs.size() != ys.size() || xs.size() != labels.size()) {
        throw DataError("write_projection_csv: mismatched column lengths");
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "x,y,label\n";
    char buf[64];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        format_double(buf, xs[i]);
        out << buf << ',';
        format_double(buf, ys[i]);
        out << buf << ',' << labels[i] << '\n';
    }
    if (!out) throw IoError("write failure on " + path);
}

} // namespace histofeat
