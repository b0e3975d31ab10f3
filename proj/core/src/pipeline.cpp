#include "histofeat/pipeline.hpp"

#include "histofeat/baseline.hpp"
#include "histofeat/errors.hpp"
#include "histofeat/rng.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <unordered_map>

namespace histofeat {

namespace {

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("HISTOFEAT_LOG");
        if (!env || std::string(env) == "error") return LogLevel::error;
        std::string v(env);
        if (v == "info") return LogLevel::info;
        if (v == "debug") return LogLevel::debug;
        throw ConfigError("HISTOFEAT_LOG must be one of error, info, debug (got '" + v + "')");
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::info) std::cerr << "info: " << msg << '\n';
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::debug) std::cerr << "debug: " << msg << '\n';
}

std::string sanitize_filename(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '-' || c == '_';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? std::string("state") : out;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_output_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

// ---- config parsing ------------------------------------------------------

using nlohmann::json;

struct ProblemList {
    std::vector<std::string> items;

    void add(const std::string& p) { items.push_back(p); }

    void raise_if_any(const std::string& context) const {
        if (items.empty()) return;
        std::string msg = context + ": ";
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) msg += "; ";
            msg += items[i];
        }
        throw ConfigError(msg);
    }
};

void check_known_keys(const json& obj, std::initializer_list<const char*> known,
                      const std::string& where, ProblemList& problems) {
    for (const auto& [key, value] : obj.items()) {
        bool found = false;
        for (const char* k : known) {
            if (key == k) found = true;
        }
        if (!found) problems.add("unknown key '" + where + key + "'");
    }
}

template <typename T>
bool fetch(const json& obj, const char* key, const std::string& where, ProblemList& problems,
           T& out) {
    if (!obj.contains(key)) return false;
    try {
        out = obj.at(key).get<T>();
        return true;
    } catch (const json::exception&) {
        problems.add("key '" + where + key + "' has the wrong type");
        return false;
    }
}

void parse_classifier(const json& obj, ClassifierConfig& cfg, ProblemList& problems) {
    const std::string where = "classifier.";
    check_known_keys(obj,
                     {"kind", "hidden1", "hidden2", "learning_rate", "epochs", "batch_size",
                      "tree_count", "max_depth", "features_per_split", "svm_c", "svm_epochs",
                      "seed"},
                     where, problems);
    std::string kind;
    if (fetch(obj, "kind", where, problems, kind)) {
        try {
            cfg.kind = classifier_kind_from_name(kind);
        } catch (const ConfigError& e) {
            problems.add(e.what());
        }
    }
    fetch(obj, "hidden1", where, problems, cfg.hidden1);
    fetch(obj, "hidden2", where, problems, cfg.hidden2);
    fetch(obj, "learning_rate", where, problems, cfg.learning_rate);
    fetch(obj, "epochs", where, problems, cfg.epochs);
    fetch(obj, "batch_size", where, problems, cfg.batch_size);
    fetch(obj, "tree_count", where, problems, cfg.tree_count);
    fetch(obj, "max_depth", where, problems, cfg.max_depth);
    fetch(obj, "features_per_split", where, problems, cfg.features_per_split);
    fetch(obj, "svm_c", where, problems, cfg.svm_c);
    fetch(obj, "svm_epochs", where, problems, cfg.svm_epochs);
    fetch(obj, "seed", where, problems, cfg.seed);
}

void parse_features(const json& obj, FeatureOptions& opts, ProblemList& problems) {
    const std::string where = "features.";
    check_known_keys(obj, {"fill_strategy", "column_align", "bin_width_override"}, where,
                     problems);
    std::string v;
    if (fetch(obj, "fill_strategy", where, problems, v)) {
        if (v == "truncate") {
            opts.fill_strategy = FillStrategy::truncate;
        } else if (v == "cycle") {
            opts.fill_strategy = FillStrategy::cycle;
        } else {
            problems.add("features.fill_strategy must be 'truncate' or 'cycle' (got '" + v + "')");
        }
    }
    if (fetch(obj, "column_align", where, problems, v)) {
        if (v == "truncate_high") {
            opts.column_align = ColumnAlign::truncate_high;
        } else if (v == "subsample_even") {
            opts.column_align = ColumnAlign::subsample_even;
        } else {
            problems.add("features.column_align must be 'truncate_high' or 'subsample_even' (got '" +
                         v + "')");
        }
    }
    fetch(obj, "bin_width_override", where, problems, opts.bin_width_override);
}

void parse_dataset(const json& arr, std::vector<DatasetEntry>& dataset, ProblemList& problems) {
    if (!arr.is_array()) {
        problems.add("key 'dataset' must be an array");
        return;
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& obj = arr[i];
        const std::string where = "dataset[" + std::to_string(i) + "].";
        if (!obj.is_object()) {
            problems.add("entry 'dataset[" + std::to_string(i) + "]' must be an object");
            continue;
        }
        check_known_keys(obj, {"state", "files", "pooling"}, where, problems);
        DatasetEntry entry;
        if (!fetch(obj, "state", where, problems, entry.state_label)) {
            problems.add("key '" + where + "state' is required");
        }
        if (!fetch(obj, "files", where, problems, entry.files)) {
            problems.add("key '" + where + "files' is required");
        }
        std::string pooling;
        if (fetch(obj, "pooling", where, problems, pooling)) {
            if (pooling == "pool") {
                entry.pooling = Pooling::pool;
            } else if (pooling == "per-recording") {
                entry.pooling = Pooling::per_recording;
            } else {
                problems.add(where + "pooling must be 'pool' or 'per-recording' (got '" + pooling +
                             "')");
            }
        }
        dataset.push_back(std::move(entry));
    }
}

} // namespace

std::string method_name(Method method) {
    switch (method) {
        case Method::proposed: return "proposed";
        case Method::td: return "td";
        case Method::fd: return "fd";
        case Method::raw_segment: return "raw-segment";
    }
    return "proposed";
}

Method method_from_name(const std::string& name) {
    if (name == "proposed") return Method::proposed;
    if (name == "td") return Method::td;
    if (name == "fd") return Method::fd;
    if (name == "raw-segment") return Method::raw_segment;
    throw ConfigError("unknown method '" + name +
                      "' (expected proposed, td, fd, or raw-segment)");
}

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError(path + ": config must be a JSON object");

    PipelineConfig cfg;
    ProblemList problems;
    check_known_keys(j,
                     {"dataset", "method", "classifier", "k", "seed", "output_dir", "features",
                      "baseline", "synth_format"},
                     "", problems);

    if (j.contains("dataset")) parse_dataset(j["dataset"], cfg.dataset, problems);

    std::string text;
    if (fetch(j, "method", "", problems, text)) {
        try {
            cfg.method = method_from_name(text);
        } catch (const ConfigError& e) {
            problems.add(e.what());
        }
    }
    if (j.contains("classifier")) {
        if (j["classifier"].is_object()) {
            parse_classifier(j["classifier"], cfg.classifier, problems);
        } else {
            problems.add("key 'classifier' must be an object");
        }
    }
    fetch(j, "k", "", problems, cfg.k);
    fetch(j, "seed", "", problems, cfg.seed);
    fetch(j, "output_dir", "", problems, cfg.output_dir);
    if (j.contains("features")) {
        if (j["features"].is_object()) {
            parse_features(j["features"], cfg.feature_options, problems);
        } else {
            problems.add("key 'features' must be an object");
        }
    }
    if (j.contains("baseline")) {
        const json& b = j["baseline"];
        if (b.is_object()) {
            check_known_keys(b, {"segment_len", "segment_stride", "fd_bands"}, "baseline.",
                             problems);
            fetch(b, "segment_len", "baseline.", problems, cfg.segment_len);
            fetch(b, "segment_stride", "baseline.", problems, cfg.segment_stride);
            fetch(b, "fd_bands", "baseline.", problems, cfg.fd_bands);
        } else {
            problems.add("key 'baseline' must be an object");
        }
    }
    if (fetch(j, "synth_format", "", problems, text)) {
        if (text == "csv") {
            cfg.synth_format = SignalFormat::csv;
        } else if (text == "f64le") {
            cfg.synth_format = SignalFormat::f64le;
        } else {
            problems.add("synth_format must be 'csv' or 'f64le' (got '" + text + "')");
        }
    }

    problems.raise_if_any(path);
    return cfg;
}

void validate_config(const PipelineConfig& cfg, bool require_dataset) {
    ProblemList problems;

    if (require_dataset) {
        std::unordered_map<std::string, int> seen;
        for (const DatasetEntry& entry : cfg.dataset) {
            if (entry.state_label.empty()) problems.add("dataset state labels must be non-empty");
            if (entry.files.empty()) {
                problems.add("dataset state '" + entry.state_label + "' lists no files");
            }
            ++seen[entry.state_label];
        }
        if (seen.size() < 2) problems.add("dataset must cover at least 2 states");
    }
    if (cfg.k < 2) problems.add("k must be at least 2");
    if (cfg.output_dir.empty()) problems.add("output_dir must be non-empty");
    if (cfg.feature_options.bin_width_override < 0.0) {
        problems.add("features.bin_width_override must be >= 0");
    }
    if (cfg.segment_len == 0) problems.add("baseline.segment_len must be positive");
    if (cfg.segment_stride == 0) problems.add("baseline.segment_stride must be positive");
    if (cfg.fd_bands == 0) problems.add("baseline.fd_bands must be positive");
    if (cfg.method == Method::td && cfg.segment_len < 2) {
        problems.add("baseline.segment_len must be at least 2 for method td");
    }
    if (cfg.method == Method::fd && cfg.segment_len < 2 * cfg.fd_bands) {
        problems.add("baseline.segment_len must be at least 2*fd_bands for method fd");
    }
    if (cfg.classifier.kind == ClassifierKind::nn) {
        if (cfg.classifier.hidden1 == 0 || cfg.classifier.hidden2 == 0) {
            problems.add("classifier hidden sizes must be positive");
        }
        if (!(cfg.classifier.learning_rate > 0.0)) {
            problems.add("classifier.learning_rate must be positive");
        }
        if (cfg.classifier.epochs == 0) problems.add("classifier.epochs must be positive");
        if (cfg.classifier.batch_size == 0) problems.add("classifier.batch_size must be positive");
    }
    if (cfg.classifier.kind == ClassifierKind::rf && cfg.classifier.tree_count == 0) {
        problems.add("classifier.tree_count must be positive");
    }
    if (cfg.classifier.kind == ClassifierKind::svm) {
        if (!(cfg.classifier.svm_c > 0.0)) problems.add("classifier.svm_c must be positive");
        if (cfg.classifier.svm_epochs == 0) problems.add("classifier.svm_epochs must be positive");
    }

    problems.raise_if_any("config validation failed");
}

namespace {

SignalSeries read_labeled_signal(const std::string& path, const std::string& state_label) {
    return read_signal(path, guess_signal_format(path), 1.0, state_label);
}

FeatureMatrix design_for_state(const SignalSeries& series, const FeatureOptions& options) {
    FeatureMatrix fm = design_features(series, options);
    log_debug("state '" + series.state_label + "' (" + series.source_id + "): " +
              std::to_string(fm.rows()) + " rows x " + std::to_string(fm.cols()) + " bins, width " +
              std::to_string(fm.bin_spec.width));
    return fm;
}

LabeledDataset build_proposed(const PipelineConfig& cfg) {
    std::vector<FeatureMatrix> matrices;
    for (const DatasetEntry& entry : cfg.dataset) {
        if (entry.pooling == Pooling::pool) {
            SignalSeries pooled;
            pooled.state_label = entry.state_label;
            pooled.source_id = "pooled:" + entry.state_label;
            for (const std::string& file : entry.files) {
                SignalSeries s = read_labeled_signal(file, entry.state_label);
                pooled.values.insert(pooled.values.end(), s.values.begin(), s.values.end());
                pooled.sample_rate_hz = s.sample_rate_hz;
            }
            matrices.push_back(design_for_state(pooled, cfg.feature_options));
        } else {
            for (const std::string& file : entry.files) {
                matrices.push_back(
                    design_for_state(read_labeled_signal(file, entry.state_label),
                                     cfg.feature_options));
            }
        }
    }
    return harmonize_dataset(matrices, cfg.feature_options.column_align);
}

// Baselines always window each recording separately; windows never straddle
// file boundaries, so the pooling switch has no effect here.
LabeledDataset build_baseline(const PipelineConfig& cfg) {
    LabeledDataset ds;
    switch (cfg.method) {
        case Method::td: ds.m_star = kTimeDomainFeatureCount; break;
        case Method::fd: ds.m_star = cfg.fd_bands; break;
        case Method::raw_segment: ds.m_star = cfg.segment_len; break;
        case Method::proposed: break;
    }

    std::unordered_map<std::string, int> label_of;
    for (const DatasetEntry& entry : cfg.dataset) {
        int label;
        auto it = label_of.find(entry.state_label);
        if (it == label_of.end()) {
            label = static_cast<int>(ds.label_names.size());
            label_of.emplace(entry.state_label, label);
            ds.label_names.push_back(entry.state_label);
        } else {
            label = it->second;
        }

        for (const std::string& file : entry.files) {
            SignalSeries s = read_labeled_signal(file, entry.state_label);
            if (s.values.size() < cfg.segment_len) {
                throw DataError("state '" + entry.state_label + "': " + file + " holds " +
                                std::to_string(s.values.size()) +
                                " samples, shorter than segment_len " +
                                std::to_string(cfg.segment_len));
            }
            auto windows = segment(s.values, cfg.segment_len, cfg.segment_stride);
            for (const auto& window : windows) {
                switch (cfg.method) {
                    case Method::td: ds.features.push_back(td_features(window)); break;
                    case Method::fd:
                        ds.features.push_back(fd_features(window, cfg.fd_bands));
                        break;
                    case Method::raw_segment:
                        ds.features.emplace_back(window.begin(), window.end());
                        break;
                    case Method::proposed: break;
                }
                ds.labels.push_back(label);
            }
            log_debug("state '" + entry.state_label + "' (" + file + "): " +
                      std::to_string(windows.size()) + " windows");
        }
    }
    return ds;
}

} // namespace

LabeledDataset build_dataset(const PipelineConfig& cfg) {
    log_info("building " + method_name(cfg.method) + " features for " +
             std::to_string(cfg.dataset.size()) + " dataset entries");
    LabeledDataset ds =
        cfg.method == Method::proposed ? build_proposed(cfg) : build_baseline(cfg);
    log_info("dataset: " + std::to_string(ds.size()) + " rows x " + std::to_string(ds.m_star) +
             " features, " + std::to_string(ds.num_classes()) + " classes");
    return ds;
}

void run_extract(const PipelineConfig& cfg) {
    LabeledDataset ds = build_dataset(cfg);
    ensure_output_dir(cfg.output_dir);

    std::vector<std::string> row_labels;
    row_labels.reserve(ds.size());
    for (int label : ds.labels) row_labels.push_back(ds.label_names[static_cast<std::size_t>(label)]);

    for (std::size_t c = 0; c < ds.label_names.size(); ++c) {
        std::vector<std::vector<double>> rows;
        std::vector<std::string> labels;
        for (std::size_t r = 0; r < ds.size(); ++r) {
            if (ds.labels[r] == static_cast<int>(c)) {
                rows.push_back(ds.features[r]);
                labels.push_back(row_labels[r]);
            }
        }
        std::string path =
            join_path(cfg.output_dir, "features_" + sanitize_filename(ds.label_names[c]) + ".csv");
        write_feature_csv(rows, labels, ds.m_star, path);
        log_info("wrote " + path + " (" + std::to_string(rows.size()) + " rows)");
    }

    std::string dataset_path = join_path(cfg.output_dir, "dataset.csv");
    write_feature_csv(ds.features, row_labels, ds.m_star, dataset_path);
    log_info("wrote " + dataset_path);
}

EvalReport run_evaluate(const PipelineConfig& cfg) {
    LabeledDataset ds = build_dataset(cfg);
    log_info("cross-validating " + classifier_kind_name(cfg.classifier.kind) + " with k=" +
             std::to_string(cfg.k));
    EvalReport report = cross_validate(ds, cfg.classifier, cfg.k, cfg.seed);
    ensure_output_dir(cfg.output_dir);

    std::string json_path = join_path(cfg.output_dir, "report.json");
    write_report(report, json_path);

    double macro_tpr = 0.0, macro_fpr = 0.0;
    for (double v : report.per_class_tpr) macro_tpr += v;
    for (double v : report.per_class_fpr) macro_fpr += v;
    macro_tpr /= static_cast<double>(report.per_class_tpr.size());
    macro_fpr /= static_cast<double>(report.per_class_fpr.size());

    char row[160];
    std::snprintf(row, sizeof row, "%-10s %.4f/%.4f/%.2f \xc2\xb1 %.2f", report.classifier.c_str(),
                  macro_tpr, macro_fpr, report.acc_mean, report.acc_sd);
    std::string txt_path = join_path(cfg.output_dir, "report.txt");
    std::ofstream out(txt_path);
    if (!out) throw IoError("cannot open " + txt_path + " for writing");
    out << "classifier TPR/FPR/ACC \xc2\xb1 SD\n" << row << '\n';
    if (!out) throw IoError("write failure on " + txt_path);

    log_info("wrote " + json_path + " and " + txt_path);
    return report;
}

void run_project(const PipelineConfig& cfg) {
    LabeledDataset ds = build_dataset(cfg);
    Projection2D proj = pca_project_2d(ds);
    ensure_output_dir(cfg.output_dir);
    std::string path = join_path(cfg.output_dir, "projection.csv");
    write_projection_csv(proj.x, proj.y, proj.labels, path);
    log_info("wrote " + path);
}

void run_synth(const PipelineConfig& cfg) {
    ensure_output_dir(cfg.output_dir);
    const std::vector<FaultSpec> suite = default_fault_suite();
    const char* ext = cfg.synth_format == SignalFormat::csv ? ".csv" : ".f64le";
    for (std::size_t i = 0; i < suite.size(); ++i) {
        SignalSeries series = gen_bearing_state(suite[i], derive_seed(cfg.seed, i));
        std::string path =
            join_path(cfg.output_dir, sanitize_filename(series.state_label) + ext);
        write_signal(series, path, cfg.synth_format);
        log_info("wrote " + path + " (" + std::to_string(series.values.size()) + " samples)");
    }
}

std::string pipeline_command_name(PipelineCommand cmd) {
    switch (cmd) {
        case PipelineCommand::extract: return "extract";
        case PipelineCommand::evaluate: return "evaluate";
        case PipelineCommand::project: return "project";
        case PipelineCommand::synth: return "synth";
    }
    return "extract";
}

PipelineCommand pipeline_command_from_name(const std::string& name) {
    if (name == "extract") return PipelineCommand::extract;
    if (name == "evaluate") return PipelineCommand::evaluate;
    if (name == "project") return PipelineCommand::project;
    if (name == "synth") return PipelineCommand::synth;
    throw ConfigError("unknown command '" + name + "'");
}

void run_pipeline(PipelineCommand cmd, const PipelineConfig& cfg) {
    switch (cmd) {
        case PipelineCommand::extract: run_extract(cfg); return;
        case PipelineCommand::evaluate: (void)run_evaluate(cfg); return;
        case PipelineCommand::project: run_project(cfg); return;
        case PipelineCommand::synth: run_synth(cfg); return;
    }
}

} // namespace histofeat
