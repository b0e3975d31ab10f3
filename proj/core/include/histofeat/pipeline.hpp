#pragma once

#include "histofeat/classifier.hpp"
#include "histofeat/evaluation.hpp"
#include "histofeat/feature_design.hpp"
#include "histofeat/report.hpp"
#include "histofeat/signal_io.hpp"
#include "histofeat/synth.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace histofeat {

// Whether a state's recordings are concatenated before bin design (pool) or
// processed one file at a time and stacked (per-recording).
enum class Pooling { pool, per_recording };

// Feature family fed to the classifier: the designed histogram features or
// one of the comparison baselines.
enum class Method { proposed, td, fd, raw_segment };

std::string method_name(Method method);
Method method_from_name(const std::string& name);

struct DatasetEntry {
    std::string state_label;
    std::vector<std::string> files;
    Pooling pooling = Pooling::pool;
};

struct PipelineConfig {
    std::vector<DatasetEntry> dataset;
    Method method = Method::proposed;
    ClassifierConfig classifier;
    std::size_t k = 5;
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    FeatureOptions feature_options;
    std::size_t segment_len = 1024;
    std::size_t segment_stride = 1024;
    std::size_t fd_bands = 16;
    SignalFormat synth_format = SignalFormat::csv;
};

// Parses the JSON config document; unknown or mistyped keys are collected and
// reported together in one ConfigError.
PipelineConfig load_pipeline_config(const std::string& path);

// Semantic validation; every violated key is listed in the thrown
// ConfigError. Dataset entries are only required when require_dataset is set
// (the synth command runs without them).
void validate_config(const PipelineConfig& cfg, bool require_dataset);

// Reads every configured recording and produces the labeled feature dataset
// for cfg.method.
LabeledDataset build_dataset(const PipelineConfig& cfg);

// extract: per-state feature CSVs plus the harmonized dataset CSV.
void run_extract(const PipelineConfig& cfg);

// evaluate: cross-validated report written as report.json and a one-row
// plain-text table (report.txt); the report is also returned.
EvalReport run_evaluate(const PipelineConfig& cfg);

// project: 2D principal-component scatter written as projection.csv.
void run_project(const PipelineConfig& cfg);

// synth: one synthetic recording per default-suite state, written in
// cfg.synth_format, seeded per state from cfg.seed.
void run_synth(const PipelineConfig& cfg);

// The pipeline stage to dispatch to.
enum class PipelineCommand { extract, evaluate, project, synth };

std::string pipeline_command_name(PipelineCommand cmd);
PipelineCommand pipeline_command_from_name(const std::string& name);

// Single entry point used by the command-line driver.
void run_pipeline(PipelineCommand cmd, const PipelineConfig& cfg);

} // namespace histofeat
