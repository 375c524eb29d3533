#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rankfreq/corpus.hpp"
#include "rankfreq/fitting.hpp"
#include "rankfreq/goodness.hpp"
#include "rankfreq/hapax.hpp"
#include "rankfreq/model.hpp"

namespace rankfreq {

struct AnalysisOptions {
  Mode mode = Mode::character;
  Filter filter = Filter::han;
  ZipfSearchOptions zipf;
  std::size_t rb_threshold = kDefaultHapaxThreshold;
  std::size_t hapax_depth = kDefaultHapaxDepth;
  bool model_overlay = true;  // solve the beta = 2 model at the fitted c
};

struct CorpusSource {
  std::string path;
  std::uint64_t N = 0;
  std::size_t n = 0;
};

struct StageError {
  std::string stage;
  std::string message;
};

struct CurveRow {
  std::size_t rank = 0;
  double frequency = 0.0;
  std::uint64_t count = 0;
  std::optional<double> zipf_model;  // c r^-gamma
  std::optional<double> gz_model;    // c (1/r - 1/n)
  std::optional<double> model_phi;   // solved model curve
};

/// Everything one analysis produces. Optional fields that could not be
/// computed are recorded in null_reasons under the same key as in the JSON.
struct AnalysisReport {
  std::vector<CorpusSource> sources;
  Mode mode = Mode::character;
  std::optional<Filter> filter;  // absent for pre-counted input
  std::uint64_t N = 0;
  std::size_t n = 0;

  std::optional<PowerLawFit> zipf;
  std::optional<PowerLawFit> nls;
  std::optional<PowerLawFit> mle;
  std::optional<double> pre_zipf_mass;
  std::optional<double> zipf_mass;
  std::optional<double> abs_d;
  std::optional<std::size_t> r_b;
  std::optional<ExpFit> exp_fit;
  std::optional<KsResult> ks;
  std::optional<KsResult> ks_log;
  std::optional<ModelParams> model;
  std::optional<RgfParams> rgf;
  std::optional<WaringParams> waring;
  std::optional<HapaxTable> hapax;
  std::vector<CurveRow> curve;

  nlohmann::json annotations;  // echoed verbatim when not null
  std::map<std::string, std::string> null_reasons;
  std::vector<StageError> errors;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return errors.empty(); }
};

// Full pipeline on already-counted tokens. Stage failures are recorded in
// the report; nothing here throws for data-dependent failures.
AnalysisReport analyze(const TokenCounts& tokens, const AnalysisOptions& options,
                       std::vector<CorpusSource> sources = {});

// Reads and tokenizes one file, then analyze(). Ingest failures become a
// report with only the error filled in.
AnalysisReport analyze_file(const std::string& path, const AnalysisOptions& options);

// Tokenizes every file, mixes them and analyzes the mixture. Requires at
// least two inputs.
AnalysisReport analyze_mix(const std::vector<std::string>& paths,
                           const AnalysisOptions& options);

TokenCounts read_and_tokenize(const std::string& path, Mode mode, Filter filter);

nlohmann::json to_json(const AnalysisReport& report);

// rank,frequency,count,zipf_model,gz_model,model_curve_phi
void write_curve_csv(std::ostream& os, const AnalysisReport& report);

struct ModelTable {
  ModelParams params;
  std::vector<double> phi;  // phi[r - 1]
};

ModelTable tabulate_model(const ModelParams& params);

// rank,phi,generalized_zipf
void write_model_csv(std::ostream& os, const ModelTable& table);

}  // namespace rankfreq
