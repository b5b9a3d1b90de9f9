#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "social_gym/experiment.hpp"
#include "social_gym/stats.hpp"

namespace social_gym {

struct FigureBox {
  std::string label;
  std::vector<double> values;
};

// Vertical box plot of question counts. The figure embeds a JSON
// <metadata> block with each box's label, n, quartiles, whiskers and
// outliers so tests and scripts need not scrape geometry.
std::string render_boxplot_svg(std::string_view title, const std::vector<FigureBox>& boxes);

// Box lists for the three standard figures, in canonical strategy order with
// EXPERT last when present.
std::vector<FigureBox> dialogic_boxes(const std::vector<ConditionResult>& results);
std::vector<FigureBox> all_condition_boxes(const std::vector<ConditionResult>& results);
std::vector<FigureBox> grouped_boxes(const std::vector<ConditionResult>& results);

// Per-condition table: strategy,framing,control,n,mean,median,q1,q3,min,max,accuracy.
std::string summary_csv(const std::vector<ConditionResult>& results);
std::string grouped_summary_csv(const std::vector<ConditionResult>& results);
std::map<std::string, Summary> parse_summary_csv(std::string_view text);

// Throws Error(SummaryMismatch) unless every stored row equals the summary
// recomputed from the records, with the same set of conditions.
void verify_summary(const std::vector<ConditionResult>& results, std::string_view stored_csv);

// Reads records/<label>.jsonl files (either `dir/records` or `dir` itself),
// in canonical order. Throws Error(EmptyRecords) if none are found.
std::vector<ConditionResult> load_results(const std::filesystem::path& dir);

// summary.csv, grouped_summary.csv, records.jsonl and the three figures.
// Returns the files written, relative to out_dir. Throws Error(Io).
std::vector<std::string> emit_report(const std::vector<ConditionResult>& results, const std::filesystem::path& out_dir);

struct ManifestInputs {
  std::string config_hash;
  std::string ontology_fingerprint;
  std::optional<std::string> cassette_fingerprint;
  std::vector<std::string> conditions;
};

// manifest.json: input fingerprints plus a SHA-256 of every output file.
// Contains no timestamps, so identical runs produce identical manifests.
void write_manifest(const std::filesystem::path& out_dir, const ManifestInputs& inputs);

// Canonical rank of a condition label (strategies in definition order, then
// EXPERT, then anything else).
int condition_rank(std::string_view label);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace social_gym
