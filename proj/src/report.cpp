#include "social_gym/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "social_gym/error.hpp"
#include "social_gym/hashing.hpp"

namespace social_gym {
namespace {

using ojson = nlohmann::ordered_json;

std::vector<double> counts_of(const std::vector<TrialRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(static_cast<double>(r.question_count));
  return out;
}

std::vector<const ConditionResult*> ordered(const std::vector<ConditionResult>& results) {
  std::vector<const ConditionResult*> out;
  for (const auto& r : results) out.push_back(&r);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto* a, const auto* b) { return condition_rank(a->label) < condition_rank(b->label); });
  return out;
}

const ConditionResult* find_expert(const std::vector<ConditionResult>& results) {
  for (const auto& r : results)
    if (r.label == kExpertLabel) return &r;
  return nullptr;
}

std::string number(double value) { return fmt::format("{}", value); }

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw Error(ErrorCode::SummaryMismatch, "malformed number in summary: " + text);
  return value;
}

std::string summary_columns(const Summary& s) {
  return fmt::format("{},{},{},{},{},{},{},{}", s.n, number(s.mean), number(s.median), number(s.q1), number(s.q3),
                     number(s.min), number(s.max), number(s.accuracy));
}

}  // namespace

int condition_rank(std::string_view label) {
  for (std::size_t i = 0; i < kAllStrategies.size(); ++i) {
    if (social_gym::label(kAllStrategies[i]) == label) return static_cast<int>(i);
  }
  return label == kExpertLabel ? static_cast<int>(kAllStrategies.size()) : static_cast<int>(kAllStrategies.size()) + 1;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::Io, fmt::format("cannot create {}: {}", path.parent_path().string(), ec.message()));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string render_boxplot_svg(std::string_view title, const std::vector<FigureBox>& boxes) {
  constexpr double kLeft = 60, kRight = 20, kTop = 50, kBottom = 70, kPlotHeight = 300, kSlot = 90, kBoxWidth = 44;
  std::vector<BoxStats> stats;
  double top_value = 20;
  for (const auto& box : boxes) {
    stats.push_back(box_stats(box.values));
    top_value = std::max(top_value, *std::max_element(box.values.begin(), box.values.end()));
  }
  top_value = std::ceil(top_value / 5.0) * 5.0;
  const double width = kLeft + kRight + kSlot * static_cast<double>(std::max<std::size_t>(boxes.size(), 1));
  const double height = kTop + kPlotHeight + kBottom;
  auto y = [&](double v) { return kTop + kPlotHeight * (1.0 - v / top_value); };

  ojson meta;
  meta["title"] = std::string(title);
  meta["value"] = "question_count";
  meta["boxes"] = ojson::array();
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& s = stats[i];
    meta["boxes"].push_back({{"label", boxes[i].label},
                             {"n", s.n},
                             {"q1", s.q1},
                             {"median", s.median},
                             {"q3", s.q3},
                             {"mean", s.mean},
                             {"whisker_low", s.whisker_low},
                             {"whisker_high", s.whisker_high},
                             {"outliers", s.outliers}});
  }

  std::string svg;
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\" "
      "font-family=\"sans-serif\">\n",
      width, height, width, height);
  svg += "<metadata id=\"box-data\"><![CDATA[" + meta.dump() + "]]></metadata>\n";
  svg += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", width, height);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n", width / 2,
                     xml_escape(title));
  // Axis and gridlines.
  const double tick = top_value > 40 ? 10 : (top_value > 20 ? 5 : 2);
  for (double v = 0; v <= top_value + 1e-9; v += tick) {
    svg += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#dddddd\"/>"
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" font-size=\"11\">{}</text>\n",
        kLeft, y(v), width - kRight, y(v), kLeft - 6, y(v) + 4, v);
  }
  svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", kLeft, kTop,
                     kTop + kPlotHeight);
  svg += fmt::format(
      "<text x=\"16\" y=\"{:.1f}\" transform=\"rotate(-90 16 {:.1f})\" text-anchor=\"middle\" font-size=\"12\">"
      "Questions asked</text>\n",
      kTop + kPlotHeight / 2, kTop + kPlotHeight / 2);

  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& s = stats[i];
    const double cx = kLeft + kSlot * (static_cast<double>(i) + 0.5);
    const double x0 = cx - kBoxWidth / 2;
    const std::string fill = boxes[i].label == kExpertLabel ? "#f4c27a" : "#9cc3e6";
    svg += fmt::format("<g class=\"box\" data-label=\"{}\">\n", xml_escape(boxes[i].label));
    svg += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>"
        "<line x1=\"{0:.1f}\" y1=\"{3:.1f}\" x2=\"{0:.1f}\" y2=\"{4:.1f}\" stroke=\"black\"/>\n",
        cx, y(s.whisker_high), y(s.q3), y(s.q1), y(s.whisker_low));
    for (double w : {s.whisker_low, s.whisker_high}) {
      svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n",
                         cx - kBoxWidth / 4, y(w), cx + kBoxWidth / 4, y(w));
    }
    svg += fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\" stroke=\"black\"/>\n", x0,
        y(s.q3), kBoxWidth, std::max(y(s.q1) - y(s.q3), 0.5), fill);
    svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\" stroke-width=\"2\"/>\n",
                       x0, y(s.median), x0 + kBoxWidth, y(s.median));
    for (double o : s.outliers) {
      svg += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n", cx, y(o));
    }
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"11\">{}</text>\n"
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"10\" fill=\"#555555\">n={}</text>\n",
        cx, kTop + kPlotHeight + 18, xml_escape(boxes[i].label), cx, kTop + kPlotHeight + 33, s.n);
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<FigureBox> dialogic_boxes(const std::vector<ConditionResult>& results) {
  std::vector<FigureBox> out;
  for (const auto* r : ordered(results)) {
    const auto id = strategy_from_label(r->label);
    if (id && is_dialogic(*id)) out.push_back({r->label, counts_of(r->records)});
  }
  if (const auto* expert = find_expert(results)) out.push_back({expert->label, counts_of(expert->records)});
  return out;
}

std::vector<FigureBox> all_condition_boxes(const std::vector<ConditionResult>& results) {
  std::vector<FigureBox> out;
  for (const auto* r : ordered(results)) out.push_back({r->label, counts_of(r->records)});
  return out;
}

std::vector<FigureBox> grouped_boxes(const std::vector<ConditionResult>& results) {
  std::vector<ConditionResult> strategies;
  for (const auto& r : results)
    if (r.label != kExpertLabel) strategies.push_back(r);
  std::vector<FigureBox> out;
  if (!strategies.empty()) {
    for (auto axis : {GroupAxis::Framing, GroupAxis::Control}) {
      for (const auto& cell : group_by(strategies, axis)) out.push_back({cell.cell, counts_of(cell.records)});
    }
  }
  if (const auto* expert = find_expert(results)) out.push_back({expert->label, counts_of(expert->records)});
  return out;
}

std::string summary_csv(const std::vector<ConditionResult>& results) {
  std::string out = "strategy,framing,control,n,mean,median,q1,q3,min,max,accuracy\n";
  for (const auto* r : ordered(results)) {
    const auto id = strategy_from_label(r->label);
    const std::string framing_text = id ? std::string(to_string(framing(*id))) : "-";
    const std::string control_text = id ? std::string(to_string(initiative(*id))) : "-";
    out += fmt::format("{},{},{},{}\n", r->label, framing_text, control_text, summary_columns(r->summary));
  }
  return out;
}

std::string grouped_summary_csv(const std::vector<ConditionResult>& results) {
  std::vector<ConditionResult> strategies;
  for (const auto& r : results)
    if (r.label != kExpertLabel) strategies.push_back(r);
  std::string out = "axis,cell,strategies,n,mean,median,q1,q3,min,max,accuracy\n";
  if (strategies.empty()) return out;
  for (auto axis : {GroupAxis::Framing, GroupAxis::Control}) {
    for (const auto& cell : group_by(strategies, axis)) {
      out += fmt::format("{},{},{},{}\n", to_string(axis), cell.cell, fmt::join(cell.labels, ";"),
                         summary_columns(cell.summary));
    }
  }
  return out;
}

std::map<std::string, Summary> parse_summary_csv(std::string_view text) {
  std::map<std::string, Summary> out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != 11) throw Error(ErrorCode::SummaryMismatch, "summary row has the wrong number of columns: " + line);
    Summary s;
    s.n = static_cast<std::size_t>(parse_number(cells[3]));
    s.mean = parse_number(cells[4]);
    s.median = parse_number(cells[5]);
    s.q1 = parse_number(cells[6]);
    s.q3 = parse_number(cells[7]);
    s.min = parse_number(cells[8]);
    s.max = parse_number(cells[9]);
    s.accuracy = parse_number(cells[10]);
    out[cells[0]] = s;
  }
  return out;
}

void verify_summary(const std::vector<ConditionResult>& results, std::string_view stored_csv) {
  const auto stored = parse_summary_csv(stored_csv);
  if (stored.size() != results.size()) {
    throw Error(ErrorCode::SummaryMismatch,
                fmt::format("summary lists {} conditions but {} records files were found", stored.size(), results.size()));
  }
  for (const auto& r : results) {
    const auto it = stored.find(r.label);
    if (it == stored.end()) throw Error(ErrorCode::SummaryMismatch, "summary has no row for " + r.label);
    if (!(it->second == summarize(r.records))) {
      throw Error(ErrorCode::SummaryMismatch, "stored summary for " + r.label + " does not match its records");
    }
  }
}

std::vector<ConditionResult> load_results(const std::filesystem::path& dir) {
  auto records_dir = dir / "records";
  if (!std::filesystem::is_directory(records_dir)) records_dir = dir;
  if (!std::filesystem::is_directory(records_dir)) throw Error(ErrorCode::Io, "no such directory: " + dir.string());
  std::vector<ConditionResult> out;
  for (const auto& entry : std::filesystem::directory_iterator(records_dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    ConditionResult result;
    result.label = entry.path().stem().string();
    result.records = read_records(entry.path());
    if (result.records.empty()) continue;
    for (const auto& rec : result.records) {
      if (rec.strategy_label != result.label) {
        throw Error(ErrorCode::UnknownLabel,
                    fmt::format("{} holds a record labelled '{}'", entry.path().string(), rec.strategy_label));
      }
    }
    result.summary = summarize(result.records);
    out.push_back(std::move(result));
  }
  if (out.empty()) throw Error(ErrorCode::EmptyRecords, "no records found under " + records_dir.string());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::make_pair(condition_rank(a.label), a.label) < std::make_pair(condition_rank(b.label), b.label);
  });
  return out;
}

std::vector<std::string> emit_report(const std::vector<ConditionResult>& results, const std::filesystem::path& out_dir) {
  if (results.empty()) throw Error(ErrorCode::EmptyRecords, "nothing to report");
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& text) {
    write_text_file(out_dir / name, text);
    written.push_back(name);
  };
  put("summary.csv", summary_csv(results));
  put("grouped_summary.csv", grouped_summary_csv(results));
  std::string all_records;
  for (const auto* r : ordered(results))
    for (const auto& rec : r->records) all_records += to_json(rec).dump() + "\n";
  put("records.jsonl", all_records);

  const auto dialogic = dialogic_boxes(results);
  if (!dialogic.empty()) {
    put("fig_dialogic.svg", render_boxplot_svg("Questions per trial: dialogic strategies vs expert", dialogic));
  }
  put("fig_all.svg", render_boxplot_svg("Questions per trial: all conditions", all_condition_boxes(results)));
  put("fig_grouped.svg",
      render_boxplot_svg("Questions per trial by framing and dialogue control", grouped_boxes(results)));
  return written;
}

void write_manifest(const std::filesystem::path& out_dir, const ManifestInputs& inputs) {
  ojson doc;
  doc["config_hash"] = inputs.config_hash;
  doc["ontology_fingerprint"] = inputs.ontology_fingerprint;
  doc["cassette_fingerprint"] = inputs.cassette_fingerprint ? ojson(*inputs.cassette_fingerprint) : ojson(nullptr);
  doc["conditions"] = inputs.conditions;
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(out_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto relative = std::filesystem::relative(entry.path(), out_dir).generic_string();
    if (relative == "manifest.json") continue;
    files.push_back(relative);
  }
  std::sort(files.begin(), files.end());
  ojson outputs = ojson::object();
  for (const auto& f : files) outputs[f] = sha256_file(out_dir / f);
  doc["outputs"] = outputs;
  write_text_file(out_dir / "manifest.json", doc.dump(2) + "\n");
}

}  // namespace social_gym
