#include "qmax/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qmax/distributions.hpp"
#include "qmax/errors.hpp"
#include "qmax/svg.hpp"

namespace qmax {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json fit_to_json(const FittedDistribution& fit) {
  json j;
  j["family"] = family_name(fit.family);
  j["ok"] = fit.ok;
  if (fit.ok) {
    json params = json::object();
    const auto names = param_names(fit.family);
    for (std::size_t i = 0; i < fit.params.size() && i < names.size(); ++i) {
      params[std::string(names[i])] = number_or_null(fit.params[i]);
    }
    j["params"] = params;
    j["log_likelihood"] = number_or_null(fit.log_likelihood);
    j["rss"] = number_or_null(fit.rss);
    j["iterations"] = fit.iterations;
  } else {
    j["diagnostic"] = fit.diagnostic;
  }
  return j;
}

std::vector<const GofEntry*> reported(const SeriesAnalysis& s) {
  std::vector<const GofEntry*> out;
  for (const auto& g : s.gof) {
    if (g.report) out.push_back(&g);
  }
  return out;
}

class Writer {
 public:
  explicit Writer(fs::path root) : root_(std::move(root)) {}

  void write(const fs::path& relative, const std::string& content) {
    const fs::path full = root_ / relative;
    std::error_code ec;
    fs::create_directories(full.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + full.parent_path().string() + "': " + ec.message());
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + full.string() + "' for writing");
    out << content;
    out.close();
    if (!out) throw IoError("write failed for '" + full.string() + "'");
    written_.push_back(relative);
  }

  void write_csv(const fs::path& relative, const std::vector<std::string>& header,
                 const std::string& body) {
    std::string text;
    for (std::size_t i = 0; i < header.size(); ++i) text += (i ? "," : "") + header[i];
    write(relative, text + "\n" + body);
    if (const auto err = check_numeric_csv(root_ / relative, header); !err.empty()) {
      throw IoError("emitted file '" + (root_ / relative).string() + "' failed validation: " + err);
    }
  }

  std::vector<fs::path> manifest() {
    std::sort(written_.begin(), written_.end());
    return written_;
  }

 private:
  fs::path root_;
  std::vector<fs::path> written_;
};

std::string points_csv(std::span<const Point> points) {
  std::string body;
  for (const auto& p : points) body += format_double(p.x) + "," + format_double(p.y) + "\n";
  return body;
}

std::string ranking_csv(const RankingTable& table) {
  std::string body = "rank,family,rss,status\n";
  for (const auto& e : table.entries) {
    body += std::to_string(e.rank) + "," + std::string(family_name(e.family)) + "," +
            format_double(e.rss) + ",ok\n";
  }
  for (const auto& f : table.failures) body += "," + std::string(family_name(f.family)) + ",,failed\n";
  return body;
}

// Corridor-wide table: one row per rank, one column per successful series.
std::pair<std::string, std::string> corridor_table(const AnalysisReport& report) {
  std::vector<const SeriesAnalysis*> cols;
  std::size_t rows = 0;
  for (const auto& s : report.series) {
    if (s.ok && s.ranking) {
      cols.push_back(&s);
      rows = std::max(rows, s.ranking->entries.back().rank);
    }
  }
  auto cell = [](const RankingTable& t, std::size_t rank) {
    std::string names;
    double rss = 0.0;
    for (const auto& e : t.entries) {
      if (e.rank != rank) continue;
      names += (names.empty() ? "" : ", ") + std::string(family_name(e.family));
      rss = e.rss;
    }
    return names.empty() ? std::string{} : format_ranking_cell(names, rss);
  };
  std::string csv = "rank";
  for (const auto* s : cols) csv += "," + csv_field(s->label);
  csv += "\n";
  std::vector<std::vector<std::string>> grid;
  std::vector<std::size_t> widths;
  widths.push_back(4);
  std::vector<std::string> head{"rank"};
  for (const auto* s : cols) head.push_back(s->label);
  grid.push_back(head);
  for (std::size_t r = 1; r <= rows; ++r) {
    std::vector<std::string> line{std::to_string(r)};
    csv += std::to_string(r);
    for (const auto* s : cols) {
      line.push_back(cell(*s->ranking, r));
      csv += "," + csv_field(line.back());
    }
    csv += "\n";
    grid.push_back(std::move(line));
  }
  widths.assign(head.size(), 0);
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) widths[c] = std::max(widths[c], line[c].size());
  }
  std::string txt;
  for (const auto& line : grid) {
    std::string row;
    for (std::size_t c = 0; c < line.size(); ++c) {
      row += line[c];
      if (c + 1 < line.size()) row += std::string(widths[c] - line[c].size() + 2, ' ');
    }
    while (!row.empty() && row.back() == ' ') row.pop_back();
    txt += row + "\n";
  }
  return {csv, txt};
}

}  // namespace

std::string sanitize_label(std::string_view label) {
  std::string out;
  for (char c : label) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '.' || c == '_' || c == '-';
    out += keep ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

std::string format_ranking_text(const RankingTable& table) {
  std::string out;
  std::size_t i = 0;
  while (i < table.entries.size()) {
    std::size_t j = i;
    std::string names;
    while (j < table.entries.size() && table.entries[j].rank == table.entries[i].rank) {
      names += (names.empty() ? "" : ", ") + std::string(family_name(table.entries[j].family));
      ++j;
    }
    out += std::to_string(table.entries[i].rank) + "  " +
           format_ranking_cell(names, table.entries[i].rss) + "\n";
    i = j;
  }
  for (const auto& f : table.failures) {
    out += "-  " + std::string(family_name(f.family)) + " (failed: " + f.diagnostic + ")\n";
  }
  return out;
}

std::string check_numeric_csv(const fs::path& path, const std::vector<std::string>& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "cannot reopen";
  std::string line;
  std::string expected;
  for (std::size_t i = 0; i < header.size(); ++i) expected += (i ? "," : "") + header[i];
  if (!std::getline(in, line) || line != expected) return "header mismatch";
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    std::size_t fields = 0;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      ++fields;
      try {
        std::size_t used = 0;
        (void)std::stod(field, &used);
        if (used != field.size()) return "row " + std::to_string(row) + ": trailing characters";
      } catch (const std::exception&) {
        if (field != "nan" && field != "inf" && field != "-inf") {
          return "row " + std::to_string(row) + ": '" + field + "' is not numeric";
        }
      }
    }
    if (fields != header.size()) return "row " + std::to_string(row) + ": wrong field count";
  }
  return {};
}

json report_to_json(const AnalysisReport& report) {
  json j;
  j["tool_version"] = report.provenance.tool_version;
  json provenance;
  json config = json::object();
  for (const auto& [k, v] : report.provenance.config) config[k] = v;
  provenance["config"] = config;
  json checksums = json::object();
  for (const auto& [k, v] : report.provenance.input_checksums) checksums[k] = v;
  provenance["input_checksums"] = checksums;
  provenance["generated_at"] = report.provenance.generated_at;
  j["provenance"] = provenance;
  j["ks_caveat"] = kKsCaveat;

  json series = json::array();
  json gev_summary = json::array();
  for (const auto& s : report.series) {
    const std::string dir = sanitize_label(s.label);
    json e;
    e["label"] = s.label;
    e["status"] = s.ok ? "ok" : "failed";
    if (!s.ok) e["diagnostic"] = s.diagnostic;
    const auto& d = s.decomposition;
    e["decomposition"] = {{"input_samples", d.input_samples},
                          {"active_samples", d.active_samples},
                          {"residual_samples", d.residual_samples},
                          {"period", d.period},
                          {"edge", d.edge},
                          {"seasonal_min", number_or_null(d.seasonal_min)},
                          {"seasonal_max", number_or_null(d.seasonal_max)},
                          {"residual_mean", number_or_null(d.residual_mean)},
                          {"residual_sd", number_or_null(d.residual_sd)}};
    e["fitted_samples"] = s.samples.size();
    json gev = {{"label", s.label}, {"rank", nullptr}, {"xi", nullptr}, {"subfamily", nullptr}};
    if (s.ranking) {
      json ranking = json::array();
      for (const auto& r : s.ranking->entries) {
        ranking.push_back({{"rank", r.rank}, {"family", family_name(r.family)}, {"rss", r.rss},
                           {"cell", format_ranking_cell(family_name(r.family), r.rss)}});
      }
      e["ranking"] = ranking;
      json failures = json::array();
      for (const auto& f : s.ranking->failures) {
        failures.push_back({{"family", family_name(f.family)}, {"diagnostic", f.diagnostic}});
      }
      e["fit_failures"] = failures;
      json fits = json::array();
      for (const auto& f : s.ranking->fits) fits.push_back(fit_to_json(f));
      e["fits"] = fits;
      if (const auto rank = s.ranking->rank_of(Family::GenExtreme); rank != 0) {
        const auto& p = s.ranking->fit_for(Family::GenExtreme)->params;
        gev["rank"] = rank;
        gev["xi"] = p[2];
        gev["subfamily"] = to_string(classify_family({p[0], p[1], p[2]}));
      }
    }
    json gof = json::array();
    const auto shown = reported(s);
    for (const auto& g : s.gof) {
      json ge;
      ge["family"] = family_name(g.family);
      if (g.report) {
        const auto& r = *g.report;
        ge["pp_r2"] = r.pp_r2;
        ge["pp_diagonal_r2"] = r.pp_diagonal_r2;
        ge["qq_r2"] = r.qq_r2;
        ge["ks_statistic"] = r.ks_statistic;
        ge["ks_p_value"] = r.ks_p_value;
        ge["linear"] = r.linear;
        const std::string fam(family_name(g.family));
        ge["pp_file"] = dir + "/pp_" + fam + ".csv";
        ge["qq_file"] = dir + "/qq_" + fam + ".csv";
      } else {
        ge["diagnostic"] = g.diagnostic;
      }
      gof.push_back(ge);
    }
    e["gof"] = gof;
    if (s.ok) {
      json files = {{"ranking_csv", dir + "/ranking.csv"},
                    {"ranking_txt", dir + "/ranking.txt"},
                    {"histogram", dir + "/histogram.csv"}};
      if (!shown.empty()) {
        files["pp"] = dir + "/pp.csv";
        files["qq"] = dir + "/qq.csv";
      }
      e["files"] = files;
    } else {
      e["files"] = {{"error", dir + "/error.txt"}};
    }
    series.push_back(e);
    gev_summary.push_back(gev);
  }
  j["series"] = series;
  j["gev_summary"] = gev_summary;
  j["warnings"] = report.warnings;
  return j;
}

std::vector<fs::path> emit_report(const AnalysisReport& report, const fs::path& out_dir,
                                  const EmitOptions& options) {
  Writer writer(out_dir);
  std::set<std::string> dirs;
  for (const auto& s : report.series) {
    const std::string dir = sanitize_label(s.label);
    if (!dirs.insert(dir).second) {
      throw IoError("labels collide after sanitizing: '" + s.label + "' -> '" + dir + "'");
    }
    if (!s.ok) {
      writer.write(fs::path(dir) / "error.txt", s.diagnostic + "\n");
      continue;
    }
    writer.write(fs::path(dir) / "ranking.csv", ranking_csv(*s.ranking));
    writer.write(fs::path(dir) / "ranking.txt", s.label + "\n" + format_ranking_text(*s.ranking));

    const auto shown = reported(s);
    const auto hist = make_histogram(s.samples, report.config.binning);
    std::vector<std::string> header{"bin_left", "bin_right", "bin_center", "density"};
    for (const auto* g : shown) header.push_back("pdf_" + std::string(family_name(g->family)));
    std::string body;
    std::vector<Curve> curves;
    for (const auto* g : shown) curves.push_back({std::string(family_name(g->family)), {}});
    for (std::size_t i = 0; i < hist.bin_count(); ++i) {
      body += format_double(hist.edges[i]) + "," + format_double(hist.edges[i + 1]) + "," +
              format_double(hist.center(i)) + "," + format_double(hist.densities[i]);
      for (std::size_t k = 0; k < shown.size(); ++k) {
        const double pdf = shown[k]->fit.pdf(hist.center(i));
        body += "," + format_double(pdf);
        curves[k].points.push_back({hist.center(i), pdf});
      }
      body += "\n";
    }
    writer.write_csv(fs::path(dir) / "histogram.csv", header, body);
    if (options.svg) {
      writer.write(fs::path(dir) / "histogram.svg", render_histogram_svg(hist, curves, s.label));
    }

    for (std::size_t k = 0; k < shown.size(); ++k) {
      const auto& r = *shown[k]->report;
      const std::string fam(family_name(shown[k]->family));
      const std::vector<std::string> pp_head{"empirical_cdf", "theoretical_cdf"};
      const std::vector<std::string> qq_head{"theoretical_quantile", "empirical_quantile"};
      const auto pp = points_csv(r.pp);
      const auto qq = points_csv(r.qq);
      if (k == 0) {
        writer.write_csv(fs::path(dir) / "pp.csv", pp_head, pp);
        writer.write_csv(fs::path(dir) / "qq.csv", qq_head, qq);
      }
      writer.write_csv(fs::path(dir) / ("pp_" + fam + ".csv"), pp_head, pp);
      writer.write_csv(fs::path(dir) / ("qq_" + fam + ".csv"), qq_head, qq);
      if (options.svg) {
        writer.write(fs::path(dir) / ("pp_" + fam + ".svg"),
                     render_scatter_svg(r.pp, s.label + ": P-P, " + fam, "empirical CDF",
                                        "fitted CDF", true));
        writer.write(fs::path(dir) / ("qq_" + fam + ".svg"),
                     render_scatter_svg(r.qq, s.label + ": Q-Q, " + fam, "fitted quantile",
                                        "empirical quantile", true));
      }
    }
  }
  const auto [table_csv, table_txt] = corridor_table(report);
  writer.write("ranking_table.csv", table_csv);
  writer.write("ranking_table.txt", table_txt);
  writer.write("report.json", report_to_json(report).dump(2) + "\n");
  return writer.manifest();
}

}  // namespace qmax
