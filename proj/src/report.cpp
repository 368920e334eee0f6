#include "oddity/report.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "oddity/errors.hpp"

namespace oddity {

namespace {

using nlohmann::ordered_json;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view text) {
  text = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw DomainError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view text) {
  text = trim(text);
  const std::string s(text);
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(value)) {
    throw DomainError("not a finite number: '" + s + "'");
  }
  return value;
}

ordered_json cell_json(const Cell& cell) {
  if (const auto* i = std::get_if<long long>(&cell)) return *i;
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  const double d = std::get<double>(cell);
  if (!std::isfinite(d)) return nullptr;
  return d;
}

std::string cell_text(const Cell& cell) {
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  return format_double(std::get<double>(cell));
}

double folded(double delta) { return delta == 0.0 ? 0.0 : delta; }

}  // namespace

std::string RunConfig::to_json() const {
  ordered_json j;
  j["subcommand"] = subcommand;
  j["delta"] = delta_spec;
  j["L"] = sizes_spec;
  j["N"] = particles_spec;
  j["backend"] = backend;
  j["out"] = out;
  j["format"] = format;
  j["tol"] = tolerance ? ordered_json(*tolerance) : ordered_json(nullptr);
  j["xy_sign"] = xy_sign;
  j["filter"] = filter;
  j["jobs"] = jobs;
  return j.dump();
}

OutputFormat output_format_from_string(std::string_view text) {
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "json") return OutputFormat::kJson;
  throw DomainError("format must be 'csv' or 'json', got '" + std::string(text) + "'");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

void write_table(std::ostream& out, const Table& table, const RunConfig& config,
                 OutputFormat format) {
  // Job count and destination path do not affect the data; blank them so
  // equivalent runs stay byte-identical.
  RunConfig shown = config;
  shown.jobs = 0;
  shown.out.clear();
  if (format == OutputFormat::kCsv) {
    out << "# vertex-oddity " << ODDITY_VERSION << "\n";
    out << "# config " << shown.to_json() << "\n";
    for (const auto& note : table.notes) out << "# " << note << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? "," : "") << table.columns[c];
    }
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_text(row[c]);
      out << "\n";
    }
    return;
  }
  ordered_json doc;
  doc["version"] = ODDITY_VERSION;
  doc["config"] = ordered_json::parse(shown.to_json());
  doc["columns"] = table.columns;
  doc["rows"] = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = cell_json(row[c]);
    doc["rows"].push_back(std::move(obj));
  }
  doc["notes"] = table.notes;
  out << doc.dump(2) << "\n";
}

Table scan_table(const std::vector<ScanRow>& rows) {
  Table t;
  t.columns = {"L", "N_up", "delta", "energy", "S_inf", "p_max", "argmax_config", "degenerate"};
  for (const auto& r : rows) {
    if (!r.ok()) {
      t.notes.push_back("failed L=" + std::to_string(r.sites) + " delta=" + format_double(r.delta) +
                        ": " + r.error);
      continue;
    }
    t.rows.push_back({static_cast<long long>(r.sites), static_cast<long long>(r.n_up), r.delta,
                      r.energy, r.s_inf, r.p_max, to_string(r.argmax),
                      static_cast<long long>(r.degenerate)});
  }
  return t;
}

Table xx_diff_table(const std::vector<XxDiffRow>& rows) {
  Table t;
  t.columns = {"N", "L_odd", "S_diff", "logdetW"};
  for (const auto& r : rows) {
    t.rows.push_back({static_cast<long long>(r.particles), static_cast<long long>(r.odd_sites),
                      r.entropy_difference, r.log_det_w});
  }
  return t;
}

Table coulomb_report(const std::vector<CoulombRow>& rows) {
  Table t;
  t.columns = {"beta", "L", "N", "Q_exact", "Q_bruteforce", "rel_err"};
  for (const auto& r : rows) {
    t.rows.push_back({static_cast<long long>(r.beta), static_cast<long long>(r.sites),
                      static_cast<long long>(r.particles), r.exact, r.bruteforce, r.rel_err});
  }
  return t;
}

Table imps_table(const std::vector<ImpsRow>& rows) {
  Table t;
  t.columns = {"alpha", "delta", "L", "S_inf_imps"};
  for (const auto& r : rows) {
    t.rows.push_back({r.alpha, r.delta, static_cast<long long>(r.sites), r.s_inf});
  }
  return t;
}

Table fig2c_table(const std::vector<Fig2cRow>& rows) {
  Table t;
  t.columns = {"delta", "b_ed", "stderr_ed", "b_imps", "stderr_imps", "alpha_theory"};
  const double nan = std::nan("");
  for (const auto& r : rows) {
    const bool critical = is_critical(r.delta);
    if (!r.ed.ok()) t.notes.push_back("delta=" + format_double(r.delta) + " ed: " + r.ed.error);
    if (!r.imps.ok() && r.imps.error != r.ed.error) {
      t.notes.push_back("delta=" + format_double(r.delta) + " imps: " + r.imps.error);
    }
    t.rows.push_back({r.delta, r.ed.ok() ? r.ed.b : nan, r.ed.ok() ? r.ed.stderr_b : nan,
                      r.imps.ok() ? r.imps.b : nan, r.imps.ok() ? r.imps.stderr_b : nan,
                      critical ? alpha_from_delta(r.delta) : nan});
  }
  return t;
}

std::vector<int> parse_int_range(std::string_view text) {
  std::vector<int> out;
  for (std::string_view item : split(text, ',')) {
    item = trim(item);
    if (item.empty()) throw DomainError("empty size list");
    const auto parts = split(item, ':');
    if (parts.size() > 3) throw DomainError("range must be a, a:b or a:b:step");
    const int first = parse_int(parts[0]);
    const int last = parts.size() > 1 ? parse_int(parts[1]) : first;
    const int step = parts.size() > 2 ? parse_int(parts[2]) : 1;
    if (step <= 0) throw DomainError("range step must be positive");
    if (last < first) throw DomainError("range '" + std::string(item) + "' is empty");
    for (long v = first; v <= last; v += step) out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw DomainError("empty size list");
  return out;
}

std::vector<double> parse_delta_spec(std::string_view text) {
  std::vector<double> out;
  for (std::string_view item : split(text, ',')) {
    item = trim(item);
    if (item.empty()) throw DomainError("empty delta list");
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_real(parts[0]));
    } else if (parts.size() == 3) {
      const double a = parse_real(parts[0]);
      const double b = parse_real(parts[1]);
      const int n = parse_int(parts[2]);
      if (n < 1) throw DomainError("delta grid needs at least one point");
      if (!(b > a)) throw DomainError("delta grid a:b:n requires b > a");
      for (int k = 1; k <= n; ++k) out.push_back(k == n ? b : a + (b - a) * k / n);
    } else {
      throw DomainError("delta must be v or a:b:n");
    }
  }
  return out;
}

DirectoryCache::DirectoryCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::optional<DirectoryCache> DirectoryCache::from_environment() {
  const char* env = std::getenv("VERTEX_ODDITY_CACHE");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return DirectoryCache(env);
}

std::filesystem::path DirectoryCache::entry(const Sector& sector, double delta, XySign sign) const {
  char name[96];
  std::snprintf(name, sizeof name, "L%d_N%d_%016llx_%s.json", sector.sites, sector.n_up,
                static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(folded(delta))),
                std::string(to_string(sign)).c_str());
  return dir_ / name;
}

std::optional<ScanRow> DirectoryCache::load(const Sector& sector, double delta, XySign sign) const {
  std::ifstream in(entry(sector, delta, sign));
  if (!in) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(in);
    ScanRow row;
    row.sites = j.at("L").get<int>();
    row.n_up = j.at("N_up").get<int>();
    row.delta = delta;
    // Doubles are stored as exact bit patterns.
    row.energy = std::bit_cast<double>(j.at("energy_bits").get<std::uint64_t>());
    row.s_inf = std::bit_cast<double>(j.at("S_inf_bits").get<std::uint64_t>());
    row.p_max = std::bit_cast<double>(j.at("p_max_bits").get<std::uint64_t>());
    row.argmax = config_from_string(j.at("argmax_config").get<std::string>());
    row.degenerate = j.at("degenerate").get<bool>();
    if (row.sites != sector.sites || row.n_up != sector.n_up) return std::nullopt;
    return row;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void DirectoryCache::store(const ScanRow& row, XySign sign) const {
  if (!row.ok()) return;
  nlohmann::json j;
  j["L"] = row.sites;
  j["N_up"] = row.n_up;
  j["delta"] = row.delta;
  j["energy_bits"] = std::bit_cast<std::uint64_t>(row.energy);
  j["S_inf_bits"] = std::bit_cast<std::uint64_t>(row.s_inf);
  j["p_max_bits"] = std::bit_cast<std::uint64_t>(row.p_max);
  j["argmax_config"] = to_string(row.argmax);
  j["degenerate"] = row.degenerate;
  const auto target = entry({row.sites, row.n_up}, row.delta, sign);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << j.dump() << "\n";
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
}

}  // namespace oddity
