#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oddity/exact_points.hpp"
#include "oddity/free_fermion.hpp"
#include "oddity/ground_state.hpp"
#include "oddity/scaling.hpp"

namespace oddity {

/// Everything that determines a CLI run's output. Equal configs give
/// byte-identical files.
struct RunConfig {
  std::string subcommand;
  std::string delta_spec;
  std::vector<double> deltas;
  std::string sizes_spec;
  std::vector<int> sizes;
  std::string particles_spec;
  std::vector<int> particles;
  std::string backend;
  std::string out;
  std::string format = "csv";
  std::optional<double> tolerance;
  std::string xy_sign = "minus";
  std::string filter;
  int jobs = 1;

  std::string to_json() const;
};

enum class OutputFormat { kCsv, kJson };
OutputFormat output_format_from_string(std::string_view text);

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Extra lines for the header comment (CSV) or "notes" array (JSON).
  std::vector<std::string> notes;
};

/// Full-precision scientific notation, "nan"/"inf" for non-finite values.
std::string format_double(double value);

/// CSV: '#'-prefixed header with version and config, then the table.
/// JSON: {"version", "config", "columns", "rows": [{column: value}], "notes"}.
void write_table(std::ostream& out, const Table& table, const RunConfig& config,
                 OutputFormat format);

Table scan_table(const std::vector<ScanRow>& rows);
Table xx_diff_table(const std::vector<XxDiffRow>& rows);
Table coulomb_report(const std::vector<CoulombRow>& rows);

struct ImpsRow {
  double alpha = 0.0;
  double delta = 0.0;
  int sites = 0;
  double s_inf = 0.0;
};
Table imps_table(const std::vector<ImpsRow>& rows);

struct Fig2cRow {
  double delta = 0.0;
  BCurveRow ed;
  BCurveRow imps;
};
Table fig2c_table(const std::vector<Fig2cRow>& rows);

/// "a:b:step", "a:b" (step 1) or "a", inclusive, or a comma list of those.
/// DomainError on malformed text, a non-positive step or an empty result.
std::vector<int> parse_int_range(std::string_view text);

/// "v", "a:b:n" (n points on (a, b], the last one exactly b) or a comma list.
std::vector<double> parse_delta_spec(std::string_view text);

/// Scan results memoised as one JSON file per (L, N_up, delta, sign).
class DirectoryCache final : public ScanCache {
 public:
  explicit DirectoryCache(std::filesystem::path dir);
  /// Cache at $VERTEX_ODDITY_CACHE, if set and non-empty.
  static std::optional<DirectoryCache> from_environment();

  std::optional<ScanRow> load(const Sector& sector, double delta, XySign sign) const override;
  void store(const ScanRow& row, XySign sign) const override;
  const std::filesystem::path& directory() const noexcept { return dir_; }

 private:
  std::filesystem::path entry(const Sector& sector, double delta, XySign sign) const;
  std::filesystem::path dir_;
};

}  // namespace oddity
