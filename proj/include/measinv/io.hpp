#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "measinv/bounds.hpp"
#include "measinv/error.hpp"
#include "measinv/inversion.hpp"
#include "measinv/measure.hpp"
#include "measinv/search.hpp"
#include "measinv/spectra.hpp"

namespace measinv {

/// Parse failure with a 1-based position; line 0 means the error is
/// structural rather than tied to a character.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Grammar: factor ('x' factor)* with factor = 'Z' n ['^' k], or the
/// lattice forms "Z" and "Z^d".
GroupSpec parse_group(std::string_view text);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

/// {"group": "...", "atoms": [{"coords": [...], "re": x, "im": y}, ...]}
DiscreteMeasure parse_measure(std::string_view text);
std::string serialize_measure(const DiscreteMeasure& mu);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);
DiscreteMeasure read_measure_file(const std::filesystem::path& path);

/// First line "# exact=... certified_min=... certified_max_gap=...", then a
/// header row and one row per dual point.
std::string spectrum_csv(const SpectrumProfile& p);

std::string inversion_json(const InversionResult& r);
std::string report_json(const BoundReport& r);

/// Columns delta,best_norm,latw_bound,nikolski_bound,seed,restarts; "inf"
/// marks an infinite bound and "infeasible" a row without a witness.
std::string sweep_csv(const SweepTable& t);

std::string adversarial_json(const AdversarialOutcome& r, AtomClaim claim, double delta);

}  // namespace measinv
