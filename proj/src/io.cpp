#include "measinv/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

#include <json.hpp>

namespace measinv {

namespace {

using json = nlohmann::ordered_json;

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::int64_t read_integer(std::string_view text, std::size_t& pos, std::string_view whole) {
  const char* begin = text.data() + pos;
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(begin, text.data() + text.size(), value);
  if (ec != std::errc() || begin == end) {
    throw ParseError("expected an integer in group \"" + std::string(whole) + "\"", 1, pos + 1);
  }
  pos += static_cast<std::size_t>(end - begin);
  return value;
}

json optional_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json measure_to_json(const DiscreteMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) {
    atoms.push_back({{"coords", a.element.coords}, {"re", a.amplitude.real()}, {"im", a.amplitude.imag()}});
  }
  return {{"group", mu.group().to_string()}, {"atoms", std::move(atoms)}};
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(ErrorKind::Parse,
            line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message
                     : message),
      line_(line),
      column_(column) {}

GroupSpec parse_group(std::string_view text) {
  if (text == "Z") return GroupSpec::lattice(1);
  if (text.starts_with("Z^")) {
    std::size_t pos = 2;
    const std::int64_t rank = read_integer(text, pos, text);
    if (pos != text.size()) throw ParseError("trailing characters in group", 1, pos + 1);
    if (rank < 1) throw ParseError("lattice rank must be >= 1", 1, 3);
    return GroupSpec::lattice(static_cast<int>(rank));
  }
  std::vector<std::int64_t> moduli;
  std::size_t pos = 0;
  while (true) {
    if (pos >= text.size() || text[pos] != 'Z') throw ParseError("expected 'Z'", 1, pos + 1);
    ++pos;
    const std::size_t at = pos;
    const std::int64_t n = read_integer(text, pos, text);
    if (n < 1) throw ParseError("modulus must be >= 1", 1, at + 1);
    std::int64_t copies = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      const std::size_t cat = pos;
      copies = read_integer(text, pos, text);
      if (copies < 1) throw ParseError("exponent must be >= 1", 1, cat + 1);
    }
    moduli.insert(moduli.end(), static_cast<std::size_t>(copies), n);
    if (pos == text.size()) break;
    if (text[pos] != 'x') throw ParseError("expected 'x' between factors", 1, pos + 1);
    ++pos;
  }
  try {
    return GroupSpec::finite_product(std::move(moduli));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

DiscreteMeasure parse_measure(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    if (const auto cut = what.find("syntax error"); cut != std::string::npos) what = what.substr(cut);
    throw ParseError(what, line, column);
  }
  if (!doc.is_object()) throw ParseError("measure document must be an object");
  if (!doc.contains("group") || !doc["group"].is_string()) throw ParseError("missing string field \"group\"");
  if (!doc.contains("atoms") || !doc["atoms"].is_array()) throw ParseError("missing array field \"atoms\"");

  const GroupSpec g = parse_group(doc["group"].get<std::string>());
  std::vector<Atom> atoms;
  const auto& list = doc["atoms"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& a = list[i];
    const std::string where = "atom " + std::to_string(i);
    if (!a.is_object()) throw ParseError(where + ": expected an object");
    if (!a.contains("coords") || !a["coords"].is_array()) throw ParseError(where + ": missing coords");
    std::vector<std::int64_t> coords;
    for (const auto& c : a["coords"]) {
      if (!c.is_number_integer()) throw ParseError(where + ": coords must be integers");
      coords.push_back(c.get<std::int64_t>());
    }
    if (coords.size() != g.dimension()) {
      throw ParseError(where + ": coords has length " + std::to_string(coords.size()) + ", group " +
                       g.to_string() + " needs " + std::to_string(g.dimension()));
    }
    double re = 0.0;
    double im = 0.0;
    for (const auto& [key, target] : {std::pair{"re", &re}, std::pair{"im", &im}}) {
      if (!a.contains(key)) continue;
      if (!a[key].is_number()) throw ParseError(where + ": " + key + " must be a number");
      *target = a[key].get<double>();
    }
    atoms.push_back({g.element(std::move(coords)), {re, im}});
  }
  return DiscreteMeasure(g, std::move(atoms));
}

std::string serialize_measure(const DiscreteMeasure& mu) {
  for (const auto& a : mu.atoms()) {
    if (!std::isfinite(a.amplitude.real()) || !std::isfinite(a.amplitude.imag())) {
      throw Error(ErrorKind::DomainError, "cannot serialize a non-finite amplitude");
    }
  }
  return measure_to_json(mu).dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::PreconditionViolated, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::PreconditionViolated, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

DiscreteMeasure read_measure_file(const std::filesystem::path& path) {
  return parse_measure(read_text_file(path));
}

std::string spectrum_csv(const SpectrumProfile& p) {
  std::ostringstream out;
  out << "# exact=" << (p.exact ? "true" : "false") << " certified_min=" << format_double(p.certified_min)
      << " certified_max_gap=" << format_double(p.certified_max_gap) << '\n';
  const std::size_t d = p.group.dimension();
  const char* prefix = p.exact ? "g" : "theta";
  for (std::size_t j = 0; j < d; ++j) out << prefix << j << ',';
  out << "re,im,modulus\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    const DualPoint point = p.point(i);
    if (const auto* x = std::get_if<GroupElement>(&point)) {
      for (auto c : x->coords) out << c << ',';
    } else {
      for (double t : std::get<AnglePoint>(point).theta()) out << format_double(t) << ',';
    }
    const auto v = p.values[i];
    out << format_double(v.real()) << ',' << format_double(v.imag()) << ',' << format_double(std::abs(v)) << '\n';
  }
  return out.str();
}

std::string inversion_json(const InversionResult& r) {
  json doc = {{"method", std::string(to_string(r.method))},
              {"inverse_norm", r.inverse_norm},
              {"residual", r.residual},
              {"guarantee", optional_number(r.guarantee)},
              {"truncated", r.truncated},
              {"inverse", measure_to_json(r.inverse)}};
  return doc.dump(2) + "\n";
}

std::string report_json(const BoundReport& r) {
  json verdicts = json::array();
  for (const auto& v : r.verdicts) {
    json item = {{"theorem", std::string(to_string(v.theorem))},
                 {"applies", v.applies},
                 {"predicted", optional_number(v.predicted)}};
    if (!v.applies) item["reason"] = v.reason;
    verdicts.push_back(std::move(item));
  }
  json violations = json::array();
  for (Theorem t : r.violations()) violations.push_back(std::string(to_string(t)));
  json doc = {{"delta", r.delta},
              {"tv", r.tv},
              {"a1", r.a1},
              {"a2", r.a2},
              {"observed_inverse_norm", optional_number(r.observed_inverse_norm)},
              {"verdicts", std::move(verdicts)},
              {"violations", std::move(violations)}};
  return doc.dump(2) + "\n";
}

std::string sweep_csv(const SweepTable& t) {
  std::ostringstream out;
  out << "delta,best_norm,latw_bound,nikolski_bound,seed,restarts\n";
  for (const auto& row : t.rows) {
    out << format_double(row.delta) << ',' << (row.best_norm ? format_double(*row.best_norm) : "infeasible") << ','
        << format_double(row.latw_bound) << ',' << (row.nikolski_bound ? format_double(*row.nikolski_bound) : "inf")
        << ',' << t.seed << ',' << t.restarts << '\n';
  }
  return out.str();
}

std::string adversarial_json(const AdversarialOutcome& r, AtomClaim claim, double delta) {
  json doc = {{"claim", std::string(to_string(claim))},
              {"delta", delta},
              {"violation_found", r.violation_found},
              {"min_margin", r.min_margin},
              {"recursive_agreement", r.recursive_agreement},
              {"incumbents_checked", r.incumbents_checked},
              {"trace", r.trace},
              {"extremal", measure_to_json(r.extremal)},
              {"witness", r.witness ? measure_to_json(*r.witness) : json(nullptr)}};
  return doc.dump(2) + "\n";
}

}  // namespace measinv
