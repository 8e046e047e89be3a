#include "gridshape/descriptor.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include "gridshape/error.hpp"

namespace gridshape {

namespace {

constexpr std::array<std::string_view, 9> kFields = {
    "id", "class", "n", "tau", "m", "grid.interior", "grid.boundary", "cdf", "globals"};

[[noreturn]] void parse_error(std::size_t line, std::string_view field,
                              const std::string& what) {
  std::string msg = "parse error";
  if (line > 0) msg += " at line " + std::to_string(line);
  if (!field.empty()) msg += ", field " + std::string(field);
  throw Error(ErrorKind::kParse, msg + ": " + what);
}

double parse_number(std::string_view token, std::size_t line,
                    std::string_view field) {
  double v = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || token.empty()) {
    parse_error(line, field, "invalid number '" + std::string(token) + "'");
  }
  return v;
}

int parse_int(std::string_view token, std::size_t line, std::string_view field) {
  int v = 0;
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), last, v);
  if (ec != std::errc() || ptr != last || token.empty()) {
    parse_error(line, field, "invalid integer '" + std::string(token) + "'");
  }
  return v;
}

std::vector<double> parse_vector(std::string_view text, std::size_t line,
                                 std::string_view field) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const auto token = text.substr(start, comma == std::string_view::npos
                                              ? std::string_view::npos
                                              : comma - start);
    out.push_back(parse_number(token, line, field));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void append_vector(std::string& out, std::string_view key,
                   const std::vector<double>& values) {
  out += key;
  out += '=';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_value(values[i]);
  }
  out += '\n';
}

[[noreturn]] void invalid(std::string_view field, const std::string& what) {
  throw Error(ErrorKind::kValidation,
              "validation error: field " + std::string(field) + ": " + what);
}

void check_unit_range(std::string_view field, const std::vector<double>& v) {
  for (const auto x : v) {
    if (!(x >= 0.0 && x <= 1.0)) invalid(field, "value outside [0, 1]");
  }
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

std::string ConfigFingerprint::to_string() const {
  return "n=" + std::to_string(n) + " tau=" + format_value(tau) +
         " m=" + std::to_string(m);
}

std::vector<double> CompositeDescriptor::grid_vector() const {
  std::vector<double> v = grid.interior_probs;
  v.insert(v.end(), grid.boundary_probs.begin(), grid.boundary_probs.end());
  return v;
}

std::string format_value(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

CompositeDescriptor extract(const BinaryImage& img, const ExtractOptions& opts,
                            std::string shape_id,
                            std::optional<std::string> class_label) {
  opts.grid.validate();
  const MomentSet moments = compute_moments(img);
  const Orientation orientation = disambiguate_orientation(img, moments);
  const LabeledGrid grid = build_grid(img, moments, orientation, opts.grid);

  CompositeDescriptor d;
  d.shape_id = std::move(shape_id);
  d.class_label = std::move(class_label);
  d.fingerprint = {opts.grid.n, opts.grid.interior_threshold, opts.cdf_bins};
  d.grid = track_probabilities(grid);
  d.cdf = cdf_from_grid(grid, opts.cdf_bins);
  d.globals = global_features(img, moments, trace_contour(img), opts.globals);
  return d;
}

std::string serialize(const CompositeDescriptor& d) {
  std::string out;
  out += "id=" + d.shape_id + '\n';
  out += "class=" + d.class_label.value_or("") + '\n';
  out += "n=" + std::to_string(d.fingerprint.n) + '\n';
  out += "tau=" + format_value(d.fingerprint.tau) + '\n';
  out += "m=" + std::to_string(d.fingerprint.m) + '\n';
  append_vector(out, "grid.interior", d.grid.interior_probs);
  append_vector(out, "grid.boundary", d.grid.boundary_probs);
  append_vector(out, "cdf", d.cdf.bins);
  const auto g = d.globals.to_array();
  append_vector(out, "globals", std::vector<double>(g.begin(), g.end()));
  return out;
}

CompositeDescriptor parse_descriptor(std::string_view text) {
  struct Entry {
    std::string_view value;
    std::size_t line;
  };
  std::map<std::string_view, Entry> fields;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      parse_error(line_no, "", "expected key=value, got '" + std::string(line) + "'");
    }
    const auto key = line.substr(0, eq);
    if (std::find(kFields.begin(), kFields.end(), key) == kFields.end()) {
      parse_error(line_no, key, "unknown field");
    }
    if (fields.count(key)) parse_error(line_no, key, "duplicate field");
    fields[key] = {line.substr(eq + 1), line_no};
  }

  auto require = [&](std::string_view key) -> const Entry& {
    const auto it = fields.find(key);
    if (it == fields.end()) {
      throw Error(ErrorKind::kParse, "missing field " + std::string(key));
    }
    return it->second;
  };

  CompositeDescriptor d;
  d.shape_id = std::string(require("id").value);
  if (const auto it = fields.find("class"); it != fields.end() && !it->second.value.empty()) {
    d.class_label = std::string(it->second.value);
  }
  const auto& n = require("n");
  const auto& tau = require("tau");
  const auto& m = require("m");
  d.fingerprint.n = parse_int(n.value, n.line, "n");
  d.fingerprint.tau = parse_number(tau.value, tau.line, "tau");
  d.fingerprint.m = parse_int(m.value, m.line, "m");
  if (d.fingerprint.n < 1) parse_error(n.line, "n", "must be positive");
  if (d.fingerprint.m < 1) parse_error(m.line, "m", "must be positive");

  const std::size_t tracks = static_cast<std::size_t>((d.fingerprint.n - 1) / 2 + 1);
  auto vector_field = [&](std::string_view key, std::size_t expected) {
    const auto& e = require(key);
    auto v = parse_vector(e.value, e.line, key);
    if (v.size() != expected) {
      parse_error(e.line, key,
                  "expected " + std::to_string(expected) + " values, got " +
                      std::to_string(v.size()));
    }
    return v;
  };
  d.grid.interior_probs = vector_field("grid.interior", tracks);
  d.grid.boundary_probs = vector_field("grid.boundary", tracks);
  d.cdf.bins = vector_field("cdf", static_cast<std::size_t>(d.fingerprint.m));
  d.cdf.degenerate = all_zero(d.cdf.bins);
  const auto g = vector_field("globals", 5);
  d.globals = {g[0], g[1], g[2], g[3], g[4]};
  return d;
}

void validate(const CompositeDescriptor& d) {
  const auto& fp = d.fingerprint;
  if (fp.n < 3 || fp.n % 2 == 0) invalid("n", "grid size must be odd and ≥ 3");
  if (!(fp.tau > 0.0 && fp.tau <= 1.0)) invalid("tau", "must lie in (0, 1]");
  if (fp.m < 8) invalid("m", "cdf bin count must be >= 8");

  const std::size_t tracks = static_cast<std::size_t>((fp.n - 1) / 2 + 1);
  if (d.grid.interior_probs.size() != tracks) invalid("grid.interior", "wrong length");
  if (d.grid.boundary_probs.size() != tracks) invalid("grid.boundary", "wrong length");
  if (d.cdf.bins.size() != static_cast<std::size_t>(fp.m)) invalid("cdf", "wrong length");

  check_unit_range("grid.interior", d.grid.interior_probs);
  check_unit_range("grid.boundary", d.grid.boundary_probs);
  check_unit_range("cdf", d.cdf.bins);

  // Stored values carry 9 significant digits, so sums are only close to 1.
  constexpr double kSumTolerance = 1e-6;
  for (const auto& [field, probs] :
       {std::pair<std::string_view, const std::vector<double>*>{"grid.interior", &d.grid.interior_probs},
        {"grid.boundary", &d.grid.boundary_probs}}) {
    const double sum = std::accumulate(probs->begin(), probs->end(), 0.0);
    if (!all_zero(*probs) && std::fabs(sum - 1.0) > kSumTolerance) {
      invalid(field, "probabilities do not sum to 1");
    }
  }
  if (all_zero(d.grid.interior_probs) && all_zero(d.grid.boundary_probs)) {
    invalid("grid", "degenerate descriptor: no interior or boundary cells");
  }
  if (!all_zero(d.cdf.bins)) {
    const double peak = *std::max_element(d.cdf.bins.begin(), d.cdf.bins.end());
    if (peak != 1.0) invalid("cdf", "maximum bin must equal 1");
  }

  const auto& g = d.globals;
  for (const auto v : g.to_array()) {
    if (!std::isfinite(v) || v < 0.0) invalid("globals", "values must be finite and nonnegative");
  }
  if (g.eccentricity > 1.0) invalid("globals.eccentricity", "must lie in [0, 1]");
  if (g.aspect_ratio < 1.0) invalid("globals.aspect_ratio", "must be >= 1");
  if (!(g.extent > 0.0 && g.extent <= 1.0)) invalid("globals.extent", "must lie in (0, 1]");
  if (!(g.solidity > 0.0 && g.solidity <= 1.0)) invalid("globals.solidity", "must lie in (0, 1]");
}

}  // namespace gridshape
