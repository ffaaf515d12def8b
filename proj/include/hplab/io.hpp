// JSON encoding of the lab's objects and the run configuration shared by the
// command-line front end. Exact values are rational strings; float values are
// decimal strings at the working precision, and documents that contain them
// carry "precision_bits".
#pragma once

#include "hplab/ode.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hplab {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "hplab.v1";

json to_json(const Rational& q);
json to_json(const QPoly& p);  // ascending coefficient strings
json to_json(const BigFloat& x);
json to_json(const BigComplex& z);  // {"re": "...", "im": "..."}
json to_json(const CPoly& p);
json to_json(const LinearODE<Rational>& ode);  // [[coeffs of Pi_0], [Pi_1], ...]
json to_json(const QFn& f);

Rational rational_from_json(const json& j);  // "p/q" or an integer
QPoly qpoly_from_json(const json& j);
// {"re": x, "im": y}, [x, y], a number, or the string "x,y"; parts may be
// numbers or decimal strings.
BigComplex complex_from_json(const json& j);
BigComplex parse_complex(const std::string& text);
LinearODE<Rational> ode_from_json(const json& j);
// {"branch_points": [...], "exponents": [...]} with rational strings.
QFn qfn_from_json(const json& j);

// Every field a subcommand may consume; unset optionals fall back to the
// subcommand's own defaults.
struct RunConfig {
  Rational alpha = Rational(1, 3);
  std::optional<int> n;
  std::vector<int> n_list;
  int s = 2;
  unsigned precision_bits = kDefaultPrecisionBits;
  std::optional<int> truncation_order;
  json tolerances = json::object();
  std::string output_path;  // empty: stdout
  std::string format = "json";
  json extra = json::object();  // subcommand-specific keys from the config file

  int max_n() const;
  // truncation_order >= (s+1) max(n) + s + 2, precision_bits >= 64, format
  // in {json, csv}, n >= 0. Throws InvalidArgument / TruncationTooShort.
  void validate() const;
  double tolerance(const std::string& key, double fallback) const;
};

// Keys: alpha, n, n_list, s, precision_bits, truncation_order, tolerances,
// output_path, format; anything else lands in `extra`.
RunConfig config_from_json(const json& j, RunConfig base = {});
json to_json(const RunConfig& c);

}  // namespace hplab
