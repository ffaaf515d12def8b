#include "hplab/io.hpp"

#include <algorithm>

namespace hplab {

namespace {

int float_digits() { return static_cast<int>(precision_digits10()); }

BigFloat bigfloat_from_json(const json& j) {
  if (j.is_number_integer()) return BigFloat(j.get<long long>());
  if (j.is_number()) return BigFloat(j.get<double>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.find('/') != std::string::npos) return to_bigfloat(parse_rational(s));
    try {
      return BigFloat(s);
    } catch (const std::exception&) {
      throw InvalidArgument("not a number: '" + s + "'");
    }
  }
  throw InvalidArgument("expected a number, got " + j.dump());
}

}  // namespace

json to_json(const Rational& q) { return to_string(q); }

json to_json(const QPoly& p) { return coeff_strings(p); }

json to_json(const BigFloat& x) { return to_string(x, float_digits()); }

json to_json(const BigComplex& z) {
  return {{"re", to_json(BigFloat(z.real()))}, {"im", to_json(BigFloat(z.imag()))}};
}

json to_json(const CPoly& p) {
  json a = json::array();
  for (const auto& c : p.coeffs()) a.push_back(to_json(c));
  return a;
}

json to_json(const LinearODE<Rational>& ode) {
  json a = json::array();
  for (const auto& c : ode.coeffs) a.push_back(to_json(c));
  return a;
}

json to_json(const QFn& f) {
  json b = json::array(), e = json::array();
  for (const auto& x : f.branch_points()) b.push_back(to_json(x));
  for (const auto& x : f.exponents()) e.push_back(to_json(x));
  return {{"branch_points", b}, {"exponents", e}};
}

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw InvalidArgument(e.what());
    }
  }
  throw InvalidArgument("expected a rational string, got " + j.dump());
}

QPoly qpoly_from_json(const json& j) {
  if (!j.is_array()) throw InvalidArgument("polynomial must be an array of coefficients");
  std::vector<Rational> c;
  for (const auto& x : j) c.push_back(rational_from_json(x));
  return QPoly(std::move(c));
}

BigComplex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return make_complex(bigfloat_from_json(text), BigFloat(0));
  return make_complex(bigfloat_from_json(text.substr(0, comma)), bigfloat_from_json(text.substr(comma + 1)));
}

BigComplex complex_from_json(const json& j) {
  if (j.is_object()) {
    if (!j.contains("re")) throw InvalidArgument("complex object needs \"re\"");
    return make_complex(bigfloat_from_json(j.at("re")), j.contains("im") ? bigfloat_from_json(j.at("im")) : BigFloat(0));
  }
  if (j.is_array()) {
    if (j.size() != 2) throw InvalidArgument("complex pair must have two entries");
    return make_complex(bigfloat_from_json(j[0]), bigfloat_from_json(j[1]));
  }
  if (j.is_string()) return parse_complex(j.get<std::string>());
  return make_complex(bigfloat_from_json(j), BigFloat(0));
}

LinearODE<Rational> ode_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("ODE must be a nonempty array of coefficient arrays");
  LinearODE<Rational> ode;
  for (const auto& c : j) ode.coeffs.push_back(qpoly_from_json(c));
  return ode;
}

QFn qfn_from_json(const json& j) {
  if (!j.contains("branch_points") || !j.contains("exponents"))
    throw InvalidArgument("function descriptor needs branch_points and exponents");
  std::vector<Rational> a, e;
  for (const auto& x : j.at("branch_points")) a.push_back(rational_from_json(x));
  for (const auto& x : j.at("exponents")) e.push_back(rational_from_json(x));
  return QFn(std::move(a), std::move(e));
}

int RunConfig::max_n() const {
  int m = n.value_or(0);
  for (int v : n_list) m = std::max(m, v);
  return m;
}

void RunConfig::validate() const {
  if (precision_bits < kMinPrecisionBits)
    throw InvalidArgument("precision_bits must be >= " + std::to_string(kMinPrecisionBits));
  if (s < 1) throw InvalidArgument("s must be >= 1");
  if (n && *n < 0) throw InvalidArgument("n must be >= 0");
  for (int v : n_list)
    if (v < 0) throw InvalidArgument("n_list entries must be >= 0");
  if (format != "json" && format != "csv") throw InvalidArgument("format must be json or csv");
  if (truncation_order) {
    const int need = (s + 1) * max_n() + s + 2;
    if (*truncation_order < need)
      throw TruncationTooShort("truncation_order " + std::to_string(*truncation_order) + " < (s+1) max(n) + s + 2 = " +
                               std::to_string(need));
  }
}

double RunConfig::tolerance(const std::string& key, double fallback) const {
  if (tolerances.contains(key)) return tolerances.at(key).get<double>();
  return fallback;
}

RunConfig config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) throw InvalidArgument("config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "alpha") {
        c.alpha = rational_from_json(v);
      } else if (key == "n") {
        c.n = v.get<int>();
      } else if (key == "n_list") {
        c.n_list = v.get<std::vector<int>>();
      } else if (key == "s") {
        c.s = v.get<int>();
      } else if (key == "precision_bits") {
        c.precision_bits = v.get<unsigned>();
      } else if (key == "truncation_order") {
        c.truncation_order = v.get<int>();
      } else if (key == "tolerances") {
        if (!v.is_object()) throw InvalidArgument("tolerances must be an object");
        c.tolerances = v;
      } else if (key == "output_path") {
        c.output_path = v.get<std::string>();
      } else if (key == "format") {
        c.format = v.get<std::string>();
      } else {
        c.extra[key] = v;
      }
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return c;
}

json to_json(const RunConfig& c) {
  json j = {{"alpha", to_json(c.alpha)},
            {"s", c.s},
            {"precision_bits", c.precision_bits},
            {"format", c.format},
            {"tolerances", c.tolerances}};
  if (c.n) j["n"] = *c.n;
  if (!c.n_list.empty()) j["n_list"] = c.n_list;
  if (c.truncation_order) j["truncation_order"] = *c.truncation_order;
  return j;
}

}  // namespace hplab
