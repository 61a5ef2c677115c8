#include "sgt/sym/symbol_io.hpp"

#include <fstream>
#include <set>

namespace sgt {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("symbol file: " + msg);
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      fail(std::string("unknown key \"") + it.key() + "\" in " + where);
}

cplx read_power(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  if (v.is_object()) {
    check_keys(v, {"re", "im"}, key);
    return cplx(v.value("re", 0.0), v.value("im", 0.0));
  }
  fail(std::string(key) + " must be a number or {re, im}");
}

Poly read_monomials(const json& v, int n, const char* key) {
  if (!v.is_array() || v.empty())
    fail(std::string(key) + " must be a non-empty array");
  Poly p;
  for (const json& row : v) {
    if (!row.is_array() || static_cast<int>(row.size()) != n + 2)
      fail(std::string(key) + " rows must hold " + std::to_string(n) +
           " exponents followed by re, im");
    MIdx a{0, 0, 0};
    for (int i = 0; i < n; ++i) {
      if (!row[i].is_number_integer() || row[i].get<int>() < 0)
        fail(std::string(key) + " exponents must be non-negative integers");
      a[i] = row[i].get<int>();
    }
    p[a] += cplx(row[n].get<double>(), row[n + 1].get<double>());
  }
  return p;
}

}  // namespace

StructuredSymbol symbol_from_json(const json& j) {
  if (!j.is_object()) fail("top level must be an object");
  check_keys(j, {"n", "terms"}, "top level");
  const int n = j.at("n").get<int>();
  if (n < 1 || n > kMaxDim) fail("n must be 1, 2, or 3");
  StructuredSymbol s(n);
  if (!j.at("terms").is_array()) fail("terms must be an array");
  for (const json& tj : j.at("terms")) {
    check_keys(tj,
               {"coeff_re", "coeff_im", "x_monomials", "x_weight_power",
                "xi_monomials", "xi_weight_power", "weight_kind"},
               "term");
    SymbolTerm t;
    t.coeff = cplx(tj.value("coeff_re", 1.0), tj.value("coeff_im", 0.0));
    const std::string kind = tj.value("weight_kind", std::string("bracket"));
    if (kind != "bracket" && kind != "smoothed")
      fail("weight_kind must be \"bracket\" or \"smoothed\"");
    t.fx = VarFactor::one();
    t.fxi = VarFactor::one();
    if (tj.contains("x_monomials"))
      t.fx.poly = read_monomials(tj.at("x_monomials"), n, "x_monomials");
    if (tj.contains("xi_monomials"))
      t.fxi.poly = read_monomials(tj.at("xi_monomials"), n, "xi_monomials");
    if (tj.contains("x_weight_power")) {
      const cplx p = read_power(tj, "x_weight_power");
      (kind == "bracket" ? t.fx.bpow : t.fx.spow) = p;
    }
    if (tj.contains("xi_weight_power")) {
      const cplx p = read_power(tj, "xi_weight_power");
      (kind == "bracket" ? t.fxi.bpow : t.fxi.spow) = p;
    }
    s.terms.push_back(std::move(t));
  }
  s.normalize();
  return s;
}

StructuredSymbol symbol_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(std::string("parse error in ") + path + ": " + e.what());
  }
  return symbol_from_json(j);
}

nlohmann::json symbol_to_json(const StructuredSymbol& a) {
  json j;
  j["n"] = a.n;
  j["terms"] = json::array();
  for (const SymbolTerm& t : a.terms) {
    json tj;
    tj["coeff_re"] = t.coeff.real();
    tj["coeff_im"] = t.coeff.imag();
    auto dump_side = [&](const VarFactor& f, const char* mono_key,
                         const char* pow_key) {
      if (!(f.poly.size() == 1 && f.poly.count(MIdx{0, 0, 0}) &&
            near_zero(f.poly.at(MIdx{0, 0, 0}) - cplx(1.0)))) {
        json rows = json::array();
        for (const auto& [ai, ac] : f.poly) {
          json row = json::array();
          for (int i = 0; i < a.n; ++i) row.push_back(ai[i]);
          row.push_back(ac.real());
          row.push_back(ac.imag());
          rows.push_back(std::move(row));
        }
        tj[mono_key] = std::move(rows);
      }
      const cplx p = f.bpow != cplx(0.0) ? f.bpow : f.spow;
      if (p != cplx(0.0)) tj[pow_key] = {{"re", p.real()}, {"im", p.imag()}};
    };
    dump_side(t.fx, "x_monomials", "x_weight_power");
    dump_side(t.fxi, "xi_monomials", "xi_weight_power");
    bool smoothed = t.fx.spow != cplx(0.0) || t.fxi.spow != cplx(0.0);
    if (smoothed) tj["weight_kind"] = "smoothed";
    j["terms"].push_back(std::move(tj));
  }
  return j;
}

}  // namespace sgt
