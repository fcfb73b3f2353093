#include "gramfiber/monomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "gramfiber/errors.hpp"

namespace gramfiber {

namespace {

void enumerate_graded_lex(int n, int d, Exponent& cur, int pos,
                          std::vector<Exponent>& out) {
  if (pos == n - 1) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int e = d; e >= 0; --e) {
    cur[pos] = e;
    enumerate_graded_lex(n, d - e, cur, pos + 1, out);
  }
  cur[pos] = 0;
}

}  // namespace

MonomialOrder::MonomialOrder(int n, int d) : n_(n), d_(d) {
  if (n < 1 || d < 0) throw DimensionError("MonomialOrder: need n >= 1, d >= 0");
  if (n == 3 && d == 2) {
    // Pure powers first, then xy, xz, yz.
    exponents_ = {{2, 0, 0}, {0, 2, 0}, {0, 0, 2},
                  {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
    return;
  }
  Exponent cur(n, 0);
  enumerate_graded_lex(n, d, cur, 0, exponents_);
}

int MonomialOrder::index_of(const Exponent& e) const {
  for (int i = 0; i < size(); ++i)
    if (exponents_[i] == e) return i;
  return -1;
}

std::string MonomialOrder::monomial_name(int i) const {
  static const char* names[3] = {"x", "y", "z"};
  const Exponent& e = exponents_[i];
  std::string s;
  for (int v = 0; v < n_; ++v) {
    if (e[v] == 0) continue;
    if (!s.empty()) s += "*";
    s += (v < 3) ? names[v] : ("x" + std::to_string(v + 1));
    if (e[v] > 1) s += "^" + std::to_string(e[v]);
  }
  return s.empty() ? "1" : s;
}

Form::Form(MonomialOrder o, std::vector<double> c)
    : order(std::move(o)), coeffs(std::move(c)) {
  if (static_cast<int>(coeffs.size()) != order.size())
    throw DimensionError("Form: coefficient count does not match order length");
}

Form::Form(MonomialOrder o) : order(std::move(o)) {
  coeffs.assign(order.size(), 0.0);
}

double Form::norm() const {
  double s = 0;
  for (double c : coeffs) s += c * c;
  return std::sqrt(s);
}

double Form::eval(const std::vector<double>& x) const {
  double acc = 0;
  for (int i = 0; i < order.size(); ++i) {
    if (coeffs[i] == 0) continue;
    double m = coeffs[i];
    const Exponent& e = order.exponent(i);
    for (int v = 0; v < order.n(); ++v)
      for (int k = 0; k < e[v]; ++k) m *= x[v];
    acc += m;
  }
  return acc;
}

MonomialOrder monomial_basis(int n, int d) { return MonomialOrder(n, d); }

Form multiply(const Form& f, const Form& g) {
  if (f.order.n() != g.order.n())
    throw DimensionError("multiply: variable counts differ");
  MonomialOrder oout(f.order.n(), f.order.d() + g.order.d());
  return Form(oout,
              multiply_coeffs(f.order, f.coeffs, g.order, g.coeffs, oout));
}

Form form_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  int n = j.at("n").get<int>();
  int d = j.at("d").get<int>();
  Form f((MonomialOrder(n, d)));
  if (j.contains("coeffs")) {
    for (auto& [key, val] : j.at("coeffs").items()) {
      if (static_cast<int>(key.size()) != n)
        throw DimensionError("form_from_json: exponent key '" + key +
                             "' has wrong length");
      Exponent e(n);
      int deg = 0;
      for (int v = 0; v < n; ++v) {
        if (key[v] < '0' || key[v] > '9')
          throw DimensionError("form_from_json: bad exponent key '" + key + "'");
        e[v] = key[v] - '0';
        deg += e[v];
      }
      if (deg != d)
        throw DimensionError("form_from_json: key '" + key +
                             "' does not have degree d");
      f.coeffs[f.order.index_of(e)] = val.get<double>();
    }
  }
  return f;
}

std::string form_to_json(const Form& f) {
  nlohmann::ordered_json j;
  j["n"] = f.order.n();
  j["d"] = f.order.d();
  nlohmann::ordered_json c = nlohmann::ordered_json::object();
  for (int i = 0; i < f.order.size(); ++i) {
    if (f.coeffs[i] == 0) continue;
    std::string key;
    for (int v = 0; v < f.order.n(); ++v)
      key += static_cast<char>('0' + f.order.exponent(i)[v]);
    c[key] = f.coeffs[i];
  }
  j["coeffs"] = c;
  return j.dump();
}

}  // namespace gramfiber
