#include "hsball/serialize.hpp"

#include <nlohmann/json.hpp>

namespace hsball {

using OrderedJson = nlohmann::ordered_json;

namespace {

const char* mode_name(QuadMode mode) {
  return mode == QuadMode::ExactMoments ? "exact_moments" : "monte_carlo";
}

}  // namespace

std::string to_json_string(const PolyFn& f) {
  OrderedJson doc;
  doc["n"] = f.n();
  doc["cap"] = f.cap();
  doc["truncated"] = f.truncated();
  OrderedJson terms = OrderedJson::array();
  for (const auto& [alpha, c] : f.terms()) {
    OrderedJson term;
    term["alpha"] = alpha;
    term["re"] = c.real();
    term["im"] = c.imag();
    terms.push_back(std::move(term));
  }
  doc["terms"] = std::move(terms);
  return doc.dump();
}

PolyFn polyfn_from_json_string(const std::string& text) {
  OrderedJson doc;
  try {
    doc = OrderedJson::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::InvalidParams, std::string("bad JSON: ") + e.what());
  }
  if (!doc.contains("n") || !doc.contains("cap") || !doc.contains("terms")) {
    fail(ErrorKind::InvalidParams, "polynomial JSON needs n, cap, terms");
  }
  PolyFn f(doc["n"].get<int>(), doc["cap"].get<int>());
  for (const auto& term : doc["terms"]) {
    const MultiIndex alpha = term["alpha"].get<MultiIndex>();
    f.set_coeff(alpha,
                Complex(term["re"].get<double>(), term["im"].get<double>()));
  }
  if (doc.contains("truncated")) {
    f.set_truncated(doc["truncated"].get<bool>());
  }
  return f;
}

std::string to_json_string(const NormReport& report) {
  OrderedJson doc;
  doc["value"] = report.value;
  doc["stderr"] = report.stderrEst;
  doc["mode"] = mode_name(report.mode);
  doc["per_j"] = report.perJ;
  return doc.dump();
}

}  // namespace hsball
