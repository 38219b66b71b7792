#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ofplus/asymptotics.hpp"
#include "ofplus/deformation.hpp"
#include "ofplus/errors.hpp"
#include "ofplus/scalar.hpp"

namespace ofplus {

/// Entries of F given verbatim as scalar strings ("p/q", "a+bi", "sqrt(2)").
struct RawSpec {
  std::vector<std::vector<std::string>> entries;
};

struct GammaSpec {
  int k = 1;
  std::vector<Rational> rho;
  Rational gamma;
};

struct LargeRankSpec {
  int k = 1;
  std::vector<Rational> lambda;
};

using FSpec = std::variant<CanonicalSpec, RawSpec, GammaSpec, LargeRankSpec>;

namespace detail {

inline std::string scalar_text(const nlohmann::json& v, const std::string& what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError(what + " must be a string like \"p/q\" or an integer");
}

inline const nlohmann::json& field(const nlohmann::json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(std::string("missing field \"") + name + "\"");
  return *it;
}

inline int int_field(const nlohmann::json& obj, const char* name) {
  const auto& v = field(obj, name);
  if (!v.is_number_integer()) throw ParseError(std::string("field \"") + name + "\" must be an integer");
  return v.get<int>();
}

inline std::vector<Rational> rational_list(const nlohmann::json& obj, const char* name) {
  const auto& v = field(obj, name);
  if (!v.is_array()) throw ParseError(std::string("field \"") + name + "\" must be an array");
  std::vector<Rational> out;
  for (const auto& x : v) out.push_back(parse_rational(scalar_text(x, name)));
  return out;
}

}  // namespace detail

/// Parses and validates an F specification. Syntax problems raise ParseError
/// (with the byte position for malformed JSON); violated invariants raise
/// DomainError naming the clause.
inline FSpec parse_f_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("F spec is not valid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("F spec must be a JSON object");
  const auto& type_v = detail::field(doc, "type");
  if (!type_v.is_string()) throw ParseError("field \"type\" must be a string");
  const auto type = type_v.get<std::string>();

  if (type == "canonical") {
    CanonicalSpec s;
    s.c = detail::int_field(doc, "c");
    s.k = detail::int_field(doc, "k");
    s.rho = detail::rational_list(doc, "rho");
    s.n = detail::int_field(doc, "n");
    s.check();
    return s;
  }
  if (type == "raw") {
    RawSpec s;
    const auto& rows = detail::field(doc, "entries");
    if (!rows.is_array() || rows.empty()) throw ParseError("\"entries\" must be a non-empty array of rows");
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != rows.size()) throw ParseError("\"entries\" must be a square grid");
      auto& out = s.entries.emplace_back();
      for (const auto& x : row) out.push_back(detail::scalar_text(x, "entry"));
    }
    return s;
  }
  if (type == "gamma") {
    GammaSpec s;
    s.k = detail::int_field(doc, "k");
    s.rho = detail::rational_list(doc, "rho");
    s.gamma = parse_rational(detail::scalar_text(detail::field(doc, "gamma"), "gamma"));
    return s;
  }
  if (type == "large-rank") {
    LargeRankSpec s;
    s.k = detail::int_field(doc, "k");
    s.lambda = detail::rational_list(doc, "lambda");
    return s;
  }
  throw ParseError("unknown F type \"" + type + "\" (expected canonical, raw, gamma or large-rank)");
}

/// Builds and validates the matrix described by spec.
template <class T>
FMatrix<T> build_f(const FSpec& spec) {
  using R = typename T::real_type;
  return std::visit(
      [](const auto& s) -> FMatrix<T> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, CanonicalSpec>) {
          return build_canonical<T>(s);
        } else if constexpr (std::is_same_v<S, RawSpec>) {
          const std::size_t n = s.entries.size();
          Matrix<T> m(n, n);
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) m(r, c) = parse_scalar<R>(s.entries[r][c]);
          return FMatrix<T>::validate(std::move(m));
        } else if constexpr (std::is_same_v<S, GammaSpec>) {
          return build_gamma<T>(s.k, s.rho, s.gamma);
        } else {
          return build_large_rank<T>(s.k, s.lambda);
        }
      },
      spec);
}

}  // namespace ofplus
