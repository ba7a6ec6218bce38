#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "integer.hpp"
#include "lie.hpp"

namespace wtower {

/// Free group word: +i is x_i, -i is its inverse.
using GroupWord = std::vector<int>;

/// Truncated power series in noncommuting X_1..X_m: words of length <= N.
class MagnusSeries {
 public:
  MagnusSeries(int m, int truncation) : m_(m), n_(truncation) { coeffs_[Word{}] = 1; }

  int m() const { return m_; }
  int truncation() const { return n_; }
  const WordPoly& coefficients() const { return coeffs_; }

  Integer coefficient(const Word& w) const {
    auto it = coeffs_.find(w);
    return it == coeffs_.end() ? Integer(0) : it->second;
  }

  /// Homogeneous part of the given degree.
  WordPoly degree_part(int d) const {
    WordPoly p;
    for (const auto& [w, c] : coeffs_)
      if (static_cast<int>(w.size()) == d) p.emplace(w, c);
    return p;
  }

  /// this * (image of one letter)
  void multiply_letter(int letter) {
    const int i = letter > 0 ? letter : -letter;
    WordPoly out;
    for (const auto& [w, c] : coeffs_) {
      // x_i -> 1 + X_i;  x_i^-1 -> sum_j (-X_i)^j
      Word v = w;
      add_term(out, v, c);
      Integer s = letter > 0 ? Integer(1) : Integer(-1);
      for (int j = 1; static_cast<int>(w.size()) + j <= n_; ++j) {
        v.push_back(i);
        add_term(out, v, s * c);
        if (letter > 0) break;
        s = -s;
      }
    }
    coeffs_ = std::move(out);
  }

  std::string str() const {
    std::string s;
    for (const auto& [w, c] : coeffs_) {
      if (!s.empty()) s += " + ";
      s += signed_string(c) + "*" + word_string(w);
    }
    return s.empty() ? "0" : s;
  }

 private:
  static void add_term(WordPoly& p, const Word& w, const Integer& c) {
    auto [it, ins] = p.try_emplace(w, 0);
    it->second += c;
    if (it->second == 0) p.erase(it);
  }

  int m_;
  int n_;
  WordPoly coeffs_;
};

inline MagnusSeries magnus_expand(const GroupWord& w, int m, int truncation) {
  if (truncation < 0) throw Error(ErrorCode::invalid_argument, "truncation must be >= 0");
  MagnusSeries s(m, truncation);
  for (int l : w) {
    if (l == 0 || l > m || -l > m)
      throw Error(ErrorCode::label_out_of_range, "letter index outside 1.." + std::to_string(m));
    s.multiply_letter(l);
  }
  return s;
}

/// "x1 x2 X1 X2": lowercase generators, uppercase inverses.
inline GroupWord parse_group_word(std::string_view text, int m) {
  GroupWord w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    const char c = text[pos];
    if (c != 'x' && c != 'X') throw ParseError(ErrorCode::syntax, "expected letter x<i> or X<i>", pos);
    const std::size_t start = ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start || pos - start > 9) throw ParseError(ErrorCode::syntax, "expected letter index", start);
    const int i = std::stoi(std::string(text.substr(start, pos - start)));
    if (i < 1 || i > m)
      throw ParseError(ErrorCode::label_out_of_range, "letter index outside 1.." + std::to_string(m), start);
    w.push_back(c == 'x' ? i : -i);
  }
  return w;
}

inline std::string group_word_string(const GroupWord& w) {
  std::string s;
  for (int l : w) s += (s.empty() ? "" : " ") + std::string(l > 0 ? "x" : "X") + std::to_string(l > 0 ? l : -l);
  return s;
}

/// Longitude words w_1..w_m of an m-component link.
struct LongitudeData {
  int m = 0;
  std::vector<GroupWord> words;
};

/// First line "m = <int>", then one line "l<i>: <word>" per component.
/// Blank lines and lines starting with '#' are ignored.
inline LongitudeData parse_longitudes(std::string_view text) {
  LongitudeData data;
  std::vector<std::optional<GroupWord>> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t offset = 0;
  bool have_m = false;
  while (std::getline(in, line)) {
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    std::string body = line.substr(a);
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();
    if (!have_m) {
      const auto eq = body.find('=');
      std::string key = body.substr(0, eq == std::string::npos ? 0 : eq);
      while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
      if (eq == std::string::npos || key != "m")
        throw ParseError(ErrorCode::syntax, "first line must be 'm = <int>'", line_start + a);
      std::string val = body.substr(eq + 1);
      const auto v0 = val.find_first_not_of(' ');
      if (v0 == std::string::npos || val.find_first_not_of("0123456789 ", v0) != std::string::npos ||
          val.size() - v0 > 9)
        throw ParseError(ErrorCode::syntax, "component count must be a positive integer", line_start + a + eq + 1);
      data.m = std::stoi(val.substr(v0));
      if (data.m < 1) throw ParseError(ErrorCode::invalid_argument, "component count must be >= 1", line_start + a);
      seen.assign(static_cast<std::size_t>(data.m), std::nullopt);
      have_m = true;
      continue;
    }
    const auto colon = body.find(':');
    if (body[0] != 'l' || colon == std::string::npos || colon == 1 ||
        body.find_first_not_of("0123456789", 1) != colon)
      throw ParseError(ErrorCode::syntax, "expected 'l<i>: <word>'", line_start + a);
    const std::string idx = body.substr(1, colon - 1);
    const int i = idx.size() > 9 ? 0 : std::stoi(idx);
    if (i < 1 || i > data.m)
      throw ParseError(ErrorCode::label_out_of_range, "longitude index outside 1.." + std::to_string(data.m),
                       line_start + a + 1);
    if (seen[static_cast<std::size_t>(i - 1)])
      throw ParseError(ErrorCode::syntax, "longitude l" + idx + " given twice", line_start + a);
    try {
      seen[static_cast<std::size_t>(i - 1)] = parse_group_word(std::string_view(body).substr(colon + 1), data.m);
    } catch (const ParseError& e) {
      throw ParseError(e.code(), "in l" + idx + ": " + std::string(e.what()), line_start + a + colon + 1);
    }
  }
  if (!have_m) throw ParseError(ErrorCode::syntax, "missing 'm = <int>' line", 0);
  for (int i = 1; i <= data.m; ++i) {
    if (!seen[static_cast<std::size_t>(i - 1)])
      throw ParseError(ErrorCode::syntax, "missing longitude l" + std::to_string(i), text.size());
    data.words.push_back(*seen[static_cast<std::size_t>(i - 1)]);
  }
  return data;
}

// ---------------------------------------------------------------------------

/// One entry of the coefficient table: mu(I j) = coefficient of X_I in w_j.
struct MilnorEntry {
  Word indices;  // I followed by j
  Integer value;
};

struct MilnorResult {
  bool all_vanishing = false;
  int cap = 0;
  int n = -1;
  std::optional<TensorElement> value;
  std::vector<MilnorEntry> table;
};

inline std::string milnor_index_string(const Word& indices, int m) {
  std::string s;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (m >= 10 && i > 0) s += ",";
    s += std::to_string(indices[i]);
  }
  return s;
}

/// First non-vanishing (k-repeating) total Milnor invariant of the longitudes,
/// searching Magnus degrees 1..cap.
inline MilnorResult milnor_from_longitudes(const LongitudeData& data, int cap = 8,
                                           std::optional<int> k = std::nullopt) {
  if (cap < 1) throw Error(ErrorCode::invalid_argument, "truncation cap must be >= 1");
  if (k && *k < 1) throw Error(ErrorCode::invalid_argument, "multiplicity bound k must be >= 1");
  const int m = data.m;
  std::vector<MagnusSeries> series;
  for (const auto& w : data.words) series.push_back(magnus_expand(w, m, cap));

  MilnorResult out;
  out.cap = cap;
  for (int d = 1; d <= cap; ++d) {
    std::vector<WordPoly> parts;
    bool any = false;
    for (int j = 1; j <= m; ++j) {
      WordPoly p = series[static_cast<std::size_t>(j - 1)].degree_part(d);
      if (k) std::erase_if(p, [&](const auto& e) { return word_multiplicity(e.first, j) > *k; });
      any = any || !p.empty();
      parts.push_back(std::move(p));
    }
    if (!any) continue;
    TensorElement mu(m, d);
    for (int j = 1; j <= m; ++j) {
      const WordPoly& p = parts[static_cast<std::size_t>(j - 1)];
      mu.add(j, tensor_to_lie(p, m, d));
      for (const auto& [w, c] : p) {
        Word idx = w;
        idx.push_back(j);
        out.table.push_back({idx, c});
      }
    }
    std::sort(out.table.begin(), out.table.end(),
              [](const MilnorEntry& a, const MilnorEntry& b) { return a.indices < b.indices; });
    LieElement b = bracket_map(mu);
    if (k) b = k_project(b, *k);
    if (!b.is_zero()) throw Error(ErrorCode::bracket_nonzero, "longitude invariant is not in the bracket kernel");
    out.n = d - 1;
    out.value = std::move(mu);
    return out;
  }
  out.all_vanishing = true;
  return out;
}

}  // namespace wtower
