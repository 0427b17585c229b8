#pragma once

// Braid-word text format.
//
//   word    := ws* ( letter ( ws+ letter )* )? ws*
//   letter  := "s" integer ( "^-1" )?
//   integer := [1-9][0-9]*
//   ws      := " " | "\t"
//
// Letters act left to right: the leftmost letter is applied to the state first.
// Script files hold one word per line; "#" starts a comment that runs to the end
// of the line, and blank lines are skipped.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mzm::braid {

struct BraidLetter {
  int site = 1;
  bool inverse = false;

  friend bool operator==(const BraidLetter&, const BraidLetter&) = default;
};

struct BraidWord {
  std::vector<BraidLetter> letters;

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }
  int max_site() const {
    int m = 0;
    for (const auto& l : letters) m = std::max(m, l.site);
    return m;
  }

  friend bool operator==(const BraidWord&, const BraidWord&) = default;
};

class BraidSyntaxError : public std::runtime_error {
 public:
  BraidSyntaxError(const std::string& what, std::size_t offset, std::size_t line = 0)
      : std::runtime_error(what + " at offset " + std::to_string(offset) +
                           (line ? " (line " + std::to_string(line) + ")" : std::string())),
        reason_(what),
        offset_(offset),
        line_(line) {}

  const std::string& reason() const { return reason_; }

  /// 0-based character offset within the word (or line) being parsed.
  std::size_t offset() const { return offset_; }
  /// 1-based script line, 0 when parsing a single word.
  std::size_t line() const { return line_; }

 private:
  std::string reason_;
  std::size_t offset_;
  std::size_t line_;
};

namespace detail {

inline bool is_ws(char c) { return c == ' ' || c == '\t'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace detail

inline BraidWord parse_braid_word(std::string_view text) {
  BraidWord word;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n && detail::is_ws(text[i])) ++i;

  while (i < n) {
    const std::size_t start = i;
    if (text[i] != 's') throw BraidSyntaxError("expected 's'", i);
    ++i;
    if (i >= n || !detail::is_digit(text[i])) throw BraidSyntaxError("expected site number after 's'", i);
    // Site 0 and leading zeros are not part of the grammar; report at the letter.
    if (text[i] == '0') throw BraidSyntaxError("site numbers start at 1", start);
    const std::size_t digits = i;
    while (i < n && detail::is_digit(text[i])) ++i;

    int site = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + digits, text.data() + i, site);
    if (ec == std::errc::result_out_of_range) throw BraidSyntaxError("site number overflows", start);
    if (ec != std::errc() || ptr != text.data() + i) throw BraidSyntaxError("malformed site number", digits);

    bool inverse = false;
    if (i < n && text[i] == '^') {
      if (text.substr(i, 3) != "^-1") throw BraidSyntaxError("expected '^-1'", i);
      inverse = true;
      i += 3;
    }
    word.letters.push_back({site, inverse});

    if (i == n) break;
    if (!detail::is_ws(text[i])) throw BraidSyntaxError("expected whitespace between letters", i);
    while (i < n && detail::is_ws(text[i])) ++i;
  }
  return word;
}

/// Canonical form: letters separated by single spaces, no padding.
inline std::string format_braid_word(const BraidWord& word) {
  std::string out;
  for (std::size_t k = 0; k < word.letters.size(); ++k) {
    if (k) out += ' ';
    out += 's';
    out += std::to_string(word.letters[k].site);
    if (word.letters[k].inverse) out += "^-1";
  }
  return out;
}

/// Cancels adjacent s_i s_i^-1 and s_i^-1 s_i pairs until none remain. Only
/// the free-group axioms are used, never braid relations.
inline BraidWord free_reduce(const BraidWord& word) {
  BraidWord out;
  for (const auto& l : word.letters) {
    if (!out.letters.empty() && out.letters.back().site == l.site && out.letters.back().inverse != l.inverse)
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

/// Inverse word: reversed order, each letter inverted.
inline BraidWord inverse(const BraidWord& word) {
  BraidWord out;
  out.letters.assign(word.letters.rbegin(), word.letters.rend());
  for (auto& l : out.letters) l.inverse = !l.inverse;
  return out;
}

/// Parses a script: one word per line, '#' comments, blank lines ignored.
inline std::vector<BraidWord> parse_braid_script(std::string_view text) {
  std::vector<BraidWord> words;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool blank = true;
    for (char c : line) blank = blank && detail::is_ws(c);
    if (!blank) {
      try {
        words.push_back(parse_braid_word(line));
      } catch (const BraidSyntaxError& e) {
        throw BraidSyntaxError(e.reason(), e.offset(), line_no);
      }
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return words;
}

/// Concatenates words in order (text order is time order).
inline BraidWord concatenate(const std::vector<BraidWord>& words) {
  BraidWord out;
  for (const auto& w : words) out.letters.insert(out.letters.end(), w.letters.begin(), w.letters.end());
  return out;
}

}  // namespace mzm::braid
