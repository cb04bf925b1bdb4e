#include "packing/core.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <stdexcept>

namespace packing {

// ---------------------------------------------------------------------------
// Word

Word::Word(std::vector<int> letters, int alphabet) : letters_(std::move(letters)), alphabet_(alphabet) {
  if (alphabet_ < 1) throw std::invalid_argument("alphabet size must be positive");
  for (int x : letters_) {
    if (x < 1 || x > alphabet_) {
      throw std::invalid_argument("letter " + std::to_string(x) + " outside alphabet 1.." +
                                  std::to_string(alphabet_));
    }
  }
}

Word::Word(std::vector<int> letters)
    : Word(letters, std::max(1, letters.empty() ? 1 : *std::max_element(letters.begin(), letters.end()))) {}

std::vector<std::size_t> Word::multiplicities() const {
  std::vector<std::size_t> counts(alphabet_ + 1, 0);
  for (int x : letters_) ++counts[x];
  return counts;
}

int Word::distinct() const {
  auto counts = multiplicities();
  return static_cast<int>(std::count_if(counts.begin() + 1, counts.end(), [](std::size_t c) { return c > 0; }));
}

// ---------------------------------------------------------------------------
// Pattern

std::vector<int> flatten(std::span<const int> letters) {
  if (letters.empty()) throw std::invalid_argument("cannot flatten an empty sequence");
  std::vector<int> values(letters.begin(), letters.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<int> out;
  out.reserve(letters.size());
  for (int x : letters) {
    out.push_back(static_cast<int>(std::lower_bound(values.begin(), values.end(), x) - values.begin()) + 1);
  }
  return out;
}

Word flatten(const Word& w) {
  if (w.size() == 0) return w;
  auto letters = flatten(std::span<const int>(w.letters()));
  return Word(std::move(letters));
}

Pattern::Pattern(std::span<const int> letters, std::vector<bool> hyphens)
    : letters_(flatten(letters)), hyphens_(std::move(hyphens)) {
  if (hyphens_.size() + 1 != letters_.size()) {
    throw std::invalid_argument("pattern of length " + std::to_string(letters_.size()) + " needs " +
                                std::to_string(letters_.size() - 1) + " gap flags");
  }
  distinct_ = *std::max_element(letters_.begin(), letters_.end());
}

Pattern Pattern::classical(std::span<const int> letters) {
  return Pattern(letters, std::vector<bool>(letters.empty() ? 0 : letters.size() - 1, true));
}

Pattern Pattern::subword(std::span<const int> letters) {
  return Pattern(letters, std::vector<bool>(letters.empty() ? 0 : letters.size() - 1, false));
}

int Pattern::blocks() const {
  return 1 + static_cast<int>(std::count(hyphens_.begin(), hyphens_.end(), true));
}

std::vector<int> Pattern::block_lengths() const {
  std::vector<int> out{1};
  for (bool h : hyphens_) {
    if (h) out.push_back(1);
    else ++out.back();
  }
  return out;
}

bool Pattern::is_classical() const {
  return std::all_of(hyphens_.begin(), hyphens_.end(), [](bool h) { return h; });
}

bool Pattern::is_subword() const {
  return std::none_of(hyphens_.begin(), hyphens_.end(), [](bool h) { return h; });
}

bool Pattern::is_nondecreasing() const { return std::is_sorted(letters_.begin(), letters_.end()); }

// ---------------------------------------------------------------------------
// Symmetries

Pattern reverse(const Pattern& p) {
  std::vector<int> letters(p.letters().rbegin(), p.letters().rend());
  std::vector<bool> hyphens(p.hyphens().rbegin(), p.hyphens().rend());
  return Pattern(letters, std::move(hyphens));
}

Pattern complement(const Pattern& p) {
  std::vector<int> letters;
  letters.reserve(p.size());
  for (int x : p.letters()) letters.push_back(p.distinct() - x + 1);
  return Pattern(letters, p.hyphens());
}

Pattern inverse(const Pattern& p) {
  if (!p.is_permutation() || !p.is_classical()) {
    throw std::invalid_argument("inverse requires a classical permutation pattern");
  }
  std::vector<int> inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i] - 1] = static_cast<int>(i) + 1;
  return Pattern::classical(inv);
}

Word reverse(const Word& w) {
  return Word(std::vector<int>(w.letters().rbegin(), w.letters().rend()), w.alphabet());
}

Word complement(const Word& w) {
  std::vector<int> letters;
  letters.reserve(w.size());
  for (int x : w.letters()) letters.push_back(w.alphabet() - x + 1);
  return Word(std::move(letters), w.alphabet());
}

std::vector<Pattern> symmetry_class(const Pattern& p, bool use_inverse) {
  if (use_inverse && (!p.is_permutation() || !p.is_classical())) {
    throw std::invalid_argument("inverse symmetry requires a classical permutation pattern");
  }
  std::set<Pattern> seen{p};
  std::vector<Pattern> frontier{p};
  while (!frontier.empty()) {
    Pattern q = frontier.back();
    frontier.pop_back();
    std::vector<Pattern> images{reverse(q), complement(q)};
    if (use_inverse) images.push_back(inverse(q));
    for (auto& image : images) {
      if (seen.insert(image).second) frontier.push_back(std::move(image));
    }
  }
  return {seen.begin(), seen.end()};
}

// ---------------------------------------------------------------------------
// Layers and blocks

LayeredShape::LayeredShape(std::vector<int> lengths) : lengths_(std::move(lengths)) {
  if (lengths_.empty()) throw std::invalid_argument("layered shape needs at least one layer");
  for (int len : lengths_) {
    if (len < 1) throw std::invalid_argument("layer lengths must be positive");
  }
}

int LayeredShape::total() const {
  int sum = 0;
  for (int len : lengths_) sum += len;
  return sum;
}

int LayeredShape::min_length() const { return *std::min_element(lengths_.begin(), lengths_.end()); }

std::vector<int> LayeredShape::permutation() const {
  std::vector<int> out;
  out.reserve(total());
  int base = 0;
  for (int len : lengths_) {
    for (int i = len; i >= 1; --i) out.push_back(base + i);
    base += len;
  }
  return out;
}

bool LayeredDecomposition::all_constant() const {
  return std::all_of(layers.begin(), layers.end(),
                     [](const Layer& l) { return l.length == 1 || l.kind == LayerKind::Constant; });
}

bool LayeredDecomposition::all_decreasing() const {
  return std::all_of(layers.begin(), layers.end(), [](const Layer& l) { return l.kind == LayerKind::Decreasing; });
}

bool LayeredDecomposition::has_mixed() const {
  return std::any_of(layers.begin(), layers.end(), [](const Layer& l) { return l.kind == LayerKind::Mixed; });
}

std::optional<LayeredDecomposition> layered_decompose(std::span<const int> letters) {
  if (letters.empty()) return std::nullopt;
  // Layers are the maximal non-increasing runs; they must sit strictly above
  // one another.
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= letters.size(); ++i) {
    if (i == letters.size() || letters[i] > letters[i - 1]) {
      runs.emplace_back(start, i);
      start = i;
    }
  }
  LayeredDecomposition out;
  std::vector<int> lengths;
  int previous_max = 0;
  bool first = true;
  for (auto [b, e] : runs) {
    const int run_max = letters[b];
    const int run_min = letters[e - 1];
    if (!first && run_min <= previous_max) return std::nullopt;
    first = false;
    previous_max = run_max;

    bool strictly = true;
    bool constant = true;
    for (std::size_t i = b + 1; i < e; ++i) {
      if (letters[i] == letters[i - 1]) strictly = false;
      else constant = false;
    }
    Layer layer{static_cast<int>(e - b), LayerKind::Mixed};
    if (strictly) layer.kind = LayerKind::Decreasing;
    else if (constant) layer.kind = LayerKind::Constant;
    out.layers.push_back(layer);
    lengths.push_back(layer.length);
  }
  out.shape = LayeredShape(std::move(lengths));
  return out;
}

std::optional<LayeredDecomposition> layered_decompose(const Pattern& p) {
  return layered_decompose(std::span<const int>(p.letters()));
}

std::vector<int> blocks(const Pattern& p) {
  if (!p.is_nondecreasing()) throw std::invalid_argument("blocks: pattern is not nondecreasing");
  std::vector<int> out(p.distinct(), 0);
  for (int x : p.letters()) ++out[x - 1];
  return out;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

struct LetterTokens {
  std::vector<int> letters;
  std::vector<bool> hyphens;
};

int parse_int(std::string_view token, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || value < 1) {
    throw std::invalid_argument("malformed letter '" + std::string(token) + "' in \"" + std::string(whole) + "\"");
  }
  return value;
}

LetterTokens tokenize(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty pattern text");
  LetterTokens out;
  const bool comma_mode = text.find(',') != std::string_view::npos;
  bool pending_hyphen = false;
  if (comma_mode) {
    std::size_t i = 0;
    while (i <= text.size()) {
      std::size_t j = text.find_first_of(",-", i);
      if (j == std::string_view::npos) j = text.size();
      const int value = parse_int(text.substr(i, j - i), text);
      if (!out.letters.empty()) out.hyphens.push_back(pending_hyphen);
      out.letters.push_back(value);
      pending_hyphen = j < text.size() && text[j] == '-';
      i = j + 1;
      if (j == text.size()) break;
    }
    return out;
  }
  for (char c : text) {
    if (c == '-') {
      if (out.letters.empty() || pending_hyphen) {
        throw std::invalid_argument("misplaced '-' in \"" + std::string(text) + "\"");
      }
      pending_hyphen = true;
    } else if (c >= '1' && c <= '9') {
      if (!out.letters.empty()) out.hyphens.push_back(pending_hyphen);
      pending_hyphen = false;
      out.letters.push_back(c - '0');
    } else {
      throw std::invalid_argument("unexpected character '" + std::string(1, c) + "' in \"" + std::string(text) + "\"");
    }
  }
  if (pending_hyphen) throw std::invalid_argument("trailing '-' in \"" + std::string(text) + "\"");
  return out;
}

bool uses_digits_only(std::span<const int> letters) {
  return std::all_of(letters.begin(), letters.end(), [](int x) { return x <= 9; });
}

}  // namespace

ParsedPattern parse_pattern(std::string_view text) {
  auto tokens = tokenize(text);
  ParsedPattern out;
  out.pattern = Pattern(tokens.letters, tokens.hyphens);
  out.recanonicalized = out.pattern.letters() != tokens.letters;
  return out;
}

ParsedPattern parse_pattern_notation(std::string_view text) {
  if (text.size() > 2 && text.substr(text.size() - 2) == "_g") {
    auto parsed = parse_pattern(text.substr(0, text.size() - 2));
    if (!parsed.pattern.is_subword()) {
      throw std::invalid_argument("'_g' marks a subword pattern and cannot carry hyphens: \"" + std::string(text) + "\"");
    }
    return parsed;
  }
  auto parsed = parse_pattern(text);
  if (parsed.pattern.is_subword()) {
    parsed.pattern = Pattern::classical(parsed.pattern.letters());
  }
  return parsed;
}

std::string format_letters(std::span<const int> letters) {
  std::string out;
  const bool digits = uses_digits_only(letters);
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i > 0 && !digits) out += ',';
    out += std::to_string(letters[i]);
  }
  return out;
}

std::string format_pattern(const Pattern& p) {
  std::string out;
  const bool digits = uses_digits_only(p.letters());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) {
      if (p.hyphens()[i - 1]) out += '-';
      else if (!digits) out += ',';
    }
    out += std::to_string(p[i]);
  }
  return out;
}

std::string format_pattern_notation(const Pattern& p) {
  if (p.size() <= 1 || p.is_classical()) return format_letters(p.letters());
  if (p.is_subword()) return format_letters(p.letters()) + "_g";
  return format_pattern(p);
}

Word parse_word(std::string_view text, int alphabet) {
  if (text.empty()) return Word({}, std::max(alphabet, 1));
  auto tokens = tokenize(text);
  if (std::any_of(tokens.hyphens.begin(), tokens.hyphens.end(), [](bool h) { return h; })) {
    throw std::invalid_argument("words cannot contain '-': \"" + std::string(text) + "\"");
  }
  if (alphabet <= 0) return Word(std::move(tokens.letters));
  return Word(std::move(tokens.letters), alphabet);
}

std::string format_word(const Word& w) { return format_letters(w.letters()); }

}  // namespace packing
