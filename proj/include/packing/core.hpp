#ifndef PACKING_CORE_HPP
#define PACKING_CORE_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace packing {

/// A finite word over the alphabet {1..k}.
class Word {
 public:
  Word() = default;
  /// Throws std::invalid_argument if a letter lies outside 1..alphabet.
  Word(std::vector<int> letters, int alphabet);
  /// Alphabet taken as the largest letter (at least 1).
  explicit Word(std::vector<int> letters);

  const std::vector<int>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  int alphabet() const { return alphabet_; }
  int operator[](std::size_t i) const { return letters_[i]; }

  /// Multiplicity n_i of every letter i in 1..alphabet (index 0 unused).
  std::vector<std::size_t> multiplicities() const;
  /// Number of distinct letters used.
  int distinct() const;

  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend auto operator<=>(const Word& a, const Word& b) { return a.letters_ <=> b.letters_; }

 private:
  std::vector<int> letters_;
  int alphabet_ = 1;
};

/// Canonical (flattened) pattern with gap-indexed hyphens.
///
/// Gap g (0-based, 0 <= g < m-1) sits between letters g and g+1. A hyphen in
/// that gap means the two letters need not be adjacent in an occurrence; no
/// hyphen means they must be. A classical pattern has every gap hyphenated.
class Pattern {
 public:
  Pattern() = default;
  /// Letters are flattened on construction. `hyphens` must have m-1 entries.
  Pattern(std::span<const int> letters, std::vector<bool> hyphens);

  static Pattern classical(std::span<const int> letters);
  static Pattern subword(std::span<const int> letters);

  const std::vector<int>& letters() const { return letters_; }
  const std::vector<bool>& hyphens() const { return hyphens_; }
  std::size_t size() const { return letters_.size(); }
  int distinct() const { return distinct_; }
  int operator[](std::size_t i) const { return letters_[i]; }

  /// Number of blocks of consecutive letters (hyphens + 1).
  int blocks() const;
  /// Lengths of the blocks, left to right.
  std::vector<int> block_lengths() const;

  bool is_classical() const;
  bool is_subword() const;
  bool is_permutation() const { return distinct_ == static_cast<int>(letters_.size()); }
  bool is_nondecreasing() const;
  bool is_constant() const { return distinct_ == 1; }

  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern& a, const Pattern& b) {
    if (auto c = a.letters_ <=> b.letters_; c != 0) return c;
    return a.hyphens_ <=> b.hyphens_;
  }

 private:
  std::vector<int> letters_;
  std::vector<bool> hyphens_;
  int distinct_ = 0;
};

/// Relabels a sequence onto {1..l} preserving every <, =, > relation.
/// Throws std::invalid_argument on empty input.
std::vector<int> flatten(std::span<const int> letters);

/// Canonical word of a word (same letters relabelled onto {1..d}).
Word flatten(const Word& w);

Pattern reverse(const Pattern& p);
Pattern complement(const Pattern& p);
/// Permutation inverse; requires a classical permutation pattern.
Pattern inverse(const Pattern& p);

Word reverse(const Word& w);
/// Complement relative to the word's declared alphabet: i -> k - i + 1.
Word complement(const Word& w);

/// Closure under reverse and complement (and inverse if requested), sorted.
std::vector<Pattern> symmetry_class(const Pattern& p, bool use_inverse = false);

enum class LayerKind { Decreasing, Constant, Mixed };

struct Layer {
  int length = 0;
  /// A single letter is reported as Decreasing; it is also trivially constant.
  LayerKind kind = LayerKind::Decreasing;
};

/// Layer lengths [m_1, ..., m_r] of a layered word or permutation.
class LayeredShape {
 public:
  LayeredShape() = default;
  /// Throws std::invalid_argument on an empty shape or a non-positive length.
  explicit LayeredShape(std::vector<int> lengths);

  const std::vector<int>& lengths() const { return lengths_; }
  int layers() const { return static_cast<int>(lengths_.size()); }
  int total() const;
  int min_length() const;

  /// The layered permutation with these layer lengths.
  std::vector<int> permutation() const;

  friend bool operator==(const LayeredShape&, const LayeredShape&) = default;

 private:
  std::vector<int> lengths_;
};

struct LayeredDecomposition {
  LayeredShape shape;
  std::vector<Layer> layers;

  bool all_constant() const;
  bool all_decreasing() const;
  bool has_mixed() const;
};

/// Splits a word into its maximal non-increasing runs and returns them when
/// every run lies strictly below the next one. Letter values only; hyphens
/// are ignored.
std::optional<LayeredDecomposition> layered_decompose(const Pattern& p);
std::optional<LayeredDecomposition> layered_decompose(std::span<const int> letters);

/// Block multiplicities [a_1..a_l] of a nondecreasing pattern.
/// Throws std::invalid_argument for a pattern that is not nondecreasing.
std::vector<int> blocks(const Pattern& p);

struct ParsedPattern {
  Pattern pattern;
  /// Set when the input letters were not already {1..l} and got relabelled.
  bool recanonicalized = false;
};

/// Grammar: letters as single digits, or comma-separated integers when any
/// letter exceeds 9; '-' marks a hyphen gap ("1-3-2", "21-3", "112", "1,10,2").
/// A pattern without '-' is a subword pattern.
ParsedPattern parse_pattern(std::string_view text);

/// Command-line notation: a pattern written without any hyphen is classical,
/// the suffix "_g" marks a subword pattern ("132_g"), and anything with a
/// hyphen is read literally by parse_pattern.
ParsedPattern parse_pattern_notation(std::string_view text);

std::string format_pattern(const Pattern& p);
/// Inverse of parse_pattern_notation: classical patterns print without
/// hyphens, subword patterns carry "_g", the rest print as format_pattern.
std::string format_pattern_notation(const Pattern& p);

/// Words use the pattern grammar without hyphens. Alphabet defaults to the
/// largest letter.
Word parse_word(std::string_view text, int alphabet = 0);
std::string format_word(const Word& w);
std::string format_letters(std::span<const int> letters);

}  // namespace packing

#endif  // PACKING_CORE_HPP
