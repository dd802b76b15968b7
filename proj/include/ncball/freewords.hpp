#pragma once

// Free words over a finite alphabet {1..d}, their abelianized letter counts,
// and the exact combinatorial weights used by the Hardy-space code.
//
// Canonical order on words is degree-major, lexicographic within a degree.
// Every coefficient vector in the library is laid out in that order.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ncball {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

class Word {
 public:
  // The empty word over a one-letter alphabet. Prefer Word::empty(d).
  Word() : d_(1) {}

  // Letters are 1-based; throws std::invalid_argument if a letter is outside
  // [1, d] or d < 1.
  Word(int d, std::vector<int> letters);

  static Word empty(int d) { return Word(d, {}); }
  static Word letter(int d, int j) { return Word(d, {j}); }

  int alphabet_size() const { return d_; }
  std::size_t length() const { return letters_.size(); }
  bool is_empty() const { return letters_.empty(); }
  const std::vector<int>& letters() const { return letters_; }
  int operator[](std::size_t i) const { return letters_[i]; }

  // Concatenation; both words must share the alphabet.
  Word operator+(const Word& other) const;

  // Subword letters_[begin, end).
  Word slice(std::size_t begin, std::size_t end) const;

  // Digit string of letters, "e" for the empty word. Requires d <= 9.
  std::string to_string() const;
  static Word parse(std::string_view text, int d);

  friend bool operator==(const Word&, const Word&) = default;
  // Degree-major, then lexicographic on letters.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  int d_;
  std::vector<int> letters_;
};

class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> counts);

  int size() const { return static_cast<int>(counts_.size()); }
  int total() const;  // |alpha|
  const std::vector<int>& counts() const { return counts_; }
  int operator[](std::size_t j) const { return counts_[j]; }

  // alpha! = prod_j counts[j]!
  BigInt factorial() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend std::strong_ordering operator<=>(const MultiIndex& a,
                                          const MultiIndex& b);

 private:
  std::vector<int> counts_;
};

BigInt factorial(int k);
BigInt binomial(int n, int k);

// All d^k words of length k in lexicographic order.
std::vector<Word> enumerate_words(int d, int k);

// All words with length <= max_degree in canonical order.
std::vector<Word> enumerate_words_up_to(int d, int max_degree);

// Number of words of length <= max_degree, (d^{N+1}-1)/(d-1).
std::size_t count_words_up_to(int d, int max_degree);

// Position of w in enumerate_words(d, w.length()).
std::size_t lex_index(const Word& w);

// Position of w in enumerate_words_up_to(d, N) for any N >= |w|.
std::size_t canonical_index(const Word& w);

// All multi-indices with |alpha| = k, lexicographically descending on the
// first coordinate (the order in which sorted words appear).
std::vector<MultiIndex> enumerate_multi_indices(int d, int k);

MultiIndex multi_index(const Word& w);

// The word 1^{a_1} 2^{a_2} ... d^{a_d}.
Word sorted_word(const MultiIndex& alpha);

// |alpha|! / alpha!, the number of words sharing w's letter counts.
BigInt multinomial(const MultiIndex& alpha);
BigInt hardy_weight_exact(const Word& w);
double hardy_weight(const Word& w);

// C(k+d-1, d-1).
BigInt count_multi_indices(int d, int k);

// Distinct rearrangements of w, in lexicographic order.
std::vector<Word> permutations_of_word(const Word& w);

double to_double(const BigInt& x);
double to_double(const BigRational& x);

}  // namespace ncball
