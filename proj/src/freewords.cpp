#include "ncball/freewords.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ncball {

Word::Word(int d, std::vector<int> letters) : d_(d), letters_(std::move(letters)) {
  if (d < 1) throw std::invalid_argument("Word: alphabet size must be >= 1");
  for (int a : letters_) {
    if (a < 1 || a > d)
      throw std::invalid_argument("Word: letter " + std::to_string(a) +
                                  " outside [1, " + std::to_string(d) + "]");
  }
}

Word Word::operator+(const Word& other) const {
  if (other.d_ != d_) throw std::invalid_argument("Word: alphabet mismatch");
  std::vector<int> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  Word w;
  w.d_ = d_;
  w.letters_ = std::move(out);
  return w;
}

Word Word::slice(std::size_t begin, std::size_t end) const {
  Word w;
  w.d_ = d_;
  w.letters_.assign(letters_.begin() + begin, letters_.begin() + end);
  return w;
}

std::string Word::to_string() const {
  if (d_ > 9) throw std::invalid_argument("Word: digit serialization needs d <= 9");
  if (letters_.empty()) return "e";
  std::string s;
  s.reserve(letters_.size());
  for (int a : letters_) s.push_back(static_cast<char>('0' + a));
  return s;
}

Word Word::parse(std::string_view text, int d) {
  if (text == "e") return Word::empty(d);
  if (text.empty()) throw std::invalid_argument("Word: empty string (use \"e\")");
  std::vector<int> letters;
  letters.reserve(text.size());
  for (char c : text) {
    if (c < '1' || c > '9')
      throw std::invalid_argument("Word: bad character in \"" + std::string(text) + "\"");
    letters.push_back(c - '0');
  }
  return Word(d, std::move(letters));
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (auto c = a.d_ <=> b.d_; c != 0) return c;
  if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
  return a.letters_ <=> b.letters_;
}

MultiIndex::MultiIndex(std::vector<int> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw std::invalid_argument("MultiIndex: d must be >= 1");
  for (int c : counts_)
    if (c < 0) throw std::invalid_argument("MultiIndex: negative count");
}

int MultiIndex::total() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }

BigInt MultiIndex::factorial() const {
  BigInt f = 1;
  for (int c : counts_) f *= ncball::factorial(c);
  return f;
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.counts_.size() <=> b.counts_.size(); c != 0) return c;
  if (auto c = a.total() <=> b.total(); c != 0) return c;
  // Descending counts so that the induced order follows sorted_word order.
  return b.counts_ <=> a.counts_;
}

BigInt factorial(int k) {
  if (k < 0) throw std::invalid_argument("factorial: negative argument");
  BigInt f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt b = 1;
  for (int i = 1; i <= k; ++i) {
    b *= n - k + i;
    b /= i;
  }
  return b;
}

std::vector<Word> enumerate_words(int d, int k) {
  if (d < 1 || k < 0) throw std::invalid_argument("enumerate_words: need d >= 1, k >= 0");
  std::vector<Word> out;
  std::vector<int> letters(static_cast<std::size_t>(k), 1);
  while (true) {
    out.emplace_back(d, letters);
    // Odometer increment, last letter fastest.
    int pos = k - 1;
    while (pos >= 0 && letters[pos] == d) {
      letters[pos] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++letters[pos];
  }
  return out;
}

std::vector<Word> enumerate_words_up_to(int d, int max_degree) {
  std::vector<Word> out;
  out.reserve(count_words_up_to(d, max_degree));
  for (int k = 0; k <= max_degree; ++k) {
    auto level = enumerate_words(d, k);
    out.insert(out.end(), std::make_move_iterator(level.begin()),
               std::make_move_iterator(level.end()));
  }
  return out;
}

std::size_t count_words_up_to(int d, int max_degree) {
  std::size_t total = 0, level = 1;
  for (int k = 0; k <= max_degree; ++k) {
    total += level;
    level *= static_cast<std::size_t>(d);
  }
  return total;
}

std::size_t lex_index(const Word& w) {
  std::size_t idx = 0;
  const auto d = static_cast<std::size_t>(w.alphabet_size());
  for (int a : w.letters()) idx = idx * d + static_cast<std::size_t>(a - 1);
  return idx;
}

std::size_t canonical_index(const Word& w) {
  const int k = static_cast<int>(w.length());
  return (k == 0 ? 0 : count_words_up_to(w.alphabet_size(), k - 1)) + lex_index(w);
}

namespace {

void fill_multi_indices(int d, int remaining, std::vector<int>& prefix,
                        std::vector<MultiIndex>& out) {
  if (static_cast<int>(prefix.size()) == d - 1) {
    prefix.push_back(remaining);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    prefix.push_back(c);
    fill_multi_indices(d, remaining - c, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(int d, int k) {
  if (d < 1 || k < 0) throw std::invalid_argument("enumerate_multi_indices: need d >= 1, k >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> prefix;
  fill_multi_indices(d, k, prefix, out);
  return out;
}

MultiIndex multi_index(const Word& w) {
  std::vector<int> counts(static_cast<std::size_t>(w.alphabet_size()), 0);
  for (int a : w.letters()) ++counts[static_cast<std::size_t>(a - 1)];
  return MultiIndex(std::move(counts));
}

Word sorted_word(const MultiIndex& alpha) {
  std::vector<int> letters;
  letters.reserve(static_cast<std::size_t>(alpha.total()));
  for (int j = 0; j < alpha.size(); ++j)
    letters.insert(letters.end(), static_cast<std::size_t>(alpha[j]), j + 1);
  return Word(alpha.size(), std::move(letters));
}

BigInt multinomial(const MultiIndex& alpha) {
  return factorial(alpha.total()) / alpha.factorial();
}

BigInt hardy_weight_exact(const Word& w) { return multinomial(multi_index(w)); }

double hardy_weight(const Word& w) { return to_double(hardy_weight_exact(w)); }

BigInt count_multi_indices(int d, int k) {
  if (d < 1 || k < 0) throw std::invalid_argument("count_multi_indices: need d >= 1, k >= 0");
  return binomial(k + d - 1, d - 1);
}

std::vector<Word> permutations_of_word(const Word& w) {
  std::vector<int> letters = w.letters();
  std::sort(letters.begin(), letters.end());
  std::vector<Word> out;
  do {
    out.emplace_back(w.alphabet_size(), letters);
  } while (std::next_permutation(letters.begin(), letters.end()));
  return out;
}

double to_double(const BigInt& x) { return x.convert_to<double>(); }

double to_double(const BigRational& x) { return x.convert_to<double>(); }

}  // namespace ncball
