#include <catch_amalgamated.hpp>

#include <set>

#include "ncball/freewords.hpp"

using namespace ncball;

namespace {
Word w2(const char* s) { return Word::parse(s, 2); }
}  // namespace

TEST_CASE("enumerate_words lists words lexicographically") {
  auto e = enumerate_words(2, 0);
  REQUIRE(e.size() == 1);
  CHECK(e[0].is_empty());

  auto k2 = enumerate_words(2, 2);
  REQUIRE(k2.size() == 4);
  CHECK(k2[0] == w2("11"));
  CHECK(k2[1] == w2("12"));
  CHECK(k2[2] == w2("21"));
  CHECK(k2[3] == w2("22"));

  CHECK(enumerate_words(3, 4).size() == 81);
}

TEST_CASE("canonical order is degree-major") {
  auto all = enumerate_words_up_to(2, 3);
  REQUIRE(all.size() == count_words_up_to(2, 3));
  CHECK(all.size() == 15);
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(canonical_index(all[i]) == i);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(Word::parse("22", 2) < Word::parse("111", 2));
  CHECK(lex_index(w2("21")) == 2);
}

TEST_CASE("words parse and print") {
  CHECK(Word::empty(2).to_string() == "e");
  CHECK(Word::parse("e", 3).is_empty());
  CHECK(w2("1212").to_string() == "1212");
  CHECK_THROWS_AS(Word::parse("13", 2), std::invalid_argument);
  CHECK_THROWS_AS(Word(2, {0}), std::invalid_argument);
  CHECK((w2("12") + w2("2")) == w2("122"));
  CHECK(w2("1221").slice(1, 3) == w2("22"));
}

TEST_CASE("multi_index counts letters") {
  CHECK(multi_index(Word::empty(2)).counts() == std::vector<int>{0, 0});
  CHECK(multi_index(w2("211")).counts() == std::vector<int>{2, 1});
  CHECK(multi_index(w2("1212")).counts() == std::vector<int>{2, 2});
  CHECK(sorted_word(MultiIndex({2, 1})) == w2("112"));
}

TEST_CASE("hardy weights are multinomials") {
  CHECK(hardy_weight_exact(Word::empty(2)) == 1);
  CHECK(hardy_weight_exact(w2("211")) == 3);
  CHECK(hardy_weight(w2("12")) == 2.0);
  Word power = Word::empty(2);
  for (int k = 0; k <= 30; ++k) {
    CHECK(hardy_weight_exact(Word::letter(2, 2) + power) == k + 1);
    power = power + Word::letter(2, 1);
  }
  // 20!/(10! 10!)
  Word big = Word::empty(2);
  for (int i = 0; i < 10; ++i) big = big + w2("12");
  CHECK(hardy_weight_exact(big) == BigInt(184756));
}

TEST_CASE("multi-index counts") {
  CHECK(count_multi_indices(2, 3) == 4);
  CHECK(count_multi_indices(1, 7) == 1);
  CHECK(count_multi_indices(3, 5) == 21);
  CHECK(enumerate_multi_indices(3, 5).size() == 21);
  for (int k = 0; k < 6; ++k) CHECK(enumerate_multi_indices(2, k).size() == static_cast<std::size_t>(k + 1));
}

TEST_CASE("permutations of a word") {
  auto p = permutations_of_word(w2("12"));
  CHECK(std::set<Word>(p.begin(), p.end()) == std::set<Word>{w2("12"), w2("21")});
  auto q = permutations_of_word(w2("112"));
  CHECK(q.size() == 3);
  CHECK(BigInt(q.size()) == hardy_weight_exact(w2("112")));
  CHECK(permutations_of_word(w2("111")).size() == 1);
}

TEST_CASE("factorials and binomials") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(20) == BigInt("2432902008176640000"));
  CHECK(binomial(10, 3) == 120);
  CHECK(to_double(BigRational(1, 4)) == 0.25);
}
