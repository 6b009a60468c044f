#include <doctest.h>

#include <fstream>

#include "sieve/porter.hpp"

using namespace sieve;

TEST_CASE("reference vocabulary") {
  std::ifstream in(std::string(SIEVE_TEST_DATA_DIR) + "/porter_reference.tsv");
  REQUIRE(in);
  std::size_t n = 0;
  std::size_t wrong = 0;
  for (std::string line; std::getline(in, line);) {
    const auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    const std::string word = line.substr(0, tab);
    const std::string stem = line.substr(tab + 1);
    if (porter_stem(word) != stem) {
      ++wrong;
      MESSAGE(word << " -> " << porter_stem(word) << ", expected " << stem);
    }
    ++n;
  }
  CHECK(n == 624);
  CHECK(wrong == 0);
}

TEST_CASE("classic examples") {
  CHECK(porter_stem("caresses") == "caress");
  CHECK(porter_stem("ponies") == "poni");
  CHECK(porter_stem("relational") == "relat");
  CHECK(porter_stem("generalizations") == "gener");
  CHECK(porter_stem("hopping") == "hop");
  CHECK(porter_stem("filing") == "file");
  CHECK(porter_stem("controlling") == "control");
  CHECK(porter_stem("programming") == "program");
}

TEST_CASE("short and non-lowercase input is unchanged") {
  CHECK(porter_stem("is") == "is");
  CHECK(porter_stem("as") == "as");
  CHECK(porter_stem("") == "");
  CHECK(porter_stem("Running") == "Running");
  CHECK(porter_stem("naïve") == "naïve");
  CHECK(porter_stem("c99s") == "c99s");
}
