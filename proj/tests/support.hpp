#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "supsat/parser.hpp"
#include "supsat/scheme.hpp"
#include "supsat/verdict.hpp"
#include "supsat/report.hpp"

namespace testing {

inline supsat::Scheme make_scheme(const std::string& rules, const std::string& terminals,
                                  const std::string& letters) {
  std::string text = "%BEGING\n" + rules + "\n%ENDG\n%BEGINT\n" + terminals + "\n%ENDT\n";
  if (!letters.empty()) text += "%BEGINI\n" + letters + "\n%ENDI\n";
  return supsat::parse_scheme(text);
}

struct CorpusEntry {
  std::string name;
  std::string path;
  supsat::Scheme scheme;
  unsigned declared_order = 0;
  bool declared_safe = false;
  std::optional<supsat::Outcome> expected;
  // "mixed" or "single-only" for two-letter instances
  std::string kind;
};

inline std::vector<CorpusEntry> load_corpus(const std::string& dir = SUPSAT_CORPUS_DIR) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".hrs") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out;
  for (const auto& p : files) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    CorpusEntry e{p.stem().string(), p.string(), supsat::parse_scheme(text), 0, false, std::nullopt, ""};
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      std::istringstream ls(line);
      std::string slashes, tag;
      ls >> slashes >> tag;
      if (slashes != "//") continue;
      if (tag == "@order") ls >> e.declared_order;
      if (tag == "@safe") e.declared_safe = true;
      if (tag == "@kind") ls >> e.kind;
    }
    e.expected = supsat::read_expectation(p.string());
    out.push_back(std::move(e));
  }
  return out;
}

// Random order-0/order-1 schemes over a fixed alphabet, for property tests.
class SchemeGen {
 public:
  explicit SchemeGen(std::uint64_t seed) : rng_(seed) {}

  std::string body(int depth, int nonterminals, bool has_param) {
    int pick = static_cast<int>(rng_() % (depth <= 0 ? 3 : 8));
    switch (pick) {
      case 0: return "c";
      case 1: return nt(nonterminals);
      case 2: return has_param ? "x" : "c";
      case 3: return "a (" + body(depth - 1, nonterminals, has_param) + ")";
      case 4: return "b (" + body(depth - 1, nonterminals, has_param) + ")";
      case 5:
      case 6:
        return "br (" + body(depth - 1, nonterminals, has_param) + ") (" + body(depth - 1, nonterminals, has_param) +
               ")";
      default: return "F (" + body(depth - 1, nonterminals, has_param) + ")";
    }
  }

  // Nonterminals S, N1..Nk of sort o and F of sort o -> o.
  std::string rules() {
    int k = 1 + static_cast<int>(rng_() % 3);
    std::string out = "S -> " + body(3, k, false) + ".\n";
    for (int i = 1; i <= k; ++i) out += "N" + std::to_string(i) + " -> " + body(3, k, false) + ".\n";
    out += "F x -> " + body(3, k, true) + ".\n";
    return out;
  }

  supsat::Scheme scheme(const std::string& letters = "a") {
    for (;;) {
      try {
        return make_scheme(rules(), "a -> 1. b -> 1. br -> 2. c -> 0.", letters);
      } catch (const std::exception&) {
        // e.g. a rule body that is a bare nonterminal; draw again
      }
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::string nt(int k) {
    std::uint64_t i = rng_() % (k + 1);
    return i == 0 ? "S" : "N" + std::to_string(i);
  }
  std::mt19937_64 rng_;
};

}  // namespace testing
