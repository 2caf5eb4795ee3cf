// Copyright 2026 The GamRag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synthetic.hpp"

#include <array>
#include <set>
#include <stdexcept>

#include "gamrag/hash.hpp"

namespace gamrag::testing {
namespace {

constexpr std::array<std::string_view, 14> kOnsets = {"B", "D", "F", "G", "K", "L", "M",
                                                      "N", "P", "R", "S", "T", "V", "Z"};
constexpr std::array<std::string_view, 5> kVowels = {"a", "e", "i", "o", "u"};
constexpr std::array<std::string_view, 8> kCodas = {"n", "r", "l", "s", "m", "x", "th", "nd"};

class Namer {
 public:
  explicit Namer(std::uint64_t seed) : rng_(seed) {}

  // Capitalized pseudo-word, unique across this namer.
  std::string word() {
    for (;;) {
      std::string w(kOnsets[rng_.below(kOnsets.size())]);
      w += kVowels[rng_.below(kVowels.size())];
      w += text_lower(kOnsets[rng_.below(kOnsets.size())]);
      w += kVowels[rng_.below(kVowels.size())];
      w += kCodas[rng_.below(kCodas.size())];
      if (used_.insert(w).second) return w;
    }
  }
  std::string person() { return word() + " " + word(); }
  std::uint64_t below(std::uint64_t n) { return rng_.below(n); }
  double unit() { return rng_.unit(); }

 private:
  static std::string text_lower(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(ch - 'A' + 'a');
    return out;
  }
  SplitMix rng_;
  std::set<std::string> used_;
};

}  // namespace

TwoHopCorpus make_two_hop_corpus(std::uint64_t seed, std::size_t n_questions, double hard_fraction) {
  Namer names(seed);
  TwoHopCorpus out;
  for (std::size_t i = 0; i < n_questions; ++i) {
    const std::string film = "Film " + names.word();
    const std::string director = names.person();
    const std::string spouse = names.person();
    const std::string city = names.word();
    const std::string year = std::to_string(1950 + names.below(60));
    const bool birthplace = i % 2 == 1;
    const bool hard = names.unit() < hard_fraction;

    const std::string directed = "The director of " + film + " was " + director + ".";
    const std::string born = director + " was born in " + city + ".";
    const std::string married = "The spouse of " + director + " is " + spouse + ".";
    const std::string answer = birthplace ? city : spouse;

    std::string person_text = born + " " + married;
    if (hard) {
      person_text += " " + director + " was the director of a film about " + answer + ".";
      person_text += " " + director + " was also the director of a short film.";
    }
    const std::string id = std::to_string(i);
    out.corpus.push_back({"F" + id, film, directed + " The film premiered in " + year + "."});
    out.corpus.push_back({"P" + id, director, person_text});

    PlantedQuestion q;
    q.question = birthplace ? "Where was the director of " + film + " born?"
                            : "Who is the spouse of the director of " + film + "?";
    q.answer = answer;
    q.type = birthplace ? "birthplace" : "spouse";
    q.gold_sentences = {directed, birthplace ? born : married};
    q.hard = hard;
    out.questions.push_back(std::move(q));
  }
  return out;
}

std::vector<eval::QaItem> resolve_gold(const TwoHopCorpus& c, const HierGraph& graph) {
  std::vector<eval::QaItem> items;
  for (const auto& q : c.questions) {
    eval::QaItem item;
    item.question = q.question;
    item.answers = {q.answer};
    item.question_type = q.type;
    for (const auto& text : q.gold_sentences) {
      bool found = false;
      for (const auto& s : graph.sentences()) {
        if (s.text == text) {
          item.gold_support_ids.push_back(s.id);
          found = true;
        }
      }
      if (!found) throw std::logic_error("gold sentence missing from graph: " + text);
    }
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace gamrag::testing
