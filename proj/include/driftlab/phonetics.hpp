// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// Lexicon-based grapheme-to-phoneme lookup, the ARPABET class taxonomy,
// phoneme-sequence alignment, confusion matrices, per-phrase phonetic
// profiles and WER/CER.

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "driftlab/common.hpp"
#include "driftlab/lexicon_data.hpp"

namespace driftlab {

inline constexpr const char* kOovMarker = "OOV";

enum class PhoneClass { kVowel, kStop, kFricative, kAffricate, kNasal, kApproximant };

inline const char* phone_class_name(PhoneClass c) {
  switch (c) {
    case PhoneClass::kVowel: return "vowel";
    case PhoneClass::kStop: return "stop";
    case PhoneClass::kFricative: return "fricative";
    case PhoneClass::kAffricate: return "affricate";
    case PhoneClass::kNasal: return "nasal";
    case PhoneClass::kApproximant: return "approximant";
  }
  return "?";
}

struct PhoneInfo {
  PhoneClass cls;
  bool voiced;   // meaningful for consonants; vowels are all voiced
  bool central;  // central vowel (AH, ER), the targets of centralization
};

// Total over the 39-symbol ARPABET set (stress digits stripped).
inline const std::map<std::string, PhoneInfo>& phone_table() {
  static const std::map<std::string, PhoneInfo> table = {
      {"AA", {PhoneClass::kVowel, true, false}},
      {"AE", {PhoneClass::kVowel, true, false}},
      {"AH", {PhoneClass::kVowel, true, true}},
      {"AO", {PhoneClass::kVowel, true, false}},
      {"AW", {PhoneClass::kVowel, true, false}},
      {"AY", {PhoneClass::kVowel, true, false}},
      {"EH", {PhoneClass::kVowel, true, false}},
      {"ER", {PhoneClass::kVowel, true, true}},
      {"EY", {PhoneClass::kVowel, true, false}},
      {"IH", {PhoneClass::kVowel, true, false}},
      {"IY", {PhoneClass::kVowel, true, false}},
      {"OW", {PhoneClass::kVowel, true, false}},
      {"OY", {PhoneClass::kVowel, true, false}},
      {"UH", {PhoneClass::kVowel, true, false}},
      {"UW", {PhoneClass::kVowel, true, false}},
      {"B", {PhoneClass::kStop, true, false}},
      {"D", {PhoneClass::kStop, true, false}},
      {"G", {PhoneClass::kStop, true, false}},
      {"K", {PhoneClass::kStop, false, false}},
      {"P", {PhoneClass::kStop, false, false}},
      {"T", {PhoneClass::kStop, false, false}},
      {"CH", {PhoneClass::kAffricate, false, false}},
      {"JH", {PhoneClass::kAffricate, true, false}},
      {"DH", {PhoneClass::kFricative, true, false}},
      {"F", {PhoneClass::kFricative, false, false}},
      {"HH", {PhoneClass::kFricative, false, false}},
      {"S", {PhoneClass::kFricative, false, false}},
      {"SH", {PhoneClass::kFricative, false, false}},
      {"TH", {PhoneClass::kFricative, false, false}},
      {"V", {PhoneClass::kFricative, true, false}},
      {"Z", {PhoneClass::kFricative, true, false}},
      {"ZH", {PhoneClass::kFricative, true, false}},
      {"M", {PhoneClass::kNasal, true, false}},
      {"N", {PhoneClass::kNasal, true, false}},
      {"NG", {PhoneClass::kNasal, true, false}},
      {"L", {PhoneClass::kApproximant, true, false}},
      {"R", {PhoneClass::kApproximant, true, false}},
      {"W", {PhoneClass::kApproximant, true, false}},
      {"Y", {PhoneClass::kApproximant, true, false}},
  };
  return table;
}

inline const PhoneInfo& phone_info(const std::string& sym) {
  auto it = phone_table().find(sym);
  if (it == phone_table().end())
    throw DataError("unknown ARPABET symbol: " + sym);
  return it->second;
}

inline bool is_vowel(const std::string& sym) {
  return phone_info(sym).cls == PhoneClass::kVowel;
}

// ------------------------------------------------------------- lexicon

class Lexicon {
 public:
  // CMUdict format: "WORD  F AH0 N ...". Lines starting with ";;;" are
  // comments. "WORD(2)" marks an alternate pronunciation; stress digits
  // are stripped on load.
  static Lexicon from_stream(std::istream& in) {
    Lexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.rfind(";;;", 0) == 0) continue;
      std::istringstream fields(line);
      std::string word;
      fields >> word;
      auto paren = word.find('(');
      if (paren != std::string::npos) word.erase(paren);
      for (char& ch : word) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      std::vector<std::string> pron;
      std::string sym;
      while (fields >> sym) {
        while (!sym.empty() && std::isdigit(static_cast<unsigned char>(sym.back())))
          sym.pop_back();
        if (sym.empty()) continue;
        if (!phone_table().count(sym))
          throw DataError("lexicon line " + std::to_string(lineno) +
                          ": unknown phoneme '" + sym + "'");
        pron.push_back(sym);
      }
      if (word.empty() || pron.empty())
        throw DataError("lexicon line " + std::to_string(lineno) +
                        ": expected 'WORD  PHONEMES'");
      lex.prons_[word].push_back(std::move(pron));
    }
    return lex;
  }

  static Lexicon from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon: " + path);
    return from_stream(in);
  }

  static const Lexicon& builtin() {
    static const Lexicon lex = [] {
      std::istringstream in(builtin_lexicon_text());
      return from_stream(in);
    }();
    return lex;
  }

  // First pronunciation on homographs, empty when out of vocabulary.
  const std::vector<std::string>* lookup(const std::string& word) const {
    std::string key = word;
    for (char& ch : key) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    auto it = prons_.find(key);
    if (it == prons_.end()) return nullptr;
    return &it->second.front();
  }

  std::size_t size() const { return prons_.size(); }

 private:
  std::map<std::string, std::vector<std::vector<std::string>>> prons_;
};

// Phoneme string with word boundaries kept as start indices. OOV words
// contribute a single OOV marker and are counted.
struct PhonemeSequence {
  std::vector<std::string> phonemes;
  std::vector<std::size_t> word_starts;
  std::size_t oov_count = 0;
};

inline PhonemeSequence g2p(const std::string& text, const Lexicon& lex) {
  PhonemeSequence seq;
  std::istringstream words(text);
  std::string word;
  while (words >> word) {
    std::string clean;
    for (char ch : word)
      if (std::isalpha(static_cast<unsigned char>(ch))) clean.push_back(ch);
    if (clean.empty()) continue;
    seq.word_starts.push_back(seq.phonemes.size());
    const auto* pron = lex.lookup(clean);
    if (!pron) {
      seq.phonemes.push_back(kOovMarker);
      ++seq.oov_count;
      continue;
    }
    seq.phonemes.insert(seq.phonemes.end(), pron->begin(), pron->end());
  }
  return seq;
}

// ------------------------------------------------------------ alignment

struct EditOp {
  enum Kind { kMatch, kSub, kDel, kIns } kind;
  std::string ref;  // empty for insertions
  std::string hyp;  // empty for deletions
};

// Minimal edit distance, unit costs. Traceback prefers sub over del over
// ins when costs tie, so op sequences are deterministic.
template <typename Seq>
std::vector<EditOp> align_tokens(const Seq& ref, const Seq& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = 1; i <= n; ++i) dp[i][0] = static_cast<int>(i);
  for (std::size_t j = 1; j <= m; ++j) dp[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      int sub = dp[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      int del = dp[i - 1][j] + 1;
      int ins = dp[i][j - 1] + 1;
      dp[i][j] = std::min({sub, del, ins});
    }
  }
  std::vector<EditOp> ops;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        dp[i][j] == dp[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      ops.push_back({ref[i - 1] == hyp[j - 1] ? EditOp::kMatch : EditOp::kSub,
                     std::string(ref[i - 1]), std::string(hyp[j - 1])});
      --i;
      --j;
    } else if (i > 0 && dp[i][j] == dp[i - 1][j] + 1) {
      ops.push_back({EditOp::kDel, std::string(ref[i - 1]), ""});
      --i;
    } else {
      ops.push_back({EditOp::kIns, "", std::string(hyp[j - 1])});
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

inline std::vector<EditOp> align(const PhonemeSequence& ref,
                                 const PhonemeSequence& hyp) {
  return align_tokens(ref.phonemes, hyp.phonemes);
}

inline int edit_distance(const std::vector<EditOp>& ops) {
  int d = 0;
  for (const auto& op : ops)
    if (op.kind != EditOp::kMatch) ++d;
  return d;
}

// ------------------------------------------------------------ confusion

struct ConfusionMatrix {
  // ref -> hyp counts; the diagonal holds matches
  std::map<std::string, std::map<std::string, int>> counts;
  std::map<std::string, int> insertions;
  std::map<std::string, int> deletions;
  // class-level rollups over substitutions; subclass keys carry voicing,
  // e.g. "stop/v" -> "stop/u"
  std::map<std::string, std::map<std::string, int>> class_counts;
  std::map<std::string, std::map<std::string, int>> subclass_counts;
  int n_vowel_subs = 0;
  int n_centralizing = 0;  // vowel substitutions landing on AH/ER
  int oov_ops = 0;         // alignment ops touching an OOV marker
  int total_ops = 0;

  double centralization() const {
    return n_vowel_subs == 0
               ? 0.0
               : static_cast<double>(n_centralizing) / n_vowel_subs;
  }
};

namespace detail {

inline std::string subclass_key(const std::string& sym) {
  const PhoneInfo& info = phone_info(sym);
  std::string key = phone_class_name(info.cls);
  if (info.cls != PhoneClass::kVowel) key += info.voiced ? "/v" : "/u";
  return key;
}

}  // namespace detail

inline ConfusionMatrix confusion_matrix(
    const std::vector<std::pair<PhonemeSequence, PhonemeSequence>>& pairs) {
  ConfusionMatrix cm;
  for (const auto& [ref, hyp] : pairs) {
    for (const auto& op : align(ref, hyp)) {
      ++cm.total_ops;
      if (op.ref == kOovMarker || op.hyp == kOovMarker) {
        ++cm.oov_ops;
        continue;
      }
      switch (op.kind) {
        case EditOp::kMatch:
          ++cm.counts[op.ref][op.hyp];
          break;
        case EditOp::kSub: {
          ++cm.counts[op.ref][op.hyp];
          const PhoneInfo& ri = phone_info(op.ref);
          const PhoneInfo& hi = phone_info(op.hyp);
          ++cm.class_counts[phone_class_name(ri.cls)][phone_class_name(hi.cls)];
          ++cm.subclass_counts[detail::subclass_key(op.ref)]
                              [detail::subclass_key(op.hyp)];
          if (ri.cls == PhoneClass::kVowel) {
            ++cm.n_vowel_subs;
            if (hi.cls == PhoneClass::kVowel && hi.central) ++cm.n_centralizing;
          }
          break;
        }
        case EditOp::kDel:
          ++cm.deletions[op.ref];
          break;
        case EditOp::kIns:
          ++cm.insertions[op.hyp];
          break;
      }
    }
  }
  return cm;
}

// Ref-phoneme rows x hyp-phoneme columns over the full ARPABET set, with
// a trailing "del" column and a trailing "ins" row.
inline std::string confusion_csv(const ConfusionMatrix& cm) {
  std::vector<std::string> syms;
  for (const auto& [sym, _] : phone_table()) syms.push_back(sym);
  std::ostringstream out;
  out << "ref\\hyp";
  for (const auto& s : syms) out << ',' << s;
  out << ",del\n";
  for (const auto& r : syms) {
    out << r;
    auto row = cm.counts.find(r);
    for (const auto& h : syms) {
      int v = 0;
      if (row != cm.counts.end()) {
        auto it = row->second.find(h);
        if (it != row->second.end()) v = it->second;
      }
      out << ',' << v;
    }
    auto del = cm.deletions.find(r);
    out << ',' << (del == cm.deletions.end() ? 0 : del->second) << "\n";
  }
  out << "ins";
  for (const auto& h : syms) {
    auto it = cm.insertions.find(h);
    out << ',' << (it == cm.insertions.end() ? 0 : it->second);
  }
  out << ",0\n";
  return out.str();
}

// ------------------------------------------------------------- profiles

struct TargetProfile {
  int n_phonemes = 0;  // non-OOV
  int n_vowels = 0;
  int n_consonants = 0;
  int syllable_proxy = 0;  // vowel-phoneme count
  std::map<std::string, int> class_counts;
  int oov_words = 0;

  std::string vc_ratio() const {
    return std::to_string(n_vowels) + ":" + std::to_string(n_consonants);
  }
};

inline TargetProfile profile_target(const std::string& text, const Lexicon& lex) {
  TargetProfile p;
  PhonemeSequence seq = g2p(text, lex);
  p.oov_words = static_cast<int>(seq.oov_count);
  for (const auto& sym : seq.phonemes) {
    if (sym == kOovMarker) continue;
    const PhoneInfo& info = phone_info(sym);
    ++p.n_phonemes;
    ++p.class_counts[phone_class_name(info.cls)];
    if (info.cls == PhoneClass::kVowel)
      ++p.n_vowels;
    else
      ++p.n_consonants;
  }
  p.syllable_proxy = p.n_vowels;
  return p;
}

// -------------------------------------------------------------- WER/CER

struct ErrorRates {
  double wer = 0.0;
  double cer = 0.0;
};

inline ErrorRates wer_cer(const std::string& ref_text,
                          const std::string& hyp_text) {
  auto split = [](const std::string& s) {
    std::vector<std::string> words;
    std::istringstream in(s);
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
  };
  auto ref_words = split(ref_text);
  auto hyp_words = split(hyp_text);
  int wd = edit_distance(align_tokens(ref_words, hyp_words));

  std::vector<std::string> ref_chars, hyp_chars;
  for (char c : ref_text) ref_chars.emplace_back(1, c);
  for (char c : hyp_text) hyp_chars.emplace_back(1, c);
  int cd = edit_distance(align_tokens(ref_chars, hyp_chars));

  // empty reference: divide by 1 so the value stays finite (degenerate)
  ErrorRates r;
  r.wer = static_cast<double>(wd) /
          static_cast<double>(std::max<std::size_t>(1, ref_words.size()));
  r.cer = static_cast<double>(cd) /
          static_cast<double>(std::max<std::size_t>(1, ref_chars.size()));
  return r;
}

}  // namespace driftlab
