// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// Built-in target phrase set T1-T16 and the reference d' table used by
// the report regression chart. Two phrases circulate in two variants;
// both are kept and reports flag the discrepancy.

#pragma once

#include <string>
#include <vector>

#include "driftlab/common.hpp"

namespace driftlab {

struct TargetPhrase {
  std::string id;
  std::string text;      // attack target (lowercase letters and spaces)
  std::string alt_text;  // known alternate wording, empty if none
  std::string note;      // phonetic short note, where one is published
};

inline const std::vector<TargetPhrase>& target_set() {
  static const std::vector<TargetPhrase> targets = {
      {"T1", "yes", "", "mono-syll.; 1:2 V:C; glide+fric stop"},
      {"T2", "open the door", "", "4 syll.; 4:6 V:C; dental fric. + stops"},
      {"T3", "call emergency services", "", "fricative-rich; 8 syll.; 8:16 V:C"},
      {"T4", "the quick brown fox jumped over the lazy dog", "",
       "pangram; 11 syll.; broad coverage"},
      {"T5", "shhh she sees the sea fish", "",
       "fricative-rich: /sh, s, z/; 6 syll."},
      {"T6", "do go big bag dig", "", "voiced stops chain; minimal vowels; 5 syll."},
      {"T7", "two tall teachers talk to tim", "", ""},
      {"T8", "i whisper while walking wildly", "", ""},
      {"T9", "pack my box with five dozen liquor jugs", "",
       "pangram; many consonant clusters"},
      {"T10", "glib jocks quiz nymph to vex dwarf", "",
       "pangram; high fricative/affricate load"},
      {"T11", "a mad boxer shot a quick gloved jab to the jaw of his dizzy opponent",
       "", ""},
      {"T12",
       "just before twilight the wizard quickly jabbed five boxes of hazy "
       "quartz to vex a plump knights jovial frog",
       "", "very long pangram; many clusters; vowel centralization"},
      {"T13",
       "twelve jolly grizzlies briskly danced over waxy benches while a "
       "flighty kitten kept humming jazz tunes in the background",
       "twelve jolly grizzlies briskly danced over waxy benches while a "
       "fidgety vixen kept humming jazz tunes in the background",
       ""},
      {"T14",
       "quantum driven flux engines jam beneath zigzagging vortex panels as "
       "cryptic bioforms whisper behind polymorphic glass domes",
       "", "dense consonant clusters; many fricatives/affricates"},
      {"T15",
       "while whispering winds wander westward jittery jackals jiggled "
       "jellies above velvet jars beyond flickering bonfires in a frozen "
       "jungle",
       "while whispering winds wander westward jittery jackals juggle velvet "
       "jars beyond flickering bonfires in a frozen jungle",
       ""},
      {"T16",
       "kindly expedite bizarre frozen jumpsuits for victors whirlwind gala "
       "to maximize xenon emissions before daybreak",
       "", ""},
  };
  return targets;
}

inline const TargetPhrase& find_target(const std::string& id) {
  for (const auto& t : target_set())
    if (t.id == id) return t;
  throw DataError("unknown target id: " + id);
}

// Reference per-target d' for two embedding backbones, shipped verbatim
// for side-by-side chart regression. Also available at
// data/dprime_reference.csv.
inline const char* dprime_reference_csv() {
  return R"(T,Target,ECAPA,RESNET50
T1,Yes,9.68,9.43
T2,Open the door,9.11,8.89
T3,Call emergency services,5.59,6.22
T4,The quick brown fox...,4.80,5.14
T5,Shhh she sees the sea fish,7.46,7.74
T6,Do go big bag dig,8.44,8.35
T7,Two tall teachers talk to Tim,7.79,7.59
T8,I whisper while walking wildly,7.17,7.33
T9,Pack my box with five dozen liquor jugs,4.63,5.02
T10,Glib jocks quiz nymph to vex dwarf,4.75,5.34
T11,A mad boxer shot a quick gloved jab to the jaw of his dizzy opponent,3.79,4.45
T12,Just before twilight the wizard quickly jabbed five boxes of hazy quartz to vex a plump knights jovial frog,3.07,3.63
T13,Twelve jolly grizzlies briskly danced over waxy benches while a fidgety vixen kept humming jazz tunes in the background,3.06,3.46
T14,Quantum driven flux engines jam beneath zigzagging vortex panels as cryptic bioforms whisper behind polymorphic glass domes,3.30,3.78
T15,While whispering winds wander westward jittery jackals juggle velvet jars beyond flickering bonfires in a frozen jungle,3.39,3.54
T16,Kindly expedite bizarre frozen jumpsuits for victors whirlwind gala to maximize xenon emissions before daybreak,3.09,3.30
)";
}

}  // namespace driftlab
