// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// Deterministic synthetic speech stand-in: each character is a harmonic
// tone at a character-specific base frequency, scaled per speaker in
// pitch and shaped per speaker in spectral tilt. The ASR task (sequence
// labeling) and SID task (speaker coloration) stay real while generation
// stays tiny and bit-reproducible.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "driftlab/audio.hpp"
#include "driftlab/common.hpp"
#include "driftlab/features.hpp"
#include "driftlab/manifest.hpp"

namespace driftlab {

inline const std::vector<std::string>& default_sentence_pool() {
  static const std::vector<std::string> pool = {
      "the quick brown fox jumps over the lazy dog",
      "pack my box with five dozen liquor jugs",
      "glib jocks quiz nymph to vex dwarf",
      "how vexingly quick daft zebras jump",
      "sphinx of black quartz judge my vow",
      "waltz bad nymph for quick jigs vex",
      "quick zephyrs blow vexing daft jim",
      "two driven jocks help fax my big quiz",
      "five quacking zephyrs jolt my wax bed",
      "the jay pig fox zebra and my wolves quack",
  };
  return pool;
}

// Words used to compose the default random transcripts; all covered by
// the built-in lexicon so confusion analysis works out of the box.
inline const std::vector<std::string>& transcript_word_list() {
  static const std::vector<std::string> words = {
      "the",   "quick", "brown", "fox",   "jumps", "over",  "lazy",
      "dog",   "pack",  "box",   "five",  "dozen", "jugs",  "glib",
      "jocks", "quiz",  "nymph", "vex",   "dwarf", "waltz", "bad",
      "for",   "jigs",  "sphinx", "black", "quartz", "judge", "vow",
      "how",   "daft",  "zebras", "jump",  "wolves", "quack", "big",
      "bag",   "dig",   "yes",   "no",    "go",    "stop",  "open",
      "door",  "my",    "two",   "tall",  "help",  "wax",   "bed",
      "jolt"};
  return words;
}

// Fixed published tone table: the 27 characters "a".."z" plus space get
// distinct base frequencies, equally spaced on the mel scale from 300 Hz
// to 3000 Hz (in character order).
inline const std::map<char, double>& char_tone_table() {
  static const std::map<char, double> table = [] {
    std::map<char, double> t;
    const std::string chars = "abcdefghijklmnopqrstuvwxyz ";
    double m_lo = hz_to_mel(300.0), m_hi = hz_to_mel(3000.0);
    for (std::size_t i = 0; i < chars.size(); ++i)
      t[chars[i]] =
          mel_to_hz(m_lo + (m_hi - m_lo) * static_cast<double>(i) /
                               static_cast<double>(chars.size() - 1));
    return t;
  }();
  return table;
}

struct SynthConfig {
  int n_speakers = 20;
  int utterances_per_speaker = 5;
  std::map<char, double> tones = char_tone_table();
  // per-speaker multiplicative pitch factor range and tilt range (dB/oct)
  double f0_factor_lo = 0.8;
  double f0_factor_hi = 1.25;
  double tilt_lo_db = -6.0;
  double tilt_hi_db = 6.0;
  int char_duration_ms = 80;
  double noise_rms = 0.01;
  int sample_rate_hz = 16000;
  std::uint64_t seed = 0;
  // empty: every utterance gets a distinct seeded random transcript;
  // non-empty: the pool is rotated across speakers
  std::vector<std::string> sentences;
  int words_per_utterance_lo = 4;
  int words_per_utterance_hi = 6;
};

struct SpeakerParams {
  double f0_factor;
  double tilt_db_per_oct;
};

// Stratified draws: factors and tilts are evenly spaced over their ranges
// and assigned to speakers by two seed-derived permutations, so any pair
// of speakers is spectrally separated by construction.
inline std::vector<SpeakerParams> speaker_params(const SynthConfig& cfg) {
  std::mt19937_64 rng(fnv1a64_u64(cfg.seed, fnv1a64("speakers")));
  std::vector<int> perm_f(cfg.n_speakers), perm_t(cfg.n_speakers);
  for (int i = 0; i < cfg.n_speakers; ++i) perm_f[i] = perm_t[i] = i;
  std::shuffle(perm_f.begin(), perm_f.end(), rng);
  std::shuffle(perm_t.begin(), perm_t.end(), rng);
  std::vector<SpeakerParams> out(cfg.n_speakers);
  for (int j = 0; j < cfg.n_speakers; ++j) {
    double uf = (perm_f[j] + 0.5) / cfg.n_speakers;
    double ut = (perm_t[j] + 0.5) / cfg.n_speakers;
    out[j].f0_factor = cfg.f0_factor_lo + (cfg.f0_factor_hi - cfg.f0_factor_lo) * uf;
    out[j].tilt_db_per_oct = cfg.tilt_lo_db + (cfg.tilt_hi_db - cfg.tilt_lo_db) * ut;
  }
  return out;
}

// Interval signatures: on top of its base frequency, every character adds
// a partial at a fixed frequency ratio. Ratios are invariant under the
// speaker's pitch factor, so a character stays locally identifiable for
// any speaker while absolute pitch and tilt keep carrying speaker
// identity.
inline const std::array<double, 5>& char_interval_ratios() {
  static const std::array<double, 5> ratios = {1.2, 1.35, 1.5, 1.7, 1.9};
  return ratios;
}

// Renders one transcript as a concatenation of per-character tones:
// partials {1, r_c, 2} x scaled base frequency, tilt-shaped amplitudes,
// raised-cosine edges, additive noise.
inline Waveform render_utterance(const std::string& transcript,
                                 const SpeakerParams& spk,
                                 const SynthConfig& cfg, std::uint64_t seed) {
  if (transcript.empty()) throw DataError("cannot render empty transcript");
  const int sr = cfg.sample_rate_hz;
  const std::size_t seg = static_cast<std::size_t>(cfg.char_duration_ms) *
                          static_cast<std::size_t>(sr) / 1000;
  Waveform w;
  w.sample_rate_hz = sr;
  w.samples.assign(seg * transcript.size(), 0.0);

  const auto& tones = cfg.tones;
  const std::size_t ramp = std::min<std::size_t>(seg / 4, static_cast<std::size_t>(sr) / 250);
  for (std::size_t p = 0; p < transcript.size(); ++p) {
    auto it = tones.find(transcript[p]);
    if (it == tones.end())
      throw DataError(std::string("no tone for character '") + transcript[p] + "'");
    double f0 = it->second * spk.f0_factor;
    std::size_t char_index = static_cast<std::size_t>(
        std::distance(tones.begin(), it));
    double interval = char_interval_ratios()[char_index % char_interval_ratios().size()];
    const double partials[3] = {1.0, interval, 2.0};
    double amps[3];
    double norm = 0.0;
    for (int k = 0; k < 3; ++k) {
      amps[k] = partials[k] * f0 > 0.48 * sr
                    ? 0.0
                    : std::pow(10.0, spk.tilt_db_per_oct *
                                         std::log2(partials[k]) / 20.0);
      norm += amps[k];
    }
    double scale = 0.35 / norm;
    double* dst = w.samples.data() + p * seg;
    for (std::size_t t = 0; t < seg; ++t) {
      double env = 1.0;
      if (t < ramp)
        env = 0.5 - 0.5 * std::cos(std::numbers::pi * t / ramp);
      else if (t >= seg - ramp)
        env = 0.5 - 0.5 * std::cos(std::numbers::pi * (seg - 1 - t) / ramp);
      double v = 0.0;
      for (int k = 0; k < 3; ++k)
        v += amps[k] *
             std::sin(2.0 * std::numbers::pi * partials[k] * f0 * t / sr);
      dst[t] = scale * env * v;
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, cfg.noise_rms);
  for (double& s : w.samples) s = std::clamp(s + noise(rng), -1.0, 1.0);
  return w;
}

// Writes WAVs plus manifest.csv under out_dir. Returns the manifest with
// resolved paths. Bit-reproducible from the seed.
inline Manifest gen_corpus(const SynthConfig& cfg, const std::string& out_dir) {
  if (cfg.n_speakers < 1 || cfg.utterances_per_speaker < 1)
    throw ConfigError("gen_corpus: need at least one speaker and utterance");
  if (cfg.words_per_utterance_lo < 1 ||
      cfg.words_per_utterance_hi < cfg.words_per_utterance_lo)
    throw ConfigError("gen_corpus: bad words-per-utterance range");
  {
    std::set<double> freqs;
    for (const auto& [_, f] : cfg.tones) freqs.insert(f);
    if (freqs.size() != cfg.tones.size())
      throw ConfigError("gen_corpus: tone table frequencies must be distinct");
  }
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  auto transcript_for = [&](const std::string& utt_id, int s, int u) {
    if (!cfg.sentences.empty())
      return cfg.sentences[static_cast<std::size_t>(s + u) %
                           cfg.sentences.size()];
    // distinct per-utterance random transcript; no text repeats means a
    // model cannot pass held-out decoding by replaying seen sentences
    std::mt19937_64 rng(fnv1a64(utt_id, fnv1a64_u64(cfg.seed, fnv1a64("text"))));
    const auto& words = transcript_word_list();
    int n = cfg.words_per_utterance_lo +
            static_cast<int>(rng() % static_cast<std::uint64_t>(
                                         cfg.words_per_utterance_hi -
                                         cfg.words_per_utterance_lo + 1));
    std::string text;
    for (int i = 0; i < n; ++i) {
      if (i) text += ' ';
      text += words[rng() % words.size()];
    }
    return text;
  };

  auto speakers = speaker_params(cfg);
  std::vector<ManifestRow> rows;
  Manifest resolved;
  char buf[64];
  for (int s = 0; s < cfg.n_speakers; ++s) {
    std::snprintf(buf, sizeof buf, "s%03d", s);
    std::string speaker_id = buf;
    for (int u = 0; u < cfg.utterances_per_speaker; ++u) {
      std::snprintf(buf, sizeof buf, "s%03d_u%02d", s, u);
      std::string utt_id = buf;
      const std::string text = transcript_for(utt_id, s, u);
      Waveform w = render_utterance(
          text, speakers[static_cast<std::size_t>(s)], cfg,
          fnv1a64(utt_id, fnv1a64_u64(cfg.seed, 0xcbf29ce484222325ull)));
      std::string wav_name = utt_id + ".wav";
      std::string abs_path = (fs::path(out_dir) / wav_name).string();
      write_wav(w, abs_path);
      rows.push_back({utt_id, speaker_id, wav_name, text});
      resolved.rows.push_back({utt_id, speaker_id, abs_path, text});
    }
  }
  Manifest::save(rows, (fs::path(out_dir) / "manifest.csv").string());
  return resolved;
}

}  // namespace driftlab
