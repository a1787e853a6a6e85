// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "driftlab/common.hpp"

namespace driftlab {

struct ManifestRow {
  std::string utt_id;
  std::string speaker_id;
  std::string wav_path;  // resolved to an absolute/openable path on load
  std::string transcript;
};

struct Manifest {
  std::vector<ManifestRow> rows;

  static constexpr const char* kHeader = "utt_id,speaker_id,wav_path,transcript";

  // CSV with a fixed 4-column header. Relative wav paths are resolved
  // against the manifest's own directory.
  static Manifest load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty manifest: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader)
      throw FormatError("manifest header must be '" + std::string(kHeader) +
                        "': " + path);
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    Manifest m;
    std::set<std::string> seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::size_t start = 0;
      for (int i = 0; i < 3; ++i) {
        auto pos = line.find(',', start);
        if (pos == std::string::npos)
          throw FormatError("manifest line " + std::to_string(lineno) +
                            ": expected 4 fields");
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
      }
      fields.push_back(line.substr(start));  // transcript may not contain ','
      ManifestRow row{fields[0], fields[1], fields[2], fields[3]};
      if (row.transcript.empty())
        throw DataError("manifest: empty transcript for utt '" + row.utt_id + "'");
      if (!seen.insert(row.utt_id).second)
        throw DataError("manifest: duplicate utt_id '" + row.utt_id + "'");
      std::filesystem::path wav(row.wav_path);
      if (wav.is_relative()) wav = base / wav;
      if (!std::filesystem::exists(wav))
        throw DataError("manifest: wav not found for utt '" + row.utt_id +
                        "': " + wav.string());
      row.wav_path = wav.string();
      m.rows.push_back(std::move(row));
    }
    return m;
  }

  // Paths are written as given; gen_corpus keeps them relative to out_dir.
  static void save(const std::vector<ManifestRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write manifest: " + path);
    out << kHeader << "\n";
    for (const auto& r : rows)
      out << r.utt_id << ',' << r.speaker_id << ',' << r.wav_path << ','
          << r.transcript << "\n";
    if (!out) throw IoError("manifest write failed: " + path);
  }

  std::vector<std::string> speaker_ids() const {
    std::set<std::string> s;
    for (const auto& r : rows) s.insert(r.speaker_id);
    return {s.begin(), s.end()};
  }

  // One source row per speaker: the lexicographically first utt_id.
  std::vector<ManifestRow> first_utt_per_speaker() const {
    std::map<std::string, const ManifestRow*> best;
    for (const auto& r : rows) {
      auto it = best.find(r.speaker_id);
      if (it == best.end() || r.utt_id < it->second->utt_id)
        best[r.speaker_id] = &r;
    }
    std::vector<ManifestRow> out;
    out.reserve(best.size());
    for (const auto& [_, row] : best) out.push_back(*row);
    return out;
  }
};

}  // namespace driftlab
