// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// Binary model files: shape header, config echo, raw little-endian
// doubles. Round-trips are bit-exact on parameters.

#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "driftlab/common.hpp"
#include "driftlab/model.hpp"

namespace driftlab {

namespace detail {

constexpr char kModelMagic[4] = {'D', 'L', 'M', 'D'};
constexpr std::uint32_t kModelVersion = 1;

struct ModelWriter {
  std::ofstream out;

  explicit ModelWriter(const std::string& path)
      : out(path, std::ios::binary | std::ios::trunc) {
    if (!out) throw IoError("cannot open model file for writing: " + path);
  }
  void bytes(const void* p, std::size_t n) {
    out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  void u32(std::uint32_t v) { bytes(&v, 4); }
  void u64(std::uint64_t v) { bytes(&v, 8); }
  void f64(double v) { bytes(&v, 8); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void mat(const Matrix& m) {
    u32(static_cast<std::uint32_t>(m.rows));
    u32(static_cast<std::uint32_t>(m.cols));
    bytes(m.data.data(), m.data.size() * sizeof(double));
  }
  void vec(const std::vector<double>& v) {
    u32(static_cast<std::uint32_t>(v.size()));
    u32(1);
    bytes(v.data(), v.size() * sizeof(double));
  }
};

struct ModelReader {
  std::ifstream in;
  std::string path;

  explicit ModelReader(const std::string& p) : in(p, std::ios::binary), path(p) {
    if (!in) throw IoError("cannot open model file: " + p);
  }
  void bytes(void* p, std::size_t n) {
    in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
      throw FormatError("model file truncated: " + path);
  }
  std::uint32_t u32() {
    std::uint32_t v;
    bytes(&v, 4);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    bytes(&v, 8);
    return v;
  }
  double f64() {
    double v;
    bytes(&v, 8);
    return v;
  }
  std::string str() {
    std::uint32_t n = u32();
    if (n > 1u << 20) throw FormatError("model file corrupt (string): " + path);
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  Matrix mat() {
    std::uint32_t r = u32(), c = u32();
    if (static_cast<std::uint64_t>(r) * c > (1ull << 28))
      throw FormatError("model file corrupt (shape): " + path);
    Matrix m(r, c);
    bytes(m.data.data(), m.data.size() * sizeof(double));
    return m;
  }
  std::vector<double> vec() {
    Matrix m = mat();
    if (m.cols != 1) throw FormatError("model file corrupt (vector): " + path);
    return m.data;
  }
};

inline void write_frontend(ModelWriter& w, const FrontendConfig& f) {
  w.u32(static_cast<std::uint32_t>(f.frame_len));
  w.u32(static_cast<std::uint32_t>(f.hop));
  w.u32(static_cast<std::uint32_t>(f.n_fft));
  w.u32(static_cast<std::uint32_t>(f.n_mels));
  w.f64(f.preemph);
  w.f64(f.floor);
}

inline FrontendConfig read_frontend(ModelReader& r) {
  FrontendConfig f;
  f.frame_len = static_cast<int>(r.u32());
  f.hop = static_cast<int>(r.u32());
  f.n_fft = static_cast<int>(r.u32());
  f.n_mels = static_cast<int>(r.u32());
  f.preemph = r.f64();
  f.floor = r.f64();
  return f;
}

inline void write_encoder(ModelWriter& w, const RnnEncoder& e) {
  w.mat(e.w_in);
  w.vec(e.b_in);
  w.mat(e.w_x);
  w.mat(e.w_h);
  w.vec(e.b_h);
}

inline void read_encoder(ModelReader& r, RnnEncoder& e) {
  e.w_in = r.mat();
  e.b_in = r.vec();
  e.w_x = r.mat();
  e.w_h = r.mat();
  e.b_h = r.vec();
  if (e.w_x.rows != e.w_x.cols || e.w_h.rows != e.w_x.rows ||
      e.w_in.rows != e.w_x.rows || e.b_in.size() != e.w_x.rows ||
      e.b_h.size() != e.w_x.rows)
    throw FormatError("model file corrupt (encoder shapes): " + r.path);
}

}  // namespace detail

enum class ModelKind : std::uint32_t { kAcoustic = 0, kSpeaker = 1 };

inline void save_model(const AcousticModel& m, const std::string& path) {
  detail::ModelWriter w(path);
  w.bytes(detail::kModelMagic, 4);
  w.u32(detail::kModelVersion);
  w.u32(static_cast<std::uint32_t>(ModelKind::kAcoustic));
  w.u64(m.seed);
  detail::write_frontend(w, m.frontend);
  w.str(m.vocab.chars);
  detail::write_encoder(w, m.enc);
  w.mat(m.w_out);
  w.vec(m.b_out);
  if (!w.out) throw IoError("model write failed: " + path);
}

inline void save_model(const SpeakerModel& m, const std::string& path) {
  detail::ModelWriter w(path);
  w.bytes(detail::kModelMagic, 4);
  w.u32(detail::kModelVersion);
  w.u32(static_cast<std::uint32_t>(ModelKind::kSpeaker));
  w.u64(m.seed);
  detail::write_frontend(w, m.frontend);
  w.u32(static_cast<std::uint32_t>(m.speaker_ids.size()));
  for (const auto& s : m.speaker_ids) w.str(s);
  detail::write_encoder(w, m.enc);
  w.mat(m.w_embed);
  w.vec(m.b_embed);
  w.mat(m.w_head);
  w.vec(m.b_head);
  if (!w.out) throw IoError("model write failed: " + path);
}

inline ModelKind peek_model_kind(const std::string& path) {
  detail::ModelReader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, detail::kModelMagic, 4) != 0)
    throw FormatError("not a model file: " + path);
  std::uint32_t version = r.u32();
  if (version != detail::kModelVersion)
    throw FormatError("unsupported model version " + std::to_string(version) +
                      ": " + path);
  std::uint32_t kind = r.u32();
  if (kind > 1) throw FormatError("unknown model kind: " + path);
  return static_cast<ModelKind>(kind);
}

inline AcousticModel load_asr_model(const std::string& path) {
  if (peek_model_kind(path) != ModelKind::kAcoustic)
    throw FormatError("expected an acoustic model: " + path);
  detail::ModelReader r(path);
  char magic[4];
  r.bytes(magic, 4);
  r.u32();
  r.u32();
  AcousticModel m;
  m.seed = r.u64();
  m.frontend = detail::read_frontend(r);
  m.vocab.chars = r.str();
  detail::read_encoder(r, m.enc);
  m.w_out = r.mat();
  m.b_out = r.vec();
  if (m.w_out.cols != m.enc.w_x.rows ||
      m.b_out.size() != m.w_out.rows ||
      m.w_out.rows != static_cast<std::size_t>(m.vocab.size()) + 1)
    throw FormatError("model file corrupt (output shapes): " + path);
  return m;
}

inline SpeakerModel load_sid_model(const std::string& path) {
  if (peek_model_kind(path) != ModelKind::kSpeaker)
    throw FormatError("expected a speaker model: " + path);
  detail::ModelReader r(path);
  char magic[4];
  r.bytes(magic, 4);
  r.u32();
  r.u32();
  SpeakerModel m;
  m.seed = r.u64();
  m.frontend = detail::read_frontend(r);
  std::uint32_t n_spk = r.u32();
  if (n_spk > 1u << 20) throw FormatError("model file corrupt: " + path);
  m.speaker_ids.resize(n_spk);
  for (auto& s : m.speaker_ids) s = r.str();
  detail::read_encoder(r, m.enc);
  m.w_embed = r.mat();
  m.b_embed = r.vec();
  m.w_head = r.mat();
  m.b_head = r.vec();
  if (m.w_embed.cols != m.enc.w_x.rows || m.b_embed.size() != m.w_embed.rows ||
      m.w_head.cols != m.w_embed.rows || m.w_head.rows != n_spk ||
      m.b_head.size() != n_spk)
    throw FormatError("model file corrupt (head shapes): " + path);
  return m;
}

}  // namespace driftlab
