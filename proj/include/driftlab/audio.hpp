// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// Waveform type, PCM16 mono WAV I/O, clipping, and the SNR distortion
// metric used to report perturbation strength.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "driftlab/common.hpp"

namespace driftlab {

// Mono audio in normalized float amplitude. Samples are expected to stay
// within [-1, +1]; clip() restores that after arithmetic on raw samples.
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = 16000;

  std::size_t size() const { return samples.size(); }
};

namespace detail {

inline std::uint32_t read_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
         std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

inline std::uint16_t read_u16(const unsigned char* p) {
  return std::uint16_t(p[0]) | std::uint16_t(p[1]) << 8;
}

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 24) & 0xff);
}

inline void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}

inline std::int16_t to_pcm16(double s) {
  long v = std::lround(s * 32768.0);
  v = std::clamp(v, -32768l, 32767l);
  return static_cast<std::int16_t>(v);
}

}  // namespace detail

// Reads a RIFF/WAVE file. Only PCM (format tag 1), 16-bit, mono is
// accepted; anything else is refused rather than silently converted.
// Samples are mapped to float by s_int / 32768.0.
inline Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false;
  std::uint16_t format_tag = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data_ptr = nullptr;
  std::uint32_t data_size = 0;

  std::size_t off = 12;
  while (off + 8 <= buf.size()) {
    const unsigned char* hdr = buf.data() + off;
    std::uint32_t chunk_size = detail::read_u32(hdr + 4);
    std::size_t body = off + 8;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + 16 > buf.size())
        throw FormatError("malformed fmt chunk: " + path);
      format_tag = detail::read_u16(buf.data() + body);
      channels = detail::read_u16(buf.data() + body + 2);
      rate = detail::read_u32(buf.data() + body + 4);
      bits = detail::read_u16(buf.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      if (body + chunk_size > buf.size())
        throw FormatError("data chunk truncated: " + path);
      data_ptr = buf.data() + body;
      data_size = chunk_size;
    }
    off = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data_ptr == nullptr)
    throw FormatError("missing fmt or data chunk: " + path);
  if (format_tag != 1)
    throw UnsupportedFormatError("non-PCM WAV not supported: " + path);
  if (bits != 16)
    throw UnsupportedFormatError("only 16-bit PCM supported: " + path);
  if (channels != 1)
    throw UnsupportedFormatError("only mono supported (no downmix): " + path);
  if (rate == 0) throw FormatError("zero sample rate: " + path);
  if (data_size % 2 != 0)
    throw FormatError("data chunk truncated mid-sample: " + path);
  if (data_size == 0) throw FormatError("empty data chunk: " + path);

  Waveform w;
  w.sample_rate_hz = static_cast<int>(rate);
  w.samples.resize(data_size / 2);
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    std::int16_t s = static_cast<std::int16_t>(
        detail::read_u16(data_ptr + 2 * i));
    w.samples[i] = s / 32768.0;
  }
  return w;
}

// Writes PCM16 mono. Conversion is round(s * 32768) clamped to the int16
// range, so read_wav(write_wav(w)) recovers w exactly on the PCM16 grid
// and within one quantization step (1/32768) elsewhere.
inline void write_wav(const Waveform& w, const std::string& path) {
  if (w.samples.empty()) throw ContractError("refusing to write empty waveform");
  for (double s : w.samples) {
    if (!(s >= -1.0 && s <= 1.0))
      throw ContractError("sample out of [-1,1]; clip before writing");
  }
  std::vector<unsigned char> out;
  out.reserve(44 + 2 * w.samples.size());
  std::uint32_t data_bytes = static_cast<std::uint32_t>(2 * w.samples.size());
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  detail::put_u32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  detail::put_u32(out, 16);
  detail::put_u16(out, 1);  // PCM
  detail::put_u16(out, 1);  // mono
  detail::put_u32(out, static_cast<std::uint32_t>(w.sample_rate_hz));
  detail::put_u32(out, static_cast<std::uint32_t>(w.sample_rate_hz) * 2);
  detail::put_u16(out, 2);
  detail::put_u16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  detail::put_u32(out, data_bytes);
  for (double s : w.samples) {
    std::int16_t v = detail::to_pcm16(s);
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path);
}

// Snaps samples to the PCM16 grid without touching the disk; equal to
// read_wav(write_wav(w)) by construction. The attack uses this so that
// success is judged on the audio that will actually be stored.
inline Waveform quantize_pcm16(const Waveform& w) {
  Waveform q;
  q.sample_rate_hz = w.sample_rate_hz;
  q.samples.resize(w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    q.samples[i] = detail::to_pcm16(w.samples[i]) / 32768.0;
  return q;
}

// 10 * log10(sum x^2 / sum d^2), total power over the full utterance.
// A zero-energy perturbation returns +inf ("no perturbation").
inline double snr_db(const Waveform& clean, const Waveform& perturbation) {
  if (clean.samples.size() != perturbation.samples.size())
    throw ContractError("snr_db: length mismatch");
  if (clean.sample_rate_hz != perturbation.sample_rate_hz)
    throw ContractError("snr_db: sample-rate mismatch");
  double px = 0.0, pd = 0.0;
  for (double s : clean.samples) px += s * s;
  for (double s : perturbation.samples) pd += s * s;
  if (px == 0.0) throw DegenerateInputError("snr_db: zero-energy clean signal");
  if (pd == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(px / pd);
}

inline Waveform clip(const Waveform& w, double bound) {
  if (!(bound > 0.0)) throw ContractError("clip: bound must be positive");
  Waveform out = w;
  for (double& s : out.samples) s = std::clamp(s, -bound, bound);
  return out;
}

}  // namespace driftlab
