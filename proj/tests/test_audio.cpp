// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "driftlab/audio.hpp"

using namespace driftlab;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "driftlab_audio_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir / name;
}

Waveform random_waveform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.99, 0.99);
  Waveform w;
  w.samples.resize(n);
  for (double& s : w.samples) s = dist(rng);
  return w;
}

}  // namespace

TEST_CASE("wav read maps PCM16 to float by 1/32768", "[audio]") {
  // hand-built 3-sample file: {0, 16384, -32768}
  const unsigned char bytes[] = {
      'R', 'I', 'F', 'F', 42, 0, 0, 0, 'W', 'A', 'V', 'E',
      'f', 'm', 't', ' ', 16, 0, 0, 0, 1, 0, 1, 0,
      0x80, 0x3e, 0, 0,  // 16000
      0,    0x7d, 0, 0,  // byte rate 32000
      2, 0, 16, 0,
      'd', 'a', 't', 'a', 6, 0, 0, 0,
      0x00, 0x00, 0x00, 0x40, 0x00, 0x80};
  auto path = temp_file("hand.wav");
  std::ofstream(path, std::ios::binary)
      .write(reinterpret_cast<const char*>(bytes), sizeof bytes);

  Waveform w = read_wav(path.string());
  REQUIRE(w.sample_rate_hz == 16000);
  REQUIRE(w.samples.size() == 3);
  CHECK(w.samples[0] == 0.0);
  CHECK(w.samples[1] == 0.5);
  CHECK(w.samples[2] == -1.0);
}

TEST_CASE("wav reader rejects bad files", "[audio]") {
  SECTION("truncated data chunk") {
    Waveform w;
    w.samples = {0.0, 0.25, -0.25};
    auto path = temp_file("trunc.wav");
    write_wav(w, path.string());
    auto size = fs::file_size(path);
    fs::resize_file(path, size - 1);  // cut mid-sample
    CHECK_THROWS_AS(read_wav(path.string()), FormatError);
  }
  SECTION("stereo is refused, no downmix") {
    unsigned char bytes[] = {
        'R', 'I', 'F', 'F', 40, 0, 0, 0, 'W', 'A', 'V', 'E',
        'f', 'm', 't', ' ', 16, 0, 0, 0, 1, 0, 2, 0,
        0x80, 0x3e, 0, 0, 0, 0xfa, 0, 0, 4, 0, 16, 0,
        'd', 'a', 't', 'a', 4, 0, 0, 0, 0, 0, 0, 0};
    auto path = temp_file("stereo.wav");
    std::ofstream(path, std::ios::binary)
        .write(reinterpret_cast<const char*>(bytes), sizeof bytes);
    CHECK_THROWS_AS(read_wav(path.string()), UnsupportedFormatError);
  }
  SECTION("not a riff file") {
    auto path = temp_file("noise.bin");
    std::ofstream(path, std::ios::binary) << "definitely not audio";
    CHECK_THROWS_AS(read_wav(path.string()), FormatError);
  }
  SECTION("unwritable path") {
    Waveform w;
    w.samples = {0.0};
    CHECK_THROWS_AS(write_wav(w, "/nonexistent-dir/x.wav"), IoError);
  }
}

TEST_CASE("wav round trip", "[audio]") {
  SECTION("grid values are exact") {
    Waveform w;
    w.samples = {0.0, 0.5};
    auto path = temp_file("grid.wav");
    write_wav(w, path.string());
    Waveform r = read_wav(path.string());
    CHECK(r.samples[0] == 0.0);
    CHECK(r.samples[1] == 0.5);
  }
  SECTION("arbitrary values stay within one quantization step") {
    Waveform w = random_waveform(512, 7);
    auto path = temp_file("rt.wav");
    write_wav(w, path.string());
    Waveform r = read_wav(path.string());
    REQUIRE(r.samples.size() == w.samples.size());
    for (std::size_t i = 0; i < w.samples.size(); ++i)
      CHECK(std::abs(r.samples[i] - w.samples[i]) <= 1.0 / 32768.0);
  }
  SECTION("quantize_pcm16 equals write-then-read") {
    Waveform w = random_waveform(256, 11);
    auto path = temp_file("quant.wav");
    write_wav(w, path.string());
    Waveform r = read_wav(path.string());
    Waveform q = quantize_pcm16(w);
    for (std::size_t i = 0; i < w.samples.size(); ++i)
      CHECK(q.samples[i] == r.samples[i]);
  }
}

TEST_CASE("snr formula", "[audio]") {
  Waveform x = random_waveform(1000, 3);

  SECTION("delta = x/10 gives exactly 20 dB") {
    Waveform d = x;
    for (double& s : d.samples) s /= 10.0;
    CHECK(snr_db(x, d) == Catch::Approx(20.0).margin(1e-12));
  }
  SECTION("delta = x gives 0 dB") {
    CHECK(snr_db(x, x) == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("two-sample case against direct arithmetic") {
    Waveform c, d;
    c.samples = {1.0, 0.0};
    d.samples = {0.1, 0.1};
    double expected = 10.0 * std::log10(1.0 / 0.02);
    CHECK(snr_db(c, d) == Catch::Approx(expected).epsilon(1e-12));
    CHECK(snr_db(c, d) == Catch::Approx(16.9897000434).margin(1e-9));
  }
  SECTION("zero-energy perturbation signals no perturbation") {
    Waveform d = x;
    for (double& s : d.samples) s = 0.0;
    CHECK(std::isinf(snr_db(x, d)));
  }
  SECTION("zero-energy clean signal is degenerate") {
    Waveform z = x;
    for (double& s : z.samples) s = 0.0;
    CHECK_THROWS_AS(snr_db(z, x), DegenerateInputError);
  }
  SECTION("length mismatch is a contract error") {
    Waveform short_d = x;
    short_d.samples.pop_back();
    CHECK_THROWS_AS(snr_db(x, short_d), ContractError);
  }
}

TEST_CASE("snr scaling laws", "[audio]") {
  Waveform x = random_waveform(800, 5);
  Waveform d = random_waveform(800, 6);
  for (double& s : d.samples) s *= 0.05;
  double base = snr_db(x, d);

  SECTION("snr(x, a*d) = snr(x, d) - 20 log10(a)") {
    for (double a : {0.1, 0.5, 2.0, 10.0}) {
      Waveform ad = d;
      for (double& s : ad.samples) s *= a;
      CHECK(snr_db(x, ad) == Catch::Approx(base - 20.0 * std::log10(a)).margin(1e-9));
    }
  }
  SECTION("global gain invariance") {
    for (double a : {0.25, 3.0}) {
      Waveform ax = x, ad = d;
      for (double& s : ax.samples) s *= a;
      for (double& s : ad.samples) s *= a;
      CHECK(snr_db(ax, ad) == Catch::Approx(base).margin(1e-9));
    }
  }
}

TEST_CASE("clip", "[audio]") {
  Waveform w;
  w.samples = {1.5, -2.0, 0.3};
  Waveform c = clip(w, 1.0);
  CHECK(c.samples == std::vector<double>{1.0, -1.0, 0.3});

  SECTION("in-range input unchanged") {
    Waveform in;
    in.samples = {0.2, -0.7, 0.0};
    CHECK(clip(in, 1.0).samples == in.samples);
  }
  SECTION("tighter bound") {
    Waveform in;
    in.samples = {0.9};
    CHECK(clip(in, 0.5).samples == std::vector<double>{0.5});
  }
  SECTION("idempotent") {
    Waveform r = random_waveform(200, 9);
    for (double& s : r.samples) s *= 3.0;
    Waveform once = clip(r, 0.8);
    Waveform twice = clip(once, 0.8);
    CHECK(once.samples == twice.samples);
  }
  SECTION("bound must be positive") {
    CHECK_THROWS_AS(clip(w, 0.0), ContractError);
  }
}
