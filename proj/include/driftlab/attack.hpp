// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// Targeted white-box waveform attack: projected gradient descent on
// ||delta||^2 + c * CTC(x + delta, target), amplitude box [-1, +1].

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "driftlab/audio.hpp"
#include "driftlab/common.hpp"
#include "driftlab/ctc.hpp"
#include "driftlab/features.hpp"
#include "driftlab/manifest.hpp"
#include "driftlab/model.hpp"

namespace driftlab {

struct AttackConfig {
  double c = 1.0;          // trade-off between distortion and CTC loss
  double lr = 1e-3;
  int max_iters = 3000;
  double clip_bound = 1.0;
  int success_check_every = 10;
  double c_growth = 10.0;  // applied once if nothing decoded by half budget
  std::uint64_t seed = 0;
};

struct AttackTraceRow {
  int iter;
  double ctc_loss;
  double objective;
};

struct AttackResult {
  Waveform adversarial;  // clip(x + delta), on the PCM16 grid
  Waveform delta;        // adversarial - x
  bool success = false;
  int iterations_used = 0;
  double final_ctc_loss = 0.0;
  double snr_db = 0.0;
  std::string decoded_text;
  std::vector<AttackTraceRow> loss_trace;

  std::string trace_csv() const {
    std::string out = "iter,ctc_loss,objective\n";
    char buf[96];
    for (const auto& r : loss_trace) {
      std::snprintf(buf, sizeof buf, "%d,%.9f,%.9f\n", r.iter, r.ctc_loss,
                    r.objective);
      out += buf;
    }
    return out;
  }
};

// Success is judged on the PCM16-quantized candidate, so a reported
// success re-verifies from the written WAV alone.
inline AttackResult run_attack(const Waveform& x, const Transcript& target,
                               const AcousticModel& asr,
                               const AttackConfig& cfg) {
  if (cfg.c <= 0.0 || cfg.lr <= 0.0 || cfg.max_iters < 1)
    throw ConfigError("attack: need c > 0, lr > 0, max_iters >= 1");
  Frontend frontend(asr.frontend, x.sample_rate_hz);
  const std::size_t T = x.samples.size();
  if (T < static_cast<std::size_t>(asr.frontend.frame_len) + 1)
    throw DegenerateInputError("attack: source waveform too short");
  const std::size_t frames = frontend.frame_count(T);
  if (!ctc_feasible(frames, target.labels))
    throw InfeasibleTargetError(
        "attack: target needs " + std::to_string(ctc_min_frames(target.labels)) +
        " frames, source has " + std::to_string(frames));

  std::vector<double> delta(T, 0.0);
  double c = cfg.c;
  bool c_grown = false;

  AttackResult res;
  EncoderCache cache;

  auto make_candidate = [&]() {
    Waveform cand{x.samples, x.sample_rate_hz};
    for (std::size_t i = 0; i < T; ++i) cand.samples[i] += delta[i];
    return quantize_pcm16(clip(cand, cfg.clip_bound));
  };
  auto delta_sq = [&]() {
    double s = 0.0;
    for (double d : delta) s += d * d;
    return s;
  };
  auto check_success = [&](int iter) {
    Waveform cand = make_candidate();
    FeatureMatrix fm = frontend.forward(cand);
    LogitMatrix logits = asr_forward(asr, fm);
    Transcript decoded = greedy_decode(logits);
    double cand_loss;
    try {
      cand_loss = ctc_loss(logits, target).loss;
    } catch (const NumericError&) {
      cand_loss = std::numeric_limits<double>::infinity();
    }
    res.loss_trace.push_back({iter, cand_loss, delta_sq() + c * cand_loss});
    if (decoded.text == target.text) {
      res.success = true;
      res.adversarial = std::move(cand);
      res.decoded_text = decoded.text;
      res.final_ctc_loss = cand_loss;
      return true;
    }
    return false;
  };

  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    if (iter % cfg.success_check_every == 0 && check_success(iter)) break;
    if (!c_grown && cfg.c_growth > 1.0 && iter >= cfg.max_iters / 2) {
      c *= cfg.c_growth;
      c_grown = true;
    }

    // forward through the float (unquantized) chain
    Waveform xp{x.samples, x.sample_rate_hz};
    for (std::size_t i = 0; i < T; ++i) xp.samples[i] += delta[i];
    xp = clip(xp, cfg.clip_bound);
    FeatureMatrix fm = frontend.forward(xp);
    LogitMatrix logits = asr_forward(asr, fm, &cache);
    CtcResult ctc = ctc_loss(logits, target);
    if (!std::isfinite(ctc.loss))
      throw NumericError("attack: non-finite loss at iteration " +
                         std::to_string(iter));

    Matrix grad_features = asr_backward_to_features(asr, cache, ctc.grad);
    std::vector<double> grad_wave = frontend.backward(fm, grad_features);

    for (std::size_t i = 0; i < T; ++i) {
      double g = 2.0 * delta[i] + c * grad_wave[i];
      delta[i] -= cfg.lr * g;
      // box projection: keep x + delta inside [-M, +M]
      double s = x.samples[i] + delta[i];
      if (s > cfg.clip_bound) delta[i] = cfg.clip_bound - x.samples[i];
      if (s < -cfg.clip_bound) delta[i] = -cfg.clip_bound - x.samples[i];
    }
  }
  res.iterations_used = iter;

  if (!res.success) {
    // final evaluation on the budget-exhausted candidate
    Waveform cand = make_candidate();
    FeatureMatrix fm = frontend.forward(cand);
    LogitMatrix logits = asr_forward(asr, fm);
    Transcript decoded = greedy_decode(logits);
    double cand_loss;
    try {
      cand_loss = ctc_loss(logits, target).loss;
    } catch (const NumericError&) {
      cand_loss = std::numeric_limits<double>::infinity();
    }
    res.adversarial = std::move(cand);
    res.decoded_text = decoded.text;
    res.final_ctc_loss = cand_loss;
    res.success = decoded.text == target.text;
    if (res.loss_trace.empty() || res.loss_trace.back().iter != iter)
      res.loss_trace.push_back({iter, cand_loss, delta_sq() + c * cand_loss});
  }

  res.delta.sample_rate_hz = x.sample_rate_hz;
  res.delta.samples.resize(T);
  for (std::size_t i = 0; i < T; ++i)
    res.delta.samples[i] = res.adversarial.samples[i] - x.samples[i];
  res.snr_db = snr_db(x, res.delta);
  return res;
}

// ------------------------------------------------------------- batches

struct AttackTarget {
  std::string id;
  std::string text;
};

struct AttackRow {
  std::string source_id;
  std::string speaker_id;
  std::string target_id;
  bool success = false;
  int iterations = 0;
  double snr_db = 0.0;  // +inf encodes "no perturbation"
  double final_ctc_loss = 0.0;
  std::string decoded_text;
  std::string wav_path_adv;  // relative to the JSONL's directory
  std::uint64_t seed = 0;
  std::string error;  // non-empty when the per-item run failed

  nlohmann::json to_json() const {
    nlohmann::json j{{"source_id", source_id},
                     {"speaker_id", speaker_id},
                     {"target_id", target_id},
                     {"success", success},
                     {"iterations", iterations},
                     {"final_ctc_loss", final_ctc_loss},
                     {"decoded_text", decoded_text},
                     {"wav_path_adv", wav_path_adv},
                     {"seed", seed}};
    // JSON has no +inf; null means "no perturbation"
    if (std::isfinite(snr_db))
      j["snr_db"] = snr_db;
    else
      j["snr_db"] = nullptr;
    if (!error.empty()) j["error"] = error;
    return j;
  }

  static AttackRow from_json(const nlohmann::json& j) {
    AttackRow r;
    r.source_id = j.at("source_id").get<std::string>();
    r.speaker_id = j.value("speaker_id", std::string());
    r.target_id = j.at("target_id").get<std::string>();
    r.success = j.at("success").get<bool>();
    r.iterations = j.at("iterations").get<int>();
    r.final_ctc_loss = j.value("final_ctc_loss", 0.0);
    r.decoded_text = j.value("decoded_text", std::string());
    r.wav_path_adv = j.value("wav_path_adv", std::string());
    r.seed = j.value("seed", std::uint64_t(0));
    r.error = j.value("error", std::string());
    if (j.contains("snr_db") && !j.at("snr_db").is_null())
      r.snr_db = j.at("snr_db").get<double>();
    else
      r.snr_db = std::numeric_limits<double>::infinity();
    return r;
  }
};

inline std::vector<AttackRow> load_attack_rows(const std::string& jsonl_path) {
  std::vector<AttackRow> rows;
  std::ifstream in(jsonl_path);
  if (!in) return rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw FormatError(jsonl_path + ":" + std::to_string(lineno) +
                        ": bad JSON row");
    rows.push_back(AttackRow::from_json(j));
  }
  return rows;
}

// Cartesian product of sources x targets. Results stream to JSONL as they
// finish; rows already present are skipped, so an interrupted batch can be
// rerun. Per-item failures are recorded in their row, never abort the batch.
inline std::vector<AttackRow> attack_batch(
    const std::vector<ManifestRow>& sources,
    const std::vector<AttackTarget>& targets, const AcousticModel& asr,
    const AttackConfig& cfg, const std::string& out_dir,
    const std::string& jsonl_path, int jobs = 1) {
  if (sources.empty()) throw DataError("attack batch: no source utterances");
  namespace fs = std::filesystem;
  fs::path jsonl_base = fs::path(jsonl_path).parent_path();
  if (jsonl_base.empty()) jsonl_base = ".";
  fs::create_directories(out_dir);
  fs::create_directories(jsonl_base);

  std::vector<AttackRow> done = load_attack_rows(jsonl_path);
  std::set<std::pair<std::string, std::string>> have;
  for (const auto& r : done) have.insert({r.source_id, r.target_id});

  struct Job {
    const ManifestRow* src;
    const AttackTarget* tgt;
  };
  std::vector<Job> todo;
  for (const auto& s : sources)
    for (const auto& t : targets)
      if (!have.count({s.utt_id, t.id})) todo.push_back({&s, &t});

  std::ofstream out(jsonl_path, std::ios::app);
  if (!out) throw IoError("cannot open results file: " + jsonl_path);
  std::mutex write_mu;
  std::size_t next = 0;
  std::mutex next_mu;

  auto run_one = [&](const Job& job) {
    AttackRow row;
    row.source_id = job.src->utt_id;
    row.speaker_id = job.src->speaker_id;
    row.target_id = job.tgt->id;
    row.seed = derive_seed(cfg.seed, job.src->utt_id, job.tgt->id);
    try {
      Waveform x = read_wav(job.src->wav_path);
      Transcript target = Transcript::from_text(job.tgt->text, asr.vocab);
      AttackConfig item_cfg = cfg;
      item_cfg.seed = row.seed;
      AttackResult r = run_attack(x, target, asr, item_cfg);
      row.success = r.success;
      row.iterations = r.iterations_used;
      row.snr_db = r.snr_db;
      row.final_ctc_loss = r.final_ctc_loss;
      row.decoded_text = r.decoded_text;
      std::string wav_name = job.src->utt_id + "__" + job.tgt->id + ".wav";
      write_wav(r.adversarial, (fs::path(out_dir) / wav_name).string());
      row.wav_path_adv =
          fs::relative(fs::path(out_dir) / wav_name, jsonl_base).string();
    } catch (const Error& e) {
      row.error = e.what();
      row.snr_db = std::numeric_limits<double>::infinity();
    }
    {
      std::lock_guard<std::mutex> lk(write_mu);
      out << row.to_json().dump() << "\n";
      out.flush();
      done.push_back(row);
    }
  };

  if (jobs <= 1) {
    for (const auto& job : todo) run_one(job);
  } else {
    auto worker = [&]() {
      while (true) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lk(next_mu);
          if (next >= todo.size()) return;
          i = next++;
        }
        run_one(todo[i]);
      }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return done;
}

}  // namespace driftlab
