// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// driftlab command line: corpus synthesis, model training, targeted
// attacks, verification scoring, phoneme-confusion analysis, charts.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "driftlab/attack.hpp"
#include "driftlab/harness.hpp"
#include "driftlab/model_io.hpp"
#include "driftlab/phonetics.hpp"
#include "driftlab/synth.hpp"
#include "driftlab/targets.hpp"

namespace fs = std::filesystem;
using namespace driftlab;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string out = "out";
};

std::vector<AttackTarget> parse_targets(const std::string& ids_csv,
                                        const std::string& file) {
  std::vector<AttackTarget> out;
  if (!ids_csv.empty() && !file.empty())
    throw ConfigError("use either --targets or --targets-file, not both");
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open targets file: " + file);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line == "id,text") continue;
      auto pos = line.find(',');
      if (pos == std::string::npos)
        throw FormatError("targets file line must be 'id,text': " + line);
      out.push_back({line.substr(0, pos), line.substr(pos + 1)});
    }
    if (out.empty()) throw DataError("targets file is empty: " + file);
    return out;
  }
  if (!ids_csv.empty()) {
    std::size_t start = 0;
    while (start <= ids_csv.size()) {
      auto pos = ids_csv.find(',', start);
      std::string id = ids_csv.substr(
          start, pos == std::string::npos ? std::string::npos : pos - start);
      if (!id.empty()) {
        const TargetPhrase& t = find_target(id);
        out.push_back({t.id, t.text});
      }
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (out.empty()) throw DataError("no target ids given");
    return out;
  }
  for (const auto& t : target_set()) out.push_back({t.id, t.text});
  return out;
}

struct FrontendFlags {
  int frame_len = 400;
  int hop = 160;
  int n_fft = 512;
  int n_mels = 40;
};

void add_frontend_flags(CLI::App* cmd, FrontendFlags& f) {
  cmd->add_option("--frame-len", f.frame_len, "analysis frame length in samples");
  cmd->add_option("--hop", f.hop, "hop size in samples");
  cmd->add_option("--n-fft", f.n_fft, "FFT size (power of two)");
  cmd->add_option("--n-mels", f.n_mels, "number of mel filters");
}

// Frontend values stored in the model are a config echo; explicit flags
// win, with a warning.
void apply_frontend_overrides(FrontendConfig& cfg, const CLI::App* cmd,
                              const FrontendFlags& f) {
  auto override_int = [&](const char* flag, int value, int& field) {
    if (cmd->count(flag) && value != field) {
      std::fprintf(stderr,
                   "warning: %s=%d differs from the model's config echo (%d); "
                   "using the flag\n",
                   flag, value, field);
      field = value;
    }
  };
  override_int("--frame-len", f.frame_len, cfg.frame_len);
  override_int("--hop", f.hop, cfg.hop);
  override_int("--n-fft", f.n_fft, cfg.n_fft);
  override_int("--n-mels", f.n_mels, cfg.n_mels);
}

std::vector<std::pair<std::string, std::string>> parse_sid_specs(
    const std::vector<std::string>& specs) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : specs) {
    auto pos = s.find('=');
    if (pos == std::string::npos)
      out.emplace_back(fs::path(s).stem().string(), s);
    else
      out.emplace_back(s.substr(0, pos), s.substr(pos + 1));
  }
  return out;
}

double pooled_cer(const AcousticModel& model, const Manifest& manifest) {
  Frontend fe(model.frontend);
  std::size_t dist = 0, ref_len = 0;
  for (const auto& row : manifest.rows) {
    FeatureMatrix fm = fe.forward(read_wav(row.wav_path));
    fm.spectra.clear();
    Transcript decoded = greedy_decode(asr_forward(model, fm));
    std::vector<std::string> r, h;
    for (char c : row.transcript) r.emplace_back(1, c);
    for (char c : decoded.text) h.emplace_back(1, c);
    dist += static_cast<std::size_t>(edit_distance(align_tokens(r, h)));
    ref_len += row.transcript.size();
  }
  return ref_len == 0 ? 0.0 : static_cast<double>(dist) / static_cast<double>(ref_len);
}

double sid_accuracy(const SpeakerModel& model, const Manifest& manifest) {
  Frontend fe(model.frontend);
  std::size_t correct = 0;
  for (const auto& row : manifest.rows) {
    FeatureMatrix fm = fe.forward(read_wav(row.wav_path));
    fm.spectra.clear();
    Embedding e = sid_embed(model, fm);
    std::vector<double> logits(model.b_head.begin(), model.b_head.end());
    matvec_acc(model.w_head, e.v.data(), logits.data());
    std::size_t arg = static_cast<std::size_t>(
        std::max_element(logits.begin(), logits.end()) - logits.begin());
    if (model.speaker_ids.at(arg) == row.speaker_id) ++correct;
  }
  return manifest.rows.empty()
             ? 0.0
             : static_cast<double>(correct) /
                   static_cast<double>(manifest.rows.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale adversarial audio and speaker-identity drift toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value config file; flags override it");

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base seed for every derived random stream");
  app.add_option("--out", g.out, "output directory (or model path for training)");

  // ---- gen-corpus
  auto* gen = app.add_subcommand("gen-corpus", "synthesize a seeded toy corpus");
  SynthConfig synth_cfg;
  gen->add_option("--speakers", synth_cfg.n_speakers, "number of speakers");
  gen->add_option("--utts-per-speaker", synth_cfg.utterances_per_speaker,
                  "utterances per speaker");
  gen->add_option("--char-ms", synth_cfg.char_duration_ms,
                  "per-character tone duration (ms)");
  gen->add_option("--noise-rms", synth_cfg.noise_rms, "additive noise RMS");
  std::string sentences_file;
  gen->add_option("--sentences-file", sentences_file,
                  "replace the built-in sentence pool (one per line)");

  // ---- train-asr
  auto* tasr = app.add_subcommand("train-asr", "train the CTC acoustic model");
  std::string manifest_path, eval_manifest_path;
  TrainConfig train_cfg;
  tasr->add_option("--manifest", manifest_path, "training manifest CSV")->required();
  tasr->add_option("--eval-manifest", eval_manifest_path,
                   "optional held-out manifest; prints greedy CER");
  tasr->add_option("--epochs", train_cfg.epochs, "training epochs");
  tasr->add_option("--hidden", train_cfg.hidden, "recurrent width");
  tasr->add_option("--lr", train_cfg.lr, "Adam learning rate");

  // ---- train-sid
  auto* tsid = app.add_subcommand("train-sid", "train the speaker-embedding model");
  tsid->add_option("--manifest", manifest_path, "training manifest CSV")->required();
  tsid->add_option("--eval-manifest", eval_manifest_path,
                   "optional held-out manifest; prints classification accuracy");
  tsid->add_option("--epochs", train_cfg.epochs, "training epochs");
  tsid->add_option("--hidden", train_cfg.hidden, "recurrent width");
  tsid->add_option("--embed-dim", train_cfg.embed_dim, "embedding dimension");
  tsid->add_option("--lr", train_cfg.lr, "Adam learning rate");

  // ---- attack
  auto* atk = app.add_subcommand("attack", "run the targeted attack batch");
  std::string asr_path, targets_csv, targets_file, source_list;
  AttackConfig attack_cfg;
  int jobs = 1;
  atk->add_option("--manifest", manifest_path, "corpus manifest CSV")->required();
  atk->add_option("--asr", asr_path, "acoustic model file")->required();
  atk->add_option("--targets", targets_csv, "built-in target ids, e.g. T1,T2");
  atk->add_option("--targets-file", targets_file, "custom targets CSV (id,text)");
  atk->add_option("--source-list", source_list,
                  "file of utt_ids to attack (default: first per speaker)");
  atk->add_option("--c", attack_cfg.c, "CTC loss weight");
  atk->add_option("--lr", attack_cfg.lr, "attack step size");
  atk->add_option("--iters", attack_cfg.max_iters, "iteration budget");
  atk->add_option("--check-every", attack_cfg.success_check_every,
                  "success-check period");
  atk->add_option("--c-growth", attack_cfg.c_growth,
                  "one-time c multiplier at half budget");
  atk->add_option("--jobs", jobs, "parallel attack workers");
  FrontendFlags fe_flags;
  add_frontend_flags(atk, fe_flags);

  // ---- evaluate
  auto* eval = app.add_subcommand(
      "evaluate", "attack (resumable) + embed + score + analyze");
  std::vector<std::string> sid_specs;
  std::string lexicon_path;
  eval->add_option("--manifest", manifest_path, "corpus manifest CSV")->required();
  eval->add_option("--asr", asr_path, "acoustic model file")->required();
  eval->add_option("--sid", sid_specs,
                   "speaker model, repeatable; 'name=path' or path")
      ->required();
  eval->add_option("--targets", targets_csv, "built-in target ids, e.g. T1,T2");
  eval->add_option("--targets-file", targets_file, "custom targets CSV (id,text)");
  eval->add_option("--source-list", source_list, "file of utt_ids to attack");
  eval->add_option("--lexicon", lexicon_path, "lexicon file (default: built-in)");
  eval->add_option("--c", attack_cfg.c, "CTC loss weight");
  eval->add_option("--lr", attack_cfg.lr, "attack step size");
  eval->add_option("--iters", attack_cfg.max_iters, "iteration budget");
  eval->add_option("--check-every", attack_cfg.success_check_every,
                   "success-check period");
  eval->add_option("--c-growth", attack_cfg.c_growth,
                   "one-time c multiplier at half budget");
  eval->add_option("--jobs", jobs, "parallel attack workers");
  add_frontend_flags(eval, fe_flags);

  // ---- phoneme-confusion
  auto* conf = app.add_subcommand(
      "phoneme-confusion", "confusion matrices from an attack results file");
  std::string results_path;
  conf->add_option("--results", results_path, "attacks.jsonl")->required();
  conf->add_option("--targets", targets_csv, "built-in target ids");
  conf->add_option("--targets-file", targets_file, "custom targets CSV (id,text)");
  conf->add_option("--lexicon", lexicon_path, "lexicon file (default: built-in)");

  // ---- report
  auto* rep = app.add_subcommand("report", "render charts from an experiment dir");
  std::string experiment_dir;
  rep->add_option("--experiment", experiment_dir,
                  "experiment directory (default: --out)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      synth_cfg.seed = g.seed;
      if (!sentences_file.empty()) {
        std::ifstream in(sentences_file);
        if (!in) throw IoError("cannot open sentences file: " + sentences_file);
        synth_cfg.sentences.clear();
        std::string line;
        while (std::getline(in, line)) {
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (!line.empty()) synth_cfg.sentences.push_back(line);
        }
        if (synth_cfg.sentences.empty())
          throw DataError("sentences file is empty: " + sentences_file);
      }
      Manifest m = gen_corpus(synth_cfg, g.out);
      std::printf("wrote %zu utterances under %s\n", m.rows.size(), g.out.c_str());
      std::printf("manifest: %s\n", (fs::path(g.out) / "manifest.csv").string().c_str());
      return 0;
    }

    if (tasr->parsed()) {
      train_cfg.seed = g.seed;
      Manifest m = Manifest::load(manifest_path);
      TrainedAsr trained = train_asr(m.rows, train_cfg, FrontendConfig{},
                                     Vocabulary::lowercase_letters_space());
      fs::path model_path = g.out;
      if (!model_path.parent_path().empty())
        fs::create_directories(model_path.parent_path());
      save_model(trained.model, model_path.string());
      write_asr_curve(trained.curve, model_path.string() + ".curve.csv");
      std::printf("model: %s\n", model_path.string().c_str());
      std::printf("final training loss: %.6f\n", trained.curve.back().loss);
      if (!eval_manifest_path.empty()) {
        Manifest held = Manifest::load(eval_manifest_path);
        std::printf("held-out greedy CER: %.4f\n", pooled_cer(trained.model, held));
      }
      return 0;
    }

    if (tsid->parsed()) {
      train_cfg.seed = g.seed;
      Manifest m = Manifest::load(manifest_path);
      TrainedSid trained = train_sid(m.rows, train_cfg, FrontendConfig{});
      fs::path model_path = g.out;
      if (!model_path.parent_path().empty())
        fs::create_directories(model_path.parent_path());
      save_model(trained.model, model_path.string());
      write_sid_curve(trained.curve, model_path.string() + ".curve.csv");
      std::printf("model: %s\n", model_path.string().c_str());
      std::printf("final training accuracy: %.4f\n", trained.curve.back().accuracy);
      if (!eval_manifest_path.empty()) {
        Manifest held = Manifest::load(eval_manifest_path);
        std::printf("held-out accuracy: %.4f\n", sid_accuracy(trained.model, held));
      }
      return 0;
    }

    if (atk->parsed()) {
      AcousticModel asr = load_asr_model(asr_path);
      apply_frontend_overrides(asr.frontend, atk, fe_flags);
      Manifest m = Manifest::load(manifest_path);
      std::vector<ManifestRow> sources;
      if (!source_list.empty()) {
        std::set<std::string> wanted;
        std::ifstream in(source_list);
        if (!in) throw IoError("cannot open source list: " + source_list);
        std::string line;
        while (std::getline(in, line))
          if (!line.empty()) wanted.insert(line);
        for (const auto& r : m.rows)
          if (wanted.count(r.utt_id)) sources.push_back(r);
      } else {
        sources = m.first_utt_per_speaker();
      }
      attack_cfg.seed = g.seed;
      auto targets = parse_targets(targets_csv, targets_file);
      auto rows = attack_batch(sources, targets, asr, attack_cfg,
                               (fs::path(g.out) / "adv").string(),
                               (fs::path(g.out) / "attacks.jsonl").string(), jobs);
      std::size_t ok = 0;
      for (const auto& r : rows) ok += r.success;
      std::printf("%zu rows (%zu successful) in %s\n", rows.size(), ok,
                  (fs::path(g.out) / "attacks.jsonl").string().c_str());
      return 0;
    }

    if (eval->parsed()) {
      RunConfig cfg;
      cfg.manifest_path = manifest_path;
      cfg.out_dir = g.out;
      cfg.asr_model_path = asr_path;
      cfg.sid_models = parse_sid_specs(sid_specs);
      cfg.targets = parse_targets(targets_csv, targets_file);
      cfg.attack = attack_cfg;
      cfg.jobs = jobs;
      cfg.lexicon_path = lexicon_path;
      cfg.source_list_path = source_list;
      cfg.seed = g.seed;
      // frontend overrides are applied against the model's config echo;
      // the pipeline then loads the overridden copy
      {
        AcousticModel probe = load_asr_model(asr_path);
        FrontendConfig overridden = probe.frontend;
        apply_frontend_overrides(overridden, eval, fe_flags);
        if (!(overridden == probe.frontend)) {
          probe.frontend = overridden;
          fs::create_directories(g.out);
          save_model(probe, (fs::path(g.out) / "asr_override.model").string());
          cfg.asr_model_path = (fs::path(g.out) / "asr_override.model").string();
        }
      }
      std::string dir = run_pipeline(cfg);
      std::printf("experiment: %s\n", dir.c_str());
      std::printf("summary: %s\n", (fs::path(dir) / "summary.csv").string().c_str());
      return 0;
    }

    if (conf->parsed()) {
      auto rows = load_attack_rows(results_path);
      if (rows.empty()) throw DataError("no rows in " + results_path);
      auto targets = parse_targets(targets_csv, targets_file);
      const Lexicon* lex = &Lexicon::builtin();
      Lexicon file_lex;
      if (!lexicon_path.empty()) {
        file_lex = Lexicon::from_file(lexicon_path);
        lex = &file_lex;
      }
      fs::create_directories(fs::path(g.out) / "confusion");
      std::vector<std::pair<PhonemeSequence, PhonemeSequence>> all_pairs;
      for (const auto& target : targets) {
        std::vector<std::pair<PhonemeSequence, PhonemeSequence>> pairs;
        for (const auto& r : rows) {
          if (r.target_id != target.id || !r.error.empty()) continue;
          pairs.push_back({g2p(target.text, *lex), g2p(r.decoded_text, *lex)});
        }
        all_pairs.insert(all_pairs.end(), pairs.begin(), pairs.end());
        ConfusionMatrix cm = confusion_matrix(pairs);
        std::ofstream f(fs::path(g.out) / "confusion" / (target.id + ".csv"));
        f << confusion_csv(cm);
        std::printf("%s: %zu pairs, centralization %.3f, oov ops %d\n",
                    target.id.c_str(), pairs.size(), cm.centralization(),
                    cm.oov_ops);
      }
      std::ofstream f(fs::path(g.out) / "confusion" / "global.csv");
      f << confusion_csv(confusion_matrix(all_pairs));
      return 0;
    }

    if (rep->parsed()) {
      std::string dir = experiment_dir.empty() ? g.out : experiment_dir;
      report(dir);
      std::printf("charts written under %s\n", dir.c_str());
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
