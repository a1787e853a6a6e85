// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// Experiment orchestration: attack batches over a corpus, embedding and
// scoring of the results, per-target statistics, summary tables shaped
// like the verification-metrics table, and chart emission.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftlab/attack.hpp"
#include "driftlab/audio.hpp"
#include "driftlab/common.hpp"
#include "driftlab/manifest.hpp"
#include "driftlab/model.hpp"
#include "driftlab/model_io.hpp"
#include "driftlab/phonetics.hpp"
#include "driftlab/svg.hpp"
#include "driftlab/targets.hpp"
#include "driftlab/verify.hpp"

namespace driftlab {

struct RunConfig {
  std::string manifest_path;
  std::string out_dir;
  std::string asr_model_path;
  std::vector<std::pair<std::string, std::string>> sid_models;  // name, path
  std::vector<AttackTarget> targets;
  AttackConfig attack;
  int jobs = 1;
  std::string lexicon_path;       // empty = builtin
  std::string source_list_path;   // optional explicit utt_id list
  std::uint64_t seed = 0;
};

namespace detail {

inline std::string fmt_metric(double v, int prec = 6) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

inline double parse_metric(const std::string& s) {
  if (s == "NA" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

constexpr const char* kSummaryHeader =
    "target_id,target_text,model,n_samples,n_genuine,n_impostor,"
    "tmr_at_fmr_0p1,d_prime,mean_snr_db,mean_gen_cosine,wer,cer";

struct TargetModelStats {
  std::string target_id;
  std::string target_text;
  std::string model;
  std::size_t n_samples = 0;
  std::size_t n_genuine = 0;
  std::size_t n_impostor = 0;
  double tmr = std::numeric_limits<double>::quiet_NaN();
  double threshold = std::numeric_limits<double>::quiet_NaN();
  double dprime = std::numeric_limits<double>::quiet_NaN();
  double mu_gen = std::numeric_limits<double>::quiet_NaN();
  double mu_imp = std::numeric_limits<double>::quiet_NaN();
  double var_gen = std::numeric_limits<double>::quiet_NaN();
  double var_imp = std::numeric_limits<double>::quiet_NaN();
  double mean_snr_db = std::numeric_limits<double>::quiet_NaN();
  double mean_gen_cosine = std::numeric_limits<double>::quiet_NaN();
  double wer = std::numeric_limits<double>::quiet_NaN();
  double cer = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_attacked = 0;
  std::size_t n_success = 0;
  std::size_t n_errors = 0;

  std::string summary_row() const {
    std::ostringstream out;
    out << target_id << ',' << target_text << ',' << model << ',' << n_samples
        << ',' << n_genuine << ',' << n_impostor << ','
        << detail::fmt_metric(tmr) << ',' << detail::fmt_metric(dprime) << ','
        << detail::fmt_metric(mean_snr_db) << ','
        << detail::fmt_metric(mean_gen_cosine) << ','
        << detail::fmt_metric(wer) << ',' << detail::fmt_metric(cer);
    return out.str();
  }

  nlohmann::json to_json() const {
    return {{"target_id", target_id},
            {"target_text", target_text},
            {"model", model},
            {"n_samples", n_samples},
            {"n_genuine", n_genuine},
            {"n_impostor", n_impostor},
            {"tmr_at_fmr_0p1", detail::fmt_metric(tmr)},
            {"threshold", detail::fmt_metric(threshold)},
            {"d_prime", detail::fmt_metric(dprime)},
            {"mu_gen", detail::fmt_metric(mu_gen)},
            {"mu_imp", detail::fmt_metric(mu_imp)},
            {"var_gen", detail::fmt_metric(var_gen, 9)},
            {"var_imp", detail::fmt_metric(var_imp, 9)},
            {"mean_snr_db", detail::fmt_metric(mean_snr_db)},
            {"mean_gen_cosine", detail::fmt_metric(mean_gen_cosine)},
            {"wer", detail::fmt_metric(wer)},
            {"cer", detail::fmt_metric(cer)},
            {"n_attacked", n_attacked},
            {"n_success", n_success},
            {"n_errors", n_errors}};
  }
};

// Scores every attack row against the speaker models and writes the
// experiment artifacts: per-(target,model) score CSVs and stats JSON,
// per-target phoneme-confusion CSVs, the summary CSV, and notes about
// known data discrepancies. Pairing per target is restricted to speakers
// whose attack succeeded, so the counts follow N^2 / N / N(N-1) over the
// successful set.
inline std::vector<TargetModelStats> evaluate_attacks(
    const std::vector<ManifestRow>& sources,
    const std::vector<AttackRow>& rows,
    const std::vector<AttackTarget>& targets,
    const std::vector<std::pair<std::string, const SpeakerModel*>>& models,
    const std::string& out_dir, const Lexicon& lexicon,
    const std::string& attacks_dir_hint = "") {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  fs::create_directories(fs::path(out_dir) / "scores");
  fs::create_directories(fs::path(out_dir) / "stats");
  fs::create_directories(fs::path(out_dir) / "confusion");

  std::map<std::string, const ManifestRow*> source_by_utt;
  for (const auto& s : sources) source_by_utt[s.utt_id] = &s;

  // rows grouped per target, one row per source (first wins)
  std::map<std::string, std::map<std::string, const AttackRow*>> by_target;
  for (const auto& r : rows)
    by_target[r.target_id].emplace(r.source_id, &r);

  // clean embeddings per model, keyed by speaker
  std::map<std::string, Waveform> clean_wavs;
  for (const auto& s : sources) clean_wavs.emplace(s.utt_id, read_wav(s.wav_path));
  std::vector<std::map<std::string, Embedding>> clean_emb(models.size());
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    Frontend fe(models[mi].second->frontend);
    for (const auto& s : sources) {
      FeatureMatrix fm = fe.forward(clean_wavs.at(s.utt_id));
      fm.spectra.clear();
      clean_emb[mi][s.speaker_id] = sid_embed(*models[mi].second, fm);
    }
  }

  fs::path adv_base = attacks_dir_hint.empty() ? fs::path(out_dir)
                                               : fs::path(attacks_dir_hint);

  std::vector<TargetModelStats> all_stats;
  std::vector<std::pair<PhonemeSequence, PhonemeSequence>> all_phone_pairs;
  nlohmann::json confusion_summary = nlohmann::json::object();

  for (const auto& target : targets) {
    auto rows_it = by_target.find(target.id);
    std::map<std::string, const AttackRow*> target_rows;
    if (rows_it != by_target.end()) target_rows = rows_it->second;

    // phoneme confusion: target text vs decoded text, per attacked row
    std::vector<std::pair<PhonemeSequence, PhonemeSequence>> phone_pairs;
    for (const auto& [src, row] : target_rows) {
      if (!row->error.empty()) continue;
      phone_pairs.push_back(
          {g2p(target.text, lexicon), g2p(row->decoded_text, lexicon)});
    }
    ConfusionMatrix cm = confusion_matrix(phone_pairs);
    all_phone_pairs.insert(all_phone_pairs.end(), phone_pairs.begin(),
                           phone_pairs.end());
    {
      std::ofstream cf(fs::path(out_dir) / "confusion" / (target.id + ".csv"));
      cf << confusion_csv(cm);
      int subs = 0;
      for (const auto& [r, hyps] : cm.counts)
        for (const auto& [h, n] : hyps)
          if (r != h) subs += n;
      confusion_summary[target.id] = {
          {"pairs", phone_pairs.size()},
          {"total_ops", cm.total_ops},
          {"substitutions", subs},
          {"centralization", detail::fmt_metric(cm.centralization())},
          {"oov_ops", cm.oov_ops}};
    }

    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      TargetModelStats st;
      st.target_id = target.id;
      st.target_text = target.text;
      st.model = models[mi].first;
      st.n_attacked = target_rows.size();

      Frontend fe(models[mi].second->frontend);
      std::map<std::string, Embedding> adv_emb;
      std::vector<double> snrs, gen_cos;
      double wer_sum = 0.0, cer_sum = 0.0;
      std::size_t wer_n = 0;
      for (const auto& [src, row] : target_rows) {
        if (!row->error.empty()) {
          ++st.n_errors;
          continue;
        }
        ErrorRates er = wer_cer(target.text, row->decoded_text);
        wer_sum += er.wer;
        cer_sum += er.cer;
        ++wer_n;
        if (!row->success) continue;
        ++st.n_success;
        auto src_it = source_by_utt.find(src);
        if (src_it == source_by_utt.end())
          throw DataError("attack row references unknown source '" + src + "'");
        fs::path wav = fs::path(row->wav_path_adv);
        if (wav.is_relative()) wav = adv_base / wav;
        FeatureMatrix fm = fe.forward(read_wav(wav.string()));
        fm.spectra.clear();
        Embedding e = sid_embed(*models[mi].second, fm);
        const std::string& spk = src_it->second->speaker_id;
        adv_emb[spk] = e;
        gen_cos.push_back(cosine_similarity(clean_emb[mi].at(spk), e));
        if (std::isfinite(row->snr_db)) snrs.push_back(row->snr_db);
      }

      if (wer_n > 0) {
        st.wer = wer_sum / static_cast<double>(wer_n);
        st.cer = cer_sum / static_cast<double>(wer_n);
      }
      if (!snrs.empty()) {
        double s = 0.0;
        for (double v : snrs) s += v;
        st.mean_snr_db = s / static_cast<double>(snrs.size());
      }
      if (!gen_cos.empty()) {
        double s = 0.0;
        for (double v : gen_cos) s += v;
        st.mean_gen_cosine = s / static_cast<double>(gen_cos.size());
      }

      st.n_genuine = adv_emb.size();
      st.n_impostor = adv_emb.size() * (adv_emb.size() - 1);
      st.n_samples = adv_emb.size() * adv_emb.size();
      if (adv_emb.size() >= 2) {
        std::map<std::string, Embedding> clean_sub;
        for (const auto& [spk, _] : adv_emb)
          clean_sub[spk] = clean_emb[mi].at(spk);
        std::vector<ScoredPair> pairs;
        ScoreSet scores = make_pairs(clean_sub, adv_emb, &pairs);
        ScoreStats stats = d_prime(scores);
        TmrResult tmr = tmr_at_fmr(scores, 0.001);
        st.dprime = stats.d_prime;
        st.mu_gen = stats.mu_gen;
        st.mu_imp = stats.mu_imp;
        st.var_gen = stats.var_gen;
        st.var_imp = stats.var_imp;
        st.tmr = tmr.tmr;
        st.threshold = tmr.threshold;

        std::ofstream sf(fs::path(out_dir) / "scores" /
                         (target.id + "_" + st.model + ".csv"));
        sf << "clean_speaker,adv_speaker,score,is_genuine\n";
        char buf[64];
        for (const auto& p : pairs) {
          std::snprintf(buf, sizeof buf, "%.9f", p.score);
          sf << p.clean_speaker << ',' << p.adv_speaker << ',' << buf << ','
             << (p.is_genuine ? 1 : 0) << "\n";
        }
      }

      std::ofstream jf(fs::path(out_dir) / "stats" /
                       (target.id + "_" + st.model + ".json"));
      jf << st.to_json().dump(2) << "\n";
      all_stats.push_back(std::move(st));
    }
  }

  {
    std::ofstream gf(fs::path(out_dir) / "confusion" / "global.csv");
    gf << confusion_csv(confusion_matrix(all_phone_pairs));
    std::ofstream sf(fs::path(out_dir) / "confusion" / "summary.json");
    sf << confusion_summary.dump(2) << "\n";
  }

  {
    std::ofstream out(fs::path(out_dir) / "summary.csv", std::ios::trunc);
    out << kSummaryHeader << "\n";
    for (const auto& st : all_stats) out << st.summary_row() << "\n";
  }

  // notes: known text variants and lexicon-vs-published profile deltas
  {
    std::ofstream notes(fs::path(out_dir) / "notes.txt", std::ios::trunc);
    for (const auto& target : targets) {
      for (const auto& t : target_set()) {
        if (t.id != target.id) continue;
        if (!t.alt_text.empty())
          notes << target.id << ": text has a known variant; attacked \""
                << t.text << "\", variant \"" << t.alt_text << "\"\n";
        if (!t.note.empty()) {
          TargetProfile p = profile_target(t.text, lexicon);
          notes << target.id << ": published note \"" << t.note
                << "\"; lexicon profile " << p.vc_ratio() << " V:C, "
                << p.syllable_proxy << " syll.";
          if (t.note.find(p.vc_ratio() + " V:C") == std::string::npos &&
              t.note.find("V:C") != std::string::npos)
            notes << " (V:C differs from published note)";
          notes << "\n";
        }
      }
    }
  }

  return all_stats;
}

// train -> attack -> embed -> score -> analyze; resumable at the
// attack-row level. Returns the experiment directory.
inline std::string run_pipeline(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.targets.empty()) throw ConfigError("pipeline: no targets selected");
  if (cfg.sid_models.empty())
    throw ConfigError("pipeline: at least one speaker model is required");
  if (!fs::exists(cfg.asr_model_path))
    throw ConfigError("pipeline: acoustic model not found: " + cfg.asr_model_path);
  for (const auto& [name, path] : cfg.sid_models)
    if (!fs::exists(path))
      throw ConfigError("pipeline: speaker model not found: " + path);

  AcousticModel asr = load_asr_model(cfg.asr_model_path);
  std::vector<SpeakerModel> sid_storage;
  sid_storage.reserve(cfg.sid_models.size());
  std::vector<std::pair<std::string, const SpeakerModel*>> sids;
  for (const auto& [name, path] : cfg.sid_models) {
    sid_storage.push_back(load_sid_model(path));
    sids.emplace_back(name, &sid_storage.back());
  }

  Manifest manifest = Manifest::load(cfg.manifest_path);
  std::vector<ManifestRow> sources;
  if (!cfg.source_list_path.empty()) {
    std::ifstream in(cfg.source_list_path);
    if (!in) throw IoError("cannot open source list: " + cfg.source_list_path);
    std::set<std::string> wanted;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) wanted.insert(line);
    }
    for (const auto& r : manifest.rows)
      if (wanted.count(r.utt_id)) sources.push_back(r);
    if (sources.size() != wanted.size())
      throw DataError("source list names utt_ids missing from the manifest");
  } else {
    sources = manifest.first_utt_per_speaker();
  }

  fs::create_directories(cfg.out_dir);
  AttackConfig atk = cfg.attack;
  atk.seed = cfg.seed;
  std::string adv_dir = (fs::path(cfg.out_dir) / "adv").string();
  std::string jsonl = (fs::path(cfg.out_dir) / "attacks.jsonl").string();
  std::vector<AttackRow> rows =
      attack_batch(sources, cfg.targets, asr, atk, adv_dir, jsonl, cfg.jobs);

  const Lexicon* lex = &Lexicon::builtin();
  Lexicon file_lex;
  if (!cfg.lexicon_path.empty()) {
    file_lex = Lexicon::from_file(cfg.lexicon_path);
    lex = &file_lex;
  }
  evaluate_attacks(sources, rows, cfg.targets, sids, cfg.out_dir, *lex,
                   cfg.out_dir);
  return cfg.out_dir;
}

// ----------------------------------------------------------------- report

namespace detail {

struct SummaryTable {
  std::vector<std::string> target_ids;  // in file order, unique
  std::vector<std::string> models;      // in file order, unique
  // (target, model) -> parsed row fields
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> rows;
  std::vector<std::string> header;
};

inline SummaryTable read_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open summary: " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("summary file empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  SummaryTable t;
  t.header = split_csv_line(line);
  auto col = [&](const char* name) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
      if (t.header[i] == name) return i;
    throw FormatError(std::string("summary is missing column '") + name +
                      "': " + path);
  };
  std::size_t c_target = col("target_id");
  std::size_t c_model = col("model");
  col("d_prime");
  col("mean_snr_db");
  col("mean_gen_cosine");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != t.header.size())
      throw FormatError("summary row column count mismatch: " + path);
    const std::string& tid = fields[c_target];
    const std::string& model = fields[c_model];
    if (std::find(t.target_ids.begin(), t.target_ids.end(), tid) ==
        t.target_ids.end())
      t.target_ids.push_back(tid);
    if (std::find(t.models.begin(), t.models.end(), model) == t.models.end())
      t.models.push_back(model);
    t.rows[{tid, model}] = fields;
  }
  return t;
}

inline std::size_t column_index(const SummaryTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return i;
  throw FormatError("summary is missing column '" + name + "'");
}

}  // namespace detail

inline const std::vector<std::string>& chart_palette() {
  static const std::vector<std::string> colors = {"#4878cf", "#ee854a",
                                                  "#6acc65", "#d65f5f"};
  return colors;
}

// Renders the experiment charts from summary.csv, plus the reference d'
// chart from the embedded table. Charts are pure views over CSV files in
// the same directory.
inline void report(const std::string& experiment_dir) {
  namespace fs = std::filesystem;
  detail::SummaryTable t =
      detail::read_summary((fs::path(experiment_dir) / "summary.csv").string());

  std::size_t c_dprime = detail::column_index(t, "d_prime");
  std::size_t c_snr = detail::column_index(t, "mean_snr_db");
  std::size_t c_cos = detail::column_index(t, "mean_gen_cosine");

  // d' grouped bars, one series per model
  std::vector<svg::Series> dprime_series;
  for (std::size_t mi = 0; mi < t.models.size(); ++mi) {
    svg::Series s;
    s.name = t.models[mi];
    s.color = chart_palette()[mi % chart_palette().size()];
    for (const auto& tid : t.target_ids) {
      auto it = t.rows.find({tid, t.models[mi]});
      std::string raw =
          it == t.rows.end() ? "NA" : it->second[c_dprime];
      double v = detail::parse_metric(raw);
      s.values.push_back(std::isfinite(v)
                             ? v
                             : std::numeric_limits<double>::quiet_NaN());
      s.raw_values.push_back(raw);
    }
    dprime_series.push_back(std::move(s));
  }
  svg::write_file(
      svg::grouped_bar_chart("d' per target", t.target_ids, dprime_series, "d'"),
      (fs::path(experiment_dir) / "dprime.svg").string());

  // SNR bars (model-independent; first model's rows) + similarity lines
  svg::Series snr_bars;
  snr_bars.name = "mean SNR (dB)";
  snr_bars.color = "#b0b0b0";
  std::vector<svg::Series> cos_lines;
  for (const auto& tid : t.target_ids) {
    std::string raw = "NA";
    if (!t.models.empty()) {
      auto it = t.rows.find({tid, t.models.front()});
      if (it != t.rows.end()) raw = it->second[c_snr];
    }
    double v = detail::parse_metric(raw);
    snr_bars.values.push_back(
        std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN());
    snr_bars.raw_values.push_back(raw);
  }
  for (std::size_t mi = 0; mi < t.models.size(); ++mi) {
    svg::Series s;
    s.name = t.models[mi] + " cosine";
    s.color = chart_palette()[mi % chart_palette().size()];
    for (const auto& tid : t.target_ids) {
      auto it = t.rows.find({tid, t.models[mi]});
      std::string raw = it == t.rows.end() ? "NA" : it->second[c_cos];
      double v = detail::parse_metric(raw);
      s.values.push_back(std::isfinite(v)
                             ? v
                             : std::numeric_limits<double>::quiet_NaN());
      s.raw_values.push_back(raw);
    }
    cos_lines.push_back(std::move(s));
  }
  svg::write_file(
      svg::bars_and_lines_chart("mean SNR and mean genuine cosine per target",
                                t.target_ids, snr_bars, cos_lines, "SNR (dB)",
                                "cosine similarity", 1.0),
      (fs::path(experiment_dir) / "snr_similarity.svg").string());

  // reference d' chart from the embedded table, bar values byte-equal to
  // the CSV cells
  {
    std::string csv = dprime_reference_csv();
    std::ofstream rf(fs::path(experiment_dir) / "dprime_reference.csv",
                     std::ios::trunc);
    rf << csv;

    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header: T,Target,ECAPA,RESNET50
    auto header = detail::split_csv_line(line);
    std::vector<std::string> ids;
    svg::Series a, b;
    a.name = header.at(2);
    a.color = chart_palette()[0];
    b.name = header.at(3);
    b.color = chart_palette()[1];
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto fields = detail::split_csv_line(line);
      ids.push_back(fields.at(0));
      a.values.push_back(std::stod(fields.at(2)));
      a.raw_values.push_back(fields.at(2));
      b.values.push_back(std::stod(fields.at(3)));
      b.raw_values.push_back(fields.at(3));
    }
    svg::write_file(
        svg::grouped_bar_chart("reference d' per target", ids, {a, b}, "d'"),
        (fs::path(experiment_dir) / "dprime_reference.svg").string());
  }
}

}  // namespace driftlab
