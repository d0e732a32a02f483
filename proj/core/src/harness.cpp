#include "polymt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "polymt/text.hpp"

namespace polymt {

void AblationPlan::validate() const {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(Errc::bad_fraction, "fraction must lie in (0,1], got " + std::to_string(fraction));
  }
}

AblationSample sample_low_resource(std::span<const std::string> ids, std::span<const std::string> texts,
                                   const AblationPlan& plan) {
  plan.validate();
  if (ids.empty()) throw Error(Errc::empty_corpus, "no verses to sample from");
  if (!texts.empty() && texts.size() != ids.size()) {
    throw Error(Errc::length_mismatch, "ids and texts differ in length");
  }
  const std::size_t total = plan.total == 0 ? ids.size() : plan.total;
  const auto drawn = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(plan.fraction * static_cast<double>(total) + 1e-9)));

  SeededRng rng(plan.seed);
  std::vector<std::size_t> picks(drawn);
  for (std::size_t& p : picks) p = static_cast<std::size_t>(rng.below(ids.size()));

  AblationSample out;
  out.drawn = drawn;
  out.ids.reserve(total);
  for (std::size_t i = 0; i < total; ++i) out.ids.push_back(ids[picks[i % drawn]]);

  std::set<std::size_t> distinct(picks.begin(), picks.end());
  out.distinct = distinct.size();
  if (!texts.empty()) {
    for (const std::size_t p : distinct) out.unique_words += split_whitespace(texts[p]).size();
    out.log10_words = log10_rounded(out.unique_words);
  }
  return out;
}

std::string format_ablation_row(const AblationPlan& plan, const AblationSample& sample) {
  char fraction[32];
  std::snprintf(fraction, sizeof fraction, "%g", plan.fraction);
  return std::string(fraction) + '\t' + std::to_string(plan.seed) + '\t' + std::to_string(sample.ids.size()) + '\t' +
         std::to_string(sample.distinct) + '\t' + std::to_string(sample.unique_words) + '\t' +
         format_log10(sample.log10_words);
}

std::string_view gl_decision_name(GlDecision d) noexcept {
  return d == GlDecision::stop ? "stop" : "continue";
}

GlResult gl_update(const GlState& state, std::size_t epoch, double val_score) {
  if (!std::isfinite(val_score) || val_score < 0.0) {
    throw Error(Errc::invalid_argument, "validation score must be a non-negative number");
  }
  if (!state.history.empty() && epoch <= state.history.back().first) {
    throw Error(Errc::non_monotone_epoch, "epoch " + std::to_string(epoch) + " does not follow epoch " +
                                              std::to_string(state.history.back().first));
  }
  GlResult r;
  r.state = state;
  r.state.history.emplace_back(epoch, val_score);
  r.state.best = std::max(state.history.empty() ? val_score : state.best, val_score);
  r.gl = r.state.best > 0.0 ? std::max(0.0, 100.0 * (1.0 - val_score / r.state.best)) : 0.0;
  r.decision = r.gl > state.alpha ? GlDecision::stop : GlDecision::continue_training;
  return r;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw Error(Errc::degenerate_input, "need at least two points");
  std::vector<double> xs;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !std::isfinite(y)) throw Error(Errc::degenerate_input, "word counts must be positive");
    xs.push_back(std::log10(x));
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += points[i].second;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = points[i].second - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw Error(Errc::degenerate_input, "all word counts are equal");
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

TrainerProfile parse_trainer_profile(std::string_view name) {
  if (name == "multilingual") return TrainerProfile::multilingual;
  if (name == "single-pair") return TrainerProfile::single_pair;
  throw Error(Errc::unknown_profile, "unknown trainer profile '" + std::string(name) + "'");
}

std::string_view trainer_profile_name(TrainerProfile p) noexcept {
  return p == TrainerProfile::multilingual ? "multilingual" : "single-pair";
}

std::string TrainerConfig::serialize() const {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  std::string out;
  out += "# profile: " + std::string(trainer_profile_name(profile)) + "\n";
  out += "max_batch_size = " + std::to_string(minibatch) + "\n";
  out += "dropout = " + num(dropout) + "\n";
  out += "layers = " + std::to_string(layers) + "\n";
  out += "rnn_size = " + std::to_string(layer_size) + "\n";
  out += "word_vec_size = " + std::to_string(word_vec_size) + "\n";
  out += "learning_rate = " + num(learning_rate) + "\n";
  out += "learning_rate_decay = " + num(decay_rate) + "\n";
  out += "start_decay_at = " + std::to_string(decay_start_epoch) + "\n";
  out += "optim = " + optimizer + "\n";
  return out;
}

TrainerConfig emit_trainer_config(TrainerProfile profile) {
  TrainerConfig c;
  c.profile = profile;
  if (profile == TrainerProfile::single_pair) {
    c.layers = 2;
    c.layer_size = 500;
    c.word_vec_size = 500;
    c.learning_rate = 1.0;
  }
  return c;
}

}  // namespace polymt
