#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polymt/corpus.hpp"
#include "polymt/error.hpp"

namespace polymt {

struct AblationPlan {
  double fraction = 1.0;
  std::uint64_t seed = 0;
  std::size_t total = 0;  // N; 0 means the size of the verse list

  void validate() const;
};

struct AblationSample {
  std::vector<std::string> ids;  // exactly N, drawn ids cycled
  std::size_t drawn = 0;         // floor(f * N)
  std::size_t distinct = 0;
  std::size_t unique_words = 0;  // whitespace tokens over the distinct sampled sentences
  std::optional<double> log10_words;
};

/// Draws floor(f*N) ids (at least one) with replacement, then repeats that
/// multiset in draw order until the sample holds N ids. `texts` may be empty,
/// in which case no word count is taken.
AblationSample sample_low_resource(std::span<const std::string> ids, std::span<const std::string> texts,
                                   const AblationPlan& plan);

/// One TSV row of the ablation manifest (no trailing newline).
std::string format_ablation_row(const AblationPlan& plan, const AblationSample& sample);
inline constexpr std::string_view kAblationHeader = "fraction\tseed\ttotal\tdistinct\tunique_words\tlog10_words";

inline constexpr double kDefaultGlThreshold = 0.1;

struct GlState {
  double best = 0.0;  // E_opt
  std::vector<std::pair<std::size_t, double>> history;
  double alpha = kDefaultGlThreshold;
};

enum class GlDecision { continue_training, stop };
std::string_view gl_decision_name(GlDecision d) noexcept;

struct GlResult {
  GlState state;
  double gl = 0.0;
  GlDecision decision = GlDecision::continue_training;
};

/// gl = 100 * (1 - score / E_opt) with E_opt taken over the history including
/// this score; stop iff gl > alpha.
GlResult gl_update(const GlState& state, std::size_t epoch, double val_score);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least squares of score against log10(word count).
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

enum class TrainerProfile { multilingual, single_pair };
TrainerProfile parse_trainer_profile(std::string_view name);
std::string_view trainer_profile_name(TrainerProfile p) noexcept;

struct TrainerConfig {
  TrainerProfile profile = TrainerProfile::multilingual;
  int minibatch = 64;
  double dropout = 0.3;
  int layers = 4;
  int layer_size = 1000;
  int word_vec_size = 600;
  double learning_rate = 0.8;
  double decay_rate = 0.7;
  int decay_start_epoch = 9;
  std::string optimizer = "sgd";

  /// Flat `key = value` lines.
  std::string serialize() const;
};

TrainerConfig emit_trainer_config(TrainerProfile profile);

}  // namespace polymt
