#pragma once
// Sources of exceedance indicators X_n^i: a synthetic Bernoulli oracle with
// known success probabilities (counter-based RNG keyed by (seed, hypothesis,
// iteration), so draws are reproducible regardless of call order or
// parallel scheduling) and a file-backed replay of precomputed indicator
// streams, the stand-in for permutation or bootstrap pipelines.
//
// Replay file format: plain text, one iteration per line, comma-separated
// 0/1 entries, no header, LF line endings.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mcmt {

class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual std::uint32_t m() const = 0;
  // Number of stored iterations; nullopt when unbounded.
  virtual std::optional<std::uint64_t> depth() const = 0;
  // Indicators for iteration n (1-based) for each listed hypothesis
  // (0-based). Requires n <= depth() when bounded.
  virtual void draw_row(std::uint64_t iteration,
                        std::span<const std::int32_t> hypotheses,
                        std::span<std::uint8_t> out) = 0;

  // Single-draw convenience.
  std::uint8_t draw(std::int32_t hypothesis, std::uint64_t iteration) {
    std::uint8_t bit = 0;
    draw_row(iteration, {&hypothesis, 1}, {&bit, 1});
    return bit;
  }
};

class SyntheticSource final : public SampleSource {
 public:
  SyntheticSource(std::vector<double> p_star, std::uint64_t seed);

  std::uint32_t m() const override { return static_cast<std::uint32_t>(p_star_.size()); }
  std::optional<std::uint64_t> depth() const override { return std::nullopt; }
  void draw_row(std::uint64_t iteration,
                std::span<const std::int32_t> hypotheses,
                std::span<std::uint8_t> out) override;

  const std::vector<double>& p_star() const { return p_star_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::vector<double> p_star_;
  std::uint64_t seed_;
  std::vector<double> prob_buf_;
};

class ReplaySource final : public SampleSource {
 public:
  // Row-major indicator matrix, one row per iteration.
  ReplaySource(std::vector<std::uint8_t> data, std::uint32_t m,
               std::uint64_t rows);

  std::uint32_t m() const override { return m_; }
  std::optional<std::uint64_t> depth() const override { return rows_; }
  void draw_row(std::uint64_t iteration,
                std::span<const std::int32_t> hypotheses,
                std::span<std::uint8_t> out) override;

 private:
  std::vector<std::uint8_t> data_;
  std::uint32_t m_;
  std::uint64_t rows_;
};

// Parses an indicator-matrix file. Throws std::invalid_argument on malformed
// rows, non-binary entries, ragged rows, or an empty file, and
// std::runtime_error if the file cannot be read.
ReplaySource load_replay(const std::string& path);
ReplaySource parse_replay(const std::string& text);

}  // namespace mcmt
