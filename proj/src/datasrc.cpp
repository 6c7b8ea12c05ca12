#include "mcmt/datasrc.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mcmt/kernels.hpp"

namespace mcmt {

SyntheticSource::SyntheticSource(std::vector<double> p_star, std::uint64_t seed)
    : p_star_(std::move(p_star)), seed_(seed) {
  for (double p : p_star_) {
    if (!(p >= 0.0) || !(p <= 1.0)) {
      throw std::invalid_argument("synthetic source: p* must lie in [0,1]");
    }
  }
}

void SyntheticSource::draw_row(std::uint64_t iteration,
                               std::span<const std::int32_t> hypotheses,
                               std::span<std::uint8_t> out) {
  prob_buf_.resize(hypotheses.size());
  for (std::size_t k = 0; k < hypotheses.size(); ++k) {
    prob_buf_[k] = p_star_.at(static_cast<std::size_t>(hypotheses[k]));
  }
  kernels::active().bernoulli_draws(seed_, iteration, hypotheses.data(),
                                    prob_buf_.data(), out.data(),
                                    hypotheses.size());
}

ReplaySource::ReplaySource(std::vector<std::uint8_t> data, std::uint32_t m,
                           std::uint64_t rows)
    : data_(std::move(data)), m_(m), rows_(rows) {}

void ReplaySource::draw_row(std::uint64_t iteration,
                            std::span<const std::int32_t> hypotheses,
                            std::span<std::uint8_t> out) {
  if (iteration < 1 || iteration > rows_) {
    throw std::out_of_range("replay source: iteration beyond stored depth");
  }
  const std::uint8_t* row = data_.data() + (iteration - 1) * m_;
  for (std::size_t k = 0; k < hypotheses.size(); ++k) {
    out[k] = row[static_cast<std::size_t>(hypotheses[k])];
  }
}

ReplaySource parse_replay(const std::string& text) {
  std::vector<std::uint8_t> data;
  std::uint32_t m = 0;
  std::uint64_t rows = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    if (line.empty() && pos >= text.size()) break;  // trailing newline
    std::uint32_t cols = 0;
    std::size_t i = 0;
    while (true) {
      if (i >= line.size() || (line[i] != '0' && line[i] != '1')) {
        throw std::invalid_argument("replay: entries must be 0 or 1 (row " +
                                    std::to_string(rows + 1) + ")");
      }
      data.push_back(line[i] == '1' ? 1 : 0);
      ++cols;
      ++i;
      if (i == line.size()) break;
      if (line[i] != ',') {
        throw std::invalid_argument("replay: expected ',' separator (row " +
                                    std::to_string(rows + 1) + ")");
      }
      ++i;
    }
    if (rows == 0) {
      m = cols;
    } else if (cols != m) {
      throw std::invalid_argument("replay: ragged row " + std::to_string(rows + 1));
    }
    ++rows;
  }
  if (rows == 0) throw std::invalid_argument("replay: no iterations");
  return ReplaySource(std::move(data), m, rows);
}

ReplaySource load_replay(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_replay(buf.str());
}

}  // namespace mcmt
