#include <charconv>
#include <string>

#include "graphprobe/error.hpp"
#include "graphprobe/io.hpp"
#include "graphprobe/trainers.hpp"

namespace graphprobe {
namespace {

void write_values(std::span<const double> values, std::ostream& out) {
  for (const double v : values) out << format_double(v) << '\n';
}

void read_values(std::istream& in, std::span<double> values) {
  std::string token;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(in >> token)) throw ParseError("checkpoint ends after " + std::to_string(k) + " values");
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), values[k]);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw ParseError("checkpoint value " + std::to_string(k) + " is not a number");
    }
  }
  if (in >> token) throw ParseError("checkpoint has trailing values");
}

void expect_kind(std::istream& in, const std::string& kind) {
  std::string word;
  if (!(in >> word) || word != kind) throw ParseError("expected a '" + kind + "' checkpoint");
}

}  // namespace

void write_checkpoint(const MlpProbeParams& params, std::ostream& out) {
  out << "mlp " << params.input_dim() << ' ' << params.hidden_dim() << '\n';
  write_values(params.values(), out);
}

void write_checkpoint(const DistanceProbeParams& params, std::ostream& out) {
  out << "distance " << params.rank() << ' ' << params.dim() << '\n';
  write_values(params.b.data(), out);
}

MlpProbeParams read_mlp_checkpoint(std::istream& in) {
  expect_kind(in, "mlp");
  std::size_t input = 0;
  std::size_t hidden = 0;
  if (!(in >> input >> hidden)) throw ParseError("malformed mlp checkpoint header");
  MlpProbeParams params(input, hidden);
  read_values(in, params.values());
  return params;
}

DistanceProbeParams read_distance_checkpoint(std::istream& in) {
  expect_kind(in, "distance");
  std::size_t rank = 0;
  std::size_t dim = 0;
  if (!(in >> rank >> dim)) throw ParseError("malformed distance checkpoint header");
  auto params = DistanceProbeParams::zeros(rank, dim);
  read_values(in, params.b.data());
  return params;
}

}  // namespace graphprobe
