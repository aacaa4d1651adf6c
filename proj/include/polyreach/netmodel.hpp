#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace polyreach {

// Activation-pattern enumeration refuses layers wider than this by default.
inline constexpr int kPatternCap = 20;

enum class Activation { kRelu, kLinear };

struct Layer {
  Eigen::MatrixXd weights;  // out_dim x in_dim
  Eigen::VectorXd bias;
  Activation activation = Activation::kRelu;

  Layer() = default;
  Layer(Eigen::MatrixXd w, Eigen::VectorXd b, Activation act);

  Eigen::Index in_dim() const { return weights.cols(); }
  Eigen::Index out_dim() const { return weights.rows(); }
};

struct Network {
  std::vector<Layer> layers;
  Eigen::Index input_dim = 0;

  Network() = default;
  Network(Eigen::Index input, std::vector<Layer> ls);

  Eigen::Index output_dim() const { return layers.back().out_dim(); }
  std::size_t depth() const { return layers.size(); }
};

Eigen::VectorXd forward(const Network& net, const Eigen::VectorXd& x);

// SplitMix64: the fixed 64-bit generator behind every seeded artifact. The
// stream discipline is documented at random_network; identical seeds must
// produce bit-identical values on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // [-1, 1).
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

 private:
  std::uint64_t state_;
};

struct NetworkSpec {
  std::vector<Eigen::Index> sizes;  // sizes[0] is the input dim, then widths
  Activation hidden = Activation::kRelu;
  Activation output = Activation::kLinear;
};

// Weights and biases i.i.d. uniform on [-1, 1]. Stream order: layer by
// layer, weights row-major first, then the bias vector.
Network random_network(const NetworkSpec& spec, std::uint64_t seed);

// Indicator vector p over n neurons, stored as its enumeration index h.
// Bit order is big-endian over the neuron index: neuron 0 is the most
// significant bit, so h counts 00..0, 00..1, ..., 11..1.
struct ActivationPattern {
  std::uint64_t index = 0;
  int size = 0;

  int bit(int i) const {
    return static_cast<int>((index >> (size - 1 - i)) & 1ULL);
  }
  bool all_active() const {
    return index + 1 == (1ULL << size);
  }
  bool all_inactive() const { return index == 0; }
};

// All 2^n patterns in index order; throws PatternSpaceTooLarge past the cap.
std::vector<ActivationPattern> enumerate_patterns(int n, int cap = kPatternCap);

}  // namespace polyreach
