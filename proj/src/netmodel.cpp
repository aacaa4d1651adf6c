#include "polyreach/netmodel.hpp"

#include <string>

#include "polyreach/errors.hpp"

namespace polyreach {

Layer::Layer(Eigen::MatrixXd w, Eigen::VectorXd b, Activation act)
    : weights(std::move(w)), bias(std::move(b)), activation(act) {
  if (bias.size() != weights.rows())
    throw ShapeError("layer: bias length " + std::to_string(bias.size()) +
                     " does not match weight rows " + std::to_string(weights.rows()));
  if (!weights.allFinite() || !bias.allFinite())
    throw NonFiniteInput("layer: weights or bias contain NaN or infinity");
}

Network::Network(Eigen::Index input, std::vector<Layer> ls)
    : layers(std::move(ls)), input_dim(input) {
  if (input_dim <= 0) throw ShapeError("network: input_dim must be positive");
  if (layers.empty()) throw ShapeError("network: at least one layer required");
  Eigen::Index expect = input_dim;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].in_dim() != expect)
      throw ShapeError("network: layer " + std::to_string(i) + " expects input dim " +
                       std::to_string(layers[i].in_dim()) + ", got " +
                       std::to_string(expect));
    expect = layers[i].out_dim();
  }
}

Eigen::VectorXd forward(const Network& net, const Eigen::VectorXd& x) {
  if (x.size() != net.input_dim)
    throw DimensionMismatch("forward: input size " + std::to_string(x.size()) +
                            " does not match network input dim " +
                            std::to_string(net.input_dim));
  if (!x.allFinite()) throw NonFiniteInput("forward: input contains NaN or infinity");

  Eigen::VectorXd v = x;
  for (const Layer& layer : net.layers) {
    v = layer.weights * v + layer.bias;
    if (layer.activation == Activation::kRelu) v = v.cwiseMax(0.0);
  }
  return v;
}

Network random_network(const NetworkSpec& spec, std::uint64_t seed) {
  if (spec.sizes.size() < 2)
    throw ShapeError("random_network: need at least input size and one layer");
  for (Eigen::Index s : spec.sizes)
    if (s <= 0) throw ShapeError("random_network: sizes must be positive");

  SplitMix64 rng(seed);
  std::vector<Layer> layers;
  layers.reserve(spec.sizes.size() - 1);
  for (std::size_t l = 1; l < spec.sizes.size(); ++l) {
    const Eigen::Index rows = spec.sizes[l];
    const Eigen::Index cols = spec.sizes[l - 1];
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = rng.uniform_pm1();
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) b(i) = rng.uniform_pm1();
    const bool last = l + 1 == spec.sizes.size();
    layers.emplace_back(std::move(w), std::move(b), last ? spec.output : spec.hidden);
  }
  return Network(spec.sizes[0], std::move(layers));
}

std::vector<ActivationPattern> enumerate_patterns(int n, int cap) {
  if (n <= 0) throw ShapeError("enumerate_patterns: n must be positive");
  if (n > cap)
    throw PatternSpaceTooLarge("enumerate_patterns: 2^" + std::to_string(n) +
                               " patterns exceed the cap of 2^" + std::to_string(cap));
  std::vector<ActivationPattern> out;
  out.reserve(1ULL << n);
  for (std::uint64_t h = 0; h < (1ULL << n); ++h) out.push_back({h, n});
  return out;
}

}  // namespace polyreach
