#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aqe::cli {

inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kInputError = 2;

struct Options {
  std::string manifold;
  std::vector<std::string> mu;
  std::string basepoint;
  std::uint64_t seed = 1;
  std::string json;
  std::string omega;
  std::string potential;
  std::vector<std::string> phi;
  std::string f;
  std::string killing;
  std::string family;
  std::string variant;
  int sign = 1;
  std::vector<std::string> params;
  int n = 20;
  int grid = 2;
  double radius = 0.0;
  int geodesics = 20;
};

int run_curvature(const Options& o);
int run_qe_dim(const Options& o);
int run_classify(const Options& o);
int run_sweep(const Options& o);
int run_deform(const Options& o);
int run_flatten(const Options& o);
int run_extend(const Options& o);
int run_verify(const Options& o);

}  // namespace aqe::cli
