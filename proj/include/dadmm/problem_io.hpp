#ifndef DADMM_PROBLEM_IO_HPP
#define DADMM_PROBLEM_IO_HPP

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dadmm/errors.hpp"
#include "dadmm/problem.hpp"

namespace dadmm {

// Text instance container:
//
//   dadmm-instance 1
//   kind sparse_pca
//   n 20
//   p 500
//   m 100
//   lambda 10
//   sigma 0.1
//   radius 1
//   seed 42
//   block 0 100 500
//   <100 lines of 500 values, row-major>
//   block 1 ...
//
// Reals are printed with 17 significant digits, so reading a file back
// reproduces every matrix entry exactly.

namespace detail {
inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline void write_instance(std::ostream& out, const ProblemSpec& prob) {
  const auto& info = prob.info;
  if (info.kind == InstanceKind::Custom)
    throw IoError("custom problems carry no data and cannot be serialized");
  out << "dadmm-instance 1\n"
      << "kind " << to_string(info.kind) << '\n'
      << "n " << info.n << '\n'
      << "p " << info.p << '\n'
      << "m " << info.m << '\n'
      << "lambda " << detail::fmt17(info.lambda) << '\n'
      << "sigma " << detail::fmt17(info.sigma) << '\n'
      << "radius " << detail::fmt17(info.radius) << '\n'
      << "seed " << info.seed << '\n';
  for (std::size_t i = 0; i < info.blocks.size(); ++i) {
    const Matrix& B = info.blocks[i];
    out << "block " << i << ' ' << B.rows() << ' ' << B.cols() << '\n';
    for (Eigen::Index r = 0; r < B.rows(); ++r) {
      for (Eigen::Index c = 0; c < B.cols(); ++c) {
        if (c) out << ' ';
        out << detail::fmt17(B(r, c));
      }
      out << '\n';
    }
  }
}

inline void save_instance(const std::string& path, const ProblemSpec& prob) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_instance(out, prob);
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline ProblemSpec read_instance(std::istream& in, const std::string& origin = "<stream>") {
  auto fail = [&](const std::string& msg) -> IoError {
    return IoError(origin + ": " + msg);
  };
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "dadmm-instance" || version != 1)
    throw fail("not a dadmm instance file");

  InstanceInfo info;
  std::string kind;
  auto expect = [&](const char* key, auto& value) {
    std::string k;
    if (!(in >> k) || k != key || !(in >> value))
      throw fail(std::string("expected header field '") + key + "'");
  };
  expect("kind", kind);
  expect("n", info.n);
  expect("p", info.p);
  expect("m", info.m);
  expect("lambda", info.lambda);
  expect("sigma", info.sigma);
  expect("radius", info.radius);
  expect("seed", info.seed);

  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < info.n; ++i) {
    std::string k;
    std::size_t idx = 0;
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> k >> idx >> rows >> cols) || k != "block" || idx != i)
      throw fail("missing block " + std::to_string(i));
    if (cols != static_cast<Eigen::Index>(info.p))
      throw fail("block " + std::to_string(i) + " has " + std::to_string(cols) + " columns");
    Matrix B(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        if (!(in >> B(r, c))) throw fail("truncated block " + std::to_string(i));
    blocks.push_back(std::move(B));
  }

  ProblemSpec prob;
  if (kind == "sparse_pca") {
    prob = sparse_pca_from_blocks(std::move(blocks), info.lambda, info.radius);
  } else if (kind == "quadratic_consensus") {
    std::vector<Vector> targets;
    for (const auto& b : blocks) targets.emplace_back(b.row(0).transpose());
    prob = quadratic_consensus_from_targets(targets);
  } else {
    throw fail("unknown instance kind '" + kind + "'");
  }
  prob.info.sigma = info.sigma;
  prob.info.seed = info.seed;
  prob.info.m = info.m;
  return prob;
}

inline ProblemSpec load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("instance file '" + path + "' not found or unreadable");
  return read_instance(in, path);
}

}  // namespace dadmm

#endif  // DADMM_PROBLEM_IO_HPP
