#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qg {

using cplx = std::complex<double>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXc = MatrixX<cplx>;
using VectorXc = VectorX<cplx>;
using Eigen::Matrix2cd;
using Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Thrown for precondition violations and numerical failures that must never be silent.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(what);
}

// Worker count: hardware concurrency capped by QG_THREADS.
unsigned thread_count();

// Runs f(i) for i in [0, n). Each index is handled by exactly one worker, so
// results written per index are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace qg
