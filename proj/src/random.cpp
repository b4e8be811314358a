#include "homogenlab/random.hpp"

#include <cmath>

namespace homogenlab {

Vector Rng::normal_vector(std::size_t n, double stddev) {
  Vector v(n);
  for (double& x : v) x = stddev * normal();
  return v;
}

Matrix Rng::normal_matrix(std::size_t rows, std::size_t cols, double stddev) {
  Matrix m(rows, cols);
  for (double& x : m.entries()) x = stddev * normal();
  return m;
}

Vector Rng::sphere_point(std::size_t n, double radius) {
  Vector v;
  double len = 0.0;
  do {
    v = normal_vector(n);
    len = norm(v);
  } while (len == 0.0);
  for (double& x : v) x *= radius / len;
  return v;
}

Vector Rng::l1_sphere_point(std::size_t n) {
  Vector v(n);
  double total = 0.0;
  do {
    total = 0.0;
    for (double& x : v) {
      x = exponential();
      total += x;
    }
  } while (total == 0.0);
  for (double& x : v) {
    x /= total;
    if (coin()) x = -x;
  }
  return v;
}

Matrix gaussian_measurement_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  return rng.normal_matrix(rows, cols, 1.0 / std::sqrt(static_cast<double>(rows)));
}

}  // namespace homogenlab
