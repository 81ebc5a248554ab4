#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sparse_moments/error.hpp"
#include "sparse_moments/linalg.hpp"

using namespace sparse_moments;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace

TEST_CASE("min_eigenpair examples") {
  const auto diag = min_eigenpair(from_rows({{2, 0}, {0, 1}}), 1e-10);
  CHECK(diag.lambda == doctest::Approx(1.0));
  CHECK(std::abs(diag.v[0]) < 1e-14);
  CHECK(diag.v[1] == doctest::Approx(1.0));

  const auto rank_one = min_eigenpair(from_rows({{1, 0.5}, {0.5, 0.25}}), 1e-10);
  CHECK(std::abs(rank_one.lambda) < 1e-15);
  CHECK(oracle::sign_aligned_distance(rank_one.v, oracle::unit({-0.5, 1.0})) < 1e-12);
  // first non-negligible entry positive
  CHECK(rank_one.v[0] > 0);

  const auto h3 = from_rows({{1, 0.5, 0.3125}, {0.5, 0.3125, 0.21875}, {0.3125, 0.21875, 0.16015625}});
  const auto kernel = min_eigenpair(h3, 1e-12);
  CHECK(std::abs(kernel.lambda) < 1e-15);
  const auto expected = oracle::unit({0.1875, -1.0, 1.0});
  for (std::size_t i = 0; i < 3; ++i) CHECK(kernel.v[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("min_eigenpair errors") {
  CHECK_THROWS_AS(min_eigenpair(from_rows({{1, 0.2}, {0.1, 1}}), 1e-8), Error);
  CHECK_THROWS_AS(min_eigenpair(from_rows({{1, 0}, {0, 1}}), 0.0), Error);
  CHECK_THROWS_AS(min_eigenpair(Matrix(2, 3), 1e-8), Error);
}

TEST_CASE("min_eigenpair: unit norm, residual, agreement with eigenvalue bisection") {
  CounterRng rng(9);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 9;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.uniform() * 2 - 1;
    const auto pair = min_eigenpair(a, 1e-9);
    CHECK(norm2(pair.v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pair.residual <= 1e-12);
    const auto ev = symmetric_eigenvalues(a);
    CHECK(pair.lambda == doctest::Approx(ev[0]).epsilon(1e-12));
    if (n > 1) CHECK(pair.next_lambda == doctest::Approx(ev[1]).epsilon(1e-9));
    for (std::size_t i = 1; i < n; ++i) CHECK(ev[i] >= ev[i - 1]);
    // trace check
    double trace = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      trace += a(i, i);
      sum += ev[i];
    }
    CHECK(sum == doctest::Approx(trace).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("min_eigenpair recovers the kernel polynomial of exact Hankels") {
  CounterRng rng(10);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 1 + t % 5;
    const auto m = random_model(k, 0.1, 0.05, rng);
    const auto h = build_hankel(exact_moments(m, 2 * k));
    const auto pair = min_eigenpair(h, 1e-12);
    CHECK(std::abs(pair.lambda) < 1e-9);
    CHECK(oracle::sign_aligned_distance(pair.v, oracle::unit(oracle::monic_from_roots(m.alpha()))) < 1e-7);
  }
}

TEST_CASE("kernel stability under Hankel perturbations") {
  CounterRng rng(12);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + t % 4;
    const double zeta_floor = k > 1 ? std::min(0.2, 1.0 / (k - 1)) : 0.2;
    const auto m = random_model(k, zeta_floor, 0.05, rng);
    const double zeta = k > 1 ? separation(m) : 1.0;
    const auto exact = build_hankel(exact_moments(m, 2 * k));
    const auto u1 = min_eigenpair(exact, 1e-12).v;

    // symmetric perturbation rescaled to 2-norm eps
    const std::size_t n = k + 1;
    Matrix e(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) e(i, j) = e(j, i) = rng.uniform() * 2 - 1;
    const auto ev = symmetric_eigenvalues(e);
    const double e_norm = std::max(std::abs(ev.front()), std::abs(ev.back()));
    const double u = (t % 2) ? 1.0 : 0.1;
    const double eps = m.w_min() * std::pow(zeta / 16.0, 2.0 * k) * u;
    Matrix perturbed = exact.entries;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) perturbed(i, j) += e(i, j) * eps / e_norm;

    const auto v1 = min_eigenpair(perturbed, 1e-14).v;
    const double bound = std::sqrt(2.0 * (k + 1)) * std::pow(16.0 / zeta, 2.0 * k) * eps / m.w_min();
    CHECK(oracle::sign_aligned_distance(u1, v1) <= bound);
  }
}

TEST_CASE("spectral_norm") {
  CHECK(spectral_norm(from_rows({{3, 0}, {0, -4}})) == doctest::Approx(4.0));
  CHECK(spectral_norm(from_rows({{1, 1}, {0, 0}})) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("solve_vandermonde examples") {
  const std::vector<double> n1{0.3}, r1{1.0};
  CHECK(solve_vandermonde(n1, r1).w[0] == doctest::Approx(1.0));

  const std::vector<double> n2{0.25, 0.75}, r2{1.0, 0.5};
  const auto s2 = solve_vandermonde(n2, r2);
  CHECK(s2.w[0] == doctest::Approx(0.5));
  CHECK(s2.w[1] == doctest::Approx(0.5));
  CHECK(s2.residual < 1e-15);

  const std::vector<double> n3{0.0, 1.0}, r3{1.0, 0.7};
  const auto s3 = solve_vandermonde(n3, r3);
  CHECK(s3.w[0] == doctest::Approx(0.3));
  CHECK(s3.w[1] == doctest::Approx(0.7));

  const std::vector<double> dup{0.4, 0.4 + 1e-14}, rhs{1.0, 0.4};
  try {
    solve_vandermonde(dup, rhs);
    FAIL("expected DegenerateNodes");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateNodes);
  }
  CHECK_THROWS_AS(solve_vandermonde(n2, r1), Error);
}

TEST_CASE("solve_vandermonde matches dense elimination and has small residual") {
  CounterRng rng(13);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + t % 10;
    const double zeta = k > 1 ? std::min(0.05, 1.0 / (k - 1)) : 0.05;
    const auto m = random_model(k, zeta, 0.0, rng);
    const auto mu = exact_moments(m, k - 1);
    const auto sol = solve_vandermonde(m.alpha(), mu.mu);
    const double cond = vandermonde_inverse_inf_norm(m.alpha());
    CHECK(sol.residual <= 1e-10 * std::max(1.0, cond));
    if (k <= 6) {
      std::vector<std::vector<double>> a(k, std::vector<double>(k));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) a[i][j] = std::pow(m.alpha()[j], static_cast<double>(i));
      const auto ref = oracle::gauss_solve(a, mu.mu);
      for (std::size_t j = 0; j < k; ++j) CHECK(sol.w[j] == doctest::Approx(ref[j]).epsilon(1e-8).scale(1));
    }
  }
}

TEST_CASE("vandermonde_inverse_inf_norm") {
  const std::vector<double> zero{0.0};
  CHECK(vandermonde_inverse_inf_norm(zero) == doctest::Approx(1.0));
  const std::vector<double> ends{0.0, 1.0};
  CHECK(vandermonde_inverse_inf_norm(ends) == doctest::Approx(2.0));

  CounterRng rng(14);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 1 + t % 6;
    const double zeta = k > 1 ? 0.8 / (k - 1) : 0.5;
    const auto m = random_model(k, zeta, 0.0, rng);
    const double g = k > 1 ? separation(m) : 1.0;
    const double value = vandermonde_inverse_inf_norm(m.alpha());
    CHECK(value <= std::pow(2.0, k) / std::pow(g, k - 1.0) * (1 + 1e-12));

    if (k <= 5) {
      // ||V^{-1}||_inf as the max absolute row sum of the explicit inverse
      std::vector<std::vector<double>> a(k, std::vector<double>(k));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) a[i][j] = std::pow(m.alpha()[j], static_cast<double>(i));
      double norm = 0.0;
      std::vector<std::vector<double>> inv_cols;
      for (std::size_t c = 0; c < k; ++c) {
        std::vector<double> e(k, 0.0);
        e[c] = 1.0;
        inv_cols.push_back(oracle::gauss_solve(a, e));
      }
      for (std::size_t r = 0; r < k; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < k; ++c) row += std::abs(inv_cols[c][r]);
        norm = std::max(norm, row);
      }
      CHECK(value == doctest::Approx(norm).epsilon(1e-6));
    }
  }
  const std::vector<double> dup{0.3, 0.3};
  CHECK_THROWS_AS(vandermonde_inverse_inf_norm(dup), Error);
}

TEST_CASE("Vandermonde condition bound via finite differences") {
  CounterRng rng(15);
  const double h = 1e-7;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 1 + t % 5;
    const double zeta = k > 1 ? std::min(0.15, 1.0 / (k - 1)) : 0.15;
    const auto m = random_model(k, zeta, 0.0, rng);
    const double g = k > 1 ? separation(m) : 1.0;
    const auto mu = exact_moments(m, k - 1);
    const auto base = solve_vandermonde(m.alpha(), mu.mu).w;

    std::vector<double> nodes = m.alpha(), rhs = mu.mu;
    for (auto& x : nodes) x += (rng.uniform() < 0.5 ? -h : h);
    for (auto& x : rhs) x += (rng.uniform() < 0.5 ? -h : h);
    const auto moved = solve_vandermonde(nodes, rhs).w;
    double dx = 0.0;
    for (std::size_t j = 0; j < k; ++j) dx = std::max(dx, std::abs(moved[j] - base[j]));
    const double bound = (k + 1) * std::pow(2.0, k) / std::pow(g, k - 1.0);
    CHECK(dx / h <= bound);
  }
}
