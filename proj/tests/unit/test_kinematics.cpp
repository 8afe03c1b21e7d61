#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entisac/errors.hpp"
#include "entisac/kinematics.hpp"

using namespace entisac;

namespace {

double rel_err(const Eigen::Vector2d& got, const Eigen::Vector2d& want) {
  const double denom = std::max(want.norm(), 1e-30);
  return (got - want).norm() / denom;
}

}  // namespace

TEST_CASE("advance_target without noise is exactly linear") {
  RandomStream rng(1);
  TargetState s;
  s.x = {0.0, 0.0};
  s.v = {10.0, 0.0};
  const TargetState next = advance_target(s, 0.0, 0.1, rng);
  CHECK(next.x.x() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(next.x.y() == doctest::Approx(0.0));
  CHECK(next.v.x() == doctest::Approx(10.0));
  CHECK(next.frame == 1);

  TargetState walk;
  walk.x = {3.0, -2.0};
  walk.v = {1.5, 0.5};
  TargetState cur = walk;
  for (int n = 0; n < 25; ++n) cur = advance_target(cur, 0.0, 0.01, rng);
  CHECK((cur.x - (walk.x + 25 * 0.01 * walk.v)).norm() < 1e-12);
  CHECK(cur.v == walk.v);
}

TEST_CASE("advance_target noise covariance matches the process-noise block") {
  const double delta_q = 2.5;
  const double t_bar = 0.2;
  const Eigen::Matrix4d expected = process_noise_cov(delta_q, t_bar);
  RandomStream rng(42);
  TargetState s;  // zero state isolates the noise
  const int draws = 100000;
  Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
  for (int i = 0; i < draws; ++i) {
    const Eigen::Vector4d eps = advance_target(s, delta_q, t_bar, rng).as_vector();
    acc += eps * eps.transpose();
  }
  acc /= draws;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (expected(i, j) != 0.0) {
        CHECK(std::abs(acc(i, j) - expected(i, j)) / std::abs(expected(i, j)) < 0.03);
      } else {
        CHECK(std::abs(acc(i, j)) < 0.03 * std::sqrt(expected(i, i) * expected(j, j)));
      }
    }
  }
}

TEST_CASE("delay_doppler on a bistatic-degenerate geometry") {
  TargetState s;
  s.x = {0.0, 0.0};
  s.v = {0.0, 0.0};
  const Eigen::Vector2d ap(300.0, 0.0);
  const DelayDoppler dd = delay_doppler(s, ap, ap, 5.89e9);
  CHECK(dd.tau == doctest::Approx(600.0 / 3e8).epsilon(1e-12));
  CHECK(dd.f == 0.0);
  CHECK(dd.d_f_dx.norm() == 0.0);
  CHECK(dd.d_f_dv.norm() > 0.0);
}

TEST_CASE("delay_doppler rejects co-located target and AP") {
  TargetState s;
  s.x = {5.0, 5.0};
  CHECK_THROWS_AS(delay_doppler(s, {5.0, 5.0}, {10.0, 0.0}, 1e9), GeometryError);
}

TEST_CASE("zero velocity forces zero Doppler and zero position gradient") {
  RandomStream rng(7);
  for (int i = 0; i < 20; ++i) {
    TargetState s;
    s.x = {rng.uniform(0, 600), rng.uniform(0, 600)};
    s.v = {0.0, 0.0};
    const Eigen::Vector2d a(rng.uniform(0, 600), rng.uniform(0, 600));
    const Eigen::Vector2d b(rng.uniform(0, 600), rng.uniform(0, 600));
    const DelayDoppler dd = delay_doppler(s, a, b, 5.89e9);
    CHECK(dd.f == 0.0);
    CHECK(dd.d_f_dx.norm() == 0.0);
  }
}

TEST_CASE("delay/Doppler gradients agree with central finite differences") {
  RandomStream rng(123);
  const double f_c = 5.89e9;
  const double h = 1e-4;
  for (int trial = 0; trial < 100; ++trial) {
    TargetState s;
    s.x = {rng.uniform(50, 550), rng.uniform(50, 550)};
    s.v = {rng.uniform(-80, 80), rng.uniform(-80, 80)};
    const Eigen::Vector2d ap_a(rng.uniform(0, 600), rng.uniform(0, 600));
    const Eigen::Vector2d ap_b(rng.uniform(0, 600), rng.uniform(0, 600));
    if ((s.x - ap_a).norm() < 5.0 || (s.x - ap_b).norm() < 5.0) continue;

    const DelayDoppler dd = delay_doppler(s, ap_a, ap_b, f_c);
    Eigen::Vector2d fd_tau_dx, fd_f_dx, fd_f_dv;
    for (int ax = 0; ax < 2; ++ax) {
      TargetState plus = s, minus = s;
      plus.x[ax] += h;
      minus.x[ax] -= h;
      const DelayDoppler dp = delay_doppler(plus, ap_a, ap_b, f_c);
      const DelayDoppler dm = delay_doppler(minus, ap_a, ap_b, f_c);
      fd_tau_dx[ax] = (dp.tau - dm.tau) / (2 * h);
      fd_f_dx[ax] = (dp.f - dm.f) / (2 * h);

      TargetState vp = s, vm = s;
      vp.v[ax] += h;
      vm.v[ax] -= h;
      fd_f_dv[ax] =
          (delay_doppler(vp, ap_a, ap_b, f_c).f - delay_doppler(vm, ap_a, ap_b, f_c).f) / (2 * h);
    }
    CHECK(rel_err(fd_tau_dx, dd.d_tau_dx) < 1e-5);
    CHECK(rel_err(fd_f_dx, dd.d_f_dx) < 1e-5);
    CHECK(rel_err(fd_f_dv, dd.d_f_dv) < 1e-5);
  }
}

TEST_CASE("delay and Doppler are symmetric in the AP pair") {
  RandomStream rng(5);
  for (int i = 0; i < 50; ++i) {
    TargetState s;
    s.x = {rng.uniform(0, 600), rng.uniform(0, 600)};
    s.v = {rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const Eigen::Vector2d a(rng.uniform(0, 600), rng.uniform(0, 600));
    const Eigen::Vector2d b(rng.uniform(0, 600), rng.uniform(0, 600));
    const DelayDoppler ab = delay_doppler(s, a, b, 1e9);
    const DelayDoppler ba = delay_doppler(s, b, a, 1e9);
    CHECK(ab.tau == doctest::Approx(ba.tau).epsilon(1e-14));
    CHECK(ab.f == doctest::Approx(ba.f).epsilon(1e-14));
  }
}

TEST_CASE("steering vector closed forms") {
  const Eigen::VectorXcd v0 = steering(0.0, 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(v0[i].real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(v0[i].imag() == doctest::Approx(0.0));
  }
  const Eigen::VectorXcd v1 = steering(std::numbers::pi / 2, 2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(v1[0].real() == doctest::Approx(inv_sqrt2));
  CHECK(v1[1].real() == doctest::Approx(-inv_sqrt2));
  CHECK(std::abs(v1[1].imag()) < 1e-12);
}

TEST_CASE("steering vectors are unit norm for any angle and array size") {
  RandomStream rng(11);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + (i % 8);
    const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
    CHECK(steering(theta, n).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("relative_angle follows the difference-ratio convention") {
  CHECK(relative_angle({0, 0}, {1, 0}) == doctest::Approx(0.0));
  CHECK(relative_angle({0, 0}, {0, 1}) == doctest::Approx(std::numbers::pi / 2));
  CHECK(relative_angle({0, 0}, {0, -1}) == doctest::Approx(-std::numbers::pi / 2));
  CHECK_THROWS_AS(relative_angle({1, 1}, {1, 1}), GeometryError);

  RandomStream rng(3);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector2d a(rng.uniform(-10, 10), rng.uniform(-10, 10));
    const Eigen::Vector2d b(rng.uniform(-10, 10), rng.uniform(-10, 10));
    if ((a - b).norm() < 1e-6) continue;
    CHECK(relative_angle(a, b) == doctest::Approx(relative_angle(b, a)).epsilon(1e-13));
  }
}

TEST_CASE("mobility transition and noise block shapes") {
  const Eigen::Matrix4d g = mobility_transition(0.5);
  Eigen::Vector4d s;
  s << 1.0, 2.0, 3.0, 4.0;
  const Eigen::Vector4d out = g * s;
  CHECK(out[0] == doctest::Approx(2.5));
  CHECK(out[1] == doctest::Approx(4.0));
  CHECK(out[2] == doctest::Approx(3.0));
  CHECK(out[3] == doctest::Approx(4.0));

  const Eigen::Matrix4d e = process_noise_cov(2.0, 0.5);
  CHECK(e(0, 0) == doctest::Approx(2.0 * 0.125 / 3.0));
  CHECK(e(0, 2) == doctest::Approx(2.0 * 0.125));
  CHECK(e(2, 2) == doctest::Approx(1.0));
  CHECK(e(0, 1) == 0.0);
  CHECK((e - e.transpose()).norm() == 0.0);
}
