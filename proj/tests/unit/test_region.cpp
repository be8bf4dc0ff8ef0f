#include <doctest.h>

#include <random>

#include "parrondo/means.hpp"
#include "parrondo/region.hpp"

using namespace parrondo;

TEST_CASE("labels") {
  CHECK(label_of(-0.1, 0.2) == Label::Parrondo);
  CHECK(label_of(0.0, 0.2) == Label::Parrondo);
  CHECK(label_of(0.1, -0.2) == Label::AntiParrondo);
  CHECK(label_of(0.0, -0.2) == Label::AntiParrondo);
  CHECK(label_of(0.0, 0.0) == Label::Neither);
  CHECK(label_of(1e-13, 1e-13) == Label::Neither);
  CHECK(label_of(0.1, 0.2) == Label::Neither);
  CHECK(std::string(to_string(Label::AntiParrondo)) == "anti-parrondo");
}

TEST_CASE("point classification") {
  const auto toral = classify_point(1.0, 0.16, 0.7, PatternSpec::pattern(2, 1), 3);
  CHECK(toral.mu_b < 0.0);
  CHECK(std::fabs(toral.mu_pattern - 0.00067249) <= 5e-9);
  CHECK(toral.label == Label::Parrondo);
  CHECK(classify_point(0.5, 0.5, 0.5, PatternSpec::pattern(1, 1), 3).label == Label::Neither);
  CHECK_THROWS_AS(classify_point(0.5, 0.5, 0.5, PatternSpec::game_b(), 3), ContractViolation);
  CHECK_THROWS_AS(classify_point(0.5, 0.0, 0.5, PatternSpec::pattern(1, 1), 3), UnsupportedBoundary);
}

TEST_CASE("n = 3 labels agree with the closed-form inequalities") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int parrondo_11 = 0;
  for (int k = 0; k < 1000; ++k) {
    const double p0 = u(rng);
    const double p1 = u(rng);
    const double p3 = u(rng);
    const double q0 = 1 - p0;
    const double q3 = 1 - p3;
    const bool inequality = (3 * q0 + 5 * q3) / (2 * (3 + p0 + q3)) < p1 && p1 <= q3 / (p0 + q3);
    const bool label_11 = classify_point(p0, p1, p3, PatternSpec::pattern(1, 1), 3).label == Label::Parrondo;
    CHECK(label_11 == inequality);
    parrondo_11 += label_11;

    const ParamVector<double> params(p0, p1, p1, p3);
    const bool closed_21 = closed_form_n3(params, PatternSpec::game_b()) <= 0.0 &&
                           closed_form_n3(params, PatternSpec::pattern(2, 1)) > 0.0;
    const bool label_21 = classify_point(p0, p1, p3, PatternSpec::pattern(2, 1), 3).label == Label::Parrondo;
    CHECK(label_21 == closed_21);
  }
  CHECK(parrondo_11 > 0);
}

TEST_CASE("the reflection map") {
  const auto img = symmetry_map(0.2, 0.3, 0.9);
  CHECK(img[0] == doctest::Approx(0.1));
  CHECK(img[1] == doctest::Approx(0.7));
  CHECK(img[2] == doctest::Approx(0.8));
  const auto back = symmetry_map(img[0], img[1], img[2]);
  CHECK(back[0] == doctest::Approx(0.2));
  CHECK(back[1] == doctest::Approx(0.3));
  CHECK(back[2] == doctest::Approx(0.9));
  const auto fixed = symmetry_map(0.25, 0.5, 0.75);
  CHECK(fixed[0] == 0.25);
  CHECK(fixed[1] == 0.5);
  CHECK(fixed[2] == 0.75);
}

TEST_CASE("labels swap under the reflection map") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 3; n <= 5; ++n) {
    for (const auto& pattern : {PatternSpec::pattern(1, 1), PatternSpec::pattern(2, 1), PatternSpec::pattern(1, 2)}) {
      for (int k = 0; k < 100; ++k) {
        const double p0 = u(rng);
        const double p1 = u(rng);
        const double p3 = u(rng);
        const auto x = classify_point(p0, p1, p3, pattern, n);
        const auto img = symmetry_map(p0, p1, p3);
        const auto y = classify_point(img[0], img[1], img[2], pattern, n);
        CHECK((x.label == Label::Parrondo) == (y.label == Label::AntiParrondo));
        CHECK((x.label == Label::AntiParrondo) == (y.label == Label::Parrondo));
        CHECK(std::fabs(x.mu_b + y.mu_b) <= 1e-10);
      }
    }
  }
}

TEST_CASE("grid scans") {
  ScanOptions opts;
  opts.resolution = 12;
  const auto a = scan(3, PatternSpec::pattern(1, 1), opts);
  REQUIRE(a.points.size() == 12 * 12 * 12);
  // ordering: ((i0 * R) + i3) * R + i1
  CHECK(a.points[1].p1 == doctest::Approx(1.5 / 12));
  CHECK(a.points[12].p3 == doctest::Approx(1.5 / 12));
  CHECK(a.points[144].p0 == doctest::Approx(1.5 / 12));
  CHECK(a.cell_volume == doctest::Approx(1.0 / 1728));
  CHECK(a.parrondo_cells == a.anti_cells);
  CHECK(a.parrondo_volume == doctest::Approx(a.parrondo_cells / 1728.0));
  CHECK(a.parrondo_error > 0.0);

  opts.reflect = true;
  const auto r = scan(3, PatternSpec::pattern(1, 1), opts);
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    // reflected grid, mapped back to its source cell
    if (a.points[k].label == Label::Parrondo) CHECK(r.points[k].label == Label::AntiParrondo);
    if (a.points[k].label == Label::AntiParrondo) CHECK(r.points[k].label == Label::Parrondo);
  }
  CHECK(r.parrondo_cells == a.anti_cells);
  CHECK(r.anti_cells == a.parrondo_cells);

  opts.reflect = false;
  opts.jobs = 3;
  const auto threaded = scan(3, PatternSpec::pattern(1, 1), opts);
  for (std::size_t k = 0; k < a.points.size(); ++k) CHECK(threaded.points[k].label == a.points[k].label);

  opts.jobs = 1;
  opts.resolution = 4;
  opts.subcube = {{0.5, 1.0}, {0.5, 1.0}, {0.0, 0.5}};
  const auto sub = scan(3, PatternSpec::pattern(2, 1), opts);
  CHECK(sub.points.front().p0 == doctest::Approx(0.5625));
  CHECK(sub.cell_volume == doctest::Approx(0.125 / 64));

  opts.resolution = 1;
  CHECK_THROWS_AS(scan(3, PatternSpec::pattern(1, 1), opts), ContractViolation);
}

TEST_CASE("ergodicity conditions") {
  const auto third = ergodicity_conditions(
      ParamVector<Rational>(Rational(1, 10), Rational(3, 5), Rational(3, 5), Rational(3, 4)));
  CHECK(third.holds[1]);
  CHECK(third.in_union);
  const auto toral = ergodicity_conditions(
      ParamVector<Rational>(Rational(1), Rational(4, 25), Rational(4, 25), Rational(7, 10)));
  for (bool h : toral.holds) CHECK_FALSE(h);
  CHECK_FALSE(toral.in_union);
  const auto fair = ergodicity_conditions(ParamVector<Rational>::fair());
  for (bool h : fair.holds) CHECK(h);
  CHECK(fair.p_bar == 0.5);

  // the mixture substitution pulls every probability toward 1/2
  const auto mixed = ergodicity_conditions(
      ParamVector<Rational>(Rational(1), Rational(4, 25), Rational(4, 25), Rational(7, 10)),
      std::optional<Rational>(Rational(9, 10)));
  CHECK(mixed.in_union);
  const ParamVector<Rational> toral_p(Rational(1), Rational(4, 25), Rational(4, 25), Rational(7, 10));
  const auto via_hat = ergodicity_conditions(toral_p.mixed_with_fair(Rational(9, 10)));
  CHECK(via_hat.holds == mixed.holds);
}

TEST_CASE("condition volumes by sampling") {
  const auto v = condition_volumes(100'000, 3);
  const double expected[4] = {7.0 / 12, 1.0 / 3, 7.0 / 32, 2.0 / 3};
  for (int c = 0; c < 4; ++c) {
    CHECK(std::fabs(v.conditions[c].value - expected[c]) <= 4 * v.conditions[c].standard_error);
  }
  CHECK(std::fabs(v.any.value - 3323.0 / 4032) <= 4 * v.any.standard_error);
  CHECK_THROWS_AS(condition_volumes(100, 1), ContractViolation);
}

TEST_CASE("sampled region volumes are reproducible") {
  const auto a = sample_volumes(3, PatternSpec::pattern(1, 1), 2000, 4);
  const auto b = sample_volumes(3, PatternSpec::pattern(1, 1), 2000, 4, 2);
  CHECK(a.parrondo.value == b.parrondo.value);
  CHECK(a.anti.value == b.anti.value);
  CHECK(a.samples == 2000);
}
