#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqlab/params.hpp"
#include "pqlab/verify.hpp"

using namespace pqlab;

namespace {

const PQParams kRef = make_params(2.0, 6.0, 0.002);

const CheckRecord* find_record(const ReportSection& s, const std::string& id,
                               const std::string& location) {
  for (const CheckRecord& r : s.records) {
    if (r.check_id == id && r.location == location) return &r;
  }
  return nullptr;
}

bool same_records(const ReportSection& a, const ReportSection& b) {
  if (a.name != b.name || a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const CheckRecord& x = a.records[i];
    const CheckRecord& y = b.records[i];
    if (x.check_id != y.check_id || x.location != y.location ||
        x.lhs != y.lhs || x.rhs != y.rhs || x.margin != y.margin ||
        x.passed != y.passed) {
      return false;
    }
  }
  return a.worst_margin == b.worst_margin && a.all_passed == b.all_passed;
}

void check_section_invariants(const ReportSection& s) {
  REQUIRE(!s.records.empty());
  double worst = s.records.front().margin;
  bool all = true;
  for (const CheckRecord& r : s.records) {
    const double tol =
        1e-12 * std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
    CHECK(r.passed == (r.margin >= -tol));
    worst = std::min(worst, r.margin);
    all = all && r.passed;
  }
  CHECK(s.worst_margin == worst);
  CHECK(s.all_passed == all);
}

}  // namespace

TEST_CASE("sample_grid definition and errors") {
  SampleGridSpec ten;
  ten.t_min = 1e-6;
  ten.t_max = 1e12;
  ten.count_log = 10;
  ten.boundary_refine = 0;
  const std::vector<double> g10 = sample_grid(ten);
  CHECK(g10.size() == 10);
  CHECK(g10.front() == 1e-6);
  CHECK(g10.back() == 1e12);
  for (std::size_t i = 1; i < g10.size(); ++i) CHECK(g10[i] > g10[i - 1]);

  SampleGridSpec refined;
  refined.t_min = 0.5;
  refined.t_max = 2.0;
  refined.count_log = 3;
  refined.boundary_refine = 2;
  const std::vector<double> g = sample_grid(refined);
  auto contains = [&g](double x) {
    for (double v : g) {
      if (v == doctest::Approx(x).epsilon(1e-14)) return true;
    }
    return false;
  };
  CHECK(contains(0.9));
  CHECK(contains(0.99));
  CHECK(contains(1.01));
  CHECK(contains(1.1));
  CHECK(g.front() == 0.5);
  CHECK(g.back() == 2.0);

  SampleGridSpec bad;
  bad.t_min = 2.0;
  bad.t_max = 1.0;
  bad.count_log = 10;
  bad.boundary_refine = 0;
  CHECK_THROWS_AS(sample_grid(bad), std::invalid_argument);
  bad = SampleGridSpec{};
  bad.count_log = 1;
  CHECK_THROWS_AS(sample_grid(bad), std::invalid_argument);
  bad = SampleGridSpec{};
  bad.boundary_refine = -1;
  CHECK_THROWS_AS(sample_grid(bad), std::invalid_argument);
  bad = SampleGridSpec{};
  bad.t_min = 0.0;
  CHECK_THROWS_AS(sample_grid(bad), std::invalid_argument);
}

TEST_CASE("lemma records reproduce the reference ratios") {
  const std::vector<double> grid = {0.5, 2.0, std::exp(1.0)};
  const ReportSection s = check_lemmas(kRef, grid);
  // Only t > 1 produces lemma records: two points, seven records each.
  CHECK(s.records.size() == 14);
  CHECK(s.all_passed);
  check_section_invariants(s);

  const CheckRecord* r1 = find_record(s, "cubic_over_quartic", "t=2");
  REQUIRE(r1 != nullptr);
  CHECK(r1->lhs == doctest::Approx(0.26894142136999512).epsilon(1e-14));
  CHECK(r1->rhs == 1.0);
  const CheckRecord* r2 = find_record(s, "cubic_t_over_quartic", "t=2");
  REQUIRE(r2 != nullptr);
  CHECK(r2->lhs == doctest::Approx(0.5378828427399902).epsilon(1e-14));
  const CheckRecord* r3 = find_record(s, "square_t2_over_quartic", "t=2");
  REQUIRE(r3 != nullptr);
  CHECK(r3->lhs == doctest::Approx(1.075765685479980).epsilon(1e-14));
  const CheckRecord* r4 = find_record(
      s, "log_over_outer_log", "t=2.7182818284590451");
  REQUIRE(r4 != nullptr);
  CHECK(r4->lhs == doctest::Approx(0.41038740102839464).epsilon(1e-13));
}

TEST_CASE("theorem records: constants, power branch, probes") {
  SampleGridSpec gs;
  gs.count_log = 150;
  const std::vector<double> big = sample_grid(gs);
  const ReportSection sweep = check_theorem_g(kRef, big);
  CHECK(sweep.all_passed);
  check_section_invariants(sweep);

  const ReportSection s = check_theorem_g(kRef, {0.5, 2.0});
  CHECK(s.all_passed);

  // statement_1 constants 1.968 and 6.032 at the t=0.5 power-branch point.
  const CheckRecord* lo = find_record(s, "slope_lower", "t=0.5");
  REQUIRE(lo != nullptr);
  CHECK(lo->lhs == doctest::Approx(1.968 * 0.25 / 0.5).epsilon(1e-13));
  CHECK(lo->rhs == doctest::Approx(1.0).epsilon(1e-15));
  const CheckRecord* hi = find_record(s, "slope_upper", "t=0.5");
  REQUIRE(hi != nullptr);
  CHECK(hi->rhs == doctest::Approx(6.032 * 0.25 / 0.5).epsilon(1e-13));

  // The scalar phase-error budget: 0.6085/1.968 < 0.864.
  const CheckRecord* budget = find_record(s, "phase_error_budget", "constant");
  REQUIRE(budget != nullptr);
  CHECK(budget->lhs == doctest::Approx(0.3092032520325203).epsilon(1e-13));
  CHECK(budget->rhs == doctest::Approx(0.864).epsilon(1e-15));

  // Exactness of the power branch is recorded as equality (margin -0).
  const CheckRecord* exact = find_record(s, "power_branch_exact", "t=0.5");
  REQUIRE(exact != nullptr);
  CHECK(exact->margin == 0.0);

  // Limit probes for a-b = 2 sit at exactly 1e-8 and 1e12.
  const CheckRecord* small =
      find_record(s, "vanishing_ratio_small_t", "t=1e-08");
  REQUIRE(small != nullptr);
  CHECK(small->rhs == 1e-6);
  const CheckRecord* large =
      find_record(s, "diverging_ratio_large_t", "t=1000000000000");
  REQUIRE(large != nullptr);
  CHECK(large->lhs == 1e6);
  CHECK(large->rhs > 1e6);

  // Strictly positive margins for the strict inequalities.
  for (const CheckRecord& r : sweep.records) {
    if (r.check_id == "curvature_lower") CHECK(r.margin > 0.0);
  }
  const ReportSection lem = check_lemmas(kRef, big);
  for (const CheckRecord& r : lem.records) {
    if (r.check_id == "cubic_over_quartic" ||
        r.check_id == "cubic_t_over_quartic" ||
        r.check_id == "square_t2_over_quartic" ||
        r.check_id == "log_over_outer_log") {
      CHECK(r.margin > 0.0);
    }
  }
}

TEST_CASE("subquadratic decay section") {
  const PQParams sub = make_params(1.2, 1.6, 0.004, true);
  SampleGridSpec spec;
  spec.t_min = 1e-4;
  spec.t_max = 1e8;
  spec.count_log = 120;
  const std::vector<double> grid = sample_grid(spec);
  const ReportSection s = check_subquadratic(sub, grid);
  CHECK(s.all_passed);
  check_section_invariants(s);

  const CheckRecord* c = find_record(s, "decay_constant_negative", "constant");
  REQUIRE(c != nullptr);
  CHECK(c->lhs == -0.2208);  // exact in the derived arithmetic
  for (const CheckRecord& r : s.records) {
    if (r.check_id == "curvature_below_tangent") CHECK(r.margin > 0.0);
    if (r.check_id == "tangent_strictly_decreasing") CHECK(r.margin > 0.0);
  }
  CHECK_THROWS_AS(check_subquadratic(kRef, grid), std::invalid_argument);
}

TEST_CASE("finite-difference cross-check section") {
  SampleGridSpec spec;
  spec.count_log = 60;
  const std::vector<double> grid = sample_grid(spec);
  const ReportSection s = fd_crosscheck(kRef, grid, 0);
  CHECK(s.all_passed);
  check_section_invariants(s);
  // The 1e-4 holes around t=0 and t=1 are respected.
  for (const CheckRecord& r : s.records) {
    if (r.check_id != "fd_slope" && r.check_id != "fd_curvature") continue;
    const double t = std::stod(r.location.substr(2));
    CHECK(t >= 1e-4);
    CHECK(std::abs(t - 1.0) >= 1e-4);
  }
  // 20 matrix points, three records each.
  int hessians = 0;
  for (const CheckRecord& r : s.records) {
    if (r.check_id == "fd_hessian_entries") ++hessians;
  }
  CHECK(hessians == 20);
}

TEST_CASE("uniform ellipticity section with the split contrast") {
  SampleGridSpec gs;
  gs.count_log = 80;
  const std::vector<double> radii = sample_grid(gs);
  const ReportSection sweep = check_uniform_ellipticity(kRef, radii, 2, 7);
  CHECK(sweep.all_passed);
  check_section_invariants(sweep);

  const ReportSection s = check_uniform_ellipticity(kRef, {0.5, 2.0}, 1, 7);
  CHECK(s.all_passed);
  const CheckRecord* half = find_record(s, "spectrum_ratio_cap", "t=0.5");
  REQUIRE(half != nullptr);
  CHECK(half->lhs == 1.0);  // quadratic branch: both eigenvalues equal
  CHECK(half->rhs == doctest::Approx(9.6153846153846154).epsilon(1e-13));

  const CheckRecord* split0 = find_record(s, "split_ratio_closed_form",
                                          "z=(1 1e0)");
  REQUIRE(split0 != nullptr);
  CHECK(split0->lhs == doctest::Approx(15.0).epsilon(1e-14));
  const CheckRecord* split4 = find_record(s, "split_ratio_closed_form",
                                          "z=(1 1e4)");
  REQUIRE(split4 != nullptr);
  CHECK(split4->lhs == doctest::Approx(15.0 * 1e16).epsilon(1e-12));

  bool saw_growth = false;
  for (const CheckRecord& r : s.records) {
    if (r.check_id == "split_ratio_uncapped") {
      saw_growth = true;
      CHECK(r.margin > 0.0);
    }
  }
  CHECK(saw_growth);
}

TEST_CASE("sections are deterministic given params, grid, and seed") {
  SampleGridSpec spec;
  spec.count_log = 50;
  spec.seed = 123;
  const std::vector<double> grid = sample_grid(spec);
  CHECK(same_records(check_lemmas(kRef, grid), check_lemmas(kRef, grid)));
  CHECK(same_records(check_theorem_g(kRef, grid),
                     check_theorem_g(kRef, grid)));
  CHECK(same_records(fd_crosscheck(kRef, grid, 123),
                     fd_crosscheck(kRef, grid, 123)));
  CHECK(same_records(check_uniform_ellipticity(kRef, grid, 3, 123),
                     check_uniform_ellipticity(kRef, grid, 3, 123)));
}

TEST_CASE("every section passes for random valid parameter sets") {
  std::mt19937_64 rng(2718281828);
  std::uniform_real_distribution<double> p_dist(1.05, 3.0);
  std::uniform_real_distribution<double> gap_dist(0.1, 4.0);
  SampleGridSpec spec;
  spec.count_log = 70;
  spec.boundary_refine = 6;
  const std::vector<double> grid = sample_grid(spec);
  for (int trial = 0; trial < 12; ++trial) {
    const double p = p_dist(rng);
    double q = p + gap_dist(rng);
    if (std::abs(q - 2.0) < 1e-3) q += 0.1;  // keep the split contrast alive
    const PQParams params = make_params(p, q);  // epsilon auto-selected
    INFO("p=", p, " q=", q, " eps=", params.epsilon);
    CHECK(check_lemmas(params, grid).all_passed);
    CHECK(check_theorem_g(params, grid).all_passed);
    CHECK(fd_crosscheck(params, grid, trial).all_passed);
    CHECK(check_uniform_ellipticity(params, grid, 2, trial).all_passed);
  }
  // Subquadratic draws exercise the decay section as well.
  std::uniform_real_distribution<double> sub_p(1.05, 1.7);
  for (int trial = 0; trial < 6; ++trial) {
    const double p = sub_p(rng);
    std::uniform_real_distribution<double> sub_q(p + 0.05, 1.95);
    const double q = sub_q(rng);
    const PQParams params = make_params(p, q, std::nullopt, true);
    INFO("subquadratic p=", p, " q=", q, " eps=", params.epsilon);
    CHECK(check_lemmas(params, grid).all_passed);
    CHECK(check_theorem_g(params, grid).all_passed);
    CHECK(check_subquadratic(params, grid).all_passed);
    CHECK(fd_crosscheck(params, grid, 100 + trial).all_passed);
    CHECK(check_uniform_ellipticity(params, grid, 2, 100 + trial).all_passed);
  }
}
