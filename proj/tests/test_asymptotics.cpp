#include <doctest.h>

#include <future>

#include "oracles.hpp"

using namespace fcslab;

TEST_CASE("infinite-time average at zero coupling is a point mass") {
  const OpenSystemModel m = oracles::make_q1r3(0.0);
  for (const MeasureSide side : {MeasureSide::System, MeasureSide::Reservoir}) {
    const AtomicMeasure mu = cesaro_fcs(m, side);
    REQUIRE(mu.size() == 1);
    CHECK(std::abs(mu.atoms()[0].location) < 1e-12);
    CHECK(mu.atoms()[0].weight == doctest::Approx(1.0));
  }
}

TEST_CASE("exact average agrees with long-time numerical averaging") {
  const OpenSystemModel m = oracles::make_q1r3();
  const AtomicMeasure exact = cesaro_fcs(m, MeasureSide::Reservoir);
  const AtomicMeasure numeric = oracles::trapezoid_reservoir_average(m, 2000.0, 0.1);
  CHECK(kolmogorov_distance(exact, numeric) < 2e-3);
}

TEST_CASE("average measure mean equals the averaged reservoir heat") {
  const OpenSystemModel m = oracles::make_q1r3();
  const AtomicMeasure mu = cesaro_fcs(m, MeasureSide::Reservoir);
  CHECK(mu.mass() == doctest::Approx(1.0).epsilon(1e-12));
  // Same average applied to the heat: pinch the embedded reservoir
  // Hamiltonian over the coupled eigenprojections.
  const auto& res = m.total_hamiltonian.spectral();
  const Matrix hr = m.embed_reservoir(m.reservoir_hamiltonian.matrix());
  Matrix pinched = Matrix::Zero(16, 16);
  for (const auto& p : res.projectors) pinched += p * hr * p;
  const double limit_heat =
      m.initial_state.expectation(hr).real() - m.initial_state.expectation(pinched).real();
  CHECK(mu.mean() == doctest::Approx(limit_heat).epsilon(1e-9));
}

TEST_CASE("idealized limit at zero coupling with the thermal initial state") {
  NamedBuilder res{"spin_chain_reservoir", {{"n", 2}, {"h", 1.0}, {"g", 0.3}}};
  const double p = 1.0 / (1.0 + std::exp(-2.0));
  NamedBuilder sys{"two_level", {{"gap", 2.0}, {"rho", {p, 1.0 - p}}}};
  const OpenSystemModel m = build_named_model(build_named_system(sys),
                                              build_named_reservoir(res, 0), 0.0, 1.0);
  const AtomicMeasure ideal = fcs_limit_idealized(m, MeasureSide::System);
  const AtomicMeasure limit = double_limit_fcs(m);
  CHECK(kolmogorov_distance(ideal, limit) < 1e-12);
  CHECK(fcs_limit_idealized(m, MeasureSide::Reservoir).mass() == doctest::Approx(1.0));
}

TEST_CASE("double limit closed form for a thermal two-level system") {
  const double p = 1.0 / (1.0 + std::exp(-2.0));
  NamedBuilder sys{"two_level", {{"gap", 2.0}, {"rho", {p, 1.0 - p}}}};
  NamedBuilder res{"spin_chain_reservoir", {{"n", 1}, {"h", 1.0}}};
  const OpenSystemModel m = build_named_model(build_named_system(sys),
                                              build_named_reservoir(res, 0), 0.1, 1.0);
  const AtomicMeasure mu = double_limit_fcs(m);
  REQUIRE(mu.size() == 3);
  CHECK(mu.atoms()[0].weight == doctest::Approx(p * (1 - p)).epsilon(1e-12));
  CHECK(mu.atoms()[1].weight == doctest::Approx(p * p + (1 - p) * (1 - p)).epsilon(1e-12));
  CHECK(mu.atoms()[2].weight == doctest::Approx(p * (1 - p)).epsilon(1e-12));
  // mean = thermal energy minus initial energy
  const double expected_mean = m.system_gibbs.expectation(m.system_hamiltonian.matrix()).real() -
                               m.system_state.expectation(m.system_hamiltonian.matrix()).real();
  CHECK(mu.mean() == doctest::Approx(expected_mean).epsilon(1e-12));
}

TEST_CASE("transfer identity holds to round-off") {
  const OpenSystemModel m = oracles::make_q1r3();
  CHECK(transfer_identity_residual(m, 0.0, 0.0) < 1e-12);
  for (double t : {1.0, 5.0})
    for (double s : {0.0, 0.3, 1.0}) CHECK(transfer_identity_residual(m, t, s) < 1e-8);
  const OpenSystemModel decoupled = oracles::make_q1r3(0.0);
  CHECK(transfer_identity_residual(decoupled, 2.0, 0.7) < 1e-10);
}

TEST_CASE("generating function limits") {
  const OpenSystemModel m = oracles::make_q1r2();

  SUBCASE("rank-one value at s = 0 matches its definition") {
    const Matrix omega_l = araki_vector(m);
    const Complex expected = hs_inner(system_weighted_vector(m), omega_l) *
                             hs_inner(omega_l, reference_vector(m)) /
                             (hs_norm(omega_l) * hs_norm(omega_l));
    CHECK(std::abs(generating_function_limit(m, 0.0, LimitMode::RankOne) - expected) < 1e-12);
  }
  SUBCASE("kernel-exact value is the time average of the generating function") {
    const double s = 0.4;
    const Complex limit = generating_function_limit(m, s, LimitMode::KernelExact);
    Complex avg = 0.0;
    const double t_max = 10000.0, step = 0.5;
    const auto n = static_cast<std::size_t>(t_max / step);
    double wsum = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      const double w = (k == 0 || k == n) ? 0.5 : 1.0;
      avg += w * fcs_generating_function(m, step * static_cast<double>(k), Complex(0.5, s));
      wsum += w;
    }
    avg /= wsum;
    CHECK(std::abs(limit - avg) < 2e-3);
  }
  SUBCASE("both modes are finite and differ by the finite-size gap") {
    const Complex rank_one = generating_function_limit(m, 0.5, LimitMode::RankOne);
    const Complex kernel = generating_function_limit(m, 0.5, LimitMode::KernelExact);
    CHECK(std::isfinite(rank_one.real()));
    CHECK(std::isfinite(kernel.real()));
    CHECK(std::abs(rank_one - kernel) < 1.0);
  }
  SUBCASE("at zero coupling both modes exist and the degenerate kernel separates them") {
    const OpenSystemModel decoupled = oracles::make_q1r2(0.0);
    const Complex rank_one = generating_function_limit(decoupled, 0.5, LimitMode::RankOne);
    const Complex kernel = generating_function_limit(decoupled, 0.5, LimitMode::KernelExact);
    CHECK(std::isfinite(rank_one.real()));
    CHECK(std::isfinite(kernel.real()));
    CHECK(std::abs(rank_one - kernel) > 1e-3);
  }
  SUBCASE("the gap between the modes shrinks as the reservoir grows") {
    std::vector<double> gaps;
    for (int n = 2; n <= 5; ++n) {
      NamedBuilder sys{"two_level", {{"gap", 2.0}, {"rho", {0.88, 0.12}}}};
      NamedBuilder res{"spin_chain_reservoir",
                       {{"n", n}, {"h", 1.95}, {"g", 0.15}, {"gz", 0.06}}};
      const OpenSystemModel member = build_named_model(build_named_system(sys),
                                                       build_named_reservoir(res, 0), 0.1, 1.0);
      gaps.push_back(std::abs(generating_function_limit(member, 0.5, LimitMode::RankOne) -
                              generating_function_limit(member, 0.5, LimitMode::KernelExact)));
    }
    for (std::size_t k = 1; k < gaps.size(); ++k) CHECK(gaps[k] < gaps[k - 1]);
  }
}

TEST_CASE("decoupled generating function") {
  const OpenSystemModel m = oracles::make_q1r3();
  CHECK(std::abs(decoupled_generating_function(m, 0.0) - 1.0) < 1e-14);
  for (double gamma : {-4.0, 0.7, 3.1})
    CHECK(std::abs(decoupled_generating_function(m, gamma)) <= 1.0 + 1e-12);

  // two-level closed form at rho = omega_S
  const double p = 1.0 / (1.0 + std::exp(-2.0));
  NamedBuilder sys{"two_level", {{"gap", 2.0}, {"rho", {p, 1.0 - p}}}};
  NamedBuilder res{"spin_chain_reservoir", {{"n", 1}, {"h", 1.0}}};
  const OpenSystemModel thermal = build_named_model(build_named_system(sys),
                                                    build_named_reservoir(res, 0), 0.0, 1.0);
  const double gamma = M_PI / 2;
  const Complex expected = (p + (1 - p) * std::exp(-kImag * (gamma * 2.0))) *
                           (p + (1 - p) * std::exp(kImag * (gamma * 2.0)));
  CHECK(std::abs(decoupled_generating_function(thermal, gamma) - expected) < 1e-13);
}

TEST_CASE("continuation factors") {
  SUBCASE("zero coupling gives the closed-form pair") {
    const OpenSystemModel m = oracles::make_q1r3(0.0);
    const double z = 1.0 + std::exp(-2.0);
    for (double gamma : {0.0, 0.7}) {
      const auto [g1, g2] = continuation_factors(m, gamma);
      const Complex rho_part = 0.75 + 0.25 * std::exp(-kImag * (gamma * 2.0));
      const Complex gibbs_part = (1.0 + std::exp(-2.0) * std::exp(kImag * (gamma * 2.0))) / z;
      CHECK(std::abs(g1 - rho_part / std::sqrt(z)) < 1e-12);
      CHECK(std::abs(g2 - std::sqrt(z) * gibbs_part) < 1e-12);
    }
  }
  SUBCASE("normalized product is one at gamma = 0 for any coupling") {
    const OpenSystemModel m = oracles::make_q1r3(0.2);
    const auto [g1, g2] = continuation_factors(m, 0.0);
    const Matrix omega_l = araki_vector(m);
    const double n2 = hs_norm(omega_l) * hs_norm(omega_l);
    CHECK(std::abs(g1 * g2 / n2 - 1.0) < 1e-12);
  }
  SUBCASE("deviation from the decoupled pair scales linearly in the coupling") {
    // Linear scaling needs a coupling whose system part has a diagonal
    // component in the system energy basis; a purely off-diagonal system
    // part (as in the chain fixture) makes the first-order term a vanishing
    // off-diagonal trace.
    NamedBuilder sys{"two_level", {{"gap", 2.0}, {"rho", {0.75, 0.25}}}};
    NamedBuilder res{"random_reservoir", {{"n", 4}, {"seed", 3}}};
    const SystemPart s = build_named_system(sys);
    const ReservoirPart r = build_named_reservoir(res, 0);
    auto model = [&](double lambda) {
      const Matrix v = kron(pauli_x() + 0.5 * pauli_z(), r.coupling_op);
      return build_model(s.hamiltonian, s.state, r.hamiltonian, HermitianObservable(v), lambda,
                         1.0);
    };
    const auto [base1, base2] = continuation_factors(model(0.0), 0.7);
    std::vector<double> dev;
    for (double lambda : {0.2, 0.1, 0.05}) {
      const auto [g1, g2] = continuation_factors(model(lambda), 0.7);
      dev.push_back(std::abs(g1 - base1) + std::abs(g2 - base2));
    }
    CHECK(dev[0] / dev[1] == doctest::Approx(2.0).epsilon(0.15));
    CHECK(dev[1] / dev[2] == doctest::Approx(2.0).epsilon(0.15));
  }
  SUBCASE("energy-off-diagonal couplings upgrade the scaling to second order") {
    const auto [base1, base2] = continuation_factors(oracles::make_q1r3(0.0), 0.7);
    std::vector<double> dev;
    for (double lambda : {0.2, 0.1, 0.05}) {
      const auto [g1, g2] = continuation_factors(oracles::make_q1r3(lambda), 0.7);
      dev.push_back(std::abs(g1 - base1) + std::abs(g2 - base2));
    }
    CHECK(dev[0] / dev[1] == doctest::Approx(4.0).epsilon(0.15));
    CHECK(dev[1] / dev[2] == doctest::Approx(4.0).epsilon(0.15));
  }
}

TEST_CASE("scan over a single decoupled trivial model gives zero distance") {
  // H_S = 0: the closed-form limit and the averaged measure are both point
  // masses at zero.
  Matrix hs = Matrix::Zero(2, 2);
  NamedBuilder res{"spin_chain_reservoir", {{"n", 2}, {"h", 1.0}, {"g", 0.3}}};
  const ReservoirPart r = build_named_reservoir(res, 0);
  const OpenSystemModel m =
      build_model(HermitianObservable(hs), DensityMatrix(0.5 * Matrix::Identity(2, 2)),
                  r.hamiltonian, HermitianObservable(kron(pauli_x(), r.coupling_op)), 0.0, 1.0);
  DistanceSpec spec;
  spec.mode = LimitMode::KernelExact;
  const ScanResult result = scan({m}, ScanAxis::Lambda, spec);
  REQUIRE(result.rows.size() == 1);
  CHECK(result.rows[0].kolmogorov == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(result.rows[0].cf_sup == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("scan rows carry the axis values and stay finite") {
  std::vector<OpenSystemModel> family;
  for (double lambda : {0.3, 0.1}) family.push_back(oracles::make_q1r2(lambda));
  DistanceSpec spec;
  for (const LimitMode mode : {LimitMode::KernelExact, LimitMode::RankOne}) {
    spec.mode = mode;
    const ScanResult result = scan(family, ScanAxis::Lambda, spec);
    REQUIRE(result.rows.size() == 2);
    CHECK(result.rows[0].value == doctest::Approx(0.3));
    CHECK(result.rows[1].value == doctest::Approx(0.1));
    for (const auto& row : result.rows) {
      CHECK(row.ok);
      CHECK(std::isfinite(row.kolmogorov));
      CHECK(row.kolmogorov >= 0.0);
      CHECK(row.kolmogorov <= 1.0);
      CHECK(std::isfinite(row.cf_sup));
    }
  }
}

TEST_CASE("time-axis scan averages toward the exact limit") {
  const OpenSystemModel m = oracles::make_q1r2();
  DistanceSpec spec;
  spec.time_grid = {0.0};
  for (double t = 2.0; t <= 400.0; t += 2.0) spec.time_grid.push_back(t);
  const ScanResult result = scan({m}, ScanAxis::Time, spec);
  REQUIRE(result.rows.size() == spec.time_grid.size());
  // the running average at late times approaches the exact infinite-time value
  const AtomicMeasure exact = cesaro_fcs(m, MeasureSide::Reservoir);
  const AtomicMeasure reference = double_limit_fcs(m);
  const double limit_distance = kolmogorov_distance(exact, reference);
  CHECK(std::abs(result.rows.back().kolmogorov - limit_distance) < 0.05);
}

TEST_CASE("oversized family members produce error rows, not failures") {
  std::vector<OpenSystemModel> family;
  NamedBuilder sys{"two_level", {{"gap", 2.0}, {"rho", {0.75, 0.25}}}};
  NamedBuilder res{"spin_chain_reservoir", {{"n", 8}, {"h", 1.0}, {"g", 0.3}}};
  family.push_back(build_named_model(build_named_system(sys), build_named_reservoir(res, 0),
                                     0.1, 1.0));  // dim 512 exceeds the cap
  family.push_back(oracles::make_q1r2());
  DistanceSpec spec;
  const ScanResult result = scan(family, ScanAxis::Size, spec);
  REQUIRE(result.rows.size() == 2);
  CHECK_FALSE(result.rows[0].ok);
  CHECK(std::isnan(result.rows[0].kolmogorov));
  CHECK(result.rows[1].ok);
}

TEST_CASE("concurrent evaluation on a shared model is safe and consistent") {
  const OpenSystemModel m = oracles::make_q1r2();
  std::vector<std::future<AtomicMeasure>> futures;
  for (int k = 0; k < 4; ++k)
    futures.push_back(std::async(std::launch::async,
                                 [&m] { return cesaro_fcs(m, MeasureSide::Reservoir); }));
  const AtomicMeasure reference = cesaro_fcs(m, MeasureSide::Reservoir);
  for (auto& f : futures) {
    const AtomicMeasure mu = f.get();
    REQUIRE(mu.size() == reference.size());
    for (std::size_t k = 0; k < mu.size(); ++k)
      CHECK(mu.atoms()[k].weight == reference.atoms()[k].weight);
  }
}

TEST_CASE("limit report carries distances and a fingerprint") {
  const OpenSystemModel m = oracles::make_q1r2();
  const LimitReport report = limit_report(m, MeasureSide::Reservoir, LimitMode::KernelExact);
  CHECK(report.distances.at("kolmogorov_vs_double_limit") >= 0.0);
  CHECK(report.distances.at("kolmogorov_vs_double_limit") <= 1.0);
  CHECK(report.model_fingerprint.size() == 16);
  const LimitReport again = limit_report(m, MeasureSide::Reservoir, LimitMode::KernelExact);
  CHECK(report.model_fingerprint == again.model_fingerprint);
}
