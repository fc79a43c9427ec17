#include <doctest.h>

#include "oracles.hpp"

using namespace fcslab;

TEST_CASE("spectral resolution of the identity collapses to one projector") {
  const auto res = spectral_resolution(Matrix::Identity(3, 3), 1e-9);
  REQUIRE(res.size() == 1);
  CHECK(res.eigenvalues[0] == doctest::Approx(1.0));
  CHECK((res.projectors[0] - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("spectral resolution of a diagonal matrix") {
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = 2.0;
  const auto res = spectral_resolution(h, 1e-9);
  REQUIRE(res.size() == 2);
  CHECK(res.eigenvalues[0] == doctest::Approx(0.0));
  CHECK(res.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(std::abs(res.projectors[0](0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(res.projectors[1](1, 1) - 1.0) < 1e-14);
}

TEST_CASE("spectral resolution of a spin flip matches the closed form") {
  const Matrix sx = pauli_x();
  const auto res = spectral_resolution(sx, 1e-9);
  REQUIRE(res.size() == 2);
  const auto [lo, hi] = oracles::eig2(sx);
  CHECK(res.eigenvalues[0] == doctest::Approx(lo));
  CHECK(res.eigenvalues[1] == doctest::Approx(hi));
  const Matrix p_minus = 0.5 * (Matrix::Identity(2, 2) + sx);  // eigenvalue +1
  CHECK((res.projectors[1] - p_minus).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((res.projectors[0] - 0.5 * (Matrix::Identity(2, 2) - sx)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("nearly degenerate eigenvalues merge into one group") {
  Matrix h = Matrix::Zero(3, 3);
  h(1, 1) = 1e-12;
  h(2, 2) = 1.0;
  const auto res = spectral_resolution(h, 1e-9);
  REQUIRE(res.size() == 2);
  CHECK(res.projectors[0].trace().real() == doctest::Approx(2.0));
}

TEST_CASE("non-Hermitian input is rejected") {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 1) = 1.0;
  CHECK_THROWS_AS(spectral_resolution(h, 1e-9), ValidationError);
  CHECK_THROWS_AS((void)HermitianObservable(h), ValidationError);
}

TEST_CASE("matrix_function basics") {
  const auto zero = spectral_resolution(Matrix::Zero(3, 3), 1e-9);
  CHECK((matrix_function(zero, [](double x) { return std::exp(Complex(x, 0)); }) -
         Matrix::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  std::mt19937_64 rng(11);
  const Matrix h = random_hermitian(6, rng);
  const auto res = spectral_resolution(h);
  CHECK((matrix_function(res, [](double x) { return Complex(x, 0); }) - h).cwiseAbs().maxCoeff() <
        1e-10);

  Matrix d = Matrix::Zero(2, 2);
  d(1, 1) = 2.0;
  const Matrix e = matrix_function(spectral_resolution(d, 1e-9),
                                   [](double x) { return Complex(std::exp(-x), 0); });
  CHECK(e(0, 0).real() == doctest::Approx(1.0));
  CHECK(e(1, 1).real() == doctest::Approx(std::exp(-2.0)));

  CHECK_THROWS_AS(matrix_function(spectral_resolution(d, 1e-9),
                                  [](double x) { return Complex(std::log(x), 0); }),
                  DomainError);
}

TEST_CASE("gibbs state closed forms") {
  Matrix d = Matrix::Zero(2, 2);
  d(1, 1) = 2.0;
  const HermitianObservable h(d);

  const DensityMatrix infinite_temp = gibbs_state(h, 0.0);
  CHECK((infinite_temp.matrix() - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  const DensityMatrix beta_one = gibbs_state(h, 1.0);
  const double z = 1.0 + std::exp(-2.0);
  CHECK(beta_one.matrix()(0, 0).real() == doctest::Approx(1.0 / z));
  CHECK(beta_one.matrix()(1, 1).real() == doctest::Approx(std::exp(-2.0) / z));

  const HermitianObservable flip(pauli_x());
  const DensityMatrix g = gibbs_state(flip, 1.0);
  const Matrix expected =
      (std::cosh(1.0) * Matrix::Identity(2, 2) - std::sinh(1.0) * pauli_x()) / (2 * std::cosh(1.0));
  CHECK((g.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
  const Matrix brute = oracles::taylor_expm(-flip.matrix());
  CHECK((g.matrix() - brute / brute.trace()).cwiseAbs().maxCoeff() < 1e-13);

  // Commutes with its Hamiltonian.
  const Matrix c = g.matrix() * flip.matrix() - flip.matrix() * g.matrix();
  CHECK(c.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gibbs state survives extreme beta via shifted exponents") {
  Matrix d = Matrix::Zero(2, 2);
  d(1, 1) = 2.0;
  const DensityMatrix cold = gibbs_state(HermitianObservable(d), 2000.0);
  CHECK(cold.matrix()(0, 0).real() == doctest::Approx(1.0));
  const DensityMatrix hot = gibbs_state(HermitianObservable(d), -2000.0);
  CHECK(hot.matrix()(1, 1).real() == doctest::Approx(1.0));
}

TEST_CASE("heisenberg evolution") {
  std::mt19937_64 rng(7);
  const HermitianObservable h(random_hermitian(5, rng));
  const HermitianObservable a(random_hermitian(5, rng));

  SUBCASE("t = 0 is the identity") {
    CHECK((heisenberg_evolve(a, h, 0.0).matrix() - a.matrix()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("commuting observables are invariant") {
    const HermitianObservable f(
        matrix_function(h.spectral(), [](double x) { return Complex(x * x, 0); }));
    CHECK((heisenberg_evolve(f, h, 3.7).matrix() - f.matrix()).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("spin rotation by half a period flips the spin") {
    const HermitianObservable half_flip(0.5 * pauli_x());
    const Matrix evolved =
        heisenberg_evolve(HermitianObservable(pauli_z()), half_flip, M_PI).matrix();
    CHECK((evolved + pauli_z()).cwiseAbs().maxCoeff() < 1e-12);
    // Series-expansion oracle.
    const Matrix u = oracles::taylor_expm(kImag * M_PI * half_flip.matrix());
    const Matrix brute = u * pauli_z() * u.adjoint();
    CHECK((evolved - brute).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("spectrum is preserved") {
    const auto before = spectral_resolution(a).eigenvalues;
    const auto after = spectral_resolution(heisenberg_evolve(a, h, 2.3)).eigenvalues;
    REQUIRE(before.size() == after.size());
    for (std::size_t k = 0; k < before.size(); ++k)
      CHECK(after[k] == doctest::Approx(before[k]).epsilon(1e-9));
  }
  SUBCASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(heisenberg_evolve(HermitianObservable(pauli_z()), h, 1.0), ValidationError);
  }
}

TEST_CASE("evolution operators are unitary") {
  std::mt19937_64 rng(21);
  const HermitianObservable h(random_hermitian(8, rng));
  const Matrix u = unitary_evolution(h, 1.9);
  CHECK((u * u.adjoint() - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("gibbs state satisfies the thermal boundary identity") {
  std::mt19937_64 rng(5);
  const HermitianObservable h(random_hermitian(5, rng));
  const double beta = 0.8;
  const DensityMatrix omega = gibbs_state(h, beta);
  const Matrix a = oracles::random_dense(5, rng), b = oracles::random_dense(5, rng);
  const Matrix decay = matrix_function(h.spectral(), [&](double e) { return std::exp(Complex(-beta * e, 0)); });
  const Matrix grow = matrix_function(h.spectral(), [&](double e) { return std::exp(Complex(beta * e, 0)); });
  const Complex lhs = (omega.matrix() * a * decay * b * grow).trace();
  const Complex rhs = (omega.matrix() * b * a).trace();
  CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-8);
}

TEST_CASE("density matrix validation") {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  CHECK_THROWS_AS((void)DensityMatrix(bad), ValidationError);

  Matrix off = Matrix::Identity(2, 2) * 0.6;
  CHECK_THROWS_AS((void)DensityMatrix(off), ValidationError);
  CHECK_NOTHROW(DensityMatrix(off, /*normalized=*/false));

  Matrix pure = Matrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  CHECK_NOTHROW((void)DensityMatrix(pure));
}

TEST_CASE("kron matches the index-arithmetic oracle") {
  std::mt19937_64 rng(3);
  const Matrix a = oracles::random_dense(3, rng), b = oracles::random_dense(4, rng);
  CHECK((kron(a, b) - oracles::index_kron(a, b)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("operator norm is the largest singular value") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = -3.0;
  d(1, 1) = 2.0;
  CHECK(operator_norm(d) == doctest::Approx(3.0));
  CHECK(operator_norm(pauli_x()) == doctest::Approx(1.0));
}
