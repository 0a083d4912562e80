#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "kerrflux/dynamics.hpp"
#include "kerrflux/model.hpp"

using namespace kerrflux;

namespace {

DenseVector trace_functional(Eigen::Index dim) {
    DenseVector t = DenseVector::Zero(dim * dim);
    for (Eigen::Index i = 0; i < dim; ++i) t(i * (dim + 1)) = Complex(1.0, 0.0);
    return t;
}

double mode_population(const DenseMatrix& rho, const FockBasis& basis, int mode) {
    double n = 0.0;
    for (Eigen::Index k = 0; k < basis.dimension(); ++k) {
        n += basis.state(k)[static_cast<std::size_t>(mode)] * rho(k, k).real();
    }
    return n;
}

NetworkModel single_decaying_mode(double gamma, int cap) {
    NetworkModel net;
    net.modes = {{"a", 0.0, 0.0, gamma}};
    net.drive = {"a", 0.0, 0.0};
    net.truncation.per_mode_caps = {cap};
    return net;
}

Liouvillian liouvillian_for(const NetworkModel& net, const FockBasis& basis) {
    return build_liouvillian(build_hamiltonian(net, basis), net, basis);
}

} // namespace

TEST_CASE("amplitude damping spectrum of a single decaying mode") {
    const double gamma = 1.0;
    const NetworkModel net = single_decaying_mode(gamma, 1);
    const FockBasis basis = build_basis(1, net.truncation);
    const Liouvillian liouvillian = liouvillian_for(net, basis);
    REQUIRE(liouvillian.generator.rows() == 4);

    Eigen::ComplexEigenSolver<DenseMatrix> eig{DenseMatrix(liouvillian.generator)};
    std::vector<double> real_parts;
    for (Eigen::Index i = 0; i < 4; ++i) {
        CHECK(std::abs(eig.eigenvalues()(i).imag()) < 1e-12);
        real_parts.push_back(eig.eigenvalues()(i).real());
    }
    std::sort(real_parts.begin(), real_parts.end());
    CHECK(real_parts[0] == doctest::Approx(-gamma).epsilon(1e-12));
    CHECK(real_parts[1] == doctest::Approx(-gamma / 2).epsilon(1e-12));
    CHECK(real_parts[2] == doctest::Approx(-gamma / 2).epsilon(1e-12));
    CHECK(std::abs(real_parts[3]) < 1e-12);
}

TEST_CASE("trace functional is a left null vector of the generator") {
    std::mt19937 rng(7031);
    std::uniform_real_distribution<double> uniform(0.1, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        NetworkModel net;
        net.modes = {{"a", 0.0, uniform(rng), uniform(rng)},
                     {"b", 0.0, 0.0, uniform(rng)}};
        net.couplings = {{"a", "b", uniform(rng), uniform(rng)}};
        net.drive = {"a", uniform(rng) * 0.05, uniform(rng) - 1.0};
        net.truncation.per_mode_caps = {2, 2};
        net.truncation.total_cap = 2;

        const FockBasis basis = build_basis(2, net.truncation);
        const Liouvillian liouvillian = liouvillian_for(net, basis);
        const DenseVector t = trace_functional(basis.dimension());
        const double residual = (liouvillian.generator.adjoint() * t).norm();
        CHECK(residual < 1e-12);
    }
}

TEST_CASE("fig2 Liouvillian dimension is 100") {
    const NetworkModel net = preset("fig2_asym_molecule");
    const FockBasis basis = build_basis(2, net.truncation);
    CHECK(basis.dimension() == 10);
    CHECK(liouvillian_for(net, basis).generator.rows() == 100);
}

TEST_CASE("undriven network settles to the vacuum projector") {
    NetworkModel net = preset("fig4_cyclic3");
    net.drive.epsilon = 0.0;
    const FockBasis basis = build_basis(3, net.truncation);
    const SteadyState ss = steady_state(liouvillian_for(net, basis));

    CHECK(ss.residual < 1e-12);
    CHECK(std::abs(ss.rho(0, 0) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(ss.rho.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(ss.driven_mode.empty());
}

TEST_CASE("fig2 on resonance reproduces the impedance-matched linear response") {
    // Linear coupled-mode theory at J = gamma/2 gives beta = -eps/gamma, so
    // <b^dag b> = eps^2 / gamma^2; the Kerr correction at eps = 0.01 gamma is
    // below 0.1%.
    const NetworkModel net = preset("fig2_asym_molecule");
    const FockBasis basis = build_basis(2, net.truncation);
    const SteadyState ss = steady_state(liouvillian_for(net, basis));
    const double expected = net.drive.epsilon * net.drive.epsilon;
    CHECK(mode_population(ss.rho, basis, 1) == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("steady state carries the drive port and passes physicality checks") {
    const NetworkModel net = preset("fig2_asym_molecule");
    const FockBasis basis = build_basis(2, net.truncation);
    const SteadyState ss = steady_state(liouvillian_for(net, basis));
    CHECK(ss.driven_mode == "a");
    CHECK(ss.drive_epsilon == 0.01);
    CHECK(std::abs(ss.rho.trace() - Complex(1.0, 0.0)) < 1e-10);
    CHECK((ss.rho - ss.rho.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(ss.min_eigenvalue > -1e-8);
    CHECK(ss.solver_info.method == "sparse-lu(trace-constrained)");
}

TEST_CASE("population decays exponentially under evolve") {
    const double gamma = 1.0;
    const NetworkModel net = single_decaying_mode(gamma, 2);
    const FockBasis basis = build_basis(1, net.truncation);
    const Liouvillian liouvillian = liouvillian_for(net, basis);

    DenseMatrix rho0 = DenseMatrix::Zero(3, 3);
    rho0(1, 1) = Complex(1.0, 0.0);
    const DenseMatrix rho = evolve(liouvillian, rho0, 1.0 / gamma, 1e-3);
    CHECK(mode_population(rho, basis, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(std::abs(rho.trace() - Complex(1.0, 0.0)) < 1e-10);
}

TEST_CASE("evolve preserves trace and Hermiticity along the trajectory") {
    const NetworkModel net = preset("fig2_asym_molecule");
    const FockBasis basis = build_basis(2, net.truncation);
    const Liouvillian liouvillian = liouvillian_for(net, basis);

    DenseMatrix rho = DenseMatrix::Zero(10, 10);
    rho(0, 0) = Complex(1.0, 0.0);
    for (int segment = 0; segment < 5; ++segment) {
        rho = evolve(liouvillian, rho, 1.0, 2e-3);
        CHECK(std::abs(rho.trace() - Complex(1.0, 0.0)) < 1e-10);
        CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("long-time evolution agrees with the direct steady state") {
    const NetworkModel net = preset("fig4_cyclic3");
    const FockBasis basis = build_basis(3, net.truncation);
    const Liouvillian liouvillian = liouvillian_for(net, basis);
    const SteadyState ss = steady_state(liouvillian);

    DenseMatrix rho0 = DenseMatrix::Zero(basis.dimension(), basis.dimension());
    rho0(0, 0) = Complex(1.0, 0.0);
    const DenseMatrix rho = evolve(liouvillian, rho0, 50.0, 2e-3);
    for (int mode = 0; mode < 3; ++mode) {
        const double direct = mode_population(ss.rho, basis, mode);
        const double evolved = mode_population(rho, basis, mode);
        CHECK(std::abs(evolved - direct) <= 1e-5 * std::max(std::abs(direct), 1e-30) + 1e-16);
    }
}

TEST_CASE("evolve rejects a hopeless step size") {
    const NetworkModel net = preset("fig5_reservoir"); // gamma_c = 100 is stiff
    const FockBasis basis = build_basis(3, net.truncation);
    const Liouvillian liouvillian = liouvillian_for(net, basis);
    DenseMatrix rho0 = DenseMatrix::Zero(basis.dimension(), basis.dimension());
    rho0(0, 0) = Complex(1.0, 0.0);
    CHECK_THROWS_AS(evolve(liouvillian, rho0, 1.0, 0.2), SolverError);
}

TEST_CASE("single Kerr mode oracle matches the closed form") {
    // Two-level amplitude solution: g2(0) = (D^2 + g^2/4) / ((D+U)^2 + g^2/4).
    const double u = 5.0;
    for (double delta : {0.0, 1.0, -2.0}) {
        NetworkModel net;
        net.modes = {{"a", 0.0, u, 1.0}};
        net.drive = {"a", 0.01, delta};
        net.truncation.per_mode_caps = {3};
        net.truncation.total_cap = 3;

        const AmplitudeSolution oracle = amplitude_oracle(net);
        const double n = oracle.mean_photon(0);
        const double g2 = oracle.pair_moment(0) / (n * n);
        const double expected =
            (delta * delta + 0.25) / ((delta + u) * (delta + u) + 0.25);
        CHECK(g2 == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("oracle amplitudes scale with the expected drive order") {
    NetworkModel net = preset("fig2_asym_molecule");
    const AmplitudeSolution full = amplitude_oracle(net);
    net.drive.epsilon /= 2.0;
    const AmplitudeSolution half = amplitude_oracle(net);

    for (const auto& [occ, amp] : full.amplitudes) {
        int total = 0;
        for (int x : occ) total += x;
        const Complex difference = half.amplitudes.at(occ) * std::pow(2.0, total) - amp;
        CHECK(std::abs(difference) <= 1e-12 * std::max(std::abs(amp), 1e-30));
    }
}

TEST_CASE("linear networks are coherent: oracle g2 is exactly 1") {
    NetworkModel net = preset("fig4_cyclic3");
    for (ModeSpec& m : net.modes) m.kerr_u = 0.0;
    net.couplings[2].phase = 0.77; // generic flux: no dark port
    net.drive.detuning = 0.3;
    const AmplitudeSolution oracle = amplitude_oracle(net);
    for (int mode = 0; mode < 3; ++mode) {
        const double n = oracle.mean_photon(mode);
        REQUIRE(n > 1e-30);
        const double g2 = oracle.pair_moment(mode) / (n * n);
        CHECK(g2 == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("fig2 oracle matches the master equation at the few-permille level") {
    const NetworkModel net = preset("fig2_asym_molecule");
    const FockBasis basis = build_basis(2, net.truncation);
    const SteadyState ss = steady_state(liouvillian_for(net, basis));
    const AmplitudeSolution oracle = amplitude_oracle(net);

    double n_me = 0.0, nn_me = 0.0;
    for (Eigen::Index k = 0; k < basis.dimension(); ++k) {
        const int nb = basis.state(k)[1];
        n_me += nb * ss.rho(k, k).real();
        nn_me += nb * (nb - 1.0) * ss.rho(k, k).real();
    }
    const double g2_me = nn_me / (n_me * n_me);
    const double n_or = oracle.mean_photon(1);
    const double g2_or = oracle.pair_moment(1) / (n_or * n_or);

    CHECK(g2_me == doctest::Approx(0.454).epsilon(0.01)); // approx 0.45
    CHECK(g2_or == doctest::Approx(g2_me).epsilon(0.02));
    CHECK(n_or == doctest::Approx(n_me).epsilon(1e-3));
}

TEST_CASE("oracle warns outside the weak-drive regime and rejects no drive") {
    NetworkModel net = preset("fig2_asym_molecule");
    net.drive.epsilon = 0.5;
    CHECK(!amplitude_oracle(net).warnings.empty());
    net.drive.epsilon = 0.01;
    CHECK(amplitude_oracle(net).warnings.empty());
    net.drive.epsilon = 0.0;
    CHECK_THROWS_AS(amplitude_oracle(net), UsageError);
}

TEST_CASE("oracle flags a resonant singular system") {
    // A lossless mode driven on resonance makes the one-photon block the
    // zero matrix.
    NetworkModel net;
    net.modes = {{"a", 0.0, 0.0, 0.0}};
    net.drive = {"a", 0.01, 0.0};
    net.truncation.per_mode_caps = {2};
    net.truncation.total_cap = 2;
    CHECK_THROWS_AS(amplitude_oracle(net), SolverError);
}

TEST_CASE("drive scaling leaves T and g2 invariant at weak drive") {
    NetworkModel net = preset("fig4_cyclic3");
    const FockBasis basis = build_basis(3, net.truncation);

    const auto observables = [&](const NetworkModel& n) {
        const SteadyState ss = steady_state(liouvillian_for(n, basis));
        const double eps2 = n.drive.epsilon * n.drive.epsilon;
        const double nb = mode_population(ss.rho, basis, 1);
        double nnb = 0.0;
        for (Eigen::Index k = 0; k < basis.dimension(); ++k) {
            const int m = basis.state(k)[1];
            nnb += m * (m - 1.0) * ss.rho(k, k).real();
        }
        return std::pair{nb / eps2, nnb / (nb * nb)};
    };

    net.drive.detuning = 0.3;
    const auto [t_full, g2_full] = observables(net);
    net.drive.epsilon /= 2.0;
    const auto [t_half, g2_half] = observables(net);
    CHECK(std::abs(t_half - t_full) / t_full < 1e-3);
    CHECK(std::abs(g2_half - g2_full) / g2_full < 1e-3);
}
