#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nmrqc/constants.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/nmr_readout.hpp"

using namespace nmrqc;
using namespace nmrqc::constants;
using boost::math::quadrature::gauss_kronrod;

TEST_CASE("Bloch steady state is a zero of the derivative") {
  const auto sp = phosphorus31();
  const RelaxationPair relax{0.5, 2.0};
  Environment env;
  for (double det : {0.0, 3.0, -7.0}) {
    const double b = optimum_drive(sp, relax) * 1.7;
    const auto m = bloch_steady_state(sp, env, relax, 1.0, b, det);
    const auto d = bloch_derivative(sp, relax, 1.0, b, det, m);
    CHECK(std::abs(d.mx) < 1e-12);
    CHECK(std::abs(d.my) < 1e-12);
    CHECK(std::abs(d.mz) < 1e-12);
  }
}

TEST_CASE("on-resonance absorption peaks at the optimum drive") {
  const auto sp = phosphorus31();
  const RelaxationPair relax{0.3, 4.0};
  Environment env;
  const double b0 = optimum_drive(sp, relax);
  const double peak = bloch_steady_state(sp, env, relax, 1.0, b0, 0.0).mx;
  CHECK(peak == doctest::Approx(0.5 * std::sqrt(relax.t_perp / relax.t_par)).epsilon(1e-12));
  for (double f : {0.5, 0.9, 1.1, 2.0}) CHECK(bloch_steady_state(sp, env, relax, 1.0, f * b0, 0.0).mx < peak);
  CHECK(RelaxationPair{2.0, 1.0}.suspicious());
}

TEST_CASE("coil relation and S/N paths agree") {
  const auto sp = phosphorus31();
  const double omega = 2e-5 * k_b * 300.0 / hbar;
  const auto coil = CoilCircuit::from_circuit(3.0, 1e3, omega, 1.0, 10.0, 1.0);
  CHECK(coil.consistent());
  CHECK(coil.ka_m2() == doctest::Approx(std::sqrt(3.0 * 1e-6 / (mu0 * 1e3 * omega))));
  Environment env;
  env.temp_lattice = env.temp_nuclear = 300.0;
  const double n = 1e16;
  CHECK(snr_bulk(sp, env, coil, n, 2) == doctest::Approx(snr_bulk_closed_form(sp, env, coil, n, 2)).epsilon(1e-12));
  // the rounded constant 0.2e-9 stands for (1/8) sqrt(mu0 / (hbar dnu)) gamma hbar = 1.55e-10
  CHECK(snr_bulk_estimate(sp, env, coil, n, 2) / snr_bulk(sp, env, coil, n, 2) ==
        doctest::Approx(1.287).epsilon(0.01));
  const double nmin = min_molecules_bulk(sp, env, coil, 2);
  CHECK(snr_bulk(sp, env, coil, nmin, 2) == doctest::Approx(1.0));
  CHECK(nmin > 1e16 / 3.0);
  CHECK(nmin < 1e16 * 3.0);
  // independent of the coil resistance
  const auto coil2 = CoilCircuit::from_circuit(50.0, 1e3, omega, 1.0, 10.0, 1.0);
  CHECK(min_molecules_bulk(sp, env, coil2, 2) == doctest::Approx(nmin).epsilon(1e-12));
}

TEST_CASE("ensemble S/N and blocks") {
  RegisterGeometry g;
  CHECK(g.molecule_volume_cm3() == doctest::Approx(1e-9));
  const double n = snr_ensemble_min_molecules(g, 1e6);
  CHECK(n == doctest::Approx(1e5));
  g.blocks_n = 1;
  g.blocks_p = 1;
  g.molecules_per_block = static_cast<long long>(n);
  CHECK(snr_ensemble(phosphorus31(), Environment{}, g, 1e6) == doctest::Approx(1.0));
  const auto b = solve_blocks(1e5, 100, 20.0, 50.0, 1000);
  CHECK(b.n == 16);
  CHECK(b.p == 63);
  CHECK(b.side_x_um == doctest::Approx(b.side_y_um).epsilon(0.05));
  // the coil path reproduces the folded constant at its noise temperature
  const auto sp = phosphorus31();
  Environment env;
  const double t_noise = folded_constant_temperature(sp, transition_frequencies(sp, env).omega_a_plus);
  CHECK(t_noise == doctest::Approx(8.7e-3).epsilon(0.05));
  env.temp_lattice = t_noise;
  CHECK(snr_ensemble_from_coil(sp, env, g, 1e6) == doctest::Approx(snr_ensemble(sp, env, g, 1e6)).epsilon(1e-9));
}

TEST_CASE("rectangle flux of a single dipole matches direct quadrature") {
  const double y1 = -0.7, y2 = 1.3, z1 = -0.4, z2 = 0.9;
  for (double u : {0.05, 0.3, 1.0, 4.0}) {
    auto inner = [&](double v) {
      auto k = [&](double w) {
        const double r2 = u * u + v * v + w * w;
        return (2.0 * u * u - v * v - w * w) / (r2 * r2 * std::sqrt(r2));
      };
      return gauss_kronrod<double, 61>::integrate(k, z1, z2, 12, 1e-13);
    };
    const double ref = gauss_kronrod<double, 61>::integrate(inner, y1, y2, 12, 1e-13);
    CHECK(dipole_rect_flux(u, y1, y2, z1, z2) == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("discrete signal tends to the bulk value for a thin plate") {
  const auto sp = phosphorus31();
  RegisterGeometry g;
  g.blocks_n = 4;
  g.blocks_p = 4;
  g.molecules_per_block = 4;
  g.qubits_per_molecule = 16;
  const double x = g.blocks_n * g.qubits_per_molecule * g.pitch_x * 1e-7;
  const double d = g.blocks_p * g.molecules_per_block * g.pitch_y * 1e-7;
  CoilCircuit coil;
  coil.resonance_omega = 1e8;
  g.plate_thickness = x * 1e-4;
  const double ratio = discrete_signal(g, sp, coil, x, d) / bulk_signal(g, sp, coil, x);
  CHECK(ratio == doctest::Approx(1.0).epsilon(0.02));
  g.plate_thickness = x * 10.0;
  CHECK(discrete_signal(g, sp, coil, x, d) / bulk_signal(g, sp, coil, x) < 0.9);
}

TEST_CASE("discrete to continuum ratio is unchanged under lattice refinement at fixed aspect") {
  const auto sp = phosphorus31();
  CoilCircuit coil;
  coil.resonance_omega = 1e8;
  auto ratio = [&](long long scale) {
    RegisterGeometry g;
    g.blocks_n = 4 * scale;
    g.blocks_p = 4 * scale;
    g.molecules_per_block = 8;
    g.qubits_per_molecule = 16;
    g.pitch_x = 20.0 / static_cast<double>(scale);
    g.pitch_y = 50.0 / static_cast<double>(scale);
    const double x = g.blocks_n * g.qubits_per_molecule * g.pitch_x * 1e-7;
    const double d = g.blocks_p * g.molecules_per_block * g.pitch_y * 1e-7;
    g.plate_thickness = x / 20.0;
    return discrete_signal(g, sp, coil, x, d) / continuum_signal(g, sp, coil, x, d);
  };
  CHECK(ratio(2) == doctest::Approx(ratio(1)).epsilon(0.02));
}

TEST_CASE("continuum factor domain") {
  CHECK_THROWS_AS(continuum_factor(0.032, 0.0315, 0.1), DomainError);
  const double f = continuum_factor(1.0, 0.5, 0.01);
  CHECK(f == doctest::Approx(1.0 / (pi * 0.5) * std::log(1.0 / (0.01 * std::sqrt(std::exp(1.0))))));
  RegisterGeometry g;
  g.plate_thickness = 0.1;
  CHECK_THROWS_AS(continuum_signal(g, phosphorus31(), CoilCircuit{}, 0.5, 0.5), DomainError);
}
