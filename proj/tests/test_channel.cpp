#include "oracles.hpp"

#include "satrep/channel.hpp"
#include "satrep/errors.hpp"

#include <doctest.h>

#include <numbers>

using namespace satrep;
using doctest::Approx;

TEST_SUITE("channel") {
  TEST_CASE("beam waist") {
    const ChannelParams p;
    CHECK(beam_waist(p, 0.0) == Approx(p.beam_waist_m).epsilon(1e-15));
    CHECK(beam_waist(p, 1.5e6) == Approx(14.8969236509017).epsilon(1e-12));
    CHECK(beam_waist(p, 3.0e6) / beam_waist(p, 1.5e6) == Approx(2.0).epsilon(1e-3));
  }

  TEST_CASE("diffraction") {
    ChannelParams p;
    CHECK(diffraction_eff(p, 1.5e6) == Approx(2.25054479697180e-3).epsilon(1e-11));
    CHECK(diffraction_eff(p, 0.0) == Approx(1.0));
    p.receiver_radius_m = 1e4;
    CHECK(diffraction_eff(p, 1.5e6) == Approx(1.0));
    CHECK_THROWS_AS(diffraction_eff(p, -1.0), DomainError);
  }

  TEST_CASE("atmosphere") {
    const ChannelParams p;
    const double deg = std::numbers::pi / 180.0;
    CHECK(atmospheric_eff(p, 0.0) == Approx(0.79).epsilon(1e-15));
    CHECK(atmospheric_eff(p, 60.0 * deg) == Approx(0.6241).epsilon(1e-12));
    CHECK(atmospheric_eff(p, 80.0 * deg) == Approx(0.257310740748393).epsilon(1e-12));
    CHECK_THROWS_AS(atmospheric_eff(p, std::numbers::pi / 2), DomainError);
    CHECK_THROWS_AS(atmospheric_eff(p, -0.1), DomainError);
  }

  TEST_CASE("pointing") {
    ChannelParams p;
    CHECK(pointing_eff(p) == Approx(0.999366720458982).epsilon(1e-13));
    const double divergence = 4.0 * p.wavelength_m / (std::numbers::pi * p.beam_waist_m);
    CHECK(divergence == Approx(3.97250737957371e-5).epsilon(1e-13));
    p.pointing_sigma_rad = 0.0;
    CHECK(pointing_eff(p) == 1.0);
    p.pointing_sigma_rad = divergence / 2.0;
    CHECK(pointing_eff(p) == Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("transmission") {
    const ChannelParams p;
    const double eta = single_photon_transmission(p, 1.5e6, 0.0);
    CHECK(eta == Approx(4.44201115666658e-4).epsilon(1e-11));
    CHECK(eta == Approx(oracle::Budget{}.eta(1.5e6, 0.0)).epsilon(1e-13));
    CHECK(two_photon_transmission(p, 1.5e6, 0.0, 1.5e6, 0.0) == Approx(1.97314631159503e-7).epsilon(1e-11));
    CHECK(two_photon_transmission(p, 1.5e6, 0.3, 1.5e6, 0.3) == Approx(std::pow(single_photon_transmission(p, 1.5e6, 0.3), 2)).epsilon(1e-15));

    ChannelParams ideal;
    ideal.receiver_radius_m = 1e6;
    ideal.zenith_transmittance = 1.0;
    ideal.pointing_sigma_rad = 0.0;
    ideal.coupling_efficiency = 1.0;
    CHECK(single_photon_transmission(ideal, 1e5, 0.0) == Approx(1.0));

    ChannelParams blind;
    blind.coupling_efficiency = 0.0;
    CHECK(single_photon_transmission(blind, 1e5, 0.0) == 0.0);
    CHECK(two_photon_transmission(blind, 1e5, 0.0, 1e5, 0.0) == 0.0);

    const Eigen::ArrayXd d = Eigen::ArrayXd::LinSpaced(5, 1.5e6, 3.5e6);
    const Eigen::ArrayXd th = Eigen::ArrayXd::LinSpaced(5, 0.0, 1.3);
    const Eigen::ArrayXd e = single_photon_transmission(p, d, th);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      CHECK(e[i] == Approx(single_photon_transmission(p, d[i], th[i])).epsilon(1e-15));
      CHECK(e[i] >= 0.0);
      CHECK(e[i] <= 1.0);
    }
  }

  TEST_CASE("background photons") {
    ChannelParams p;
    p.field_of_view_sr = 1e-4;
    CHECK(mean_background_photons(p) == Approx(4.62592951057775e-3).epsilon(1e-12));
    p.field_of_view_sr = cone_solid_angle(100e-6);
    CHECK(p.field_of_view_sr == Approx(7.85398163233824e-9).epsilon(1e-12));
    CHECK(mean_background_photons(p) == Approx(3.63319654085691e-7).epsilon(1e-11));
    CHECK(ChannelParams{}.field_of_view_sr == Approx(p.field_of_view_sr).epsilon(1e-15));

    const double base = mean_background_photons(p);
    p.receiver_radius_m = 2.0;
    CHECK(mean_background_photons(p) == Approx(4.0 * base).epsilon(1e-14));
    p.receiver_radius_m = 1.0;
    p.aperture = ApertureInterpretation::Radius;
    CHECK(mean_background_photons(p) == Approx(4.0 * base).epsilon(1e-14));
    p.sky_irradiance = 0.0;
    CHECK(mean_background_photons(p) == 0.0);
  }

  TEST_CASE("pair fidelity") {
    CHECK(pair_fidelity(0.998, 0.0, 1e-4) == Approx(0.998).epsilon(1e-15));
    CHECK(pair_fidelity(0.998, 0.01, 1.0) == Approx(0.983261444956377).epsilon(1e-13));
    CHECK(pair_fidelity(0.998, 1.0, 1e-12) == Approx(0.25).epsilon(1e-9));
    CHECK_THROWS_AS(pair_fidelity(0.998, 0.01, 0.0), DomainError);
    CHECK_THROWS_AS(pair_fidelity(1.2, 0.01, 0.5), DomainError);
    CHECK_THROWS_AS(pair_fidelity(0.9, -1.0, 0.5), DomainError);
    for (double f : {0.25, 0.5, 0.9, 1.0}) {
      for (double ratio : {0.0, 0.3, 10.0}) {
        const double v = pair_fidelity(f, ratio, 1.0);
        CHECK(v >= 0.25);
        CHECK(v <= f + 1e-15);
      }
    }
  }

  TEST_CASE("parameter validation") {
    ChannelParams p;
    CHECK_NOTHROW(p.validate());
    p.beam_quality = 0.5;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = ChannelParams{};
    p.zenith_transmittance = 1.5;
    CHECK_THROWS_AS(p.validate(), DomainError);
  }
}
