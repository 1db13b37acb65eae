// Copyright 2026 The rotcool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "rotcool/config.hpp"
#include "rotcool/error.hpp"

using namespace rotcool;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config(text, "t.ini");
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_text(const std::string& text) {
  try {
    parse_config(text, "t.ini");
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults round trip") {
  const RunConfig def;
  CHECK_NOTHROW(def.validate());
  CHECK(parse_config(format_config(def)) == def);
  CHECK(parse_config("") == def);
}

TEST_CASE("full configuration") {
  const std::string text =
      "# six levels\n"
      "[run]\n"
      "scheme = scrap   # trailing comment\n"
      "cycles = 2\n"
      "output = out/six\n"
      "[system]\n"
      "j_max = 5\n"
      "n_max = 6\n"
      "gamma = 0.02\n"
      "chain = 5:4, 4:3, 3:2, 2:1, 1:0\n"
      "[pulses]\n"
      "omega0 = 7.5\n"
      "T = 800\n"
      "tau = 320\n"
      "tau_tilde = 5000\n"
      "delta_p = 100\n"
      "delta_s = 97\n"
      "[integrator]\n"
      "rel_tol = 1e-9\n"
      "sample_interval = 10\n"
      "hermitize = false\n"
      "[initial]\n"
      "state = diagonal\n"
      "populations = 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.03125\n";
  const RunConfig c = parse_config(text);
  CHECK(c.scheme == Scheme::scrap);
  CHECK(c.cycles == 2);
  CHECK(c.output == "out/six");
  CHECK(c.system.j_max == 5);
  CHECK(c.system.gamma_j == 0.02);
  CHECK(c.system.gamma_u == 0.02);
  CHECK(c.system.chain.size() == 5);
  CHECK(c.system.chain[2] == ChainStep{3, 2});
  CHECK(c.pulses.omega0_p == 7.5);
  CHECK(c.pulses.omega0_s == 7.5);
  CHECK(c.pulses.tau_tilde == 5000.0);
  CHECK(c.pulses.delta_s == 97.0);
  CHECK(c.integrator.rel_tol == 1e-9);
  CHECK(c.integrator.sample_interval == 10.0);
  CHECK_FALSE(c.integrator.hermitize_every_step);
  CHECK(c.initial.kind == InitialState::Kind::diagonal);
  CHECK(c.initial.populations.size() == 6);
  CHECK(parse_config(format_config(c)) == c);
  CHECK(format_config(parse_config(format_config(c))) == format_config(c));
}

TEST_CASE("random configurations round trip") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    RunConfig c;
    c.scheme = k % 3 == 0 ? Scheme::carp : (k % 3 == 1 ? Scheme::stirap : Scheme::scrap);
    c.system.j_max = 1 + k % 4;
    c.system.n_max = 1 + k % 5;
    c.system.eta = 0.3 * u(rng);
    c.system.gamma_j = u(rng) / 7.0;
    c.system.gamma_u = u(rng) / 3.0;
    c.system.beta_b = 0.01 + u(rng);
    c.pulses.omega0_p = 10 * u(rng);
    c.pulses.omega0_s = 10 * u(rng);
    c.pulses.width = 1 + 1000 * u(rng);
    c.pulses.tau = c.scheme == Scheme::carp ? 0.0 : 1 + 500 * u(rng);
    if (k % 2) c.pulses.tau_tilde = 7 * c.pulses.width;
    c.pulses.delta_p = 200 * u(rng) - 100;
    if (k % 5 == 0) c.pulses.delta_s = 1.0 / 3.0;
    c.pulses.alpha = c.scheme == Scheme::carp ? 1e-4 * u(rng) : 0.0;
    c.integrator.rel_tol = 1e-6 * u(rng) + 1e-12;
    c.initial.kind = InitialState::Kind::lambda_mixture;
    c.initial.p_ground = 0.25;
    c.initial.p_excited = 0.75;
    c.cycles = 1 + k % 3;
    REQUIRE_NOTHROW(c.validate());
    CHECK(parse_config(format_config(c)) == c);
  }
}

TEST_CASE("format_number is shortest and exact") {
  CHECK(format_number(5.0) == "5");
  CHECK(format_number(4.69e-5) == "4.69e-05");
  CHECK(format_number(0.1) == "0.1");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(format_number(third)) == third);
}

TEST_CASE("aliases") {
  RunConfig c;
  set_field(c, "pulses.omega0", "3");
  CHECK(c.pulses.omega0_p == 3.0);
  CHECK(c.pulses.omega0_s == 3.0);
  set_field(c, "pulses.delta_s", "90");
  set_field(c, "pulses.delta", "120");
  CHECK(c.pulses.delta_p == 120.0);
  CHECK_FALSE(c.pulses.delta_s.has_value());
  set_field(c, "system.gamma", "0.05");
  CHECK(c.system.gamma_j == 0.05);
  CHECK(c.system.gamma_u == 0.05);
  set_field(c, "pulses.tau_tilde", "auto");
  CHECK_FALSE(c.pulses.tau_tilde.has_value());
  set_field(c, "run.cycles", "2.0");
  CHECK(c.cycles == 2);

  CHECK(is_numeric_field("pulses.alpha"));
  CHECK(is_numeric_field("system.j_max"));
  CHECK_FALSE(is_numeric_field("run.scheme"));
  CHECK_FALSE(is_numeric_field("pulses.nope"));
  CHECK_THROWS_AS(set_field(c, "pulses.nope", "1"), ValidationError);
  CHECK_THROWS_AS(set_field(c, "run.cycles", "1.5"), ValidationError);
  CHECK_THROWS_AS(set_field(c, "system.eta", "abc"), ValidationError);
  CHECK_THROWS_AS(set_field(c, "system.eta", "nan"), ValidationError);
  CHECK_THROWS_AS(set_field(c, "run.scheme", "rap"), ValidationError);
}

TEST_CASE("errors carry the line") {
  CHECK(error_line("[pulses]\nT = 800\nT = 700\n") == 3);
  CHECK(error_line("[system]\neta = 0.1\n\n[system]\n") == 4);
  CHECK(error_line("eta = 0.1\n") == 1);
  CHECK(error_line("[system]\nbogus = 1\n") == 2);
  CHECK(error_line("[bogus]\nx = 1\n") == 1);
  CHECK(error_line("[pulses\n") == 1);
  CHECK(error_line("[pulses]\njust words\n") == 2);
  CHECK(error_line("[run]\n\n[pulses]\n# c\nT = -800\n") == 5);
  CHECK(error_line("[system]\nj_max = 2.5\n") == 2);
  CHECK(error_line("[initial]\nstate = lambda_mixture\np_ground = 0.5\np_excited = 0.7\n") == 1);
  CHECK(error_line("[run]\nscheme = stirap\n[pulses]\ntau = 0\n") == 3);
  CHECK(error_line("[run]\nscheme = carp\n") == -1);
  CHECK(error_text("[pulses]\nT = -800\n").starts_with("t.ini:2: "));
  CHECK(error_text("[pulses]\nT = -800\n").find("pulses.T") != std::string::npos);
}

TEST_CASE("file loading and initial states") {
  CHECK_THROWS_AS(load_config("/nonexistent/rotcool.ini"), ValidationError);

  RunConfig c;
  c.system.j_max = 1;
  c.initial.kind = InitialState::Kind::lambda_mixture;
  const BasisIndex b = build_basis(c.system);
  const auto rho = build_initial_state(c, b);
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(rho.matrix(0, 0).real() == 0.3);

  c.initial.kind = InitialState::Kind::diagonal;
  c.initial.populations = {0.1, 0.9};
  CHECK(build_initial_state(c, b).matrix(b.index(InternalLabel::rotational(1), 0), b.index(InternalLabel::rotational(1), 0)).real() == 0.9);
  c.initial.populations = {0.1, 0.8};
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

}
