#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cfloat>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "dxhog/io.hpp"
#include "dxhog/rng.hpp"
#include "dxhog/stabilizer.hpp"
#include "dxhog/state.hpp"

using namespace dxhog;

namespace {

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

void write_raw(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string le64(std::uint64_t v) {
  std::string b(8, '\0');
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
  return b;
}

}  // namespace

TEST_CASE("shortest double form round trips bitwise", "[io]") {
  CHECK(format_double_shortest(0.5) == "0.5");
  CHECK(format_double_shortest(1.0) == "1");
  CHECK(format_double_shortest(-1.25) == "-1.25");
  CHECK(format_double_shortest(0.1) == "0.1");
  CHECK(format_double_shortest(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_double_shortest(0.0) == "0");
  CHECK(format_double_shortest(-0.0) == "-0.0");  // sign survives the json readers
  const double cases[] = {0.0,      -0.0,       1e300,       -1e-300,
                          DBL_MAX,  DBL_MIN,    5e-324,      0.42814314246398417,
                          1.0 / 3,  2.0 / 3,    3.14159e-7,  123456789.123456789};
  for (double v : cases) {
    const std::string s = format_double_shortest(v);
    REQUIRE(same_bits(std::strtod(s.c_str(), nullptr), v));
  }
}

TEST_CASE("ten significant digit form", "[io]") {
  CHECK(format_sig10(0.25) == "0.25");
  CHECK(format_sig10(30.5) == "30.5");
  CHECK(format_sig10(0.42814314246398417) == "0.4281431425");
  CHECK(format_sig10(9.8137084989847604) == "9.813708499");
  CHECK(format_sig10(1e20) == "1e+20");
  CHECK(format_sig10(-0.35992847318260715) == "-0.3599284732");
}

TEST_CASE("circuit json round trip", "[io]") {
  Circuit c;
  c.n = 3;
  c.ops = {Gate::h(0),          Gate::s(1),   Gate::sdg(2), Gate::x(0),
           Gate::z(1),          Gate::cz(0, 2), Gate::cnot(2, 1),
           Gate::u3(1, 0.5, 0.0, 1.0), Gate::zz(0, 1, 0.25)};
  const std::string text = circuit_to_json(c);
  const Circuit back = circuit_from_json(text);
  REQUIRE(back.n == c.n);
  REQUIRE(back.ops.size() == c.ops.size());
  // serializing again reproduces the exact bytes
  REQUIRE(circuit_to_json(back) == text);

  Circuit tiny;
  tiny.n = 2;
  tiny.ops = {Gate::h(0), Gate::zz(0, 1, 0.25), Gate::u3(1, 0.5, 0.0, 1.0)};
  REQUIRE(circuit_to_json(tiny) ==
          "{\"n\":2,\"ops\":["
          "{\"kind\":\"h\",\"targets\":[0]},"
          "{\"kind\":\"zz\",\"targets\":[0,1],\"angles\":[0.25]},"
          "{\"kind\":\"u3\",\"targets\":[1],\"angles\":[0.5,0,1]}]}");

  // angles omitted entirely for angle-free gates
  REQUIRE(circuit_to_json({1, {Gate::h(0)}}).find("angles") == std::string::npos);
}

TEST_CASE("circuit json rejects malformed input", "[io]") {
  CHECK_THROWS_AS(circuit_from_json("{\"n\":0,\"ops\":[]}"), std::invalid_argument);
  CHECK_THROWS_AS(
      circuit_from_json("{\"n\":2,\"ops\":[{\"kind\":\"frobnicate\",\"targets\":[0]}]}"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      circuit_from_json("{\"n\":2,\"ops\":[{\"kind\":\"cz\",\"targets\":[0]}]}"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      circuit_from_json("{\"n\":2,\"ops\":[{\"kind\":\"h\",\"targets\":[2]}]}"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      circuit_from_json(
          "{\"n\":2,\"ops\":[{\"kind\":\"u3\",\"targets\":[0],\"angles\":[0.5]}]}"),
      std::invalid_argument);
  CHECK_THROWS(circuit_from_json("{\"n\":2"));  // parse error from the json layer
}

TEST_CASE("template json round trip", "[io]") {
  RandomStream rng(601);
  for (int rep = 0; rep < 25; ++rep) {
    const MeasurementTemplate tpl =
        to_measurement_template(sample_stabilizer_preparation(6, rng));
    const std::string text = template_to_json(tpl);
    const MeasurementTemplate back = template_from_json(text);
    REQUIRE(back.n == tpl.n);
    REQUIRE(back.T == tpl.T);
    REQUIRE(back.x_mask == tpl.x_mask);
    REQUIRE(back.s_mask == tpl.s_mask);
    REQUIRE(back.cz_edges == tpl.cz_edges);
    REQUIRE(back.final_h == tpl.final_h);
    REQUIRE(template_to_json(back) == text);
  }

  MeasurementTemplate tiny;
  tiny.n = 3;
  tiny.T = {0, 2};
  tiny.x_mask = 0b010;
  tiny.s_mask = 0b100;
  tiny.cz_edges = {{0, 2}};
  tiny.final_h = 0b010;
  REQUIRE(template_to_json(tiny) ==
          "{\"n\":3,\"pivots\":[0,2],\"x_mask\":[1],\"s_mask\":[2],"
          "\"cz_edges\":[[0,2]],\"final_h\":[1]}");
}

TEST_CASE("template json rejects malformed input", "[io]") {
  const char* base =
      "{\"n\":3,\"pivots\":[0,2],\"x_mask\":[],\"s_mask\":[],"
      "\"cz_edges\":[],\"final_h\":[1]}";
  CHECK_NOTHROW(template_from_json(base));
  CHECK_THROWS_AS(template_from_json("{\"n\":0,\"pivots\":[],\"x_mask\":[],"
                                     "\"s_mask\":[],\"cz_edges\":[],\"final_h\":[]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(template_from_json("{\"n\":3,\"pivots\":[3],\"x_mask\":[],"
                                     "\"s_mask\":[],\"cz_edges\":[],\"final_h\":[]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(template_from_json("{\"n\":3,\"pivots\":[],\"x_mask\":[9],"
                                     "\"s_mask\":[],\"cz_edges\":[],\"final_h\":[]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(template_from_json("{\"n\":3,\"pivots\":[],\"x_mask\":[],"
                                     "\"s_mask\":[],\"cz_edges\":[[1,1]],\"final_h\":[]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(template_from_json("{\"n\":3,\"pivots\":[],\"x_mask\":[],"
                                     "\"s_mask\":[],\"cz_edges\":[[1]],\"final_h\":[]}"),
                  std::invalid_argument);
}

TEST_CASE("statevector files round trip bitwise", "[io]") {
  const std::string path = "/tmp/dxhog_io_sv.bin";
  RandomStream rng(602);
  StateVector sv = sample_gaussian_state(5, rng);  // deliberately unnormalized
  sv.amps[3] = cplx(-0.0, 5e-324);                 // signed zero and a denormal
  write_statevector(path, sv);
  const StateVector back = read_statevector(path);
  REQUIRE(back.n == sv.n);
  REQUIRE(back.amps.size() == sv.amps.size());
  for (std::size_t i = 0; i < sv.amps.size(); ++i) {
    REQUIRE(same_bits(back.amps[i].real(), sv.amps[i].real()));
    REQUIRE(same_bits(back.amps[i].imag(), sv.amps[i].imag()));
  }
  std::remove(path.c_str());
}

TEST_CASE("statevector files reject corruption", "[io]") {
  const std::string path = "/tmp/dxhog_io_sv_bad.bin";
  CHECK_THROWS_AS(read_statevector("/tmp/dxhog_does_not_exist.bin"), std::runtime_error);

  write_raw(path, le64(31));
  CHECK_THROWS_AS(read_statevector(path), std::runtime_error);
  write_raw(path, le64(0));
  CHECK_THROWS_AS(read_statevector(path), std::runtime_error);

  // header says two qubits but only one amplitude follows
  write_raw(path, le64(2) + le64(0x3ff0000000000000ull) + le64(0));
  CHECK_THROWS_AS(read_statevector(path), std::runtime_error);

  StateVector sv = zero_state(1);
  write_statevector(path, sv);
  std::ofstream(path, std::ios::binary | std::ios::app) << 'x';
  CHECK_THROWS_AS(read_statevector(path), std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("trial record lines", "[io]") {
  TrialRecord rec;
  rec.id = 3;
  rec.n = 4;
  rec.mode = "ideal";
  rec.z = 6;  // bits: q1 and q2 set, so the LSB-first string is 0110
  rec.score = 0.5;
  rec.state_seed = 1;
  rec.meas_seed = 2;
  rec.noise_seed = 3;
  REQUIRE(trial_record_line(rec) ==
          "{\"id\":3,\"n\":4,\"mode\":\"ideal\",\"z\":\"0110\",\"score\":0.5,"
          "\"state_seed\":1,\"meas_seed\":2,\"noise_seed\":3}");

  rec.mode = "he said \"hi\"\n";
  rec.score = -0.42814314246398417;
  rec.state_seed = 18446744073709551615ull;  // above the signed 64-bit range
  const std::string line = trial_record_line(rec);
  const TrialRecord back = trial_record_from_line(line);
  REQUIRE(back.id == rec.id);
  REQUIRE(back.n == rec.n);
  REQUIRE(back.mode == rec.mode);
  REQUIRE(back.z == rec.z);
  REQUIRE(same_bits(back.score, rec.score));
  REQUIRE(back.state_seed == rec.state_seed);
  REQUIRE(back.meas_seed == rec.meas_seed);
  REQUIRE(back.noise_seed == rec.noise_seed);
  REQUIRE(trial_record_line(back) == line);

  // readers accept any field order; "01" sets qubit 1, the second character
  const TrialRecord reordered = trial_record_from_line(
      "{\"score\":0.5,\"z\":\"01\",\"mode\":\"ideal\",\"n\":2,\"id\":9,"
      "\"noise_seed\":3,\"meas_seed\":2,\"state_seed\":1}");
  REQUIRE(reordered.id == 9);
  REQUIRE(reordered.z == 2);
}

TEST_CASE("trial record lines reject malformed input", "[io]") {
  const char* good =
      "{\"id\":1,\"n\":2,\"mode\":\"ideal\",\"z\":\"01\",\"score\":0,"
      "\"state_seed\":1,\"meas_seed\":2,\"noise_seed\":3}";
  CHECK_NOTHROW(trial_record_from_line(good));
  CHECK_THROWS_AS(trial_record_from_line(
                      "{\"id\":1,\"n\":2,\"mode\":\"ideal\",\"z\":\"011\",\"score\":0,"
                      "\"state_seed\":1,\"meas_seed\":2,\"noise_seed\":3}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(trial_record_from_line(
                      "{\"id\":1,\"n\":2,\"mode\":\"ideal\",\"z\":\"0x\",\"score\":0,"
                      "\"state_seed\":1,\"meas_seed\":2,\"noise_seed\":3}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(trial_record_from_line(
                      "{\"id\":1,\"n\":0,\"mode\":\"ideal\",\"z\":\"\",\"score\":0,"
                      "\"state_seed\":1,\"meas_seed\":2,\"noise_seed\":3}"),
                  std::invalid_argument);
  CHECK_THROWS(trial_record_from_line("{\"id\":1"));
}

TEST_CASE("summary json", "[io]") {
  XebSummary s;
  s.k = 3;
  s.mean = 0.25;
  s.stderr_ = 0.125;
  REQUIRE(summary_to_json(s) == "{\"k\":3,\"mean\":0.25,\"stderr\":0.125}");
}

TEST_CASE("params files round trip", "[io]") {
  AnsatzParamsFile p;
  p.n = 4;
  p.depth = 6;
  p.params = {0.5, -0.25, 1.0 / 3.0, 0.0, -0.0, 2e-300};
  p.predicted_fidelity = 0.4567;
  p.overlap = 0.5;
  p.noise_factor = 0.9134;
  p.seed = 18446744073709551615ull;
  const std::string text = params_to_json(p);
  const AnsatzParamsFile back = params_from_json(text);
  REQUIRE(back.n == p.n);
  REQUIRE(back.depth == p.depth);
  REQUIRE(back.params.size() == p.params.size());
  for (std::size_t i = 0; i < p.params.size(); ++i) {
    REQUIRE(same_bits(back.params[i], p.params[i]));
  }
  REQUIRE(same_bits(back.predicted_fidelity, p.predicted_fidelity));
  REQUIRE(back.seed == p.seed);
  REQUIRE(params_to_json(back) == text);

  const std::string path = "/tmp/dxhog_io_params.json";
  write_text_file(path, text);
  const AnsatzParamsFile from_file = params_from_json_file(path);
  REQUIRE(params_to_json(from_file) == text);
  std::remove(path.c_str());

  AnsatzParamsFile tiny;
  tiny.n = 2;
  tiny.depth = 1;
  tiny.params = {0.5};
  tiny.predicted_fidelity = 1.0;
  tiny.overlap = 1.0;
  tiny.noise_factor = 1.0;
  tiny.seed = 7;
  REQUIRE(params_to_json(tiny) ==
          "{\"n\":2,\"depth\":1,\"params\":[0.5],\"predicted_fidelity\":1,"
          "\"overlap\":1,\"noise_factor\":1,\"seed\":7}");
}

TEST_CASE("config parsing", "[io]") {
  const Config full =
      config_from_json("{\"c_slope\":1e-3,\"c_offset\":2e-4,\"eps_mem\":1e-5}");
  CHECK(full.noise.c_slope == 1e-3);
  CHECK(full.noise.c_offset == 2e-4);
  CHECK(full.noise.eps_mem == 1e-5);

  // omitted keys keep the hardware-model defaults
  const Config partial = config_from_json("{\"c_slope\":0.002}");
  CHECK(partial.noise.c_slope == 0.002);
  CHECK(partial.noise.c_offset == 2.7e-4);
  CHECK(partial.noise.eps_mem == 8e-5);

  const Config empty = config_from_json("{}");
  CHECK(empty.noise.c_slope == 14.8e-4);

  const Config extra = config_from_json("{\"c_slope\":0.001,\"flux\":9}");
  CHECK(extra.noise.c_slope == 0.001);

  CHECK_THROWS_AS(config_from_json("{\"c_slope\":-0.1}"), std::invalid_argument);
  CHECK_THROWS(config_from_json("not json"));
  CHECK_THROWS_AS(config_from_json_file("/tmp/dxhog_no_such_config.json"),
                  std::runtime_error);
}

TEST_CASE("text files round trip", "[io]") {
  const std::string path = "/tmp/dxhog_io_text.txt";
  const std::string body = "line one\nline two\r\n\ttab\n";
  write_text_file(path, body);
  REQUIRE(read_text_file(path) == body);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file(path), std::runtime_error);
}
