// test_serialization.cpp
//
// JSON round-trips for distribution specs and complex values, the
// 15-significant-digit determinism contract, and RFC 4180 CSV quoting.

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "renmom/serialization.hpp"

using renmom::complex;
using renmom::DistributionKind;
using renmom::DistributionSpec;
using renmom::ordered_json;

namespace {

std::vector<DistributionSpec> all_kinds() {
    return {
        renmom::make_cauchy(),
        renmom::make_levy(),
        renmom::make_q_exponential(2.5, 1.75),
        renmom::make_q_gaussian(2.2, 0.7),
        renmom::make_normal(),
        renmom::make_student_t(3.5),
        renmom::make_laplace(1.5, 0.8),
    };
}

}  // namespace

TEST_CASE("spec round-trips through JSON", "[serialization]") {
    for (const auto& spec : all_kinds()) {
        const ordered_json j = renmom::spec_to_json(spec);
        const DistributionSpec back = renmom::spec_from_json(j);
        CHECK(back.kind == spec.kind);
        CHECK(back.lambda == spec.lambda);
        CHECK(back.q == spec.q);
        CHECK(back.beta == spec.beta);
        CHECK(back.mu == spec.mu);
        CHECK(back.nu == spec.nu);
        // Serializing the round-tripped spec reproduces the bytes.
        CHECK(renmom::spec_to_json(back).dump() == j.dump());
    }
}

TEST_CASE("spec JSON carries only the relevant parameters", "[serialization]") {
    CHECK(renmom::spec_to_json(renmom::make_cauchy()).dump() == R"({"kind":"cauchy"})");
    CHECK(renmom::spec_to_json(renmom::make_levy()).dump() == R"({"kind":"levy"})");
    CHECK(renmom::spec_to_json(renmom::make_normal()).dump() == R"({"kind":"normal"})");
    CHECK(renmom::spec_to_json(renmom::make_q_exponential(1.0, 1.25)).dump() ==
          R"({"kind":"q-exponential","lambda":1.0,"q":1.25})");
    CHECK(renmom::spec_to_json(renmom::make_q_gaussian(1.2, 1.0)).dump() ==
          R"({"kind":"q-gaussian","q":1.2,"beta":1.0})");
    CHECK(renmom::spec_to_json(renmom::make_student_t(5.0)).dump() ==
          R"({"kind":"student-t","nu":5.0})");
    CHECK(renmom::spec_to_json(renmom::make_laplace(2.0, 1.3)).dump() ==
          R"({"kind":"laplace","lambda":2.0,"mu":1.3})");
}

TEST_CASE("spec parsing accepts aliases and rejects junk", "[serialization]") {
    CHECK(renmom::spec_from_json(ordered_json{{"kind", "qexp"}, {"lambda", 1.0}, {"q", 1.5}})
              .kind == DistributionKind::q_exponential);
    CHECK(renmom::spec_from_json(ordered_json{{"kind", "qgauss"}, {"q", 2.0}, {"beta", 1.0}})
              .kind == DistributionKind::q_gaussian);
    CHECK(renmom::spec_from_json(ordered_json{{"kind", "gaussian"}}).kind ==
          DistributionKind::normal);
    CHECK(renmom::spec_from_json(ordered_json{{"kind", "student"}, {"nu", 2.0}}).kind ==
          DistributionKind::student_t);
    // Laplace mu defaults to 0 when omitted.
    CHECK(renmom::spec_from_json(ordered_json{{"kind", "laplace"}, {"lambda", 1.0}}).mu == 0.0);

    CHECK_THROWS_AS(renmom::spec_from_json(ordered_json{{"kind", "pareto"}}),
                    renmom::invalid_parameter);
    CHECK_THROWS_AS(renmom::spec_from_json(ordered_json{{"lambda", 1.0}}),
                    renmom::invalid_parameter);
    CHECK_THROWS_AS(renmom::spec_from_json(ordered_json{{"kind", "q-exponential"}, {"q", 1.5}}),
                    renmom::invalid_parameter);  // missing lambda
    // Parameters outside the validated domain are rejected on parse.
    CHECK_THROWS_AS(
        renmom::spec_from_json(ordered_json{{"kind", "q-exponential"}, {"lambda", 1.0}, {"q", 2.5}}),
        renmom::invalid_parameter);
    CHECK_THROWS_AS(
        renmom::spec_from_json(ordered_json{{"kind", "student-t"}, {"nu", -1.0}}),
        renmom::invalid_parameter);
}

TEST_CASE("complex values serialize as re/im pairs", "[serialization]") {
    const complex z{-0.25, 3.0};
    const ordered_json j = renmom::json_complex(z);
    CHECK(j.dump() == R"({"re":-0.25,"im":3.0})");
    CHECK(renmom::complex_from_json(j) == z);
    CHECK_THROWS_AS(renmom::complex_from_json(ordered_json{{"re", 1.0}}),
                    renmom::invalid_parameter);
    CHECK_THROWS_AS(renmom::complex_from_json(ordered_json(3.5)), renmom::invalid_parameter);
}

TEST_CASE("round15 pins floats to 15 significant digits", "[serialization]") {
    CHECK(renmom::round15(1.0) == 1.0);
    CHECK(renmom::round15(0.1) == 0.1);
    // 16th-digit noise is squashed: these two inputs map to the same double.
    CHECK(renmom::round15(0.12345678901234567) == renmom::round15(0.12345678901234561));
    // ...but genuine 15-digit differences survive.
    CHECK(renmom::round15(0.123456789012345) != renmom::round15(0.123456789012346));
    CHECK(renmom::format15(-1.0) == "-1");
    CHECK(renmom::format15(0.5) == "0.5");
    CHECK(renmom::format15(renmom::pi) == "3.14159265358979");
    // Idempotence: rounding a rounded value changes nothing.
    for (double x : {renmom::pi, renmom::euler_gamma, 1e-17, -3.75e22}) {
        CHECK(renmom::round15(renmom::round15(x)) == renmom::round15(x));
    }
}

TEST_CASE("CSV cells follow RFC 4180", "[serialization]") {
    CHECK(renmom::csv_escape("plain") == "plain");
    CHECK(renmom::csv_escape("with,comma") == "\"with,comma\"");
    CHECK(renmom::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(renmom::csv_escape("two\nlines") == "\"two\nlines\"");
    CHECK(renmom::csv_row({"a", "b,c", "d"}) == "a,\"b,c\",d\r\n");
}
