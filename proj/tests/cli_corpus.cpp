// End-to-end CLI checks: every corpus invocation produces its contracted exit
// code, valid JSON with string rationals (no floating-point tokens anywhere),
// and a few spot-checked values.
#include <cstdlib>
#include <iostream>
#include <string>

#include <nlohmann/json.hpp>

#include "corpus.hpp"

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

bool has_float_tokens(const nlohmann::json& v) {
    if (v.is_number_float()) return true;
    if (v.is_object() || v.is_array())
        for (const auto& child : v)
            if (has_float_tokens(child)) return true;
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: ccg_cli_corpus <path-to-ccg-binary>\n";
        return 2;
    }
    std::string cli = argv[1];
    std::string dir = (std::filesystem::temp_directory_path() / "ccg_corpus").string();
    auto invocations = corpus::materialize(dir);
    expect(invocations.size() >= 20, "corpus has at least 20 invocations");

    for (const auto& inv : invocations) {
        corpus::RunResult r = corpus::run_command(cli + " " + inv.args);
        expect(r.exit_code == inv.expected_exit,
               inv.name + ": exit " + std::to_string(r.exit_code) + " != expected " +
                   std::to_string(inv.expected_exit));
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(r.out);
        } catch (const std::exception& e) {
            expect(false, inv.name + ": stdout is not a single JSON object");
            continue;
        }
        expect(!has_float_tokens(j), inv.name + ": output contains a floating-point token");

        if (inv.name == "norm_unit") expect(j.at("norm") == "3", "norm_unit value");
        if (inv.name == "norm_z2_default") expect(j.at("norm") == "7", "norm_z2 value");
        if (inv.name == "norm_two_gens") expect(j.at("norm") == "3", "norm_two_gens value");
        if (inv.name == "norm_rationals") expect(j.at("norm") == "4", "norm_rationals value");
        if (inv.name == "norm_exceeds") expect(j.value("exceeds_cap", false), "exceeds_cap flag");
        if (inv.name == "dist_z") expect(j.at("distance") == "7", "dist value");
        if (inv.name == "ball_z") {
            expect(j.at("count") == 5, "ball count");
            expect(j.at("elements") == nlohmann::json({"0", "-1", "1", "-2", "2"}), "ball order");
        }
        if (inv.name == "ball_heis") expect(j.at("count") == 17, "heisenberg ball count");
        if (inv.name == "profile") {
            for (const auto& row : j.at("rows"))
                expect(row.value("rho1_certified", false), "profile row certified");
        }
        if (inv.name == "sandwich_z" || inv.name == "sandwich_subgroup")
            expect(j.at("violations").empty(), inv.name + " has no violations");
        if (inv.name == "cover_verify_ok") expect(j.at("clean") == true, "C5 verifies");
        if (inv.name == "cover_verify_bad")
            expect(!j.at("disjointness_violations").empty(), "BAD cover is flagged");
        if (inv.name == "cover_extend") {
            expect(j.at("input_report").at("clean") == true, "extension input clean");
            expect(j.at("output_report").at("clean") == true, "extension output clean");
            expect(j.at("representatives").size() == 5, "five coset representatives");
        }
        if (inv.name == "solve_ball" || inv.name == "solve_instance") {
            expect(j.at("r_star") == "1", inv.name + " r_star");
            expect(j.at("exact") == true, inv.name + " exact");
        }
        if (inv.name == "snf")
            expect(j.at("diagonal") == nlohmann::json({"2", "4"}), "snf diagonal");
        if (inv.name == "rank") {
            expect(j.at("rank") == 2, "rank value");
            expect(j.at("torsion") == nlohmann::json({2}), "torsion value");
            expect(j.at("asdim") == 2, "asdim value");
        }
        if (inv.name == "hirsch_heis") expect(j.at("hirsch") == 3, "heisenberg hirsch");
        if (inv.name == "bounds_heis")
            expect(j.at("lower") == 3 && j.at("upper") == 3, "heisenberg bounds");
        if (inv.name == "bounds_lamp")
            expect(j.at("lower") == 1 && j.at("upper") == 1, "lamplighter bounds");
        if (inv.name == "hirsch_json") expect(j.at("hirsch") == 1, "lamp hirsch via json");
        if (inv.expected_exit == 2) expect(j.contains("error"), inv.name + " reports an error");
        if (inv.name == "parse_error_weights")
            expect(j.contains("line") && j.contains("column"), "parse error carries position");
    }

    if (failures == 0) {
        std::cout << "cli corpus: all " << invocations.size() << " invocations ok\n";
        return 0;
    }
    std::cerr << failures << " corpus failures\n";
    return 1;
}
