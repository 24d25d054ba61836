#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "finview/deformation.hpp"

using namespace finview;

namespace {

FingerParams default_finger() { return FingerParams{}; }

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

double max_pad_displacement(const FingerParams& p, const DeformationState& st) {
    const DeformationState ref = undeformed_profile(p);
    double best = 0.0;
    for (size_t i = 0; i < st.pad_points.size(); ++i) {
        best = std::max(best, norm(st.pad_points[i] - ref.pad_points[i]));
    }
    return best;
}

}  // namespace

TEST_CASE("synth_deform: zero load is the exact undeformed profile") {
    const FingerParams p = default_finger();
    const DeformationState a = undeformed_profile(p);
    const DeformationState b = synth_deform(p, 0.0);
    REQUIRE(a.back_nodes.size() == b.back_nodes.size());
    REQUIRE(a.pad_points.size() == b.pad_points.size());
    for (size_t i = 0; i < a.back_nodes.size(); ++i) {
        CHECK(a.back_nodes[i].x == b.back_nodes[i].x);
        CHECK(a.back_nodes[i].y == b.back_nodes[i].y);
    }
    for (size_t i = 0; i < a.pad_points.size(); ++i) {
        CHECK(a.pad_points[i].x == b.pad_points[i].x);
        CHECK(a.pad_points[i].y == b.pad_points[i].y);
    }
}

TEST_CASE("synth_deform: 7.5 N with gain 2.0 deflects the tip by 15 mm") {
    const FingerParams p = default_finger();
    const DeformationState st = synth_deform(p, 7.5);
    CHECK(max_pad_displacement(p, st) == doctest::Approx(15.0).epsilon(1e-9));
}

TEST_CASE("synth_deform: displacement is strictly monotone in load") {
    const FingerParams p = default_finger();
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double load = 10.0 * i / 100.0;
        const double d = max_pad_displacement(p, synth_deform(p, load));
        CHECK(d > prev);
        prev = d;
    }
}

TEST_CASE("synth_deform: crossbeam lengths preserved within 2 percent") {
    const FingerParams p = default_finger();
    const DeformationState ref = undeformed_profile(p);
    for (const double load : {1.0, 3.0, 5.5, 7.5}) {
        const DeformationState st = synth_deform(p, load);
        for (int i = 0; i < p.n_back_nodes; ++i) {
            const double frac = static_cast<double>(i) / (p.n_back_nodes - 1);
            const Point2 anchor_ref{p.base_width, frac * p.finger_length};
            const double len_ref = norm(ref.back_nodes[i] - anchor_ref);
            if (len_ref == 0.0) continue;
            const double delta = p.compliance_gain * load *
                                 std::pow(frac, p.curvature_profile_exp);
            const Point2 anchor{p.base_width - delta, frac * p.finger_length};
            const double len = norm(st.back_nodes[i] - anchor);
            CHECK(std::abs(len - len_ref) / len_ref < 0.02);
        }
    }
}

TEST_CASE("synth_deform: pad polyline stays simple up to the rated load") {
    const FingerParams p = default_finger();
    for (const double load : {0.0, 2.0, 5.0, 7.5}) {
        const DeformationState st = synth_deform(p, load);
        for (size_t i = 0; i + 1 < st.pad_points.size(); ++i) {
            for (size_t j = i + 2; j + 1 < st.pad_points.size(); ++j) {
                const Segment2 a{st.pad_points[i], st.pad_points[i + 1]};
                const Segment2 b{st.pad_points[j], st.pad_points[j + 1]};
                CHECK_FALSE(segments_intersect(a, b));
            }
        }
    }
}

TEST_CASE("synth_deform: rejects negative load") {
    CHECK_THROWS_AS(synth_deform(default_finger(), -0.1), std::invalid_argument);
}

TEST_CASE("synth_deform: closed-tip taper keeps the top node on the pad") {
    FingerParams p = default_finger();
    p.tip_taper = 1.0;
    const DeformationState st = synth_deform(p, 5.0);
    const Point2 tip_pad = st.pad_points.back();
    const Point2 tip_back = st.back_nodes.back();
    CHECK(norm(tip_pad - tip_back) < 1e-12);
}

TEST_CASE("sample_loads: linear spacing") {
    const FingerParams p = default_finger();
    const DeformationSet two = sample_loads(p, 10.0, 2);
    REQUIRE(two.states.size() == 2);
    CHECK(two.states[0].load == 0.0);
    CHECK(two.states[1].load == 10.0);

    const DeformationSet five = sample_loads(p, 8.0, 5);
    REQUIRE(five.states.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(five.states[i].load == doctest::Approx(2.0 * i));
    }
}

TEST_CASE("sample_loads: states equal synth_deform pointwise") {
    const FingerParams p = default_finger();
    const DeformationSet set = sample_loads(p, 6.0, 4);
    for (const DeformationState& st : set.states) {
        const DeformationState direct = synth_deform(p, st.load);
        REQUIRE(st.back_nodes.size() == direct.back_nodes.size());
        for (size_t i = 0; i < st.back_nodes.size(); ++i) {
            CHECK(st.back_nodes[i].x == direct.back_nodes[i].x);
            CHECK(st.back_nodes[i].y == direct.back_nodes[i].y);
        }
        for (size_t i = 0; i < st.pad_points.size(); ++i) {
            CHECK(st.pad_points[i].x == direct.pad_points[i].x);
            CHECK(st.pad_points[i].y == direct.pad_points[i].y);
        }
    }
}

TEST_CASE("deformation table: save and reload round-trips") {
    const FingerParams p = default_finger();
    const DeformationSet set = sample_loads(p, 7.5, 3);
    const auto path = temp_file("finview_table_roundtrip.txt");
    save_deformation_table(set, path.string());
    const DeformationSet back = load_deformation_table(path.string());
    REQUIRE(back.states.size() == set.states.size());
    CHECK(back.source == DeformationSource::table);
    for (size_t s = 0; s < set.states.size(); ++s) {
        CHECK(back.states[s].load == set.states[s].load);
        for (size_t i = 0; i < set.states[s].back_nodes.size(); ++i) {
            CHECK(std::abs(back.states[s].back_nodes[i].x - set.states[s].back_nodes[i].x) < 1e-9);
            CHECK(std::abs(back.states[s].back_nodes[i].y - set.states[s].back_nodes[i].y) < 1e-9);
        }
        for (size_t i = 0; i < set.states[s].pad_points.size(); ++i) {
            CHECK(std::abs(back.states[s].pad_points[i].x - set.states[s].pad_points[i].x) < 1e-9);
            CHECK(std::abs(back.states[s].pad_points[i].y - set.states[s].pad_points[i].y) < 1e-9);
        }
    }
    std::filesystem::remove(path);
}

TEST_CASE("deformation table: decreasing loads re-sort with a warning") {
    const auto path = temp_file("finview_table_unsorted.txt");
    {
        std::ofstream out(path);
        out << "2,3,3\n";
        out << "F=5\n";
        out << "0:0 1:1 2:2\n";
        out << "3:0 3:1 3:2\n";
        out << "F=0\n";
        out << "0:0 1:1 2:2\n";
        out << "3:0 3:1 3:2\n";
    }
    std::ostringstream warn;
    const DeformationSet set = load_deformation_table(path.string(), &warn);
    REQUIRE(set.states.size() == 2);
    CHECK(set.states[0].load == 0.0);
    CHECK(set.states[1].load == 5.0);
    CHECK(warn.str().find("re-sorting") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("deformation table: malformed rows name the line") {
    const auto path = temp_file("finview_table_bad.txt");

    SUBCASE("bad pair syntax") {
        {
            std::ofstream out(path);
            out << "1,3,3\nF=0\n0:0 11 2:2\n3:0 3:1 3:2\n";
        }
        try {
            load_deformation_table(path.string());
            FAIL("expected TableFormatError");
        } catch (const TableFormatError& e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }

    SUBCASE("inconsistent node count") {
        {
            std::ofstream out(path);
            out << "1,3,3\nF=0\n0:0 1:1\n3:0 3:1 3:2\n";
        }
        try {
            load_deformation_table(path.string());
            FAIL("expected TableFormatError");
        } catch (const TableFormatError& e) {
            CHECK(std::string(e.what()).find("expected 3 points") != std::string::npos);
        }
    }

    SUBCASE("missing zero-load state") {
        {
            std::ofstream out(path);
            out << "1,3,3\nF=2\n0:0 1:1 2:2\n3:0 3:1 3:2\n";
        }
        CHECK_THROWS_AS(load_deformation_table(path.string()), TableFormatError);
    }

    std::filesystem::remove(path);
}

TEST_CASE("finger params validation") {
    FingerParams p = default_finger();
    p.n_back_nodes = 2;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = default_finger();
    p.n_pad_points = 3;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = default_finger();
    p.base_width = 100.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = default_finger();
    p.compliance_gain = 0.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
}
