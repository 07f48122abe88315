#include <cmath>

#include <doctest.h>

#include "facref/errors.hpp"
#include "facref/scan_simulator.hpp"
#include "scenes.hpp"

using namespace facref;

namespace {

ScanSpec small_spec() {
    ScanSpec s;
    s.trajectory = scenes::street_trajectory({5.0}, 3, 3.0, 7.0);
    s.angular_resolution = 0.02;
    s.max_range = 40.0;
    s.sigma_noise = 0.0;
    s.tau = 0.9;
    s.epsilon = 0.1;
    s.seed = 42;
    return s;
}

BuildingModel window_scene() {
    return scenes::with_openings(scenes::single_facade(), scenes::kFront,
                                 {{OpeningKind::Window, {4.0, 2.0, 1.0, 1.5}}, {OpeningKind::Door, {1.0, 0.0, 1.0, 2.2}}});
}

std::string text_of(const PointCloud& c) {
    std::ostringstream out;
    write_point_cloud(c, out);
    return out.str();
}

}  // namespace

TEST_CASE("noise-free points lie on the scene surfaces") {
    const auto model = window_scene();
    const auto spec = small_spec();
    const auto res = simulate(model, spec);
    REQUIRE_FALSE(res.cloud.empty());
    std::size_t interior = 0, window = 0, door = 0;
    for (const auto& p : res.cloud.points) {
        const double y = p.position.y();
        const bool on_facade = std::abs(y - scenes::kFrontY) <= 1e-9;
        const bool on_interior = std::abs(y - (scenes::kFrontY + spec.interior_offset)) <= 1e-9;
        CHECK((on_facade || on_interior));
        REQUIRE(p.true_label);
        if (on_interior) {
            ++interior;
            CHECK(*p.true_label == Label::Other);
        } else {
            CHECK(p.position.x() >= -1e-9);
            CHECK(p.position.x() <= 10.0 + 1e-9);
            CHECK(p.position.z() >= -1e-9);
            CHECK(p.position.z() <= 6.0 + 1e-9);
        }
        window += *p.true_label == Label::Window;
        door += *p.true_label == Label::Door;
        CHECK(p.prob[index_of(*p.true_label)] == doctest::Approx(0.9));
        CHECK(p.sensor.y() == doctest::Approx(-5.0));
    }
    CHECK(interior > 0);
    CHECK(window > 0);
    CHECK(door > 0);
    CHECK(res.cloud.size() == res.transient.size());
    CHECK(res.opening_rays.size() == 2);
    CHECK(res.opening_rays[0] > 0);
}

TEST_CASE("full transmission leaves no returns on the openings") {
    auto spec = small_spec();
    spec.tau = 1.0;
    for (const auto& p : simulate(window_scene(), spec).cloud.points) {
        CHECK(*p.true_label != Label::Window);
        CHECK(*p.true_label != Label::Door);
    }
    spec.tau = 0.0;
    for (const auto& p : simulate(window_scene(), spec).cloud.points) CHECK(*p.true_label != Label::Other);
}

TEST_CASE("determinism and point budget") {
    auto spec = small_spec();
    spec.sigma_noise = 0.01;
    const auto a = simulate(window_scene(), spec);
    const auto b = simulate(window_scene(), spec);
    CHECK(text_of(a.cloud) == text_of(b.cloud));
    spec.seed = 43;
    CHECK(text_of(simulate(window_scene(), spec).cloud) != text_of(a.cloud));

    // Each pose casts at most one ray per grid direction over its angular window.
    auto one = small_spec();
    one.trajectory = {Point3(5.0, -5.0, 2.0)};
    const auto c = simulate(window_scene(), one);
    const double az = 2.0 * std::atan2(5.0, 5.0 + scenes::kFrontY);
    const double el = std::atan2(4.0, 5.0) + std::atan2(2.0, 5.0);
    const auto rays = (std::floor(az / one.angular_resolution) + 1) * (std::floor(el / one.angular_resolution) + 1);
    CHECK(static_cast<double>(c.cloud.size()) <= rays);
    CHECK_FALSE(c.cloud.empty());
}

TEST_CASE("range limit and label noise") {
    auto spec = small_spec();
    spec.max_range = 1.0;
    CHECK(simulate(window_scene(), spec).cloud.empty());

    spec = small_spec();
    spec.epsilon = 0.0;
    for (const auto& p : simulate(window_scene(), spec).cloud.points) CHECK(p.prob == one_hot(*p.true_label));
}

TEST_CASE("transients and ground") {
    auto spec = small_spec();
    spec.passes = 10;
    spec.ground_plane = true;
    spec.ground_z = scenes::kStreetZ;
    TransientObject box;
    box.box.extend(Point3(4.5, -3.0, scenes::kStreetZ));
    box.box.extend(Point3(5.5, -2.0, scenes::kStreetZ + 1.0));
    box.active_fraction = 0.1;
    box.label = Label::Wall;
    spec.transients = {box};
    const auto res = simulate(window_scene(), spec);
    REQUIRE(res.transient.size() == res.cloud.size());
    std::size_t floor = 0, transient = 0;
    const std::size_t per_pass = res.cloud.size() / 10;
    for (std::size_t i = 0; i < res.cloud.size(); ++i) {
        const auto& p = res.cloud.points[i];
        if (*p.true_label == Label::Floor) {
            ++floor;
            CHECK(p.position.z() == doctest::Approx(scenes::kStreetZ));
        }
        if (res.transient[i]) {
            ++transient;
            CHECK(*p.true_label == Label::Wall);
            CHECK(i < per_pass + 1000);  // only during the first pass
        }
    }
    CHECK(floor > 0);
    CHECK(transient > 0);
}

TEST_CASE("scan spec text") {
    const std::string text = R"([scan]
angular_resolution = 0.005
max_range = 25
sigma_noise = 0.01
tau = 0.8
epsilon = 0.2
passes = 3
ground_plane = true
seed = 18446744073709551615

[trajectory]
poses = 0 -5 2; 5 -5 2 ;10 -5 2

[transient.0]
min = 4 -3 0
max = 5 -2 1
active_fraction = 0.5
label = wall
)";
    const auto s = parse_scan_spec(text);
    CHECK(s.trajectory.size() == 3);
    CHECK(s.trajectory[1] == Point3(5, -5, 2));
    CHECK(s.angular_resolution == 0.005);
    CHECK(s.tau == 0.8);
    CHECK(s.passes == 3);
    CHECK(s.ground_plane);
    CHECK_FALSE(s.ground_z);
    CHECK(s.seed == UINT64_MAX);
    REQUIRE(s.transients.size() == 1);
    CHECK(s.transients[0].label == Label::Wall);
    CHECK(s.transients[0].active_fraction == 0.5);

    CHECK_THROWS_AS(parse_scan_spec("[scan]\ntau = 0.5\n"), SpecError);
    CHECK_THROWS_AS(parse_scan_spec("[trajectory]\nposes = \n"), SpecError);
    CHECK_THROWS_AS(parse_scan_spec("[trajectory]\nposes = 1 2\n"), SpecError);
    CHECK_THROWS_AS(parse_scan_spec("[scan]\ntau = 1.5\n[trajectory]\nposes = 0 0 0\n"), SpecError);
    CHECK_THROWS_AS(parse_scan_spec("[scan]\nseed = -1\n[trajectory]\nposes = 0 0 0\n"), SpecError);
    CHECK_THROWS_AS(parse_scan_spec("[scan]\nbogus = 1\n[trajectory]\nposes = 0 0 0\n"), SpecError);
    CHECK_THROWS_AS(parse_scan_spec("[trajectory]\nposes = 0 0 0\n[transient.0]\nlabel = tree\n"), SpecError);
    ScanSpec empty;
    CHECK_THROWS_AS(simulate(window_scene(), empty), SpecError);
}

TEST_CASE("ground truth boxes") {
    const auto boxes = ground_truth_boxes(scenes::with_openings(scenes::single_facade(), scenes::kFront,
                                                                scenes::six_windows_one_door()));
    const auto placed = scenes::six_windows_one_door();
    REQUIRE(boxes.size() == placed.size());
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        CHECK(boxes[i].facade_id == scenes::kFront);
        CHECK(boxes[i].kind == placed[i].kind);
        CHECK(boxes[i].box.u_min == doctest::Approx(placed[i].box.u_min));
        CHECK(boxes[i].box.v_min == doctest::Approx(placed[i].box.v_min));
        CHECK(boxes[i].box.width == doctest::Approx(placed[i].box.width));
        CHECK(boxes[i].box.height == doctest::Approx(placed[i].box.height));
    }
}

TEST_CASE("label corruption") {
    const auto m = uniform_confusion(0.3);
    for (const auto& row : m) {
        double s = 0.0;
        for (const double v : row) s += v;
        CHECK(s == doctest::Approx(1.0));
    }
    CHECK(m[0][0] == doctest::Approx(0.7));

    auto spec = small_spec();
    spec.epsilon = 0.0;
    const auto cloud = simulate(window_scene(), spec).cloud;
    const auto bad = corrupt_labels(cloud, m, 9);
    REQUIRE(bad.size() == cloud.size());
    std::size_t kept = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        CHECK(bad.points[i].position == cloud.points[i].position);
        CHECK(bad.points[i].true_label == cloud.points[i].true_label);
        CHECK_NOTHROW(validate_probs(bad.points[i].prob));
        CHECK(bad.points[i].prob[index_of(bad.points[i].predicted())] == doctest::Approx(0.95));
        kept += bad.points[i].predicted() == *cloud.points[i].true_label;
    }
    const double rate = static_cast<double>(kept) / cloud.size();
    CHECK(rate == doctest::Approx(0.7).epsilon(0.05));
    CHECK(text_of(corrupt_labels(cloud, m, 9)) == text_of(bad));
    CHECK(text_of(corrupt_labels(cloud, uniform_confusion(0.0), 9)) != text_of(cloud));  // confidence 0.95, not 1
}
