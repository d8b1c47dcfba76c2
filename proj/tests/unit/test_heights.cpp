#include "sandnet/heights.hpp"

#include "sandnet/reference_cases.hpp"

#include "doctest.h"

#include <functional>

using namespace sandnet;

namespace {

const GalleryCase& find_case(const std::string& name) {
    for (const GalleryCase& c : reference_gallery())
        if (c.name == name) return c;
    FAIL("missing gallery case " << name);
    std::abort();
}

void check_error(ErrorCode expected, const std::function<void()>& fn) {
    try {
        fn();
        FAIL_CHECK("expected " << to_string(expected));
    } catch (const Error& e) {
        CHECK(e.code() == expected);
    }
}

} // namespace

TEST_CASE("inflow is a component-wise sum") {
    const Configuration zeros(9, 0);
    Perturbation burst(9, 0);
    burst[4] = 4;
    CHECK(add_inflow(zeros, burst) == Configuration{0, 0, 0, 0, 4, 0, 0, 0, 0});

    const Configuration z{1, 2, 3};
    CHECK(add_inflow(z, Perturbation(3, 0)) == z);

    const auto& multi = find_case("moore5_multi_site");
    CHECK(add_inflow(multi.ground, multi.inflow) == multi.initial);

    check_error(ErrorCode::LengthMismatch, [&] { add_inflow(z, Perturbation(2, 0)); });
    check_error(ErrorCode::ValidationError, [&] { add_inflow(z, Perturbation{0, -1, 0}); });
}

TEST_CASE("dissipation subtracts and rejects oversubtraction") {
    const Configuration z{3, 1, 2};
    CHECK(dissipate(z, Perturbation{1, 1, 0}) == Configuration{2, 0, 2});
    CHECK(dissipate(z, z) == Configuration{0, 0, 0});
    CHECK(dissipate(z, Perturbation(3, 0)) == z);
    check_error(ErrorCode::Oversubtraction, [&] { dissipate(z, Perturbation{0, 2, 0}); });
    check_error(ErrorCode::LengthMismatch, [&] { dissipate(z, Perturbation(4, 0)); });
}

TEST_CASE("stability predicates") {
    const Network net = Network::grid({3, Neighborhood::Moore});
    const auto& surge = find_case("moore3_hub_surge");
    CHECK(unstable_nodes(net, surge.initial) == std::vector<NodeId>{5});
    CHECK(unstable_nodes(net, Configuration(9, 0)).empty());
    CHECK(is_almost_stable(net, surge.initial)); // only the hub overflows
    CHECK_FALSE(is_stable(net, surge.initial));
    CHECK(is_almost_stable(net, *surge.srh_result));

    // Threshold equality counts as unstable, listed ascending.
    const Network vn = Network::grid({3, Neighborhood::VonNeumann});
    Configuration z(9, 0);
    z[0] = 4;
    z[6] = 4;
    CHECK(unstable_nodes(vn, z) == std::vector<NodeId>{1, 7});

    const auto& peripheral = find_case("moore9_peripheral_outbreak");
    const Network nine = Network::grid({9, Neighborhood::Moore});
    CHECK_FALSE(is_almost_stable(nine, peripheral.initial)); // boundary cell overflows
    CHECK(is_almost_stable(nine, *peripheral.srh_result));
}
