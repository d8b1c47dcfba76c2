#include "sandnet/standard.hpp"

#include "sandnet/reference_cases.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <functional>
#include <memory>

using namespace sandnet;

namespace {

const GalleryCase& find_case(const std::string& name) {
    for (const GalleryCase& c : reference_gallery())
        if (c.name == name) return c;
    FAIL("missing gallery case " << name);
    std::abort();
}

std::shared_ptr<const Network> net_of(const GalleryCase& c) {
    return std::make_shared<const Network>(Network::grid(c.grid));
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

TEST_CASE("redistribution moves only the excess") {
    SUBCASE("one particle to the emptiest neighbor") {
        const auto& c = find_case("vn3_hub_drip");
        const Network net = Network::grid(c.grid);
        const auto out = redistribute_node(net, c.initial, 5, TieBreak::lowest_id());
        CHECK(out.heights == *c.standard_admissible);
        CHECK(out.moves.size() == 1);
        CHECK(out.moves.front().to == 8); // the height-0 south cell
        CHECK(out.heights[4] == 3);
    }

    SUBCASE("four particles leave the surging hub") {
        const auto& c = find_case("moore3_hub_surge");
        const Network net = Network::grid(c.grid);
        const auto out = redistribute_node(net, c.initial, 5, TieBreak::lowest_id());
        CHECK(out.moves.size() == 4);
        CHECK(out.heights[4] == 7);
        // Least-crowded-first with lowest-id ties: node 3 twice, then 1, then 6.
        CHECK(out.heights == Configuration{3, 3, 3, 5, 7, 3, 4, 3, 3});
        CHECK(total(out.heights) == total(c.initial));
    }

    SUBCASE("a single neighbor receives everything") {
        const Network net = Network::graph(2, {{1, 2}}, 2, std::vector<Height>{5, 5});
        Configuration z{7, 0};
        const auto out = redistribute_node(net, z, 1, TieBreak::lowest_id());
        CHECK(out.heights == Configuration{4, 3});
        CHECK(out.moves.size() == 3);
    }

    SUBCASE("stable nodes cannot redistribute") {
        const auto& c = find_case("vn3_hub_drip");
        const Network net = Network::grid(c.grid);
        check_error(ErrorCode::NotUnstable,
                    [&] { redistribute_node(net, c.ground, 5, TieBreak::lowest_id()); });
    }
}

TEST_CASE("full neighbors push the excess to the hub") {
    // Every neighbor of node 1 sits at threshold-1, so its overflow takes
    // the reassignment route to the hub instead.
    const Network net = Network::grid({3, Neighborhood::VonNeumann});
    Configuration z(9, 3); // all at threshold-1
    z[0] = 5;              // corner node 1 overflows by 2
    z[4] = 0;              // hub has room
    const auto out = redistribute_node(net, z, 1, TieBreak::lowest_id());
    CHECK(out.heights[0] == 3);
    CHECK(out.heights[4] == 2);
    CHECK(out.moves.size() == 2);
    for (const Move& m : out.moves) {
        CHECK(m.hub_fallback);
        CHECK(m.to == 5);
    }
}

TEST_CASE("standard step") {
    SUBCASE("first drip step reaches the published state") {
        const auto& c = find_case("vn3_hub_drip");
        const StepReport report =
            standard_step(net_of(c), c.ground, c.inflow, TieBreak::lowest_id());
        CHECK(report.final_state == drip_continuation().reinit_ground);
        CHECK(report.moves.size() == 1);
        CHECK(total(report.final_state) == total(c.ground) + 1);
    }

    SUBCASE("zero inflow is the identity") {
        const auto& c = find_case("vn3_hub_drip");
        const StepReport report =
            standard_step(net_of(c), c.ground, Perturbation(9, 0), TieBreak::lowest_id());
        CHECK(report.final_state == c.ground);
        CHECK(report.moves.empty());
    }

    SUBCASE("central outbreak matches the published admissible result") {
        // The canonical least-crowded/lowest-id order happens to coincide
        // with the published matrix here.
        const auto& c = find_case("moore9_central_outbreak");
        const StepReport report =
            standard_step(net_of(c), c.ground, c.inflow, TieBreak::lowest_id());
        CHECK(report.final_state == *c.standard_admissible);
        CHECK(report.hub_load == Height{7});
        REQUIRE(report.indicator_stabilized.has_value());
        CHECK(*report.indicator_stabilized == Rational{59, 10});
    }

    SUBCASE("peripheral outbreak matches the published admissible result") {
        const auto& c = find_case("moore9_peripheral_outbreak");
        const StepReport report =
            standard_step(net_of(c), c.ground, c.inflow, TieBreak::lowest_id());
        CHECK(report.final_state == *c.standard_admissible);
        CHECK(*report.indicator_stabilized == Rational{59, 10});
    }

    SUBCASE("double topple case coincides with the published result") {
        const auto& c = find_case("moore5_double_topple");
        const StepReport report =
            standard_step(net_of(c), c.ground, c.inflow, TieBreak::lowest_id());
        CHECK(report.final_state == *c.standard_admissible);
    }

    SUBCASE("moves stay local") {
        const auto& c = find_case("moore5_multi_site");
        const auto net = net_of(c);
        const StepReport report = standard_step(net, c.ground, c.inflow, TieBreak::lowest_id());
        CHECK(report.final_state == *c.standard_admissible);
        for (const Move& m : report.moves) {
            const auto& nbrs = net->neighbors(m.from);
            const bool neighbor = std::binary_search(nbrs.begin(), nbrs.end(), m.to);
            CHECK((neighbor || (m.hub_fallback && m.to == *net->hub())));
        }
    }
}

TEST_CASE("standard step conserves mass and ends almost stable") {
    Rng rng(1091);
    for (int round = 0; round < 40; ++round) {
        const int side = 3 + 2 * static_cast<int>(rng.below(2)); // 3 or 5
        const Neighborhood nb = rng.below(2) ? Neighborhood::Moore : Neighborhood::VonNeumann;
        const auto net = std::make_shared<const Network>(Network::grid({side, nb}));
        const Configuration ground = oracles::random_almost_stable(*net, rng);
        Perturbation w(net->size(), 0);
        for (int k = 0; k < 6; ++k)
            w[rng.below(static_cast<std::uint64_t>(net->size()))] += 1;

        const StepReport report = standard_step(net, ground, w, TieBreak::seeded(round));
        CHECK(total(report.final_state) == total(ground) + total(w));
        CHECK(is_almost_stable(*net, report.final_state));
        for (const Move& m : report.moves) {
            const auto& nbrs = net->neighbors(m.from);
            CHECK((std::binary_search(nbrs.begin(), nbrs.end(), m.to) ||
                   (m.hub_fallback && m.to == *net->hub())));
        }
    }
}

TEST_CASE("redistribution always leaves a non-hub source at threshold-1") {
    Rng rng(808);
    for (int round = 0; round < 30; ++round) {
        const Network net = Network::grid({5, Neighborhood::Moore});
        Configuration z = oracles::random_almost_stable(net, rng);
        NodeId v;
        do {
            v = static_cast<NodeId>(1 + rng.below(25));
        } while (v == *net.hub());
        z[v - 1] = net.threshold(v) + static_cast<Height>(rng.below(6));

        const auto out = redistribute_node(net, z, v, TieBreak::seeded(round), nullptr);
        CHECK(out.heights[v - 1] == net.threshold(v) - 1);
        CHECK(out.held == 0);
        CHECK(static_cast<Height>(out.moves.size()) == z[v - 1] - (net.threshold(v) - 1));
        CHECK(total(out.heights) == total(z));
    }
}

TEST_CASE("identical seeds give identical move sequences") {
    const auto& c = find_case("moore3_hub_surge");
    const auto net = net_of(c);
    const StepReport a = standard_step(net, c.ground, c.inflow, TieBreak::seeded(99));
    const StepReport b = standard_step(net, c.ground, c.inflow, TieBreak::seeded(99));
    REQUIRE(a.moves.size() == b.moves.size());
    for (std::size_t i = 0; i < a.moves.size(); ++i) {
        CHECK(a.moves[i].from == b.moves[i].from);
        CHECK(a.moves[i].to == b.moves[i].to);
    }
    CHECK(a.final_state == b.final_state);
}

TEST_CASE("a move may destabilize its destination; the loop resolves it") {
    // Occupancy fractions can prefer a neighbor that is already at
    // threshold-1: node 2 (9/10) beats node 3 (28/30), takes the particle,
    // overflows, and its own excess then falls back to the hub.
    const Network net =
        Network::graph(3, {{1, 2}, {1, 3}}, 3, std::vector<Height>{2, 10, 30});
    const auto shared = std::make_shared<const Network>(net);
    const Configuration ground{1, 9, 28};
    Perturbation w(3, 0);
    w[0] = 1;

    const StepReport report = standard_step(shared, ground, w, TieBreak::lowest_id());
    CHECK(report.final_state == Configuration{1, 9, 29});
    REQUIRE(report.moves.size() == 2);
    CHECK(report.moves[0].from == 1);
    CHECK(report.moves[0].to == 2);
    CHECK_FALSE(report.moves[0].hub_fallback);
    CHECK(report.moves[1].from == 2);
    CHECK(report.moves[1].to == 3);
    CHECK(report.moves[1].hub_fallback);
    CHECK(is_almost_stable(net, report.final_state));
}

TEST_CASE("a saturated hub holds its own excess") {
    // All hub neighbors at threshold-1: the fallback would return the
    // hub's particles to itself, so the step parks them and flags it.
    const Network base = Network::grid({3, Neighborhood::VonNeumann});
    const auto net = std::make_shared<const Network>(base);
    Configuration ground(9, 3);
    ground[4] = 3;
    Perturbation w(9, 0);
    w[4] = 4; // hub reaches 7, threshold 4
    const StepReport report = standard_step(net, ground, w, TieBreak::lowest_id());
    CHECK(report.held == 4);
    CHECK(report.final_state[4] == 7);
    CHECK(total(report.final_state) == total(ground) + 4);
    CHECK(is_almost_stable(*net, report.final_state));
}
