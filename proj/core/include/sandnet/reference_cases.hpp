#pragma once

#include "sandnet/heights.hpp"
#include "sandnet/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sandnet {

/// One curated grid scenario with frozen expected outcomes for the
/// workflows that apply to it. The published standard-management results
/// are checked for admissibility (conservation, locality, source left at
/// threshold-1), not bit equality, since several different move orders are
/// equally valid.
struct GalleryCase {
    std::string name;
    GridSpec grid;
    Configuration ground;
    Perturbation inflow;
    Configuration initial; // ground + inflow

    std::optional<Configuration> open_result;
    std::optional<Configuration> srh_result;
    std::optional<Configuration> srh_intermediate; // after the first toppling
    std::optional<Configuration> standard_admissible;

    std::optional<Rational> f_initial;
    std::optional<Rational> f_standard;
    std::optional<Rational> f_srh;
    std::optional<std::size_t> critical_standard; // margin 2, on standard_admissible
    std::optional<std::size_t> critical_srh;      // margin 2, on srh_result
    std::string note; // attached to the srh indicator row
};

const std::vector<GalleryCase>& reference_gallery();

/// Continuation fixtures for the vn3_hub_drip case: the state after its
/// first standard step, the three-step drip from there, and how many more
/// hub arrivals the srh result absorbs before anything overflows.
struct DripContinuation {
    Configuration reinit_ground;
    int steps = 3;
    Configuration final_state;
    int srh_headroom = 3;
};

const DripContinuation& drip_continuation();

struct VerifyRow {
    std::string check;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;

    bool all_pass() const;
    std::string table() const;
};

/// Replays the given cases and reports per-check pass/fail rows.
VerifyReport verify_cases(const std::vector<GalleryCase>& cases);

/// Replays the whole built-in gallery plus the drip continuation.
/// Hermetic: no files, no clock, no ambient randomness.
VerifyReport verify_reference_cases();

} // namespace sandnet
