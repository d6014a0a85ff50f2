// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include <string>
#include <vector>

namespace chanest {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast invariant suite (a few seconds): pilot unitarity, decorrelation,
/// Bessel accuracy, the ensemble-update identities, resampling, metrics and
/// seeding determinism.
std::vector<SelftestCheck> run_selftest();

} // namespace chanest
