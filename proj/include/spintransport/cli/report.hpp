// Copyright 2026 The spintransport Authors
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

#pragma once

#include <string>
#include <vector>

namespace spintransport::cli {

struct ReportResult {
    std::vector<std::string> tables;
    /// Missing or unreadable parts of the input bundles.
    std::vector<std::string> gaps;
    std::string text;
};

/**
 * Plot tables from one or more run bundles: heatmap.csv (anisotropy, time,
 * bond, Re <J_i(t) J_d>), curve.csv (C(t)), loglog.csv (log t, log D^S) and
 * drude.csv ordered by anisotropy, plus report.txt. Pruned entries are left
 * out of the heat map. Incomplete bundles contribute what they have and are
 * listed as gaps.
 */
ReportResult analyze_bundles(const std::vector<std::string> &bundle_dirs, const std::string &out_dir);

} // namespace spintransport::cli
