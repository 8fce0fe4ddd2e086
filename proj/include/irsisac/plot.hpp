// SPDX-License-Identifier: Apache-2.0
//
// irsisac: location sensing and beamforming simulator for IRS-assisted ISAC
// Copyright (C) 2026 The irsisac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef IRSISAC_PLOT_HPP
#define IRSISAC_PLOT_HPP

#include <string>
#include <vector>

namespace irsisac
{
    // A CSV table held as strings; the first line names the columns.
    struct Dataset
    {
        std::vector<std::string> columns;
        std::vector<std::vector<std::string>> rows;

        int column(const std::string &name) const; // -1 when absent
    };

    Dataset parse_csv(const std::string &text);
    Dataset read_csv(const std::string &path);

    struct PlotSpec
    {
        std::string title;
        std::string x_label = "sweep value";
        std::string y_label = "mean";
        std::vector<std::string> metrics; // empty: every metric in the data
        bool log_y = false;
        std::string x_column = "sweep_value";
        std::string y_column = "mean";
        std::string metric_column = "metric";
    };

    /// One SVG line chart, one series per metric, one marker per point.
    /// Throws Plotting on missing columns or when nothing is plottable.
    std::string render_svg(const Dataset &data, const PlotSpec &spec);

    /// Default figures for a sweep summary: RMSE (log scale), then one figure
    /// per rate family. Returns the written paths.
    std::vector<std::string> emit_plots(const Dataset &data, const std::string &out_dir, const std::string &stem);

} // namespace irsisac

#endif
