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

#include "irsisac/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "irsisac/common.hpp"

namespace irsisac
{
    int Dataset::column(const std::string &name) const
    {
        const auto it = std::find(columns.begin(), columns.end(), name);
        return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
    }

    namespace
    {
        [[noreturn]] void plot_error(const std::string &msg) { throw Error(ErrorKind::Plotting, msg); }

        std::vector<std::string> split(const std::string &line)
        {
            std::vector<std::string> out;
            std::string cell;
            std::istringstream ss(line);
            while (std::getline(ss, cell, ','))
                out.push_back(cell);
            if (!line.empty() && line.back() == ',')
                out.emplace_back();
            return out;
        }

        std::string escape(const std::string &s)
        {
            std::string o;
            for (char c : s)
                switch (c)
                {
                case '<': o += "&lt;"; break;
                case '>': o += "&gt;"; break;
                case '&': o += "&amp;"; break;
                case '"': o += "&quot;"; break;
                default: o += c;
                }
            return o;
        }

        bool to_double(const std::string &s, double &x)
        {
            try
            {
                std::size_t used = 0;
                x = std::stod(s, &used);
                return used == s.size() && std::isfinite(x);
            }
            catch (const std::exception &)
            {
                return false;
            }
        }

        const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

        std::vector<double> linear_ticks(double lo, double hi)
        {
            const double span = hi - lo;
            const double raw = span / 5.0;
            const double mag = std::pow(10.0, std::floor(std::log10(raw)));
            double step = mag;
            for (double f : {1.0, 2.0, 5.0, 10.0})
                if (raw <= f * mag)
                {
                    step = f * mag;
                    break;
                }
            std::vector<double> t;
            for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step)
                t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
            return t;
        }
    } // namespace

    Dataset parse_csv(const std::string &text)
    {
        Dataset d;
        std::istringstream in(text);
        std::string line;
        bool header = true;
        while (std::getline(in, line))
        {
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty())
                continue;
            if (header)
            {
                d.columns = split(line);
                header = false;
                continue;
            }
            auto cells = split(line);
            if (cells.size() != d.columns.size())
                plot_error(fmt::format("CSV row has {} cells, header has {}", cells.size(), d.columns.size()));
            d.rows.push_back(std::move(cells));
        }
        return d;
    }

    Dataset read_csv(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            plot_error("cannot open dataset '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_csv(ss.str());
    }

    std::string render_svg(const Dataset &data, const PlotSpec &spec)
    {
        const int cx = data.column(spec.x_column);
        const int cy = data.column(spec.y_column);
        const int cm = data.column(spec.metric_column);
        for (const auto &[idx, name] : {std::pair{cx, spec.x_column}, {cy, spec.y_column}, {cm, spec.metric_column}})
            if (idx < 0)
                plot_error("dataset has no column '" + name + "'");
        if (data.rows.empty())
            plot_error("dataset is empty");

        // series in first-appearance order
        std::vector<std::string> order;
        std::map<std::string, std::vector<std::pair<double, double>>> series;
        for (const auto &row : data.rows)
        {
            const std::string &metric = row[cm];
            if (!spec.metrics.empty() && std::find(spec.metrics.begin(), spec.metrics.end(), metric) == spec.metrics.end())
                continue;
            double x, y;
            if (!to_double(row[cx], x) || !to_double(row[cy], y))
                continue;
            if (spec.log_y && !(y > 0.0))
                continue;
            if (!series.count(metric))
                order.push_back(metric);
            series[metric].emplace_back(x, y);
        }
        if (order.empty())
            plot_error("no plottable points for '" + spec.title + "'");

        double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
        for (auto &[name, pts] : series)
        {
            std::sort(pts.begin(), pts.end());
            for (const auto &[x, y] : pts)
            {
                const double yy = spec.log_y ? std::log10(y) : y;
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, yy);
                ymax = std::max(ymax, yy);
            }
        }
        if (xmax == xmin)
        {
            xmin -= 0.5;
            xmax += 0.5;
        }
        if (spec.log_y)
        {
            ymin = std::floor(ymin);
            ymax = std::max(std::ceil(ymax), ymin + 1.0);
        }
        else
        {
            const double pad = ymax > ymin ? 0.05 * (ymax - ymin) : std::max(0.5, 0.05 * std::abs(ymax));
            ymin -= pad;
            ymax += pad;
        }

        const double W = 720, H = 460, L = 80, R = 200, T = 40, B = 60;
        const double pw = W - L - R, ph = H - T - B;
        auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * pw; };
        auto py = [&](double y) {
            const double yy = spec.log_y ? std::log10(y) : y;
            return T + ph - (yy - ymin) / (ymax - ymin) * ph;
        };

        std::string s = fmt::format(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
            "font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
            W, H);
        s += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n", L + pw / 2,
                         escape(spec.title));
        s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", L, T,
                         pw, ph);

        for (double t : linear_ticks(xmin, xmax))
            s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"#ddd\"/>"
                             "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">{4:g}</text>\n",
                             px(t), T, T + ph, T + ph + 18, t);
        if (spec.log_y)
            for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); ++e)
                s += fmt::format("<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>"
                                 "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">1e{5}</text>\n",
                                 L, py(std::pow(10.0, e)), L + pw, L - 6, py(std::pow(10.0, e)) + 4, e);
        else
            for (double t : linear_ticks(ymin, ymax))
                s += fmt::format("<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>"
                                 "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:g}</text>\n",
                                 L, py(t), L + pw, L - 6, py(t) + 4, t);

        s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", L + pw / 2, H - 15,
                         escape(spec.x_label));
        s += fmt::format("<text transform=\"translate(20,{}) rotate(-90)\" text-anchor=\"middle\">{}{}</text>\n",
                         T + ph / 2, escape(spec.y_label), spec.log_y ? " (log)" : "");

        for (std::size_t i = 0; i < order.size(); ++i)
        {
            const char *color = kColors[i % std::size(kColors)];
            const auto &pts = series[order[i]];
            std::string path;
            for (const auto &[x, y] : pts)
                path += fmt::format("{:.2f},{:.2f} ", px(x), py(y));
            s += fmt::format("<polyline class=\"series\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n",
                             color, path);
            for (const auto &[x, y] : pts)
                s += fmt::format("<circle class=\"marker\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3.5\" fill=\"{}\"/>\n", px(x),
                                 py(y), color);
            const double ly = T + 10 + 20 * static_cast<double>(i);
            s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>"
                             "<text x=\"{4}\" y=\"{5}\">{6}</text>\n",
                             L + pw + 15, ly, L + pw + 40, color, L + pw + 46, ly + 4, escape(order[i]));
        }
        s += "</svg>\n";
        return s;
    }

    namespace
    {
        std::string family_of(const std::string &metric)
        {
            if (metric.rfind("rmse", 0) == 0)
                return "rmse";
            if (metric.rfind("rate_", 0) == 0)
            {
                const auto end = metric.find('_', 5);
                return metric.substr(0, end);
            }
            return metric;
        }
    } // namespace

    std::vector<std::string> emit_plots(const Dataset &data, const std::string &out_dir, const std::string &stem)
    {
        const int cm = data.column("metric");
        if (cm < 0)
            plot_error("dataset has no column 'metric'");
        if (data.rows.empty())
            plot_error("dataset is empty");
        std::vector<std::string> families;
        std::map<std::string, std::vector<std::string>> members;
        for (const auto &row : data.rows)
        {
            const std::string f = family_of(row[cm]);
            auto &m = members[f];
            if (m.empty())
                families.push_back(f);
            if (std::find(m.begin(), m.end(), row[cm]) == m.end())
                m.push_back(row[cm]);
        }
        std::filesystem::create_directories(out_dir);
        std::vector<std::string> written;
        for (const auto &f : families)
        {
            PlotSpec spec;
            spec.title = stem + ": " + f;
            spec.metrics = members[f];
            spec.log_y = f == "rmse";
            spec.y_label = f == "rmse" ? "RMSE [m]" : (f.rfind("rate", 0) == 0 ? "sum rate [bit/s/Hz]" : f);
            std::string svg;
            try
            {
                svg = render_svg(data, spec);
            }
            catch (const Error &)
            {
                continue; // a family with only NaN values has nothing to draw
            }
            const std::string path = (std::filesystem::path(out_dir) / (stem + "_" + f + ".svg")).string();
            std::ofstream out(path);
            if (!out)
                plot_error("cannot write '" + path + "'");
            out << svg;
            written.push_back(path);
        }
        if (written.empty())
            plot_error("no figure had plottable data");
        return written;
    }

} // namespace irsisac
