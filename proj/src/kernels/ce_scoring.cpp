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

#include "irsisac/kernels.hpp"

#include <cmath>
#include <limits>

#include "irsisac/signal.hpp"

namespace irsisac::kernels
{
    void ScoringProblem::validate() const
    {
        const Eigen::Index p = steering.cols();
        if (steering.rows() < 1 || p < 1)
            throw Error(ErrorKind::InvalidDimension, "scoring problem needs BS steering columns");
        if (static_cast<Eigen::Index>(group.size()) != coef.rows() || coef.rows() < 1 || coef.cols() < 1)
            throw Error(ErrorKind::InvalidDimension, "element grouping does not match the coefficient rows");
        for (int g : group)
            if (g < 0 || g >= p)
                throw Error(ErrorKind::InvalidDimension, "element group outside the steering columns");
        if (phasor.empty())
            throw Error(ErrorKind::InvalidArgument, "empty phase alphabet");
        if (mode == CombinerMode::Fixed && (combiner.rows() != steering.rows() || combiner.cols() != coef.cols()))
            throw Error(ErrorKind::InvalidDimension, "fixed combiner must be N x K");
        if (mode == CombinerMode::ZeroForcing && coef.cols() > steering.rows())
            throw Error(ErrorKind::InvalidDimension, "zero forcing needs K <= N");
    }

    bool zero_forcing(const CMat &h, double max_condition, CMat &w, double &condition)
    {
        Eigen::JacobiSVD<CMat> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const RVec &s = svd.singularValues();
        const double smax = s(0);
        const double smin = s(s.size() - 1);
        condition = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
        if (!(smin > 0.0) || !(condition <= max_condition))
            return false;
        // (H^H)^+ = U S^-1 V^H
        CMat out = svd.matrixU() * s.cwiseInverse().asDiagonal() * svd.matrixV().adjoint();
        for (Eigen::Index k = 0; k < out.cols(); ++k)
            out.col(k) /= out.col(k).norm();
        w = std::move(out);
        return true;
    }

    CMat effective_channel(const ScoringProblem &problem, const int *indices)
    {
        const int m_total = problem.elements();
        const int k_users = problem.users();
        CMat t = CMat::Zero(problem.steering.cols(), k_users);
        for (int m = 0; m < m_total; ++m)
        {
            const cplx ph = problem.phasor[indices[m]];
            const int g = problem.group[m];
            for (int k = 0; k < k_users; ++k)
                t(g, k) += problem.coef(m, k) * ph;
        }
        return problem.steering * t;
    }

    namespace
    {
        // coef(m, k) * phasor[l] at [(m * L + l) * K + k]; the same products
        // effective_channel forms, so sums built from it match bitwise.
        std::vector<cplx> product_table(const ScoringProblem &problem)
        {
            const int m_total = problem.elements();
            const int k_users = problem.users();
            const int levels = static_cast<int>(problem.phasor.size());
            std::vector<cplx> table(static_cast<std::size_t>(m_total) * levels * k_users);
            for (int m = 0; m < m_total; ++m)
                for (int l = 0; l < levels; ++l)
                    for (int k = 0; k < k_users; ++k)
                        table[(static_cast<std::size_t>(m) * levels + l) * k_users + k] =
                            problem.coef(m, k) * problem.phasor[l];
            return table;
        }

        constexpr std::size_t kMaxTableEntries = std::size_t{1} << 18;

        double score_from_channel(const ScoringProblem &problem, const CMat &h, CMat *combiner_out)
        {
            if (problem.mode == CombinerMode::Fixed)
            {
                if (combiner_out)
                    *combiner_out = problem.combiner;
                return sum_rate_from_gram(problem.combiner.adjoint() * h, problem.rho, problem.sigma2);
            }
            CMat w;
            double cond = 0.0;
            if (!zero_forcing(h, problem.zf_max_condition, w, cond))
            {
                if (combiner_out)
                    combiner_out->resize(0, 0);
                return 0.0;
            }
            const double rate = sum_rate_from_gram(w.adjoint() * h, problem.rho, problem.sigma2);
            if (combiner_out)
                *combiner_out = std::move(w);
            return rate;
        }
    } // namespace

    double score_candidate(const ScoringProblem &problem, const int *indices, CMat *combiner_out)
    {
        return score_from_channel(problem, effective_channel(problem, indices), combiner_out);
    }

    void score_candidates(const ScoringProblem &problem, const IndexMatrix &candidates, RVec &scores)
    {
        problem.validate();
        if (candidates.cols() != problem.elements())
            throw Error(ErrorKind::InvalidDimension, "candidate width differs from the element count");
        const Eigen::Index s_count = candidates.rows();
        scores.resize(s_count);
        const int m_total = problem.elements();
        const int k_users = problem.users();
        const int levels = static_cast<int>(problem.phasor.size());
        if (static_cast<std::size_t>(m_total) * levels * k_users > kMaxTableEntries)
        {
#pragma omp parallel for schedule(dynamic, 16)
            for (Eigen::Index s = 0; s < s_count; ++s)
                scores(s) = score_candidate(problem, candidates.row(s).data());
            return;
        }
        const std::vector<cplx> table = product_table(problem);
        const Eigen::Index p = problem.steering.cols();
#pragma omp parallel for schedule(dynamic, 16)
        for (Eigen::Index s = 0; s < s_count; ++s)
        {
            const int *idx = candidates.row(s).data();
            CMat t = CMat::Zero(p, k_users);
            for (int m = 0; m < m_total; ++m)
            {
                const cplx *row = &table[(static_cast<std::size_t>(m) * levels + idx[m]) * k_users];
                const int g = problem.group[m];
                for (int k = 0; k < k_users; ++k)
                    t(g, k) += row[k];
            }
            scores(s) = score_from_channel(problem, problem.steering * t, nullptr);
        }
    }

} // namespace irsisac::kernels
