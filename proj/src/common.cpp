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

#include "irsisac/common.hpp"

#include <cmath>

namespace irsisac
{
    const char *to_string(ErrorKind kind)
    {
        switch (kind)
        {
        case ErrorKind::InvalidDimension: return "invalid-dimension";
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::InvalidConfiguration: return "invalid-configuration";
        case ErrorKind::DegenerateGeometry: return "degenerate-geometry";
        case ErrorKind::InvalidDistance: return "invalid-distance";
        case ErrorKind::InvalidPanel: return "invalid-panel";
        case ErrorKind::ContractViolation: return "contract-violation";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::DegenerateSubspace: return "degenerate-subspace";
        case ErrorKind::IllConditioned: return "ill-conditioned";
        case ErrorKind::InfeasibleCandidate: return "infeasible-candidate";
        case ErrorKind::MatchingFailure: return "matching-failure";
        case ErrorKind::Plotting: return "plotting";
        case ErrorKind::Usage: return "usage";
        }
        return "unknown";
    }

    Error::Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
    {
    }

    std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
    {
        std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double wrap_angle(double angle)
    {
        double a = std::fmod(angle, kTwoPi);
        if (a <= -kPi)
            a += kTwoPi;
        else if (a > kPi)
            a -= kTwoPi;
        return a;
    }

    double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

    cplx complex_gaussian(Rng &rng, double variance)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
        const double re = n(rng);
        const double im = n(rng);
        return {re, im};
    }

} // namespace irsisac
