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

#ifndef IRSISAC_COMMON_HPP
#define IRSISAC_COMMON_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace irsisac
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RVec = Eigen::VectorXd;
    using RMat = Eigen::MatrixXd;

    // Phase-index candidates, one row per candidate, one column per IRS element
    using IndexMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    // All randomness flows through explicitly passed engines of this type
    using Rng = std::mt19937_64;

    inline constexpr double kPi = 3.14159265358979323846;
    inline constexpr double kTwoPi = 2.0 * kPi;

    enum class ErrorKind
    {
        InvalidDimension,
        InvalidArgument,
        InvalidConfiguration,
        DegenerateGeometry,
        InvalidDistance,
        InvalidPanel,
        ContractViolation,
        InsufficientData,
        DegenerateSubspace,
        IllConditioned,
        InfeasibleCandidate,
        MatchingFailure,
        Plotting,
        Usage
    };

    const char *to_string(ErrorKind kind);

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorKind kind, const std::string &message);
        ErrorKind kind() const noexcept { return kind_; }

    private:
        ErrorKind kind_;
    };

    // SplitMix64 mixing of (master, stream) into an independent engine seed.
    std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

    // Wraps to (-pi, pi].
    double wrap_angle(double angle);

    // dBm -> watts
    double dbm_to_watts(double dbm);

    // Circularly symmetric complex Gaussian sample with total variance `variance`.
    cplx complex_gaussian(Rng &rng, double variance);

} // namespace irsisac

#endif
