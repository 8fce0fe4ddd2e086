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

#ifndef IRSISAC_TEST_UTIL_HPP
#define IRSISAC_TEST_UTIL_HPP

#include <doctest.h>

#include "irsisac/common.hpp"

// Checks that `expr` throws irsisac::Error of the given kind.
#define CHECK_ERROR_KIND(expr, expected_kind)                                                                          \
    do                                                                                                                 \
    {                                                                                                                  \
        bool thrown_ = false;                                                                                          \
        try                                                                                                            \
        {                                                                                                              \
            (void)(expr);                                                                                              \
        }                                                                                                              \
        catch (const irsisac::Error &e_)                                                                               \
        {                                                                                                              \
            thrown_ = true;                                                                                            \
            CHECK_MESSAGE(e_.kind() == (expected_kind), "got " << irsisac::to_string(e_.kind()) << ": " << e_.what()); \
        }                                                                                                              \
        CHECK_MESSAGE(thrown_, "expected an irsisac::Error from " #expr);                                              \
    } while (false)

namespace testutil
{
    inline double max_abs_diff(const irsisac::CMat &a, const irsisac::CMat &b) { return (a - b).cwiseAbs().maxCoeff(); }

    inline bool bitwise_equal(const irsisac::CMat &a, const irsisac::CMat &b)
    {
        if (a.rows() != b.rows() || a.cols() != b.cols())
            return false;
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                if (a(i, j).real() != b(i, j).real() || a(i, j).imag() != b(i, j).imag())
                    return false;
        return true;
    }
} // namespace testutil

#endif
