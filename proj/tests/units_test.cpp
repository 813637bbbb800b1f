// Copyright 2026 The fogmig Authors
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


#include <fogmig/units.hpp>

#include <gtest/gtest.h>

namespace units = fogmig::units;
using units::Dimension;

TEST(Units, BandwidthsAreDecimal)
{
    EXPECT_DOUBLE_EQ(units::parse("100 Gbps", Dimension::rate), 12500.0);
    EXPECT_DOUBLE_EQ(units::parse("10 Gbps", Dimension::rate), 1250.0);
    EXPECT_DOUBLE_EQ(units::parse("100 Mbps", Dimension::rate), 12.5);
    EXPECT_DOUBLE_EQ(units::parse("54 Mbps", Dimension::rate), 6.75);
}

TEST(Units, TrafficAndDelays)
{
    EXPECT_DOUBLE_EQ(units::parse("80 KB/s", Dimension::rate), 0.08);
    EXPECT_DOUBLE_EQ(units::parse("13 MB", Dimension::data), 13000.0);
    EXPECT_DOUBLE_EQ(units::parse("0.03 s/KB", Dimension::unit_delay), 30.0);
    EXPECT_DOUBLE_EQ(units::parse("3.12 s/KB", Dimension::unit_delay), 3120.0);
    EXPECT_DOUBLE_EQ(units::parse("0.05 ms", Dimension::time), 0.05);
    EXPECT_DOUBLE_EQ(units::parse("0.6ms", Dimension::time), 0.6);
}

TEST(Units, RejectsWrongDimension)
{
    EXPECT_THROW(units::parse("5 ms", Dimension::rate), fogmig::DomainError);
    EXPECT_THROW(units::parse("5 parsecs", Dimension::time), fogmig::DomainError);
    EXPECT_THROW(units::parse("fast", Dimension::time), fogmig::DomainError);
}
