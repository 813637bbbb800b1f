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

/**
 * \file fogmig/units.hpp
 *
 * \brief Unit conversion for scenario quantities.
 *
 * Internal units are fixed: time in milliseconds, traffic in kilobytes, rates
 * and bandwidths in KB/ms, processing and transfer delays in ms/KB. Decimal
 * prefixes throughout (1 KB = 1000 B, 1 Mbps = 10^6 bit/s).
 *
 * A scenario field may carry either a bare number, taken to be in the
 * internal unit, or a string "<number> <unit>" that is converted here.
 */

#ifndef FOGMIG_UNITS_HPP
#define FOGMIG_UNITS_HPP

#include <fogmig/core.hpp>

#include <array>
#include <charconv>
#include <string>
#include <string_view>

namespace fogmig::units {

enum class Dimension
{
    time,       ///< ms
    data,       ///< KB
    rate,       ///< KB/ms (traffic rates and bandwidths)
    unit_delay  ///< ms/KB
};

inline constexpr std::string_view internal_unit(Dimension d)
{
    switch (d) {
    case Dimension::time: return "ms";
    case Dimension::data: return "KB";
    case Dimension::rate: return "KB/ms";
    case Dimension::unit_delay: return "ms/KB";
    }
    return "";
}

namespace detail {

struct UnitEntry
{
    std::string_view symbol;
    Dimension dimension;
    double factor; // multiply to obtain the internal unit
};

inline constexpr std::array<UnitEntry, 22> unit_table{{
    {"us", Dimension::time, 1e-3},
    {"ms", Dimension::time, 1.0},
    {"s", Dimension::time, 1e3},
    {"sec", Dimension::time, 1e3},
    {"B", Dimension::data, 1e-3},
    {"KB", Dimension::data, 1.0},
    {"MB", Dimension::data, 1e3},
    {"GB", Dimension::data, 1e6},
    {"KB/ms", Dimension::rate, 1.0},
    {"KB/s", Dimension::rate, 1e-3},
    {"KB/sec", Dimension::rate, 1e-3},
    {"MB/s", Dimension::rate, 1.0},
    {"bps", Dimension::rate, 1.25e-7},
    {"Kbps", Dimension::rate, 1.25e-4},
    {"Mbps", Dimension::rate, 0.125},
    {"Gbps", Dimension::rate, 125.0},
    {"ms/KB", Dimension::unit_delay, 1.0},
    {"s/KB", Dimension::unit_delay, 1e3},
    {"sec/KB", Dimension::unit_delay, 1e3},
    {"us/KB", Dimension::unit_delay, 1e-3},
    {"ms/MB", Dimension::unit_delay, 1e-3},
    {"s/MB", Dimension::unit_delay, 1.0},
}};

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace detail

/// Conversion factor from \p symbol to the internal unit of \p d.
inline double factor(std::string_view symbol, Dimension d)
{
    for (const auto& e : detail::unit_table) {
        if (e.symbol == symbol) {
            if (e.dimension != d) {
                throw DomainError("unit '" + std::string(symbol) + "' is not a unit of "
                                  + std::string(internal_unit(d)));
            }
            return e.factor;
        }
    }
    throw DomainError("unknown unit '" + std::string(symbol) + "'");
}

/// Parses "<number> <unit>" (the space is optional) into the internal unit.
inline double parse(std::string_view text, Dimension d)
{
    text = detail::trim(text);
    double value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) {
        throw DomainError("'" + std::string(text) + "' does not start with a number");
    }
    std::string_view unit = detail::trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
    if (unit.empty()) {
        return value;
    }
    return value * factor(unit, d);
}

} // namespace fogmig::units

#endif // FOGMIG_UNITS_HPP
