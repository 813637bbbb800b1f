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
 * \file fogmig/core.hpp
 *
 * \brief Identifiers, slot index type and the error hierarchy shared by every
 *  fogmig module.
 */

#ifndef FOGMIG_CORE_HPP
#define FOGMIG_CORE_HPP

#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fogmig {

/// Dense index into one of the scenario tables, tagged so that a node index
/// cannot be passed where a VNF type index is expected.
template <typename Tag>
struct Id
{
    std::uint32_t value{0};

    constexpr Id() = default;
    constexpr explicit Id(std::uint32_t v) : value(v) {}
    constexpr explicit Id(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}
    constexpr explicit Id(int v) : value(static_cast<std::uint32_t>(v)) {}

    constexpr std::size_t index() const { return value; }

    friend constexpr auto operator<=>(const Id&, const Id&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Id& id) { return os << id.value; }
};

using VnfTypeId = Id<struct VnfTypeTag>;
using NodeId = Id<struct NodeTag>;
using UserId = Id<struct UserTag>;
using RequestId = Id<struct RequestTag>;

/// Index of an instance of one VNF type (the i of I_{f^k}).
using InstanceIndex = std::uint32_t;

/// Time-slot index; slot 0 is the initial placement.
using Slot = std::int64_t;

/// Base of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Scenario document does not follow the schema.
class SchemaError : public Error
{
public:
    SchemaError(const std::string& where, const std::string& what)
    : Error(where + ": " + what), where_(where)
    {
    }

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

/// A symbolic reference (VNF id, node id, user id) does not resolve.
class ReferenceError : public Error
{
public:
    using Error::Error;
};

/// A domain invariant is breached. The message names the invariant.
class InvariantError : public Error
{
public:
    using Error::Error;
};

/// Argument outside the domain of an operation (slot out of range, VNF not in
/// request, ...).
class DomainError : public Error
{
public:
    using Error::Error;
};

/// A quantity was requested before the event that defines it happened
/// (e.g. processing never completed within the simulated horizon).
class IncompleteError : public Error
{
public:
    using Error::Error;
};

/// Thrown by the harness when a planner emits a slot failing the constraints.
class FeasibilityAssertion : public Error
{
public:
    using Error::Error;
};

namespace detail {

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace detail

} // namespace fogmig

template <typename Tag>
struct std::hash<fogmig::Id<Tag>>
{
    std::size_t operator()(const fogmig::Id<Tag>& id) const noexcept
    {
        return std::hash<std::uint32_t>{}(id.value);
    }
};

#endif // FOGMIG_CORE_HPP
