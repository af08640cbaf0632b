// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cassert>
#include <utility>
#include <variant>

namespace dogebridge {

template <typename E>
struct Failure {
    E error;
};

template <typename E>
Failure<E> fail(E error) { return Failure<E>{error}; }

/**
 * Value-or-error return for protocol operations. Rejections are ordinary
 * outcomes in this codebase (the contract ignores or refuses many calls), so
 * they travel as values rather than exceptions.
 */
template <typename T, typename E>
class [[nodiscard]] Result {
public:
    Result(T value) : data_(std::in_place_index<0>, std::move(value)) {}
    Result(Failure<E> f) : data_(std::in_place_index<1>, f.error) {}

    bool ok() const { return data_.index() == 0; }
    explicit operator bool() const { return ok(); }

    const T& value() const& { assert(ok()); return std::get<0>(data_); }
    T& value() & { assert(ok()); return std::get<0>(data_); }
    T&& value() && { assert(ok()); return std::get<0>(std::move(data_)); }
    const T& operator*() const& { return value(); }
    const T* operator->() const { return &value(); }

    E error() const { assert(!ok()); return std::get<1>(data_); }

private:
    std::variant<T, E> data_;
};

struct Unit {
    bool operator==(const Unit&) const = default;
};

template <typename E>
using Status = Result<Unit, E>;

} // namespace dogebridge
