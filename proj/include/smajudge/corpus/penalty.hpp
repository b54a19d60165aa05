// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_CORPUS_PENALTY_HPP
#define SMAJUDGE_CORPUS_PENALTY_HPP

#include <array>
#include <cstdint>
#include <string>

#include "smajudge/numerics/error.hpp"

namespace smajudge {

/// Number of penalty-term classes.
inline constexpr std::size_t kPenaltyIntervals = 11;

/// A sentence as written in a judgment: a month count or a special outcome.
struct PenaltyTerm {
    enum class Kind { months, none, death_or_life };

    Kind kind = Kind::none;
    std::int64_t months = 0;

    static PenaltyTerm of_months(std::int64_t m) { return {Kind::months, m}; }
    static PenaltyTerm no_penalty() { return {Kind::none, 0}; }
    static PenaltyTerm death_or_life() { return {Kind::death_or_life, 0}; }

    friend bool operator==(const PenaltyTerm&, const PenaltyTerm&) = default;
};

/// Maps a sentence to its 1-based interval index.
///
///   1 no penalty          5  13..35 months     9  108..120 months
///   2 0..6 months         6  36..59 months     10 more than 120 months
///   3 7..9 months         7  60..83 months     11 death or life imprisonment
///   4 10..12 months       8  84..107 months
///
/// Year-labelled rows are closed on the left at the first month of the
/// stated year and extend up to the next row, so every month count maps.
inline int penalty_to_interval(const PenaltyTerm& term) {
    switch (term.kind) {
        case PenaltyTerm::Kind::none:
            return 1;
        case PenaltyTerm::Kind::death_or_life:
            return 11;
        case PenaltyTerm::Kind::months:
            break;
    }
    const std::int64_t m = term.months;
    if (m < 0) throw DataError("penalty term cannot be negative: " + std::to_string(m) + " months");
    if (m <= 6) return 2;
    if (m <= 9) return 3;
    if (m <= 12) return 4;
    if (m < 36) return 5;
    if (m < 60) return 6;
    if (m < 84) return 7;
    if (m < 108) return 8;
    if (m <= 120) return 9;
    return 10;
}

/// A sentence that falls in the given interval; used by the generator.
inline PenaltyTerm representative_term(int interval) {
    static constexpr std::array<std::int64_t, 12> months = {0, 0, 3, 8, 11, 24, 48, 72, 96, 114, 150, 0};
    if (interval < 1 || interval > 11) throw DataError("penalty interval out of range: " + std::to_string(interval));
    if (interval == 1) return PenaltyTerm::no_penalty();
    if (interval == 11) return PenaltyTerm::death_or_life();
    return PenaltyTerm::of_months(months[static_cast<std::size_t>(interval)]);
}

}  // namespace smajudge

#endif  // SMAJUDGE_CORPUS_PENALTY_HPP
