#pragma once

#include <cstdint>

#include "gemlab/rational.hpp"

namespace gemlab {

/// C(n, 2).
Rational choose2(std::uint64_t n);

/// Advantage bound for Psi against a random permutation of G^2, term for
/// term as stated:
///   (2qc^2 + 4 qf qc + 4 qg qc + 2qc^2 - 2qc) / |G| + 2 C(qc,2) (2/|G| + 1/|G|^2)
Rational psi_bound(std::uint64_t qc, std::uint64_t qf, std::uint64_t qg, std::uint64_t order);

/// The same bound in terms of q = qc + qf + qg total queries:
///   2 (3q^2 - 2q) / |G| + (q^2 - q) / |G|^2
Rational psi_bound_total_q(std::uint64_t q, std::uint64_t order);

/// min(1, 2st/|G|): probability that a uniform key is bad for s E/D pairs
/// and t P pairs.
Rational em_bad_key_bound(std::uint64_t s, std::uint64_t t, std::uint64_t order);

/// 2 qg qc / |G|: union bound on BadG(k) over uniform k.
Rational badg_bound(std::uint64_t qc, std::uint64_t qg, std::uint64_t order);

/// (qc^2 + 2 qf qc + 2 C(qc,2)) / |G|: union bound on Bad(k, g).
Rational bad_bound(std::uint64_t qc, std::uint64_t qf, std::uint64_t order);

/// C(qc,2) / |G|^2: bound on an inconsistent R~ cipher transcript, where
/// |G| is the order of the half group.
Rational inconsistency_bound(std::uint64_t qc, std::uint64_t order);

}  // namespace gemlab
