#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "grnhoare/assertion.hpp"
#include "grnhoare/network.hpp"
#include "grnhoare/oracle.hpp"
#include "grnhoare/program.hpp"
#include "grnhoare/simplify.hpp"
#include "grnhoare/wp.hpp"

namespace grnhoare {

inline constexpr std::uint64_t kDefaultValuationCap = std::uint64_t{1} << 24;

/// All valuations respecting the network's pinned parameters, in
/// lexicographic order of the canonical parameter order (first symbol varies
/// slowest). Random access by index.
class ValuationSpace {
 public:
  explicit ValuationSpace(const Network& net, std::uint64_t cap = kDefaultValuationCap)
      : base_{std::vector<int>(net.param_count(), 0)} {
    for (std::size_t p = 0; p < net.param_count(); ++p) {
      if (auto fixed = net.fixed_param(p)) {
        base_.values[p] = *fixed;
        continue;
      }
      const auto radix = static_cast<std::uint64_t>(net.variable(net.param(p).variable).bound + 1);
      if (size_ > cap / radix) {
        throw Error(ErrorCode::SizeLimitExceeded,
                    "more than " + std::to_string(cap) + " valuations to enumerate");
      }
      size_ *= radix;
      free_.push_back(p);
      radix_.push_back(radix);
    }
  }

  std::uint64_t size() const { return size_; }
  const std::vector<std::size_t>& free_params() const { return free_; }

  Valuation at(std::uint64_t index) const {
    Valuation k = base_;
    for (std::size_t j = free_.size(); j-- > 0;) {
      k.values[free_[j]] = static_cast<int>(index % radix_[j]);
      index /= radix_[j];
    }
    return k;
  }

 private:
  Valuation base_;
  std::vector<std::size_t> free_;
  std::vector<std::uint64_t> radix_;
  std::uint64_t size_ = 1;
};

inline std::vector<Valuation> enumerate_valuations(const Network& net,
                                                   std::uint64_t cap = kDefaultValuationCap) {
  ValuationSpace space(net, cap);
  std::vector<Valuation> out;
  out.reserve(space.size());
  for (std::uint64_t i = 0; i < space.size(); ++i) out.push_back(space.at(i));
  return out;
}

enum class SolveMode { Oracle, Wp };

inline const char* mode_name(SolveMode m) { return m == SolveMode::Oracle ? "oracle" : "wp"; }

struct SolveOptions {
  SolveMode mode = SolveMode::Wp;
  OracleLimits limits;
  bool simplify = false;
  unsigned jobs = 1;
  std::uint64_t max_valuations = kDefaultValuationCap;
};

struct SolveReport {
  SolveMode mode = SolveMode::Wp;
  std::uint64_t total = 0;
  std::vector<Valuation> consistent;
  std::vector<Valuation> undetermined;
  std::vector<std::size_t> free_params;
  double elapsed_ms = 0;
};

enum class Verdict : std::uint8_t { Consistent, Inconsistent, Undetermined };

namespace detail {

/// Runs `check(index)` for every index in [0, n) on up to `jobs` threads and
/// returns the verdicts in index order.
template <typename Check>
std::vector<Verdict> parallel_verdicts(std::uint64_t n, unsigned jobs, Check check) {
  std::vector<Verdict> out(n, Verdict::Inconsistent);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::uint64_t>(n, 1))));
  if (jobs == 1) {
    for (std::uint64_t i = 0; i < n; ++i) out[i] = check(i);
    return out;
  }
  std::atomic<std::uint64_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      try {
        for (std::uint64_t i; (i = cursor.fetch_add(1)) < n;) out[i] = check(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        cursor = n;
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace detail

/// Decides the triple for one valuation in wp mode: the final implication and
/// every verification condition must be valid.
inline bool wp_consistent(const Network& net, const DerivedTriple& d, const Valuation& k) {
  if (!check_validity(net, *d.final_implication, k)) return false;
  for (const auto& vc : d.outcome.vcs) {
    if (!check_validity(net, *vc.formula, k)) return false;
  }
  return true;
}

inline SolveReport solve_triple(const Network& net, const HoareTriple& t, const SolveOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  ValuationSpace space(net, opts.max_valuations);
  SolveReport report;
  report.mode = opts.mode;
  report.total = space.size();
  report.free_params = space.free_params();

  std::vector<Verdict> verdicts;
  if (opts.mode == SolveMode::Wp) {
    const DerivedTriple d = derive_triple(net, t, {opts.simplify});
    verdicts = detail::parallel_verdicts(space.size(), opts.jobs, [&](std::uint64_t i) {
      return wp_consistent(net, d, space.at(i)) ? Verdict::Consistent : Verdict::Inconsistent;
    });
  } else {
    verdicts = detail::parallel_verdicts(space.size(), opts.jobs, [&](std::uint64_t i) {
      StateGraph g(net, space.at(i));
      switch (triple_holds(g, t, opts.limits).status) {
        case TripleVerdict::Status::Holds: return Verdict::Consistent;
        case TripleVerdict::Status::Fails: return Verdict::Inconsistent;
        case TripleVerdict::Status::Undetermined: return Verdict::Undetermined;
      }
      return Verdict::Inconsistent;
    });
  }
  for (std::uint64_t i = 0; i < verdicts.size(); ++i) {
    if (verdicts[i] == Verdict::Consistent) report.consistent.push_back(space.at(i));
    if (verdicts[i] == Verdict::Undetermined) report.undetermined.push_back(space.at(i));
  }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

struct Disagreement {
  Valuation valuation;
  State state;
  bool oracle_says;  // some E from this state satisfies post
  bool wp_says;      // state satisfies the computed precondition
};

/// Compares, for every valuation and every state, the oracle's verdict with
/// the computed weakest precondition. Loop-free programs only.
inline std::vector<Disagreement> cross_check(const Network& net, const HoareTriple& t,
                                             OracleLimits limits = {},
                                             std::uint64_t max_valuations = kDefaultValuationCap) {
  if (contains_while(*t.program)) {
    throw Error(ErrorCode::WhileNotSupportedForCrossCheck,
                "cross-check requires a loop-free program");
  }
  const ProofOutcome outcome = wp(net, *t.program, t.post);
  ValuationSpace space(net, max_valuations);
  std::vector<Disagreement> out;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    StateGraph g(net, space.at(i));
    Oracle oracle(g, limits);
    for (StateIndex s = 0; s < g.state_count(); ++s) {
      const RelationResult r = oracle.rel(*t.program, s);
      const bool by_oracle =
          r.status == RelationResult::Status::Sets && some_set_satisfies(g, r, *t.post);
      const bool by_wp = g.satisfies(s, *outcome.wp);
      if (by_oracle != by_wp) out.push_back({g.valuation(), g.state(s), by_oracle, by_wp});
    }
  }
  return out;
}

/// An assertion over parameter symbols satisfied by exactly the consistent
/// valuations (within the enumerated space): the symbols constant across the
/// set, conjoined with the residual valuations of the others unless those
/// form the full product.
inline AssertionPtr describe_solution_set(const Network& net, const SolveReport& report) {
  if (report.consistent.empty()) return truth(false);
  if (report.consistent.size() == report.total && report.undetermined.empty()) return truth(true);

  std::vector<std::size_t> fixed, varying;
  for (std::size_t p : report.free_params) {
    const int first = report.consistent.front()[p];
    const bool same = std::all_of(report.consistent.begin(), report.consistent.end(),
                                  [&](const Valuation& k) { return k[p] == first; });
    (same ? fixed : varying).push_back(p);
  }
  std::vector<AssertionPtr> parts;
  for (std::size_t p : fixed) {
    parts.push_back(atom(Cmp::Eq, param_term(static_cast<int>(p)),
                         constant(report.consistent.front()[p])));
  }
  std::uint64_t full = 1;
  for (std::size_t p : varying) {
    full *= static_cast<std::uint64_t>(net.variable(net.param(p).variable).bound + 1);
  }
  if (report.consistent.size() != full) {
    std::vector<AssertionPtr> rows;
    for (const Valuation& k : report.consistent) {
      std::vector<AssertionPtr> row;
      for (std::size_t p : varying) {
        row.push_back(atom(Cmp::Eq, param_term(static_cast<int>(p)), constant(k[p])));
      }
      rows.push_back(conj(std::move(row)));
    }
    parts.push_back(disj(std::move(rows)));
  }
  return conj(std::move(parts));
}

}  // namespace grnhoare
