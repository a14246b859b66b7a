#include <ttinherit/properties.hpp>

#include <cmath>
#include <span>
#include <string>

#include <ttinherit/errors.hpp>

namespace ttinherit {

namespace {

BoundCheck make_check(std::string label, double lhs, double rhs, bool exact) {
  BoundCheck c;
  c.label = std::move(label);
  c.lhs = lhs;
  c.rhs = rhs;
  c.exact = exact;
  c.slack = exact ? kExactSlack : kBoundSlack;
  c.satisfied = lhs <= rhs * (1.0 + c.slack);
  return c;
}

std::span<const std::size_t> modes(const TTTensor& t, std::size_t first, std::size_t last) {
  const auto& dims = t.shape().dims();
  return std::span<const std::size_t>(dims).subspan(first, last - first);
}

void check_unfolding(const TTTensor& t, std::size_t i) {
  if (i < 1 || i >= t.order()) {
    throw DomainError("unfolding index " + std::to_string(i) + " outside [1, " + std::to_string(t.order() - 1) +
                      "]");
  }
}

double sampled_pinv(const Matrix& basis, const IndexSet& rows, double fraction_num, double fraction_den,
                    double rank_tol) {
  const Matrix sub = select_rows(basis, rows);
  return std::sqrt(fraction_num / fraction_den) * linalg::pinv_spectral_norm(sub, rank_tol);
}

} // namespace

IncoherencePair incoherence(const linalg::ThinSVD& svd, std::uint64_t rows, std::uint64_t cols) {
  if (svd.rank() == 0) {
    throw RankError("incoherence of a rank-0 matrix");
  }
  const double r = static_cast<double>(svd.rank());
  const double w = linalg::row_two_inf_norm(svd.W);
  const double v = linalg::row_two_inf_norm(svd.V);
  return {static_cast<double>(rows) / r * w * w, static_cast<double>(cols) / r * v * v};
}

UnfoldingReport make_report(const linalg::ThinSVD& svd, std::size_t i, std::uint64_t rows, std::uint64_t cols) {
  return {i, svd.rank(), incoherence(svd, rows, cols), linalg::condition_number(svd), svd.sigma};
}

std::vector<UnfoldingReport> tt_incoherence(const TTTensor& t, double rank_tol) {
  std::vector<UnfoldingReport> out;
  const std::size_t d = t.order();
  for (std::size_t i = 1; i < d; ++i) {
    out.push_back(make_report(unfolding_svd(t, i, rank_tol), i, t.shape().numel(0, i), t.shape().numel(i, d)));
  }
  return out;
}

UnfoldingSpectra::UnfoldingSpectra(TTTensor t, double rank_tol) : tensor_(std::move(t)), rank_tol_(rank_tol) {
  const std::size_t d = tensor_.order();
  for (std::size_t i = 1; i < d; ++i) {
    rights_.push_back(ttinherit::right_interface(tensor_, i));
    svds_.push_back(linalg::factored_svd(left_interface(tensor_, i), rights_.back(), rank_tol_));
    reports_.push_back(make_report(svds_.back(), i, tensor_.shape().numel(0, i), tensor_.shape().numel(i, d)));
  }
}

double alpha_it(const UnfoldingSpectra& spectra, const IndexSet& rows_i, std::size_t i, std::size_t t) {
  const TTTensor& tensor = spectra.tensor();
  check_unfolding(tensor, i);
  const std::size_t k = t + i - 1;
  if (t < 1 || k >= tensor.order()) {
    throw DomainError("alpha_it: t = " + std::to_string(t) + " outside [1, " + std::to_string(tensor.order() - i) +
                      "]");
  }
  const double prefix = static_cast<double>(tensor.shape().numel(0, i));
  if (rows_i.domain() != tensor.shape().numel(0, i)) {
    throw DomainError("alpha_it: I_i must be a subset of [n_1...n_i]");
  }
  const IndexSet rows = kron_extend(rows_i, modes(tensor, i, k));
  return sampled_pinv(spectra.svd(k).W, rows, static_cast<double>(rows_i.size()), prefix, spectra.rank_tol());
}

double alpha_it(const TTTensor& t, const IndexSet& rows_i, std::size_t i, std::size_t t_off, double rank_tol) {
  check_unfolding(t, i);
  const std::size_t k = t_off + i - 1;
  if (t_off < 1 || k >= t.order()) {
    throw DomainError("alpha_it: t outside [1, d-i]");
  }
  if (rows_i.domain() != t.shape().numel(0, i)) {
    throw DomainError("alpha_it: I_i must be a subset of [n_1...n_i]");
  }
  const IndexSet rows = kron_extend(rows_i, modes(t, i, k));
  return sampled_pinv(unfolding_svd(t, k, rank_tol).W, rows, static_cast<double>(rows_i.size()),
                      static_cast<double>(t.shape().numel(0, i)), rank_tol);
}

double alpha_i(const UnfoldingSpectra& spectra, const IndexSet& prev_rows, std::size_t i) {
  const TTTensor& tensor = spectra.tensor();
  check_unfolding(tensor, i);
  if (i == 1) {
    return kAlphaOne;
  }
  if (prev_rows.domain() != tensor.shape().numel(0, i - 1)) {
    throw DomainError("alpha_i: I_{i-1} must be a subset of [n_1...n_{i-1}]");
  }
  const IndexSet rows = kron_extend(prev_rows, tensor.shape()[i - 1]);
  return sampled_pinv(spectra.svd(i).W, rows, static_cast<double>(prev_rows.size()),
                      static_cast<double>(prev_rows.domain()), spectra.rank_tol());
}

double alpha_i(const TTTensor& t, const IndexSet& prev_rows, std::size_t i, double rank_tol) {
  check_unfolding(t, i);
  if (i == 1) {
    return kAlphaOne;
  }
  if (prev_rows.domain() != t.shape().numel(0, i - 1)) {
    throw DomainError("alpha_i: I_{i-1} must be a subset of [n_1...n_{i-1}]");
  }
  const IndexSet rows = kron_extend(prev_rows, t.shape()[i - 1]);
  return sampled_pinv(unfolding_svd(t, i, rank_tol).W, rows, static_cast<double>(prev_rows.size()),
                      static_cast<double>(prev_rows.domain()), rank_tol);
}

double beta_i(const UnfoldingSpectra& spectra, const IndexSet& cols_i, std::size_t i) {
  const TTTensor& tensor = spectra.tensor();
  check_unfolding(tensor, i);
  if (cols_i.domain() != tensor.shape().numel(i, tensor.order())) {
    throw DomainError("beta_i: J_i must be a subset of [n_{i+1}...n_d]");
  }
  return sampled_pinv(spectra.svd(i).V, cols_i, static_cast<double>(cols_i.size()),
                      static_cast<double>(cols_i.domain()), spectra.rank_tol());
}

double beta_i(const TTTensor& t, const IndexSet& cols_i, std::size_t i, double rank_tol) {
  check_unfolding(t, i);
  if (cols_i.domain() != t.shape().numel(i, t.order())) {
    throw DomainError("beta_i: J_i must be a subset of [n_{i+1}...n_d]");
  }
  return sampled_pinv(unfolding_svd(t, i, rank_tol).V, cols_i, static_cast<double>(cols_i.size()),
                      static_cast<double>(cols_i.domain()), rank_tol);
}

RankPreservationReport check_rank_preservation(const TTTensor& t, const IndexSet& rows, double rank_tol) {
  RankPreservationReport report;
  report.expected = tt_rank_numerical(t, rank_tol);
  try {
    report.sampled_rank =
        linalg::factored_svd(left_interface_rows(t, 1, rows), right_interface(t, 1), rank_tol).rank();
  } catch (const RankError&) {
    report.sampled_rank = 0;
  }
  report.hypothesis_holds = report.sampled_rank == report.expected.front();
  if (!report.hypothesis_holds) {
    return report;
  }
  report.observed = tt_rank_numerical(row_restrict(t, 1, rows), rank_tol);
  report.pass = report.observed == report.expected;
  return report;
}

const char* to_string(RecordKind kind) {
  switch (kind) {
  case RecordKind::alpha_it:
    return "alpha_it";
  case RecordKind::alpha_i:
    return "alpha_i";
  case RecordKind::beta_i:
    return "beta_i";
  }
  return "unknown";
}

bool InheritanceRecord::satisfied() const {
  if (!hypothesis_holds) {
    return false;
  }
  for (const BoundCheck& c : checks) {
    if (!c.satisfied) {
      return false;
    }
  }
  return true;
}

bool InheritanceRecord::violated() const { return hypothesis_holds && !satisfied(); }

void require_nested(const TTTensor& t, const std::vector<IndexSet>& nested_rows) {
  const std::size_t d = t.order();
  if (nested_rows.size() != d - 1) {
    throw PreconditionError("expected " + std::to_string(d - 1) + " row sets, got " +
                            std::to_string(nested_rows.size()));
  }
  for (std::size_t i = 1; i < d; ++i) {
    const IndexSet& level = nested_rows[i - 1];
    if (level.domain() != t.shape().numel(0, i)) {
      throw PreconditionError("I_" + std::to_string(i) + " has domain " + std::to_string(level.domain()) +
                              ", expected n_1...n_" + std::to_string(i));
    }
    if (level.empty()) {
      throw PreconditionError("I_" + std::to_string(i) + " is empty");
    }
    if (i == 1) {
      continue;
    }
    const IndexSet& prev = nested_rows[i - 2];
    for (const std::uint64_t x : level) {
      if (!prev.contains((x - 1) % prev.domain() + 1)) {
        throw PreconditionError("I_" + std::to_string(i) + " is not contained in I_" + std::to_string(i - 1) +
                                " (x) [n_" + std::to_string(i) + "]");
      }
    }
  }
}

IndexSet c_rows(const TTTensor& t, const std::vector<IndexSet>& nested_rows, std::size_t i) {
  check_unfolding(t, i);
  const IndexSet prev = i == 1 ? IndexSet({1}, 1) : nested_rows.at(i - 2);
  return kron_extend(prev, t.shape()[i - 1]);
}

std::vector<InheritanceRecord> check_theorem_R_bounds(const UnfoldingSpectra& spectra,
                                                      const std::vector<IndexSet>& nested_rows) {
  const TTTensor& tensor = spectra.tensor();
  const double tol = spectra.rank_tol();
  require_nested(tensor, nested_rows);
  const std::size_t d = tensor.order();
  std::vector<InheritanceRecord> records;
  for (std::size_t i = 1; i < d; ++i) {
    const IndexSet& rows = nested_rows[i - 1];
    const TTTensor sub = row_restrict(tensor, i, rows);

    // rank((R_i)_<1>) = r_i is the hypothesis shared by every t at this level.
    std::string level_note;
    try {
      const std::size_t r1 = unfolding_svd(sub, 1, tol).rank();
      if (r1 != tensor.rank(i)) {
        level_note = "rank((R_" + std::to_string(i) + ")_<1>) = " + std::to_string(r1) + " != r_" +
                     std::to_string(i);
      }
    } catch (const RankError&) {
      level_note = "(R_" + std::to_string(i) + ")_<1> is numerically zero";
    }

    for (std::size_t t = 1; t <= d - i; ++t) {
      const std::size_t k = t + i - 1;
      InheritanceRecord rec;
      rec.kind = RecordKind::alpha_it;
      rec.i = i;
      rec.t = t;
      rec.reference = spectra.report(k);
      rec.rank = rec.reference.rank;
      rec.note = level_note;
      if (!level_note.empty()) {
        records.push_back(std::move(rec));
        continue;
      }
      try {
        rec.alpha = alpha_it(spectra, rows, i, t);
        const linalg::ThinSVD s = unfolding_svd(sub, t, tol);
        if (s.rank() != rec.rank) {
          rec.note = "numerical rank of (R_i)_<t> differs from r_{t+i-1}";
          records.push_back(std::move(rec));
          continue;
        }
        const std::uint64_t m = rows.size() * tensor.shape().numel(i, k);
        const std::uint64_t n = tensor.shape().numel(k, d);
        rec.actual_mu = incoherence(s, m, n);
        rec.actual_kappa = linalg::condition_number(s);
      } catch (const SingularityError& e) {
        rec.note = e.what();
        records.push_back(std::move(rec));
        continue;
      } catch (const RankError& e) {
        rec.note = e.what();
        records.push_back(std::move(rec));
        continue;
      }
      rec.hypothesis_holds = true;
      const UnfoldingReport& ref = rec.reference;
      const double a = rec.alpha;
      const double r = static_cast<double>(rec.rank);
      rec.checks.push_back(make_check("mu1", rec.actual_mu.mu1, a * a * ref.kappa * ref.kappa * ref.mu.mu1, false));
      rec.checks.push_back(make_check("mu2", rec.actual_mu.mu2, ref.mu.mu2, true));
      rec.checks.push_back(make_check("kappa", rec.actual_kappa, a * std::sqrt(ref.mu.mu1 * r) * ref.kappa, false));
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::vector<InheritanceRecord> check_theorem_R_bounds(const TTTensor& t, const std::vector<IndexSet>& nested_rows,
                                                      double rank_tol) {
  return check_theorem_R_bounds(UnfoldingSpectra(t, rank_tol), nested_rows);
}

std::vector<InheritanceRecord> check_theorem_C_bounds(const UnfoldingSpectra& spectra,
                                                      const std::vector<IndexSet>& nested_rows,
                                                      const std::vector<IndexSet>& cols) {
  const TTTensor& tensor = spectra.tensor();
  const double tol = spectra.rank_tol();
  require_nested(tensor, nested_rows);
  const std::size_t d = tensor.order();
  if (cols.size() != d - 1) {
    throw PreconditionError("expected " + std::to_string(d - 1) + " column sets, got " +
                            std::to_string(cols.size()));
  }
  for (std::size_t i = 1; i < d; ++i) {
    if (cols[i - 1].domain() != tensor.shape().numel(i, d) || cols[i - 1].empty()) {
      throw PreconditionError("J_" + std::to_string(i) + " must be a non-empty subset of [n_" +
                              std::to_string(i + 1) + "...n_d]");
    }
  }

  std::vector<InheritanceRecord> records;
  for (std::size_t i = 1; i < d; ++i) {
    InheritanceRecord rec;
    rec.kind = RecordKind::beta_i;
    rec.i = i;
    rec.reference = spectra.report(i);
    rec.rank = rec.reference.rank;
    const IndexSet rows = c_rows(tensor, nested_rows, i);
    const IndexSet& js = cols[i - 1];
    try {
      if (i >= 2) {
        // alpha_i presupposes the previous level kept its rank.
        const std::size_t prev_rank =
            linalg::factored_svd(left_interface_rows(tensor, i - 1, nested_rows[i - 2]),
                                 spectra.right_interface(i - 1), tol)
                .rank();
        if (prev_rank != tensor.rank(i - 1)) {
          rec.note = "rank((R_" + std::to_string(i - 1) + ")_<1>) != r_" + std::to_string(i - 1);
          records.push_back(std::move(rec));
          continue;
        }
        rec.alpha = alpha_i(spectra, nested_rows[i - 2], i);
      } else {
        rec.alpha = kAlphaOne;
      }
      rec.beta = beta_i(spectra, js, i);
      const linalg::ThinSVD s =
          linalg::factored_svd(left_interface_rows(tensor, i, rows), right_interface_rows(tensor, i, js), tol);
      if (s.rank() != rec.rank) {
        rec.note = "rank(C_" + std::to_string(i) + ") = " + std::to_string(s.rank()) + " != r_" + std::to_string(i);
        records.push_back(std::move(rec));
        continue;
      }
      rec.actual_mu = incoherence(s, rows.size(), js.size());
      rec.actual_kappa = linalg::condition_number(s);
    } catch (const SingularityError& e) {
      rec.note = e.what();
      records.push_back(std::move(rec));
      continue;
    } catch (const RankError& e) {
      rec.note = e.what();
      records.push_back(std::move(rec));
      continue;
    }
    rec.hypothesis_holds = true;
    const UnfoldingReport& ref = rec.reference;
    const double a = rec.alpha;
    const double b = rec.beta;
    const double r = static_cast<double>(rec.rank);
    const double k2 = ref.kappa * ref.kappa;
    if (i == 1) {
      rec.checks.push_back(make_check("mu1", rec.actual_mu.mu1, ref.mu.mu1, true));
      rec.checks.push_back(make_check("mu2", rec.actual_mu.mu2, b * b * k2 * ref.mu.mu2, false));
      rec.checks.push_back(make_check("kappa", rec.actual_kappa, b * std::sqrt(ref.mu.mu2 * r) * ref.kappa, false));
    } else {
      rec.checks.push_back(
          make_check("mu1", rec.actual_mu.mu1, a * a * b * b * k2 * r * ref.mu.mu1 * ref.mu.mu2, false));
      rec.checks.push_back(make_check("mu2", rec.actual_mu.mu2, b * b * k2 * ref.mu.mu2, false));
      rec.checks.push_back(
          make_check("kappa", rec.actual_kappa, a * b * std::sqrt(ref.mu.mu1 * ref.mu.mu2) * r * ref.kappa, false));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<InheritanceRecord> check_theorem_C_bounds(const TTTensor& t, const std::vector<IndexSet>& nested_rows,
                                                      const std::vector<IndexSet>& cols, double rank_tol) {
  return check_theorem_C_bounds(UnfoldingSpectra(t, rank_tol), nested_rows, cols);
}

} // namespace ttinherit
