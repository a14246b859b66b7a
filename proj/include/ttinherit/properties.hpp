#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <ttinherit/linalg.hpp>
#include <ttinherit/multiindex.hpp>
#include <ttinherit/tt.hpp>

namespace ttinherit {

/// Tightest constants {mu1, mu2} with ||W||_{2,inf}^2 = mu1 r / m and ||V||_{2,inf}^2 = mu2 r / n.
struct IncoherencePair {
  double mu1 = 0.0;
  double mu2 = 0.0;
};

IncoherencePair incoherence(const linalg::ThinSVD& svd, std::uint64_t rows, std::uint64_t cols);

/// Incoherence, conditioning and spectrum of one unfolding T_<i>.
struct UnfoldingReport {
  std::size_t i = 0;
  std::size_t rank = 0;
  IncoherencePair mu;
  double kappa = 1.0;
  linalg::Vector sigma;
};

UnfoldingReport make_report(const linalg::ThinSVD& svd, std::size_t i, std::uint64_t rows, std::uint64_t cols);

/// Reports for i = 1..d-1 via the structured unfolding SVD.
std::vector<UnfoldingReport> tt_incoherence(const TTTensor& t, double rank_tol = linalg::kDefaultRankTol);

/// SVDs and right interface factors of every unfolding of one tensor, computed
/// once and shared by all parameter and bound evaluations on that tensor.
class UnfoldingSpectra {
public:
  explicit UnfoldingSpectra(TTTensor t, double rank_tol = linalg::kDefaultRankTol);

  [[nodiscard]] const TTTensor& tensor() const noexcept { return tensor_; }
  [[nodiscard]] double rank_tol() const noexcept { return rank_tol_; }
  /// 1-based unfolding index.
  [[nodiscard]] const linalg::ThinSVD& svd(std::size_t i) const { return svds_.at(i - 1); }
  [[nodiscard]] const UnfoldingReport& report(std::size_t i) const { return reports_.at(i - 1); }
  [[nodiscard]] const Matrix& right_interface(std::size_t i) const { return rights_.at(i - 1); }
  [[nodiscard]] const std::vector<UnfoldingReport>& reports() const noexcept { return reports_; }

private:
  TTTensor tensor_;
  double rank_tol_;
  std::vector<linalg::ThinSVD> svds_;
  std::vector<UnfoldingReport> reports_;
  std::vector<Matrix> rights_;
};

/// alpha_{i,t} = sqrt(|I_i| / (n_1...n_i)) * ||W_{T<k>}(I_i (x) [n_{i+1}] (x) ... (x) [n_k], :)^+||_2
/// with k = t + i - 1. Throws SingularityError if the subsampled rows lose rank.
double alpha_it(const UnfoldingSpectra& spectra, const IndexSet& rows_i, std::size_t i, std::size_t t);
double alpha_it(const TTTensor& t, const IndexSet& rows_i, std::size_t i, std::size_t t_off,
                double rank_tol = linalg::kDefaultRankTol);

/// alpha_1 is fixed to this value.
inline constexpr double kAlphaOne = 1.0;

/// alpha_i = sqrt(|I_{i-1}| / (n_1...n_{i-1})) * ||W_{T<i>}(I_{i-1} (x) [n_i], :)^+||_2 for i >= 2;
/// kAlphaOne for i = 1 (prev_rows is ignored).
double alpha_i(const UnfoldingSpectra& spectra, const IndexSet& prev_rows, std::size_t i);
double alpha_i(const TTTensor& t, const IndexSet& prev_rows, std::size_t i,
               double rank_tol = linalg::kDefaultRankTol);

/// beta_i = sqrt(|J_i| / (n_{i+1}...n_d)) * ||V_{T<i>}(J_i, :)^+||_2.
double beta_i(const UnfoldingSpectra& spectra, const IndexSet& cols_i, std::size_t i);
double beta_i(const TTTensor& t, const IndexSet& cols_i, std::size_t i, double rank_tol = linalg::kDefaultRankTol);

struct RankPreservationReport {
  std::size_t sampled_rank = 0;          ///< rank(T_<1>(I, :))
  bool hypothesis_holds = false;         ///< sampled_rank == r_1
  std::vector<std::size_t> expected;     ///< TT-rank of the full tensor
  std::vector<std::size_t> observed;     ///< TT-rank of T(I, :, ..., :); empty if hypothesis fails
  bool pass = false;
};

/// Samples mode 1 with I and checks that the full TT-rank survives whenever r_1 does.
RankPreservationReport check_rank_preservation(const TTTensor& t, const IndexSet& rows,
                                               double rank_tol = linalg::kDefaultRankTol);

/// Slack on bounds carrying an alpha or beta factor.
inline constexpr double kBoundSlack = 1e-8;
/// Slack on the bounds with no sampling factor (equalities in exact arithmetic).
inline constexpr double kExactSlack = 1e-10;

struct BoundCheck {
  std::string label; ///< "mu1", "mu2" or "kappa"
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = kBoundSlack;
  bool exact = false; ///< no alpha/beta factor on the right-hand side
  bool satisfied = false;
};

enum class RecordKind { alpha_it, alpha_i, beta_i };

const char* to_string(RecordKind kind);

/// One inheritance check: the sampled object's actual incoherence and
/// conditioning against the bound built from the full unfolding.
struct InheritanceRecord {
  RecordKind kind = RecordKind::alpha_it;
  std::size_t i = 0;
  std::size_t t = 0; ///< only for alpha_it
  double alpha = 1.0;
  double beta = 1.0;
  std::size_t rank = 0;        ///< r of the reference unfolding
  UnfoldingReport reference;   ///< T_<k> for the bound's right-hand side
  IncoherencePair actual_mu;   ///< of the sampled matrix
  double actual_kappa = 0.0;
  bool hypothesis_holds = false;
  std::string note;            ///< why the hypothesis failed, if it did
  std::vector<BoundCheck> checks;

  /// alpha_{i,t} for R records, beta_i for C records.
  [[nodiscard]] double value() const { return kind == RecordKind::beta_i ? beta : alpha; }
  /// True when the hypothesis holds and every check passes.
  [[nodiscard]] bool satisfied() const;
  /// True when the hypothesis holds and some check fails.
  [[nodiscard]] bool violated() const;
};

/// Row sets I_1..I_{d-1} must satisfy I_1 within [n_1] and I_i within I_{i-1} (x) [n_i].
/// Throws PreconditionError naming the first offending level.
void require_nested(const TTTensor& t, const std::vector<IndexSet>& nested_rows);

/// For every i in [d-1], t in [d-i]: checks the sampled subtensor R_i = row_restrict(T, i, I_i)
/// unfolded at t against the row-sampling bounds with alpha_{i,t}. Records ordered by (i, t).
std::vector<InheritanceRecord> check_theorem_R_bounds(const UnfoldingSpectra& spectra,
                                                      const std::vector<IndexSet>& nested_rows);
std::vector<InheritanceRecord> check_theorem_R_bounds(const TTTensor& t, const std::vector<IndexSet>& nested_rows,
                                                      double rank_tol = linalg::kDefaultRankTol);

/// For every i in [d-1]: checks C_i = T_<i>(I_{i-1} (x) [n_i], J_i) against the
/// column-sampling bounds with alpha_i and beta_i. Records ordered by i.
std::vector<InheritanceRecord> check_theorem_C_bounds(const UnfoldingSpectra& spectra,
                                                      const std::vector<IndexSet>& nested_rows,
                                                      const std::vector<IndexSet>& cols);
std::vector<InheritanceRecord> check_theorem_C_bounds(const TTTensor& t, const std::vector<IndexSet>& nested_rows,
                                                      const std::vector<IndexSet>& cols,
                                                      double rank_tol = linalg::kDefaultRankTol);

/// Row set of C_i: I_{i-1} (x) [n_i], with I_0 = {1}.
IndexSet c_rows(const TTTensor& t, const std::vector<IndexSet>& nested_rows, std::size_t i);

} // namespace ttinherit
