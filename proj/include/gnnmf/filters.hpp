#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "gnnmf/graph.hpp"

namespace gnnmf {

/// The four graph filters G(A).
///   SymNorm    D~^{-1/2} (A + I) D~^{-1/2}, D~ the degree matrix of A + I
///   RandomWalk D^{-1} A + I, rows of isolated nodes in D^{-1} A are zero
///   MeanAgg    D~^{-1} (A + I)
///   SumAgg     A + I
enum class FilterKind { SymNorm, RandomWalk, MeanAgg, SumAgg };

inline constexpr FilterKind kAllFilters[] = {
    FilterKind::SymNorm, FilterKind::RandomWalk, FilterKind::MeanAgg,
    FilterKind::SumAgg};

std::string_view filter_name(FilterKind kind);  // "sym-norm", ...
FilterKind parse_filter(std::string_view name);  // throws std::invalid_argument

Matrix apply_filter(FilterKind kind, const GraphSample& sample);

// Max absolute row sum.
double inf_norm(const Matrix& m);
double fro_norm(const Matrix& m);

/// Largest singular value by power iteration on M^T M.
///
/// Stops when the Rayleigh-quotient estimate of sigma^2 changes by less than
/// `tol` relative, or after `max_iter` iterations.
double spectral_norm(const Matrix& m, double tol = 1e-12, int max_iter = 10000);

// Number of singular values strictly above rel_tol * sigma_max.
int numerical_rank(const Matrix& m, double rel_tol = 1e-8);

struct FilterNormReport {
  FilterKind kind = FilterKind::SymNorm;
  double inf_norm_max = 0.0;
  double fro_norm_max = 0.0;
  double g_max = 0.0;  // min(inf_norm_max, fro_norm_max)
  int rank_max = 0;
  std::optional<double> inf_bound;
  std::optional<double> fro_bound;
};

FilterNormReport g_max(const GraphDataset& dataset, FilterKind kind,
                       double rank_tol = 1e-8);

// Closed-form bound on max ||G(A)||_inf given the dataset's degree range.
std::optional<double> theoretical_inf_bound(FilterKind kind, int d_max, int d_min);

// Closed-form bound on max ||G(A)||_F given the maximal filter rank.
std::optional<double> theoretical_fro_bound(FilterKind kind, int rank_max);

}  // namespace gnnmf
