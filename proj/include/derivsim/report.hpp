#pragma once

#include <string>

#include "derivsim/core.hpp"
#include "derivsim/mc.hpp"
#include "derivsim/options.hpp"
#include "derivsim/pool.hpp"

namespace derivsim::report {

struct EmptyGrid : DomainError {
    using DomainError::DomainError;
};

struct EmptyResult : DomainError {
    using DomainError::DomainError;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GridMetric { LiqProb, MedianRpnl };

// All emitters return the document as a string; CSV numbers use '.' decimal
// separators, no thousands separators, and fixed printf formatting so equal
// inputs always produce byte-identical output.

std::string price_path_csv(const paths::PricePath& path);
std::string perp_trace_csv(const mc::PathResult& result);
std::string cdp_trace_csv(const mc::PathResult& result);
std::string pool_ledger_csv(const pool::PoolLedger& ledger);

// Reference-table layout: one row per sigma, one column per leverage level.
// Liquidation probabilities are percentages rounded to 1 decimal; medians
// carry 2 decimals. Full precision lives in grid_json.
std::string grid_csv(const mc::GridResult& grid, GridMetric metric);
std::string grid_json(const mc::GridResult& grid);

std::string batch_json(const mc::ExperimentConfig& config, const mc::BatchStats& stats);
std::string tornado_json(const mc::TornadoResult& result);

// Settlement record for an expiring option.
std::string settlement_json(const options::OptionPosition& pos, double terminal_price);

// Cell-colored (sigma x L) matrix with per-cell numeric annotations matching
// the CSV rounding.
std::string render_heatmap(const mc::GridResult& grid, GridMetric metric);

// Horizontal impact bars in the result's order, with the baseline drawn as a
// vertical dashed line.
std::string render_tornado(const mc::TornadoResult& result);

void write_text_file(const std::string& file_path, const std::string& content);

}  // namespace derivsim::report
