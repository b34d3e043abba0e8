#pragma once

#include <string>

#include "aci/iterations.hpp"

namespace aci::cli {

/// Shortest decimal with 17 significant digits; reads back bit-exactly.
std::string format_double(double x);
double parse_double(const std::string& text);

/// Header: k,norm_w_tilde,norm_v_tilde,alpha,beta,diff_v,diff_w followed by
/// v_0..v_{n-1},w_0..w_{n-1}. Vector cells are empty unless vectors were
/// recorded. A final row k = K carries v_{K} and w_{K} with empty scalars.
std::string write_aci_trace_csv(const IterationTrace& trace);

/// Restores records, final_v and final_w. algorithm, s, terminated_by and
/// initial_v are not stored in the CSV and are left for the caller. Throws
/// ErrorKind::not_converged when the final row is missing and
/// ErrorKind::invalid_argument naming the offending column on schema errors.
IterationTrace read_aci_trace_csv(const std::string& text);

/// Header: k,residual_norm,a_norm_error,diff_y2 followed by y_0..y_{n-1}.
std::string write_cg_trace_csv(const CgResult& result);
/// Restores the trace; previous_y / final_y come from the last two rows when
/// vectors were recorded.
CgResult read_cg_trace_csv(const std::string& text);

}  // namespace aci::cli
