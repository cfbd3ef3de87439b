//! Central tolerance registry. Certificate checks rely on these being
//! consistent across modules; do not scatter ad-hoc constants.

/// Discrete support-function condition: edge lengths may dip this far below 0.
pub const VALIDITY: f64 = 1e-9;
/// Exact-arithmetic identities (grid closure, unit norms, adjoint identities).
pub const EXACT: f64 = 1e-12;
/// Closure of a measure: |sum w_i u_i| <= CLOSURE_REL * sum w_i.
pub const CLOSURE_REL: f64 = 1e-9;
/// Reconstruction round trips.
pub const ROUND_TRIP: f64 = 1e-9;
/// Optimality certificates (residual and contact violation) pass below this.
pub const CERTIFICATE: f64 = 1e-7;
/// An index is in contact when |h_i - h0_i| <= CONTACT_REL * (1 + |h0_i|).
pub const CONTACT_REL: f64 = 1e-6;
/// Frank-Wolfe stopping gap, relative to max(1, sqrt(V)).
pub const FW_GAP_REL: f64 = 1e-9;
/// Frank-Wolfe iteration cap.
pub const FW_MAX_ITERS: usize = 20_000;
/// Pareto dominance comparisons.
pub const PARETO: f64 = 1e-8;
