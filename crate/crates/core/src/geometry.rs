//! Combinatorial shadows of the Poisson geometry: Weyl-order cell counts and
//! dimension bookkeeping for the groups M_q, M_q^≷, M_q^± together with the
//! C̃ invariants.

use crate::cartan::{CartanRootData, SemisimpleType};
use crate::error::{EngineError, Result};
use crate::lattice::LatticeQuotient;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct GeometryReport {
    pub weyl_order: u128,
    pub double_bruhat_cell_count: u128,
    pub richardson_cell_count: u128,
    pub dim_m: usize,
    pub dim_m_geq: usize,
    pub dim_m_plus: usize,
    pub hz_isoclass_upper_bound: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ctilde: Option<LatticeQuotient>,
    /// symplectic-leaf statement: leaves ↔ conjugacy classes × T̃/C̃
    pub leaves_note: String,
}

/// Assemble the geometry report and verify the independent Borel-dimension
/// identity: dim b̃⁺ = (#positive roots of g_q) + rank(g̃_q).
pub fn geometry_report(
    st: &SemisimpleType,
    crd: &CartanRootData,
    ctilde: Option<LatticeQuotient>,
) -> Result<GeometryReport> {
    let o_plus = crd.o_plus.len();
    let pi_tilde = crd.pi_tilde.len();
    let dim_m_geq = o_plus + pi_tilde;
    let rank_tilde = st.rank() + if crd.eta.is_some() { 1 } else { 0 };
    let independent = st.positive_root_count() + rank_tilde;
    if independent != dim_m_geq {
        return Err(EngineError::InternalInvariantViolation(format!(
            "dim M^>= mismatch: |O_+| + |Pi~| = {dim_m_geq} but #pos roots + rank = {independent}"
        )));
    }
    Ok(GeometryReport {
        weyl_order: st.weyl_order,
        double_bruhat_cell_count: st.weyl_order,
        richardson_cell_count: st.weyl_order,
        dim_m: 2 * dim_m_geq,
        dim_m_geq,
        dim_m_plus: o_plus,
        hz_isoclass_upper_bound: st.weyl_order,
        ctilde,
        leaves_note: "symplectic leaves correspond to conjugacy classes of G~ times T~/C~".into(),
    })
}
