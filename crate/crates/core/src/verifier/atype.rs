//! Type A checks: `A_1` at any level and `A_ell` at level 2, where every image is a single class.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{verify_type, VerifyOptions, VerifyReport};
use crate::cartan::{CartanDatum, CartanType, Family};
use crate::error::Result;
use crate::fusion::{FusionRing, VerlindeElement};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ATypeReport {
    #[serde(rename = "type")]
    pub type_label: String,
    pub k: i64,
    pub variables: usize,
    /// ids (1-based) whose image differs from the predicted single class, with a reason
    pub mismatches: Vec<(usize, String)>,
    pub verify: VerifyReport,
}

impl ATypeReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.verify.passed()
    }
}

fn single(fusion: &FusionRing, lam: &[i64]) -> Result<VerlindeElement> {
    Ok(VerlindeElement::basis(fusion.size(), fusion.index_of(lam)?))
}

/// `C_{k-1}` for `A_1`: each variable is a segment `Y_{1,p}Y_{1,p-2}...` of length `j`,
/// sent to `[L((k-j)Lambda_0 + j Lambda_1)]`.
pub fn check_a1(k: i64) -> Result<ATypeReport> {
    let datum = Arc::new(CartanDatum::build(CartanType::new(Family::A, 1)?)?);
    let (report, ctx, table) = verify_type(datum.clone(), k, &VerifyOptions::default())?;
    let fusion = FusionRing::new(datum, k)?;
    let reg = &ctx.enumeration.registry;
    let mut mismatches = Vec::new();
    for id in 0..reg.len() {
        let Some(label) = &reg.get(id).label else {
            mismatches.push((id + 1, "no label".into()));
            continue;
        };
        let Some((_, j)) = label.kr_shape(|_| 1) else {
            mismatches.push((id + 1, format!("{label} is not a segment")));
            continue;
        };
        if reg.get(id).frozen != (j == k) {
            mismatches.push((id + 1, format!("segment length {j} but frozen = {}", reg.get(id).frozen)));
        }
        let want = single(&fusion, &[k - j, j])?;
        if table.known(id).as_ref() != Some(&want) {
            mismatches.push((id + 1, format!("expected {}", want.to_v_string())));
        }
    }
    Ok(ATypeReport { type_label: "A1".into(), k, variables: reg.len(), mismatches, verify: report })
}

/// `C_1` for `A_ell` at level 2: a variable labelled by `Y_{a,p}` or `Y_{a,p}Y_{b,q}` is sent
/// to `[L(Lambda_a + Lambda_b)]` with `b = 0` for a single factor.
pub fn check_a_rank(ell: usize) -> Result<ATypeReport> {
    let datum = Arc::new(CartanDatum::build(CartanType::new(Family::A, ell)?)?);
    let (report, ctx, table) = verify_type(datum.clone(), 2, &VerifyOptions::default())?;
    let fusion = FusionRing::new(datum, 2)?;
    let reg = &ctx.enumeration.registry;
    let mut mismatches = Vec::new();
    for id in 0..reg.len() {
        let Some(label) = &reg.get(id).label else {
            mismatches.push((id + 1, "no label".into()));
            continue;
        };
        let mut nodes: Vec<usize> = Vec::new();
        for (&(i, _), &e) in &label.0 {
            nodes.extend(std::iter::repeat_n(i, e as usize));
        }
        if nodes.len() > 2 {
            mismatches.push((id + 1, format!("{label} has degree {}", nodes.len())));
            continue;
        }
        nodes.resize(2, 0);
        let mut lam = vec![0i64; ell + 1];
        for a in nodes {
            lam[a] += 1;
        }
        let want = single(&fusion, &lam)?;
        if table.known(id).as_ref() != Some(&want) {
            mismatches.push((id + 1, format!("{label}: expected {}", want.to_v_string())));
        }
    }
    Ok(ATypeReport { type_label: format!("A{ell}"), k: 2, variables: reg.len(), mismatches, verify: report })
}
