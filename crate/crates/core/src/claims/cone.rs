//! Cone angles along the strata where two points of a weighted
//! configuration collide. Angles are exact rational multiples of π.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::json;

use super::{ClaimError, Report};
use crate::zlat::{qi, Q};

/// Weights αᵢ ∈ (0, 2π), written as multiples of π, summing to 4π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeAngleInput {
    alpha: Vec<Q>,
}

impl ConeAngleInput {
    pub fn new(alpha: Vec<Q>) -> Result<ConeAngleInput, ClaimError> {
        if alpha.len() < 2 {
            return Err(ClaimError::Invalid("need at least two weights".into()));
        }
        for a in &alpha {
            if *a <= qi(0) || *a >= qi(2) {
                return Err(ClaimError::Invalid(format!("weight {a}π is outside (0, 2π)")));
            }
        }
        let s: Q = alpha.iter().sum();
        if s != qi(4) {
            return Err(ClaimError::Invalid(format!("weights sum to {s}π, not 4π")));
        }
        Ok(ConeAngleInput { alpha })
    }

    pub fn alpha(&self) -> &[Q] {
        &self.alpha
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConePair {
    pub i: usize,
    pub j: usize,
    /// the angle as a multiple of π
    #[serde(with = "crate::zlat::qser")]
    pub angle: Q,
    /// 2π/angle when it is an integer ≥ 2
    pub order: Option<u64>,
}

pub fn cone_angles(input: &ConeAngleInput) -> Vec<ConePair> {
    let a = &input.alpha;
    let mut out = Vec::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] + a[j] >= qi(2) {
                continue;
            }
            let angle = if a[i] == a[j] { qi(1) - a[i] } else { qi(2) - a[i] - a[j] };
            let m = qi(2) / angle;
            let order = (m.is_integer() && m >= qi(2)).then(|| m.to_integer() as u64);
            out.push(ConePair { i, j, angle, order });
        }
    }
    out
}

/// Distinct reflection orders and the number of non-reflection strata.
pub fn order_summary(pairs: &[ConePair]) -> (BTreeSet<u64>, usize) {
    let orders = pairs.iter().filter_map(|p| p.order).collect();
    let other = pairs.iter().filter(|p| p.order.is_none()).count();
    (orders, other)
}

pub fn worked_example() -> ConeAngleInput {
    let mut a = vec![Q::new(2, 3); 2];
    a.extend(std::iter::repeat(Q::new(1, 3)).take(8));
    ConeAngleInput::new(a).expect("weights sum to 4π")
}

pub fn cone_report() -> Result<Report, ClaimError> {
    let input = worked_example();
    let pairs = cone_angles(&input);
    let (orders, other) = order_summary(&pairs);
    let mut by_order = std::collections::BTreeMap::new();
    for p in &pairs {
        if let Some(m) = p.order {
            by_order.entry(m).or_insert_with(BTreeSet::new).insert(p.angle.to_string());
        }
    }
    let expected: BTreeSet<u64> = [2, 3, 6].into_iter().collect();
    let ok = orders == expected && other == 0;
    let alpha: Vec<String> = input.alpha().iter().map(|a| format!("{a}π")).collect();
    Ok(Report::new(
        "cone-angles",
        ok,
        json!({
            "alpha": alpha,
            "pairs": pairs.len(),
            "orders": orders,
            "angles_by_order": by_order,
            "non_reflection_strata": other,
        }),
        &["The weights 2π/3, 2π/3 and eight copies of π/3 give cone angles π/3, 2π/3 and π, that is, reflections of orders 6, 3 and 2."],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unequal_pair_angle() {
        let mut a = vec![Q::new(1, 2), Q::new(1, 3)];
        a.push(qi(4) - Q::new(1, 2) - Q::new(1, 3) - Q::new(3, 2));
        a.push(Q::new(3, 2));
        let p = cone_angles(&ConeAngleInput::new(a).unwrap());
        assert_eq!(p[0].angle, Q::new(7, 6));
        assert_eq!(p[0].order, None);
    }

    #[test]
    fn rejects_bad_sums() {
        assert!(ConeAngleInput::new(vec![qi(1), qi(1)]).is_err());
        assert!(ConeAngleInput::new(vec![qi(2), qi(1), qi(1)]).is_err());
    }
}
