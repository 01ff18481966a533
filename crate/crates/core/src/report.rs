//! Pass/fail/skip records for identity checks.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::index::IndexPair;
use crate::polynomial::LaurentPoly;
use crate::scalar::{Scalar, FLOAT_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub identity: String,
    pub index: Option<IndexPair>,
    /// Extra parameters such as the direction `k` or evaluation points.
    pub params: String,
    pub status: Status,
    /// Why the check was skipped.
    pub reason: Option<String>,
    /// Nonzero residual components, serialized per the scalar field.
    pub residual: Vec<Value>,
}

impl VerificationReport {
    pub fn skip(identity: &str, index: Option<&IndexPair>, params: &str, reason: String) -> Self {
        Self {
            identity: identity.to_string(),
            index: index.cloned(),
            params: params.to_string(),
            status: Status::Skip,
            reason: Some(reason),
            residual: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "identity": self.identity,
            "index": self.index.as_ref().map(|i| i.to_string()),
            "status": self.status,
        });
        if !self.params.is_empty() {
            v["params"] = json!(self.params);
        }
        if let Some(r) = &self.reason {
            v["reason"] = json!(r);
        }
        if !self.residual.is_empty() {
            v["residual"] = Value::Array(self.residual.clone());
        }
        v
    }

    pub fn summary_line(&self) -> String {
        let idx = self.index.as_ref().map(|i| i.to_string()).unwrap_or_default();
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        };
        let mut line = format!("{status:4}  {:<44} {idx:<18} {}", self.identity, self.params);
        if let Some(r) = &self.reason {
            line.push_str(&format!("  ({r})"));
        }
        for res in &self.residual {
            line.push_str(&format!("\n        residual {res}"));
        }
        line.trim_end().to_string()
    }
}

/// `true` when every coefficient of `lhs - rhs` vanishes: exactly in the exact
/// field, otherwise within `FLOAT_TOLERANCE` times the largest coefficient of
/// either side (at least 1).
pub fn polys_agree<S: Scalar>(lhs: &LaurentPoly<S>, rhs: &LaurentPoly<S>) -> bool {
    polys_agree_at_scale(lhs, rhs, 0.0)
}

/// As [`polys_agree`], with `term_scale` (the size of the terms that were
/// summed into the sides) also entering the float tolerance.
pub fn polys_agree_at_scale<S: Scalar>(lhs: &LaurentPoly<S>, rhs: &LaurentPoly<S>, term_scale: f64) -> bool {
    if S::EXACT {
        // zero coefficients are never stored, so equality is structural
        return lhs == rhs;
    }
    let scale = 1f64.max(lhs.max_magnitude()).max(rhs.max_magnitude()).max(term_scale);
    lhs.sub(rhs).terms().all(|(_, c)| c.magnitude() <= FLOAT_TOLERANCE * scale)
}

/// Runs one identity. The closure returns both sides as vectors of Laurent
/// polynomials (scalars become constants). Unmet prerequisites turn into
/// skips; any other error is propagated.
pub fn check_identity<S: Scalar>(
    identity: &str,
    index: Option<&IndexPair>,
    params: &str,
    sides: impl FnOnce() -> Result<(Vec<LaurentPoly<S>>, Vec<LaurentPoly<S>>)>,
) -> Result<VerificationReport> {
    check_identity_scaled(identity, index, params, || sides().map(|(l, r)| (l, r, 0.0)))
}

/// As [`check_identity`] for sides built by summing terms that may cancel;
/// the closure also returns the largest term magnitude, which widens the
/// float tolerance accordingly.
pub fn check_identity_scaled<S: Scalar>(
    identity: &str,
    index: Option<&IndexPair>,
    params: &str,
    sides: impl FnOnce() -> Result<(Vec<LaurentPoly<S>>, Vec<LaurentPoly<S>>, f64)>,
) -> Result<VerificationReport> {
    match sides() {
        Ok((lhs, rhs, term_scale)) => {
            assert_eq!(lhs.len(), rhs.len(), "identity sides differ in length");
            let mut residual = Vec::new();
            let mut ok = true;
            for (i, (a, b)) in lhs.iter().zip(&rhs).enumerate() {
                if !polys_agree_at_scale(a, b, term_scale) {
                    ok = false;
                    residual.push(json!({ "component": i + 1, "lhs_minus_rhs": a.sub(b).to_json() }));
                }
            }
            Ok(VerificationReport {
                identity: identity.to_string(),
                index: index.cloned(),
                params: params.to_string(),
                status: if ok { Status::Pass } else { Status::Fail },
                reason: None,
                residual,
            })
        }
        Err(e) if e.is_prerequisite() || matches!(e, Error::HypothesisViolated(_) | Error::QuasiDefiniteViolated(_)) => {
            Ok(VerificationReport::skip(identity, index, params, e.to_string()))
        }
        Err(e) => Err(e),
    }
}

/// A scalar as a one-component identity side.
pub fn constant<S: Scalar>(c: S) -> Vec<LaurentPoly<S>> {
    vec![LaurentPoly::monomial(0, c)]
}

/// Counts of each status in a batch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

impl Tally {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut t = Self::default();
        for r in reports {
            match r.status {
                Status::Pass => t.pass += 1,
                Status::Fail => t.fail += 1,
                Status::Skip => t.skip += 1,
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ComplexFloat, GaussianRational as Q};

    #[test]
    fn statuses() {
        let idx = IndexPair::scalar(1, 0).unwrap();
        let ok = check_identity::<Q>("t", Some(&idx), "", || Ok((constant(Q::one()), constant(Q::one())))).unwrap();
        assert!(ok.passed());
        let bad =
            check_identity::<Q>("t", Some(&idx), "", || Ok((constant(Q::one()), constant(Q::zero())))).unwrap();
        assert!(bad.failed());
        assert_eq!(bad.residual.len(), 1);
        let skipped =
            check_identity::<Q>("t", None, "", || Err(Error::NotNormal("(2;0)".into()))).unwrap();
        assert_eq!(skipped.status, Status::Skip);
        assert!(check_identity::<Q>("t", None, "", || Err(Error::SingularEvaluation)).is_err());
        let near = check_identity::<ComplexFloat>("t", None, "", || {
            Ok((constant(ComplexFloat::new(1.0, 0.0)), constant(ComplexFloat::new(1.0 + 1e-12, 0.0))))
        })
        .unwrap();
        assert!(near.passed());
        assert_eq!(Tally::of(&[ok, bad, skipped]), Tally { pass: 1, fail: 1, skip: 1 });
    }
}
