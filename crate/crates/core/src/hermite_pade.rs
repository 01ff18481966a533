//! Two-point Hermite-Pade companions of the four polynomial families and
//! certification of their orders of contact at 0 and at infinity.
//!
//! The companions come from the kernel `((w+z)/(w-z)) (P(w) - P(z))`, which is
//! a Laurent polynomial in both variables, so applying `L_j` in `w` is exact.
//! Orders are checked by multiplying against the truncated Caratheodory
//! series of each functional.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::index::IndexPair;
use crate::laurent::LaurentMop;
use crate::moments::{FunctionalSystem, LaurentFunctional};
use crate::polynomial::{LaurentPoly, TypeIVector};
use crate::scalar::Scalar;

/// `sum c_{a,b} w^a z^b`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelExpansion<S> {
    terms: BTreeMap<(i64, i64), S>,
}

impl<S: Scalar> KernelExpansion<S> {
    /// `((w+z)/(w-z)) (P(w) - P(z))`.
    pub fn new(p: &LaurentPoly<S>) -> Self {
        let mut quotient: BTreeMap<(i64, i64), S> = BTreeMap::new();
        let mut put = |a: i64, b: i64, c: S| {
            let e = quotient.entry((a, b)).or_insert_with(S::zero);
            *e = e.clone() + c;
        };
        for (e, c) in p.terms() {
            // (w^e - z^e)/(w - z) as a finite geometric sum
            if e > 0 {
                for i in 0..e {
                    put(e - 1 - i, i, c.clone());
                }
            } else if e < 0 {
                let f = -e;
                for i in 0..f {
                    put(-1 - i, i - f, -c.clone());
                }
            }
        }
        let mut terms: BTreeMap<(i64, i64), S> = BTreeMap::new();
        for ((a, b), c) in quotient {
            for (da, db) in [(1, 0), (0, 1)] {
                let e = terms.entry((a + da, b + db)).or_insert_with(S::zero);
                *e = e.clone() + c.clone();
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &S)> {
        self.terms.iter()
    }

    /// Applies `L` in `w`, leaving a Laurent polynomial in `z`.
    pub fn apply(&self, l: &LaurentFunctional<S>) -> Result<LaurentPoly<S>> {
        let mut out = LaurentPoly::zero();
        for (&(a, b), c) in &self.terms {
            out.add_term(b, c.clone() * l.moment(-a)?);
        }
        Ok(out)
    }

    /// Evaluates at concrete `(w, z)`.
    pub fn eval(&self, w: &S, z: &S) -> Result<S> {
        let mut acc = S::zero();
        for (&(a, b), c) in &self.terms {
            acc = acc + c.clone() * w.pow_i(a) * z.pow_i(b);
        }
        Ok(acc)
    }
}

fn require_nonnegative(idx: &IndexPair) -> Result<()> {
    if !idx.n_nonnegative() || !idx.m_nonnegative() {
        return Err(Error::InvalidInput(format!(
            "two-point approximants need n, m >= 0 componentwise, got {idx}"
        )));
    }
    Ok(())
}

/// `delta = 1` if `m = 0, n != 0`; `-1` if `n = 0, m != 0`; else 0.
pub fn delta(idx: &IndexPair) -> i64 {
    let n_zero = idx.n.iter().all(|&x| x == 0);
    let m_zero = idx.m.iter().all(|&x| x == 0);
    match (n_zero, m_zero) {
        (false, true) => 1,
        (true, false) => -1,
        _ => 0,
    }
}

/// `Psi_j = L_j[kernel(Phi)] + L_j[Phi]`.
pub fn psi_type_ii<S: Scalar>(
    system: &FunctionalSystem<S>,
    phi: &LaurentPoly<S>,
    idx: &IndexPair,
) -> Result<Vec<LaurentPoly<S>>> {
    require_nonnegative(idx)?;
    let k = KernelExpansion::new(phi);
    system
        .functionals()
        .iter()
        .map(|l| Ok(k.apply(l)?.add(&LaurentPoly::monomial(0, l.apply(phi)?))))
        .collect()
}

/// `Psi*_j = -L_j[kernel(Phi*)] + L_j[Phi*]`; the kernel is antisymmetric in
/// the difference, hence the sign.
pub fn psi_type_ii_star<S: Scalar>(
    system: &FunctionalSystem<S>,
    phi_star: &LaurentPoly<S>,
    idx: &IndexPair,
) -> Result<Vec<LaurentPoly<S>>> {
    require_nonnegative(idx)?;
    let k = KernelExpansion::new(phi_star);
    system
        .functionals()
        .iter()
        .map(|l| {
            let neg = k.apply(l)?.scale(&-S::one());
            Ok(neg.add(&LaurentPoly::monomial(0, l.apply(phi_star)?)))
        })
        .collect()
}

fn upsilon_impl<S: Scalar>(
    system: &FunctionalSystem<S>,
    xi: &TypeIVector<S>,
    idx: &IndexPair,
    sign: i64,
) -> Result<LaurentPoly<S>> {
    require_nonnegative(idx)?;
    if xi.len() != system.r() {
        return Err(Error::InvalidInput(format!("type I vector has {} components, r = {}", xi.len(), system.r())));
    }
    // the starred problem needs the constant with the opposite sign
    let d = S::from_i64(sign * delta(idx));
    let s = S::from_i64(sign);
    let mut out = LaurentPoly::zero();
    for (l, x) in system.functionals().iter().zip(xi) {
        out = out.add(&KernelExpansion::new(x).apply(l)?.scale(&s));
        out.add_term(0, d.clone() * l.apply(x)?);
    }
    Ok(out)
}

/// `Upsilon = sum_j L_j[kernel(Xi_j)] + delta sum_j L_j[Xi_j]`.
pub fn upsilon<S: Scalar>(system: &FunctionalSystem<S>, xi: &TypeIVector<S>, idx: &IndexPair) -> Result<LaurentPoly<S>> {
    upsilon_impl(system, xi, idx, 1)
}

/// `Upsilon* = -sum_j (L_j[kernel(Xi*_j)] + delta L_j[Xi*_j])`.
pub fn upsilon_star<S: Scalar>(
    system: &FunctionalSystem<S>,
    xi_star: &TypeIVector<S>,
    idx: &IndexPair,
) -> Result<LaurentPoly<S>> {
    upsilon_impl(system, xi_star, idx, -1)
}

/// Which of the four approximation problems a certificate refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproximantKind {
    TypeII,
    TypeIIStar,
    TypeI,
    TypeIStar,
}

impl ApproximantKind {
    pub fn label(self) -> &'static str {
        match self {
            ApproximantKind::TypeII => "type II",
            ApproximantKind::TypeIIStar => "type II*",
            ApproximantKind::TypeI => "type I",
            ApproximantKind::TypeIStar => "type I*",
        }
    }

    /// `+1` when the companion is added, `-1` when subtracted.
    fn companion_sign(self) -> i64 {
        match self {
            ApproximantKind::TypeII | ApproximantKind::TypeI => 1,
            ApproximantKind::TypeIIStar | ApproximantKind::TypeIStar => -1,
        }
    }
}

/// Order window of one residual series.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderRecord {
    /// Functional index (zero-based) for type II problems; `None` for type I.
    pub component: Option<usize>,
    /// Every exponent below this must vanish at 0.
    pub at0_required: i64,
    /// First nonvanishing exponent at 0, or the window end when none.
    pub at0_achieved: i64,
    /// Every exponent above this must vanish at infinity.
    pub atinf_required: i64,
    /// Last nonvanishing exponent at infinity, or the window end when none.
    pub atinf_achieved: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderCertificate {
    pub kind: ApproximantKind,
    pub index: IndexPair,
    pub depth: usize,
    pub records: Vec<OrderRecord>,
}

impl OrderCertificate {
    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.label(),
            "index": self.index.to_string(),
            "depth": self.depth,
            "pass": self.pass(),
            "records": self.records.iter().map(|r| json!({
                "component": r.component.map(|j| j + 1),
                "at0_required": r.at0_required,
                "at0_achieved": r.at0_achieved,
                "atinf_required": r.atinf_required,
                "atinf_achieved": r.atinf_achieved,
                "pass": r.pass,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Coefficient of `z^e` in `P(z) F^{(0)}(z)`, where `F^{(0)} = c_0 + 2 sum c_k z^k`.
fn product_at_zero<S: Scalar>(p: &LaurentPoly<S>, l: &LaurentFunctional<S>, e: i64) -> Result<S> {
    let mut acc = S::zero();
    for (a, c) in p.terms() {
        let k = e - a;
        if k >= 0 {
            let f = if k == 0 { l.moment(0)? } else { S::from_i64(2) * l.moment(k)? };
            acc = acc + c.clone() * f;
        }
    }
    Ok(acc)
}

/// Coefficient of `z^e` in `P(z) F^{(inf)}(z)`, `F^{(inf)} = -c_0 - 2 sum c_{-k} z^{-k}`.
fn product_at_infinity<S: Scalar>(p: &LaurentPoly<S>, l: &LaurentFunctional<S>, e: i64) -> Result<S> {
    let mut acc = S::zero();
    for (a, c) in p.terms() {
        let k = a - e;
        if k >= 0 {
            let f = if k == 0 { l.moment(0)? } else { S::from_i64(2) * l.moment(-k)? };
            acc = acc - c.clone() * f;
        }
    }
    Ok(acc)
}

fn min_exp<S: Scalar>(ps: &[&LaurentPoly<S>]) -> i64 {
    ps.iter().filter_map(|p| p.min_exp()).min().unwrap_or(0)
}

fn max_exp<S: Scalar>(ps: &[&LaurentPoly<S>]) -> i64 {
    ps.iter().filter_map(|p| p.max_exp()).max().unwrap_or(0)
}

/// Scans one residual `sum_j main_j F_j + sign * companion` at both points.
#[allow(clippy::too_many_arguments)]
fn scan<S: Scalar>(
    functionals: &[&LaurentFunctional<S>],
    mains: &[&LaurentPoly<S>],
    companion: &LaurentPoly<S>,
    sign: i64,
    at0_required: i64,
    atinf_required: i64,
    depth: i64,
    component: Option<usize>,
) -> Result<OrderRecord> {
    if depth < at0_required || -depth > atinf_required {
        return Err(Error::DepthInsufficient {
            depth: depth as usize,
            detail: format!("need orders z^{at0_required} at 0 and z^{atinf_required} at infinity"),
        });
    }
    let sign = S::from_i64(sign);
    let mut all = mains.to_vec();
    all.push(companion);

    let residual_at = |e: i64, at_zero: bool| -> Result<S> {
        let mut acc = sign.clone() * companion.coeff(e);
        for (l, p) in functionals.iter().zip(mains) {
            acc = acc + if at_zero { product_at_zero(p, l, e)? } else { product_at_infinity(p, l, e)? };
        }
        Ok(acc)
    };

    let mut at0_achieved = depth;
    for e in min_exp(&all)..depth {
        if !residual_at(e, true)?.is_negligible(1.0) {
            at0_achieved = e;
            break;
        }
    }
    let mut atinf_achieved = -depth;
    let mut e = max_exp(&all);
    while e > -depth {
        if !residual_at(e, false)?.is_negligible(1.0) {
            atinf_achieved = e;
            break;
        }
        e -= 1;
    }
    Ok(OrderRecord {
        component,
        at0_required,
        at0_achieved,
        atinf_required,
        atinf_achieved,
        pass: at0_achieved >= at0_required && atinf_achieved <= atinf_required,
    })
}

/// Certifies the orders of contact. For the type II problems `main` holds the
/// single polynomial and `companions` the `r` functions `Psi_j`; for the type I
/// problems `main` holds the `r` components and `companions` the single
/// `Upsilon`.
pub fn certify_orders<S: Scalar>(
    system: &FunctionalSystem<S>,
    kind: ApproximantKind,
    main: &[LaurentPoly<S>],
    companions: &[LaurentPoly<S>],
    idx: &IndexPair,
    depth: usize,
) -> Result<OrderCertificate> {
    require_nonnegative(idx)?;
    let r = system.r();
    let d = depth as i64;
    let sign = kind.companion_sign();
    let mut records = Vec::new();
    match kind {
        ApproximantKind::TypeII | ApproximantKind::TypeIIStar => {
            if main.len() != 1 || companions.len() != r {
                return Err(Error::InvalidInput("type II certification takes one polynomial and r companions".into()));
            }
            let starred = kind == ApproximantKind::TypeIIStar;
            for j in 0..r {
                let (req0, reqinf) = if starred {
                    (idx.n[j] + 1, -idx.m[j])
                } else {
                    (idx.n[j], -idx.m[j] - 1)
                };
                records.push(scan(
                    &[system.functional(j)],
                    &[&main[0]],
                    &companions[j],
                    sign,
                    req0,
                    reqinf,
                    d,
                    Some(j),
                )?);
            }
        }
        ApproximantKind::TypeI | ApproximantKind::TypeIStar => {
            if main.len() != r || companions.len() != 1 {
                return Err(Error::InvalidInput("type I certification takes r components and one companion".into()));
            }
            let fs: Vec<_> = system.functionals().iter().collect();
            let ms: Vec<_> = main.iter().collect();
            records.push(scan(&fs, &ms, &companions[0], sign, idx.abs_m(), -idx.abs_n(), d, None)?);
        }
    }
    Ok(OrderCertificate { kind, index: idx.clone(), depth, records })
}

/// The default truncation depth `|n| + |m| + 4`.
pub fn default_depth(idx: &IndexPair) -> usize {
    (idx.abs_n() + idx.abs_m() + 4).max(0) as usize
}

/// All four families at one index with their companions.
#[derive(Clone)]
pub struct Approximants<S> {
    pub phi: LaurentPoly<S>,
    pub psi: Vec<LaurentPoly<S>>,
    pub phi_star: LaurentPoly<S>,
    pub psi_star: Vec<LaurentPoly<S>>,
    pub xi: TypeIVector<S>,
    pub upsilon: LaurentPoly<S>,
    pub xi_star: TypeIVector<S>,
    pub upsilon_star: LaurentPoly<S>,
}

pub fn approximants<S: Scalar>(mop: &LaurentMop<S>, idx: &IndexPair) -> Result<Approximants<S>> {
    require_nonnegative(idx)?;
    let sys = mop.system();
    let phi = mop.type_ii(idx)?;
    let phi_star = mop.type_ii_star(idx)?;
    let xi = mop.type_i(idx)?;
    let xi_star = mop.type_i_star(idx)?;
    Ok(Approximants {
        psi: psi_type_ii(sys, &phi, idx)?,
        psi_star: psi_type_ii_star(sys, &phi_star, idx)?,
        upsilon: upsilon(sys, &xi, idx)?,
        upsilon_star: upsilon_star(sys, &xi_star, idx)?,
        phi,
        phi_star,
        xi,
        xi_star,
    })
}

/// Builds and certifies all four approximation problems at one index.
pub fn certify_all<S: Scalar>(mop: &LaurentMop<S>, idx: &IndexPair, depth: usize) -> Result<Vec<OrderCertificate>> {
    let a = approximants(mop, idx)?;
    let sys = mop.system();
    Ok(vec![
        certify_orders(sys, ApproximantKind::TypeII, std::slice::from_ref(&a.phi), &a.psi, idx, depth)?,
        certify_orders(sys, ApproximantKind::TypeIIStar, std::slice::from_ref(&a.phi_star), &a.psi_star, idx, depth)?,
        certify_orders(sys, ApproximantKind::TypeI, &a.xi, std::slice::from_ref(&a.upsilon), idx, depth)?,
        certify_orders(sys, ApproximantKind::TypeIStar, &a.xi_star, std::slice::from_ref(&a.upsilon_star), idx, depth)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;
    use crate::systems;

    fn q(p: i64, d: i64) -> Q {
        Q::from_ratio(p, d)
    }

    #[test]
    fn kernel_matches_pointwise_formula() {
        let p = LaurentPoly::from_dense(-2, [q(1, 2), q(0, 1), q(-3, 1), q(1, 1)]);
        let k = KernelExpansion::new(&p);
        let (w, z) = (q(2, 3), q(-5, 7));
        let direct = (w.clone() + z.clone()) / (w.clone() - z.clone()) * (p.eval(&w).unwrap() - p.eval(&z).unwrap());
        assert_eq!(k.eval(&w, &z).unwrap(), direct);
    }

    #[test]
    fn lebesgue_psi() {
        let mop = LaurentMop::new(systems::lebesgue::<Q>());
        let idx = IndexPair::scalar(2, 0).unwrap();
        let phi = mop.type_ii(&idx).unwrap();
        let psi = psi_type_ii(mop.system(), &phi, &idx).unwrap();
        // (w+z)^2 under L gives z^2; L[z^2] = 0
        assert_eq!(psi[0], LaurentPoly::monomial(2, q(1, 1)));
        let cert = certify_orders(mop.system(), ApproximantKind::TypeII, &[phi], &psi, &idx, 6).unwrap();
        assert!(cert.pass());
        assert!(cert.records[0].at0_achieved >= 2);
    }

    #[test]
    fn delta_cases() {
        let i = |n: Vec<i64>, m: Vec<i64>| IndexPair::new(n, m).unwrap();
        assert_eq!(delta(&i(vec![1, 0], vec![0, 0])), 1);
        assert_eq!(delta(&i(vec![0, 0], vec![0, 2])), -1);
        assert_eq!(delta(&i(vec![1, 0], vec![0, 1])), 0);
        assert_eq!(delta(&i(vec![0, 0], vec![0, 0])), 0);
    }

    #[test]
    fn negative_components_rejected() {
        let mop = LaurentMop::new(systems::geometric::<Q>(1, 2));
        let idx = IndexPair::scalar(2, -1).unwrap();
        assert!(matches!(approximants(&mop, &idx), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn geometric_all_four_certify() {
        let mop = LaurentMop::new(systems::geometric::<Q>(1, 2));
        for (n, m) in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 3)] {
            let idx = IndexPair::scalar(n, m).unwrap();
            for cert in certify_all(&mop, &idx, default_depth(&idx)).unwrap() {
                assert!(cert.pass(), "{idx} {:?}", cert);
            }
        }
    }

    #[test]
    fn depth_too_small() {
        let mop = LaurentMop::new(systems::geometric::<Q>(1, 2));
        let idx = IndexPair::scalar(3, 0).unwrap();
        assert!(matches!(certify_all(&mop, &idx, 1), Err(Error::DepthInsufficient { .. })));
    }
}
