//! Multiple orthogonal polynomials on the real line and their relation to
//! symmetric circle systems through the Szego map.
//!
//! A multi-index `n` on the real side is a plain vector of nonnegative
//! integers. `P_n` is monic of degree `|n|`, `A_n` is normalized by the
//! summed pairing against `x^{|n|-1}`.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::index::IndexPair;
use crate::laurent::LaurentMop;
use crate::linalg::Matrix;
use crate::moments::{FunctionalSystem, RealSystem};
use crate::polynomial::{LaurentPoly, RealPoly};
use crate::report::{check_identity, constant, VerificationReport};
use crate::scalar::Scalar;

fn format_multi(n: &[i64]) -> String {
    let parts: Vec<String> = n.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn plus(n: &[i64], j: usize) -> Vec<i64> {
    let mut v = n.to_vec();
    v[j] += 1;
    v
}

fn minus(n: &[i64], j: usize) -> Option<Vec<i64>> {
    if n[j] == 0 {
        return None;
    }
    let mut v = n.to_vec();
    v[j] -= 1;
    Some(v)
}

fn total(n: &[i64]) -> usize {
    n.iter().sum::<i64>() as usize
}

/// `P` as a Laurent polynomial in the same variable, for reporting.
fn as_laurent<S: Scalar>(p: &RealPoly<S>) -> LaurentPoly<S> {
    LaurentPoly::from_dense(0, p.coeffs().iter().cloned())
}

/// Recurrence coefficients `a_{n,j}`, `b_{n,j}` of one direction.
#[derive(Clone, Debug, PartialEq)]
pub struct NnCoefficients<S> {
    /// Zero when `n_j = 0`.
    pub a: S,
    pub b: S,
}

type PolyMemo<S> = Mutex<HashMap<Vec<i64>, Option<RealPoly<S>>>>;

/// Solver for real-line multiple orthogonal polynomials of one system.
pub struct RealMop<S> {
    system: RealSystem<S>,
    p: PolyMemo<S>,
}

impl<S: Scalar> RealMop<S> {
    pub fn new(system: RealSystem<S>) -> Self {
        Self { system, p: Mutex::default() }
    }

    pub fn system(&self) -> &RealSystem<S> {
        &self.system
    }

    pub fn r(&self) -> usize {
        self.system.r()
    }

    fn check(&self, n: &[i64]) -> Result<()> {
        if n.len() != self.r() {
            return Err(Error::InvalidInput(format!(
                "multi-index {} has {} components but the system has {} functionals",
                format_multi(n),
                n.len(),
                self.r()
            )));
        }
        if n.iter().any(|&c| c < 0) {
            return Err(Error::InvalidIndex(format_multi(n)));
        }
        Ok(())
    }

    /// Row `(j, k)` holds `m_{j, k + d}` for `d = 0..|n|-1`.
    fn hankel(&self, n: &[i64]) -> Result<Matrix<S>> {
        let size = total(n);
        let mut entries = Vec::with_capacity(size * size);
        for (j, &nj) in n.iter().enumerate() {
            for k in 0..nj as usize {
                for d in 0..size {
                    entries.push(self.system.functional(j).moment(k + d)?);
                }
            }
        }
        Ok(Matrix::from_fn(size, size, |i, d| entries[i * size + d].clone()))
    }

    pub fn is_normal(&self, n: &[i64]) -> Result<bool> {
        Ok(self.type_ii_entry(n)?.is_some())
    }

    fn type_ii_entry(&self, n: &[i64]) -> Result<Option<RealPoly<S>>> {
        self.check(n)?;
        if let Some(v) = self.p.lock().expect("memo poisoned").get(n) {
            return Ok(v.clone());
        }
        let size = total(n);
        let h = self.hankel(n)?;
        let mut rhs = Vec::with_capacity(size);
        for (j, &nj) in n.iter().enumerate() {
            for k in 0..nj as usize {
                rhs.push(-self.system.functional(j).moment(k + size)?);
            }
        }
        let e = h.solve(&[rhs]);
        let v = if e.singular {
            None
        } else {
            let mut c = e.solutions[0].clone();
            c.push(S::one());
            Some(RealPoly::new(c))
        };
        self.p.lock().expect("memo poisoned").insert(n.to_vec(), v.clone());
        Ok(v)
    }

    /// Monic `P_n` of degree `|n|` with `M_j[P_n x^k] = 0` for `k < n_j`.
    pub fn type_ii(&self, n: &[i64]) -> Result<RealPoly<S>> {
        self.type_ii_entry(n)?.ok_or_else(|| Error::NotNormal(format_multi(n)))
    }

    /// `A_n` with `deg A_{n,j} <= n_j - 1` and `sum_j M_j[A_{n,j} x^k] = delta_{k,|n|-1}`
    /// for `k < |n|`; the zero vector at `n = 0`.
    pub fn type_i(&self, n: &[i64]) -> Result<Vec<RealPoly<S>>> {
        self.check(n)?;
        let size = total(n);
        if size == 0 {
            return Ok(vec![RealPoly::zero(); self.r()]);
        }
        if !self.is_normal(n)? {
            return Err(Error::NotNormal(format_multi(n)));
        }
        // the type I system is the transpose of the Hankel matrix
        let a = self.hankel(n)?.transpose();
        let rhs: Vec<S> = (0..size).map(|k| if k + 1 == size { S::one() } else { S::zero() }).collect();
        let e = a.solve(&[rhs]);
        if e.singular {
            return Err(Error::NotNormal(format_multi(n)));
        }
        let mut out = Vec::with_capacity(self.r());
        let mut at = 0;
        for &nj in n {
            let nj = nj as usize;
            out.push(RealPoly::new(e.solutions[0][at..at + nj].to_vec()));
            at += nj;
        }
        Ok(out)
    }

    /// `a_{n,j} = M_j[P_n x^{n_j}] / M_j[P_{n-e_j} x^{n_j-1}]` and
    /// `b_{n,j} = k_{|n|-1}(P_n) - k_{|n|}(P_{n+e_j})`.
    pub fn nn_coefficients(&self, n: &[i64], j: usize) -> Result<NnCoefficients<S>> {
        self.check(n)?;
        let p = self.type_ii(n)?;
        let a = match minus(n, j) {
            None => S::zero(),
            Some(down) => {
                let num = self.system.apply_shifted(j, &p, n[j] as usize)?;
                let den = self.system.apply_shifted(j, &self.type_ii(&down)?, n[j] as usize - 1)?;
                if den.is_negligible(1.0) {
                    return Err(Error::DivisionByZero(format!("a at {}, j = {}", format_multi(n), j + 1)));
                }
                num / den
            }
        };
        let size = total(n);
        let below = if size == 0 { S::zero() } else { p.coeff(size - 1) };
        let b = below - self.type_ii(&plus(n, j))?.coeff(size);
        Ok(NnCoefficients { a, b })
    }

    /// `x P_n = P_{n+e_k} + b_{n,k} P_n + sum_j a_{n,j} P_{n-e_j}`.
    pub fn verify_type_ii_recurrence(&self, n: &[i64], k: usize) -> Result<VerificationReport> {
        self.check(n)?;
        let params = format!("n = {}, k = {}", format_multi(n), k + 1);
        check_identity("real recurrence: type II", None, &params, || {
            let p = self.type_ii(n)?;
            let mut rhs = self.type_ii(&plus(n, k))?.add(&p.scale(&self.nn_coefficients(n, k)?.b));
            for j in 0..self.r() {
                if let Some(down) = minus(n, j) {
                    rhs = rhs.add(&self.type_ii(&down)?.scale(&self.nn_coefficients(n, j)?.a));
                }
            }
            Ok((vec![as_laurent(&p.mul_x())], vec![as_laurent(&rhs)]))
        })
    }

    /// `x A_n = A_{n-e_k} + b_{n-e_k,k} A_n + sum_j a_{n,j} A_{n+e_j}`, for `n_k >= 1`.
    pub fn verify_type_i_recurrence(&self, n: &[i64], k: usize) -> Result<VerificationReport> {
        self.check(n)?;
        let params = format!("n = {}, k = {}", format_multi(n), k + 1);
        check_identity("real recurrence: type I", None, &params, || {
            let down = minus(n, k).ok_or_else(|| Error::InvalidIndex(format!("{} - e_{}", format_multi(n), k + 1)))?;
            let a_n = self.type_i(n)?;
            let b = self.nn_coefficients(&down, k)?.b;
            let mut rhs: Vec<RealPoly<S>> =
                self.type_i(&down)?.iter().zip(&a_n).map(|(x, y)| x.add(&y.scale(&b))).collect();
            for j in 0..self.r() {
                let a = self.nn_coefficients(n, j)?.a;
                if a.is_zero() {
                    continue;
                }
                for (acc, up) in rhs.iter_mut().zip(self.type_i(&plus(n, j))?) {
                    *acc = acc.add(&up.scale(&a));
                }
            }
            let lhs = a_n.iter().map(|p| as_laurent(&p.mul_x())).collect();
            Ok((lhs, rhs.iter().map(as_laurent).collect()))
        })
    }
}

/// A symmetric circle system together with its real preimage `M = Sz^{-1}(L)`.
pub struct SzegoBridge<S> {
    circle: LaurentMop<S>,
    real: RealMop<S>,
}

impl<S: Scalar> SzegoBridge<S> {
    /// Fails with `NotSymmetric` unless every functional satisfies `c_k = c_{-k}`.
    pub fn new(system: FunctionalSystem<S>) -> Result<Self> {
        let real = RealSystem::from_circle(&system)?;
        Ok(Self { circle: LaurentMop::new(system), real: RealMop::new(real) })
    }

    pub fn circle(&self) -> &LaurentMop<S> {
        &self.circle
    }

    pub fn real(&self) -> &RealMop<S> {
        &self.real
    }

    fn pair(&self, n: &[i64], m: &[i64]) -> Result<IndexPair> {
        IndexPair::new(n.to_vec(), m.to_vec())
    }

    /// Circle index that must be normal, or `HypothesisViolated`.
    fn require(&self, idx: &IndexPair) -> Result<()> {
        if idx.in_cone() && self.circle.is_normal(idx)? {
            Ok(())
        } else {
            Err(Error::HypothesisViolated(format!("circle index {idx} is not normal")))
        }
    }

    fn alpha_at(&self, n: &[i64], m: &[i64]) -> Result<S> {
        self.circle.alpha(&self.pair(n, m)?)
    }

    /// `Phi(z) + Phi(1/z)`.
    fn symmetrized(&self, idx: &IndexPair) -> Result<LaurentPoly<S>> {
        let phi = self.circle.type_ii(idx)?;
        Ok(phi.add(&phi.reflect()))
    }

    /// Both polynomial relations at `n`, one for each direction with `n_j >= 1`,
    /// plus the real-side normality the hypotheses imply and `1 + alpha_{n;n} != 0`.
    pub fn polynomial_relations(&self, n: &[i64]) -> Result<Vec<VerificationReport>> {
        self.real.check(n)?;
        let nn = self.pair(n, n)?;
        let i = Some(&nn);
        let hyp = || -> Result<()> {
            self.require(&nn)?;
            for j in 0..n.len() {
                self.require(&self.pair(&plus(n, j), n)?)?;
            }
            Ok(())
        };
        let mut out = Vec::new();
        out.push(check_identity("szego bridge: real side normal", i, "", || {
            hyp()?;
            let normal = self.real.is_normal(n)?;
            Ok((constant(S::from_i64(normal as i64)), constant(S::one())))
        })?);
        out.push(check_identity("szego bridge: 1 + alpha nonzero", i, "", || {
            hyp()?;
            let nonzero = !(S::one() + self.circle.alpha(&nn)?).is_zero();
            Ok((constant(S::from_i64(nonzero as i64)), constant(S::one())))
        })?);
        out.push(check_identity("szego bridge: P_n(z + 1/z) via Phi_{n;n}", i, "", || {
            hyp()?;
            let lhs = self.real.type_ii(n)?.substitute_joukowski();
            let scale = S::one() + self.circle.alpha(&nn)?;
            if scale.is_zero() {
                return Err(Error::HypothesisViolated("1 + alpha_{n;n} = 0".into()));
            }
            Ok((vec![lhs.scale(&scale)], vec![self.symmetrized(&nn)?]))
        })?);
        for j in 0..n.len() {
            if n[j] == 0 {
                continue;
            }
            let params = format!("j = {}", j + 1);
            out.push(check_identity("szego bridge: P_n(z + 1/z) via Phi_{n;n-e_j}", i, &params, || {
                hyp()?;
                let below = self.pair(n, &minus(n, j).expect("n_j >= 1"))?;
                self.require(&below)?;
                Ok((vec![self.real.type_ii(n)?.substitute_joukowski()], vec![self.symmetrized(&below)?]))
            })?);
        }
        Ok(out)
    }

    /// `a_{n,j}` and `b_{n,j}` predicted from circle data against the values
    /// read off the real side; the gamma-free form of `b` when `alpha_{n;n} != 0`.
    pub fn geronimus(&self, n: &[i64], j: usize) -> Result<Vec<VerificationReport>> {
        self.real.check(n)?;
        if j >= n.len() {
            return Err(Error::InvalidInput(format!("direction {} out of range", j + 1)));
        }
        let nn = self.pair(n, n)?;
        let i = Some(&nn);
        let params = format!("j = {}", j + 1);
        let r = n.len();
        let hyp = || -> Result<()> {
            self.require(&nn)?;
            for l in 0..r {
                self.require(&self.pair(&plus(n, l), n)?)?;
            }
            Ok(())
        };
        let below = minus(n, j);
        // alpha_{n;n-e_j} and alpha_{n-e_j;n}. At n = 0 both vanish by the
        // alpha_{-1} = 0 convention; for other n with n_j = 0 the index leaves
        // the cone and the relation has no circle-side counterpart.
        let side_terms = || -> Result<(S, S)> {
            match &below {
                Some(b) => Ok((self.alpha_at(n, b)?, self.alpha_at(b, n)?)),
                None if n.iter().all(|&c| c == 0) => Ok((S::zero(), S::zero())),
                None => Err(Error::HypothesisViolated(format!("n_{} = 0 leaves (n; n - e_j) outside the cone", j + 1))),
            }
        };
        let mut out = Vec::new();
        if let Some(b) = &below {
            out.push(check_identity("geronimus: a from circle data", i, &params, || {
                hyp()?;
                let a_nn = self.circle.alpha(&nn)?;
                let a_bb = self.circle.alpha(&self.pair(b, b)?)?;
                let a_bn = self.circle.alpha(&self.pair(b, n)?)?;
                let predicted = (S::one() + a_bb) * (S::one() - a_bn.clone() * a_bn) * self.circle.rho(&nn, j)?
                    / (S::one() + a_nn);
                Ok((constant(self.real.nn_coefficients(n, j)?.a), constant(predicted)))
            })?);
        }
        out.push(check_identity("geronimus: b from circle data", i, &params, || {
            hyp()?;
            let a_nn = self.circle.alpha(&nn)?;
            let a_up = self.circle.alpha(&self.pair(&plus(n, j), n)?)?;
            let (a_nb, a_bn) = side_terms()?;
            let mut predicted = a_nb - a_up.clone() - a_nn.clone() * a_bn - a_nn * a_up;
            for l in 0..r {
                if l != j {
                    predicted = predicted + self.circle.rho(&nn, l)? * self.circle.gamma(&nn, l, j)?;
                }
            }
            Ok((constant(self.real.nn_coefficients(n, j)?.b), constant(predicted)))
        })?);
        out.push(check_identity("geronimus: b without gamma", i, &params, || {
            hyp()?;
            let a_nn = self.circle.alpha(&nn)?;
            if a_nn.is_zero() {
                return Err(Error::HypothesisViolated("alpha_{n;n} = 0".into()));
            }
            let a_up = self.circle.alpha(&self.pair(&plus(n, j), n)?)?;
            let (a_nb, a_bn) = side_terms()?;
            let mut sum = -a_up.clone();
            for l in 0..r {
                sum = sum + self.circle.alpha(&self.pair(&plus(n, l), n)?)? * self.circle.rho(&nn, l)?;
            }
            let predicted = sum / a_nn.clone() + a_nb - a_up - a_nn * a_bn;
            Ok((constant(self.real.nn_coefficients(n, j)?.b), constant(predicted)))
        })?);
        Ok(out)
    }

    /// Classical `r = 1` relations for `n = 0..=depth`, with `alpha_k = Phi_k(0)`,
    /// `alpha_0 = 1`, `alpha_{-1} = 0`, and `a_n` read as the monic recurrence
    /// coefficient. Steps past the quasi-definite window are skipped.
    pub fn classical_geronimus(&self, depth: usize) -> Result<Vec<VerificationReport>> {
        if self.circle.r() != 1 {
            return Err(Error::InvalidInput("the classical relations need r = 1".into()));
        }
        // quasi-definite window on the circle side
        let mut window = 0usize;
        while window <= 2 * depth + 1 && self.circle.is_normal(&IndexPair::scalar(window as i64 + 1, 0)?)? {
            window += 1;
        }
        if window == 0 {
            return Err(Error::QuasiDefiniteViolated(1));
        }
        let alpha = |k: i64| -> Result<S> {
            if k < 0 {
                return Ok(S::zero());
            }
            if k as usize > window {
                return Err(Error::QuasiDefiniteViolated(k as usize));
            }
            self.circle.alpha(&IndexPair::scalar(k, 0)?)
        };
        let convention = "alpha_0 = 1, monic a";
        let mut out = Vec::new();
        for n in 0..=depth as i64 {
            let params = format!("n = {n}; {convention}");
            let real_n = [n];
            if n >= 1 {
                out.push(check_identity("classical geronimus: a", None, &params, || {
                    let predicted = (S::one() + alpha(2 * n - 2)?)
                        * (S::one() - alpha(2 * n - 1)? * alpha(2 * n - 1)?)
                        * (S::one() - alpha(2 * n)?);
                    Ok((constant(self.real.nn_coefficients(&real_n, 0)?.a), constant(predicted)))
                })?);
            }
            out.push(check_identity("classical geronimus: b", None, &params, || {
                let predicted = (S::one() - alpha(2 * n)?) * alpha(2 * n - 1)?
                    - (S::one() + alpha(2 * n)?) * alpha(2 * n + 1)?;
                Ok((constant(self.real.nn_coefficients(&real_n, 0)?.b), constant(predicted)))
            })?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{szego_inverse, RealFunctional, RealTableDefault};
    use crate::report::Status;
    use crate::scalar::GaussianRational as Q;
    use crate::systems;

    fn q(p: i64, d: i64) -> Q {
        Q::from_ratio(p, d)
    }

    fn poly(c: &[(i64, i64)]) -> RealPoly<Q> {
        RealPoly::new(c.iter().map(|&(p, d)| q(p, d)).collect())
    }

    fn single(m: RealFunctional<Q>) -> RealMop<Q> {
        RealMop::new(RealSystem::new(vec![m]).unwrap())
    }

    fn arcsine() -> RealMop<Q> {
        single(szego_inverse(&systems::lebesgue::<Q>().functionals()[0]).unwrap())
    }

    #[test]
    fn arcsine_polynomials() {
        let m = arcsine();
        assert_eq!(m.type_ii(&[1]).unwrap(), poly(&[(0, 1), (1, 1)]));
        assert_eq!(m.type_ii(&[2]).unwrap(), poly(&[(-2, 1), (0, 1), (1, 1)]));
        assert_eq!(m.type_i(&[1]).unwrap(), vec![poly(&[(1, 1)])]);
        assert_eq!(m.type_i(&[0]).unwrap(), vec![RealPoly::zero()]);
        let c = m.nn_coefficients(&[1], 0).unwrap();
        assert_eq!((c.a, c.b), (q(2, 1), q(0, 1)));
        assert_eq!(m.nn_coefficients(&[3], 0).unwrap().a, q(1, 1));
    }

    #[test]
    fn bernstein_szego_pullback() {
        let m = single(szego_inverse(&systems::geometric::<Q>(1, 2).functionals()[0]).unwrap());
        assert_eq!(m.type_ii(&[1]).unwrap(), poly(&[(-1, 1), (1, 1)]));
        assert_eq!(m.nn_coefficients(&[0], 0).unwrap().b, q(1, 1));
        let c = m.nn_coefficients(&[1], 0).unwrap();
        assert_eq!((c.a, c.b), (q(3, 2), q(-1, 2)));
    }

    #[test]
    fn two_atom_rank() {
        let atoms = vec![(q(1, 1), q(1, 2)), (q(-1, 1), q(1, 2))];
        let m = single(RealFunctional::from_atoms(atoms).unwrap());
        assert!(m.is_normal(&[2]).unwrap());
        assert!(!m.is_normal(&[3]).unwrap());
        assert!(matches!(m.type_i(&[3]), Err(Error::NotNormal(_))));
    }

    #[test]
    fn r2_recurrences() {
        let atoms = |xs: &[i64]| {
            RealFunctional::from_atoms(xs.iter().map(|&x| (q(x, 1), q(1, xs.len() as i64))).collect()).unwrap()
        };
        let m = RealMop::new(RealSystem::new(vec![atoms(&[0, 1, 2, 3, 4]), atoms(&[-1, -2, -3, -4, 5])]).unwrap());
        let p = m.type_ii(&[1, 1]).unwrap();
        assert_eq!(p.degree(), Some(2));
        for n in [[0, 0], [1, 0], [1, 1], [2, 1], [1, 2]] {
            for k in 0..2 {
                assert_eq!(m.verify_type_ii_recurrence(&n, k).unwrap().status, Status::Pass, "{n:?} {k}");
                let t1 = m.verify_type_i_recurrence(&n, k).unwrap();
                assert_ne!(t1.status, Status::Fail, "{}", t1.summary_line());
            }
        }
    }

    #[test]
    fn moment_table_pullback() {
        let t = vec![q(1, 1), q(1, 1), q(5, 2)];
        let m = single(RealFunctional::from_moments(t, RealTableDefault::Error));
        assert_eq!(m.nn_coefficients(&[0], 0).unwrap().b, q(1, 1));
        assert!(matches!(m.type_ii(&[2]), Err(Error::MomentUnavailable { .. })));
    }

    #[test]
    fn bridge_lebesgue_and_geometric() {
        for sys in [systems::lebesgue::<Q>(), systems::geometric(1, 2)] {
            let b = SzegoBridge::new(sys).unwrap();
            for n in 0..=3 {
                for rep in b.polynomial_relations(&[n]).unwrap().into_iter().chain(b.geronimus(&[n], 0).unwrap()) {
                    assert_ne!(rep.status, Status::Fail, "{}", rep.summary_line());
                }
            }
            assert!(b.classical_geronimus(4).unwrap().iter().all(|r| r.passed()));
        }
    }

    #[test]
    fn bridge_rejects_asymmetric() {
        assert!(matches!(
            SzegoBridge::new(systems::s2::<Q>().unwrap()),
            Err(Error::NotSymmetric { .. })
        ));
    }
}
