//! Moment matrices `T_{n;m}`, normality, the four polynomial families and
//! their recurrence coefficients.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::index::IndexPair;
use crate::linalg::Matrix;
use crate::moments::FunctionalSystem;
use crate::polynomial::{vector, LaurentPoly, TypeIVector};
use crate::scalar::Scalar;

/// Everything known about one index pair.
#[derive(Clone)]
pub struct SolveResult<S> {
    pub idx: IndexPair,
    pub normal: bool,
    pub det: S,
    pub phi: Option<LaurentPoly<S>>,
    pub phi_star: Option<LaurentPoly<S>>,
    pub xi: Option<TypeIVector<S>>,
    pub xi_star: Option<TypeIVector<S>>,
    /// `z^{-|m|}` coefficient of `Phi`.
    pub alpha: Option<S>,
    /// `z^{|n|}` coefficient of `Phi*`.
    pub beta: Option<S>,
}

impl<S: Scalar> SolveResult<S> {
    /// Normality flag, `det T`, the families and `alpha`, `beta`; absent
    /// entries (non-normal index) serialize as `null`.
    pub fn to_json(&self) -> serde_json::Value {
        let poly = |p: &Option<LaurentPoly<S>>| p.as_ref().map(|p| p.to_json());
        let vec = |v: &Option<TypeIVector<S>>| v.as_ref().map(|v| vector::to_json(v));
        let scalar = |c: &Option<S>| c.as_ref().map(|c| c.to_json());
        serde_json::json!({
            "index": self.idx.to_string(),
            "normal": self.normal,
            "det_T": self.det.to_json(),
            "alpha": scalar(&self.alpha),
            "beta": scalar(&self.beta),
            "phi": poly(&self.phi),
            "phi_star": poly(&self.phi_star),
            "xi": vec(&self.xi),
            "xi_star": vec(&self.xi_star),
        })
    }
}

impl<S: Scalar> fmt::Debug for SolveResult<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolveResult")
            .field("idx", &self.idx)
            .field("normal", &self.normal)
            .field("det", &self.det)
            .field("phi", &self.phi)
            .field("phi_star", &self.phi_star)
            .field("xi", &self.xi)
            .field("xi_star", &self.xi_star)
            .finish()
    }
}

/// `Phi` and `Phi*` on the boundary `(n; -n)`: the single monomial
/// `z^{|n|} = z^{-|m|}` the span allows. Equals 1 whenever `|n| = 0`.
pub fn boundary_poly<S: Scalar>(idx: &IndexPair) -> LaurentPoly<S> {
    LaurentPoly::monomial(idx.abs_n(), S::one())
}

/// `kappa_{n+e_j;m,j}` and `ell_{n;m+e_j,j}`, the extremal coefficients of
/// the type I vectors one step up, computed from `(n; m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KappaEll<S> {
    pub kappa: S,
    pub ell: S,
}

struct Memo<K, V>(Mutex<HashMap<K, V>>);

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    fn new() -> Self {
        Self(Mutex::new(HashMap::new()))
    }

    // The lock is not held while computing; a race only duplicates work.
    fn get_or(&self, key: &K, f: impl FnOnce() -> Result<V>) -> Result<V> {
        if let Some(v) = self.0.lock().expect("memo poisoned").get(key) {
            return Ok(v.clone());
        }
        let v = f()?;
        self.0.lock().expect("memo poisoned").entry(key.clone()).or_insert_with(|| v.clone());
        Ok(v)
    }
}

#[derive(Clone)]
struct Det<S> {
    value: S,
    singular: bool,
}

/// Solver for Laurent multiple orthogonal polynomials of one system, with
/// per-index memoization. Safe to share across threads.
pub struct LaurentMop<S> {
    system: FunctionalSystem<S>,
    dets: Memo<IndexPair, Det<S>>,
    phi: Memo<IndexPair, Option<LaurentPoly<S>>>,
    phi_star: Memo<IndexPair, Option<LaurentPoly<S>>>,
    xi: Memo<IndexPair, Option<TypeIVector<S>>>,
    xi_star: Memo<IndexPair, Option<TypeIVector<S>>>,
    coeffs: Memo<(Coeff, IndexPair, usize, usize), S>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Coeff {
    Alpha,
    Beta,
    Rho,
    Sigma,
    Gamma,
    Eta,
}

impl<S: Scalar> LaurentMop<S> {
    pub fn new(system: FunctionalSystem<S>) -> Self {
        Self {
            system,
            dets: Memo::new(),
            phi: Memo::new(),
            phi_star: Memo::new(),
            xi: Memo::new(),
            xi_star: Memo::new(),
            coeffs: Memo::new(),
        }
    }

    pub fn system(&self) -> &FunctionalSystem<S> {
        &self.system
    }

    pub fn r(&self) -> usize {
        self.system.r()
    }

    fn check(&self, idx: &IndexPair) -> Result<()> {
        if idx.r() != self.r() {
            return Err(Error::InvalidInput(format!(
                "index {idx} has {} components but the system has {} functionals",
                idx.r(),
                self.r()
            )));
        }
        if !idx.in_cone() {
            return Err(Error::InvalidIndex(idx.to_string()));
        }
        Ok(())
    }

    /// Entry `(p, q)` of block `j` is `c_{|m| - m_j + p - q, j}`; `T_{n;-n} = [1]`.
    pub fn build_t(&self, idx: &IndexPair) -> Result<Matrix<S>> {
        self.check(idx)?;
        if idx.is_boundary() {
            return Ok(Matrix::identity(1));
        }
        self.bordered(idx, 0, idx.size())
    }

    /// The block rows of `T_{n;m}` continued over columns `first .. first + count`;
    /// column `q` of block `j` holds `c_{|m| - m_j + p - q, j}` for any integer `q`.
    pub(crate) fn bordered(&self, idx: &IndexPair, first: usize, count: usize) -> Result<Matrix<S>> {
        let big_m = idx.abs_m();
        let mut rows: Vec<Vec<S>> = Vec::with_capacity(idx.size());
        for j in 0..self.r() {
            for p in 0..idx.block_height(j) as i64 {
                let mut row = Vec::with_capacity(count);
                for q in first..first + count {
                    row.push(self.system.moment(j, big_m - idx.m[j] + p - q as i64)?);
                }
                rows.push(row);
            }
        }
        Ok(Matrix::from_fn(rows.len(), count, |i, j| rows[i][j].clone()))
    }

    pub fn det(&self, idx: &IndexPair) -> Result<S> {
        Ok(self.det_entry(idx)?.value)
    }

    fn det_entry(&self, idx: &IndexPair) -> Result<Det<S>> {
        self.check(idx)?;
        self.dets.get_or(idx, || {
            let e = self.build_t(idx)?.solve(&[]);
            Ok(Det { value: e.det, singular: e.singular })
        })
    }

    pub fn is_normal(&self, idx: &IndexPair) -> Result<bool> {
        Ok(!self.det_entry(idx)?.singular)
    }

    /// `Ok(())` when normal, `NotNormal` otherwise.
    pub fn require_normal(&self, idx: &IndexPair) -> Result<()> {
        if self.is_normal(idx)? {
            Ok(())
        } else {
            Err(Error::NotNormal(idx.to_string()))
        }
    }

    fn not_normal<T>(idx: &IndexPair, v: Option<T>) -> Result<T> {
        v.ok_or_else(|| Error::NotNormal(idx.to_string()))
    }

    /// `Phi_{n;m}`: `z^{|n|}` coefficient 1, `L_j[Phi w^{-k}] = 0` for `-m_j <= k <= n_j - 1`.
    pub fn type_ii(&self, idx: &IndexPair) -> Result<LaurentPoly<S>> {
        self.check(idx)?;
        let v = self.phi.get_or(idx, || {
            if idx.is_boundary() {
                return Ok(Some(boundary_poly(idx)));
            }
            if !self.is_normal(idx)? {
                return Ok(None);
            }
            let n = idx.size();
            let t = self.build_t(idx)?;
            let last = self.bordered(idx, n, 1)?;
            let rhs: Vec<S> = (0..n).map(|i| -last.get(i, 0).clone()).collect();
            let e = t.solve(&[rhs]);
            if e.singular {
                return Ok(None);
            }
            let lowest = -idx.abs_m();
            let mut phi = LaurentPoly::from_dense(lowest, e.solutions[0].iter().cloned());
            phi.add_term(idx.abs_n(), S::one());
            Ok(Some(phi))
        })?;
        Self::not_normal(idx, v)
    }

    /// `Phi*_{n;m}`: `z^{-|m|}` coefficient 1, `L_j[Phi* w^{-k}] = 0` for `-m_j + 1 <= k <= n_j`.
    pub fn type_ii_star(&self, idx: &IndexPair) -> Result<LaurentPoly<S>> {
        self.check(idx)?;
        let v = self.phi_star.get_or(idx, || {
            if idx.is_boundary() {
                return Ok(Some(boundary_poly(idx)));
            }
            if !self.is_normal(idx)? {
                return Ok(None);
            }
            let t = self.build_t(idx)?;
            // column q = -1 of the same block pattern
            let mut rhs = Vec::with_capacity(idx.size());
            for j in 0..self.r() {
                for p in 0..idx.block_height(j) as i64 {
                    rhs.push(-self.system.moment(j, idx.abs_m() - idx.m[j] + 1 + p)?);
                }
            }
            let e = t.solve(&[rhs]);
            if e.singular {
                return Ok(None);
            }
            let lowest = -idx.abs_m() + 1;
            let mut phi = LaurentPoly::from_dense(lowest, e.solutions[0].iter().cloned());
            phi.add_term(-idx.abs_m(), S::one());
            Ok(Some(phi))
        })?;
        Self::not_normal(idx, v)
    }

    /// Shared solver for the two type I families. Component `j` spans
    /// `z^{lo_j .. lo_j + n_j + m_j - 1}` with `lo_j = -n_j + shift`; the
    /// conditions run over `k = -|n| + shift ..` and the unit sits at row `unit_row`.
    fn solve_type_i(&self, idx: &IndexPair, shift: i64, unit_row: usize) -> Result<Option<TypeIVector<S>>> {
        if idx.is_boundary() {
            return Ok(Some(vector::zeros(self.r())));
        }
        if !self.is_normal(idx)? {
            return Ok(None);
        }
        let n = idx.size();
        let mut cols: Vec<(usize, i64)> = Vec::with_capacity(n);
        for j in 0..self.r() {
            for p in 0..idx.block_height(j) as i64 {
                cols.push((j, -idx.n[j] + shift + p));
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for q in 0..n as i64 {
            let k = -idx.abs_n() + shift + q;
            for &(j, e) in &cols {
                entries.push(self.system.moment(j, k - e)?);
            }
        }
        let a = Matrix::from_fn(n, n, |i, j| entries[i * n + j].clone());
        let rhs: Vec<S> = (0..n).map(|q| if q == unit_row { S::one() } else { S::zero() }).collect();
        let e = a.solve(&[rhs]);
        if e.singular {
            return Ok(None);
        }
        let mut out = vector::zeros(self.r());
        for (&(j, exp), c) in cols.iter().zip(&e.solutions[0]) {
            out[j].add_term(exp, c.clone());
        }
        Ok(Some(out))
    }

    /// `Xi_{n;m}`: component `j` in `span z^{-n_j .. m_j - 1}`,
    /// `sum_j L_j[Xi_j w^{-k}] = delta_{k,-|n|}` for `-|n| <= k <= |m| - 1`.
    pub fn type_i(&self, idx: &IndexPair) -> Result<TypeIVector<S>> {
        self.check(idx)?;
        let v = self.xi.get_or(idx, || self.solve_type_i(idx, 0, 0))?;
        Self::not_normal(idx, v)
    }

    /// `Xi*_{n;m}`: component `j` in `span z^{-n_j + 1 .. m_j}`,
    /// `sum_j L_j[Xi*_j w^{-k}] = delta_{k,|m|}` for `-|n| + 1 <= k <= |m|`.
    pub fn type_i_star(&self, idx: &IndexPair) -> Result<TypeIVector<S>> {
        self.check(idx)?;
        let v = self.xi_star.get_or(idx, || {
            self.solve_type_i(idx, 1, idx.size().saturating_sub(1))
        })?;
        Self::not_normal(idx, v)
    }

    /// `alpha_{n;m}`; 1 on the boundary `(n; -n)`.
    pub fn alpha(&self, idx: &IndexPair) -> Result<S> {
        self.coeffs.get_or(&(Coeff::Alpha, idx.clone(), 0, 0), || Ok(self.type_ii(idx)?.coeff(-idx.abs_m())))
    }

    /// `beta_{n;m}`; 1 on the boundary `(n; -n)`.
    pub fn beta(&self, idx: &IndexPair) -> Result<S> {
        self.coeffs.get_or(&(Coeff::Beta, idx.clone(), 0, 0), || Ok(self.type_ii_star(idx)?.coeff(idx.abs_n())))
    }

    pub fn solve(&self, idx: &IndexPair) -> Result<SolveResult<S>> {
        self.check(idx)?;
        let det = self.det_entry(idx)?;
        let normal = !det.singular;
        fn opt<T>(r: Result<T>) -> Result<Option<T>> {
            match r {
                Ok(v) => Ok(Some(v)),
                Err(Error::NotNormal(_)) => Ok(None),
                Err(e) => Err(e),
            }
        }
        Ok(SolveResult {
            idx: idx.clone(),
            normal,
            det: det.value,
            phi: opt(self.type_ii(idx))?,
            phi_star: opt(self.type_ii_star(idx))?,
            xi: opt(self.type_i(idx))?,
            xi_star: opt(self.type_i_star(idx))?,
            alpha: opt(self.alpha(idx))?,
            beta: opt(self.beta(idx))?,
        })
    }

    /// `L_j[f(w) w^{-k}]`.
    pub fn pair(&self, j: usize, f: &LaurentPoly<S>, k: i64) -> Result<S> {
        self.system.apply_shifted(j, f, k)
    }

    fn ratio(num: S, den: S, what: &str) -> Result<S> {
        if den.is_negligible(1.0) {
            return Err(Error::DivisionByZero(what.to_string()));
        }
        Ok(num / den)
    }

    /// `rho_{n;m,j} = L_j[Phi_{n;m} w^{-n_j}] / L_j[Phi_{n-e_j;m} w^{-n_j+1}]`.
    ///
    /// Returns 0 when `(n - e_j; m)` leaves the cone (see [`Self::rho_defined`]).
    pub fn rho(&self, idx: &IndexPair, j: usize) -> Result<S> {
        let Some(prev) = idx.n_minus(j) else {
            self.check(idx)?;
            return Ok(S::zero());
        };
        self.coeffs.get_or(&(Coeff::Rho, idx.clone(), j, j), || {
            let phi = self.type_ii(idx)?;
            let phi_prev = self.type_ii(&prev)?;
            Self::ratio(
                self.pair(j, &phi, idx.n[j])?,
                self.pair(j, &phi_prev, idx.n[j] - 1)?,
                &format!("rho at {idx}, j = {}", j + 1),
            )
        })
    }

    /// `false` when `rho_{n;m,j}` is zero only by the out-of-cone convention.
    pub fn rho_defined(&self, idx: &IndexPair, j: usize) -> bool {
        idx.n_minus(j).is_some()
    }

    /// `sigma_{n;m,j} = L_j[Phi*_{n;m} w^{m_j}] / L_j[Phi*_{n;m-e_j} w^{m_j-1}]`.
    pub fn sigma(&self, idx: &IndexPair, j: usize) -> Result<S> {
        let Some(prev) = idx.m_minus(j) else {
            self.check(idx)?;
            return Ok(S::zero());
        };
        self.coeffs.get_or(&(Coeff::Sigma, idx.clone(), j, j), || {
            let ps = self.type_ii_star(idx)?;
            let ps_prev = self.type_ii_star(&prev)?;
            Self::ratio(
                self.pair(j, &ps, -idx.m[j])?,
                self.pair(j, &ps_prev, -(idx.m[j] - 1))?,
                &format!("sigma at {idx}, j = {}", j + 1),
            )
        })
    }

    pub fn sigma_defined(&self, idx: &IndexPair, j: usize) -> bool {
        idx.m_minus(j).is_some()
    }

    /// `gamma^{kl}_{n;m} = L_l[Phi_{n+e_k;m} w^{-n_l}] / L_l[Phi_{n;m} w^{-n_l}]`.
    pub fn gamma(&self, idx: &IndexPair, k: usize, l: usize) -> Result<S> {
        if k == l {
            return Err(Error::IndexClash(k + 1));
        }
        self.coeffs.get_or(&(Coeff::Gamma, idx.clone(), k, l), || {
            let up = self.type_ii(&idx.n_plus(k))?;
            let phi = self.type_ii(idx)?;
            Self::ratio(
                self.pair(l, &up, idx.n[l])?,
                self.pair(l, &phi, idx.n[l])?,
                &format!("gamma at {idx}, k = {}, l = {}", k + 1, l + 1),
            )
        })
    }

    /// `eta^{kl}_{n;m} = L_l[Phi*_{n;m+e_k} w^{m_l}] / L_l[Phi*_{n;m} w^{m_l}]`.
    pub fn eta(&self, idx: &IndexPair, k: usize, l: usize) -> Result<S> {
        if k == l {
            return Err(Error::IndexClash(k + 1));
        }
        self.coeffs.get_or(&(Coeff::Eta, idx.clone(), k, l), || {
            let up = self.type_ii_star(&idx.m_plus(k))?;
            let ps = self.type_ii_star(idx)?;
            Self::ratio(
                self.pair(l, &up, -idx.m[l])?,
                self.pair(l, &ps, -idx.m[l])?,
                &format!("eta at {idx}, k = {}, l = {}", k + 1, l + 1),
            )
        })
    }

    /// `gamma^{kl}` with the diagonal convention `gamma^{kk} = 0`.
    pub fn gamma_or_zero(&self, idx: &IndexPair, k: usize, l: usize) -> Result<S> {
        if k == l {
            Ok(S::zero())
        } else {
            self.gamma(idx, k, l)
        }
    }

    pub fn eta_or_zero(&self, idx: &IndexPair, k: usize, l: usize) -> Result<S> {
        if k == l {
            Ok(S::zero())
        } else {
            self.eta(idx, k, l)
        }
    }

    /// `kappa_{n+e_j;m,j} = 1 / L_j[Phi_{n;m} w^{-n_j}]` and
    /// `ell_{n;m+e_j,j} = 1 / L_j[Phi*_{n;m} w^{m_j}]`.
    pub fn kappa_ell(&self, idx: &IndexPair, j: usize) -> Result<KappaEll<S>> {
        let phi = self.type_ii(idx)?;
        let ps = self.type_ii_star(idx)?;
        Ok(KappaEll {
            kappa: Self::ratio(S::one(), self.pair(j, &phi, idx.n[j])?, &format!("kappa at {idx}"))?,
            ell: Self::ratio(S::one(), self.pair(j, &ps, -idx.m[j])?, &format!("ell at {idx}"))?,
        })
    }
}
