//! The formal group algebras `S` (small torus) and `Ŝ` (big torus).
//!
//! Four backends share the [`Series`] representation:
//! * additive: polynomials in `t_j = x_{e_j}`, with `x_μ = Σ μ_j t_j`;
//! * multiplicative: Laurent polynomials in `y_j = e^{e_j}`, `x_μ = 1 - e^{-μ}`;
//! * connective: as multiplicative over `Z[c^{±1}]`, `x_μ = c^{-1}(1 - e^{-μ})`;
//! * series: truncated power series in `x_j = x_{e_j}` for any law.
//!
//! `e_j` are the simple roots and, for the big torus, `δ` in slot `n`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formal_group::{FglKind, FormalGroupLaw, Series, DEFAULT_DEGREE, INF};
use crate::poly::{lattice_degree, Exp, Poly, LAT, VAR_C, ZERO_EXP};
use crate::root_system::{is_positive, AffElem, LVec, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Torus {
    Big,
    Small,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Additive,
    Multiplicative,
    Connective,
    Series,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Additive => "exact-additive",
            Backend::Multiplicative => "exact-multiplicative",
            Backend::Connective => "exact-connective-generic",
            Backend::Series => "truncated-series",
        }
    }

    fn is_group_ring(self) -> bool {
        matches!(self, Backend::Multiplicative | Backend::Connective)
    }
}

// unimodular U with U β = e_k, stored by columns along with U^{-1}
#[derive(Debug)]
struct Unimod {
    k: usize,
    cols: Vec<LVec>,
    inv_cols: Vec<LVec>,
}

#[derive(Debug)]
pub struct Ring {
    rs: Arc<RootSystem>,
    torus: Torus,
    backend: Backend,
    fgl: FormalGroupLaw,
    prec: u32,
    x_cache: Mutex<HashMap<LVec, Series>>,
    unit_cache: Mutex<HashMap<LVec, Series>>,
    unimod_cache: Mutex<HashMap<LVec, Arc<Unimod>>>,
}

fn sat_add(a: u32, b: u32) -> u32 {
    a.saturating_add(b)
}

impl Ring {
    /// Picks the exact backend for additive, multiplicative and connective
    /// laws, and the truncated series backend otherwise.
    pub fn new(rs: Arc<RootSystem>, torus: Torus, fgl: FormalGroupLaw) -> Self {
        let backend = match fgl.kind() {
            FglKind::Additive => Backend::Additive,
            FglKind::Multiplicative => Backend::Multiplicative,
            FglKind::Connective => Backend::Connective,
            FglKind::Hyperbolic | FglKind::Custom => Backend::Series,
        };
        if backend == Backend::Series {
            let degree = fgl.degree();
            return Self::series(rs, torus, fgl, degree);
        }
        Self::build(rs, torus, backend, fgl, INF)
    }

    /// Truncated series backend at precision `degree`.
    pub fn series(rs: Arc<RootSystem>, torus: Torus, fgl: FormalGroupLaw, degree: u32) -> Self {
        let degree = degree.max(1);
        let fgl = if fgl.kind() == FglKind::Custom { fgl } else { fgl.with_degree(degree + 2) };
        Self::build(rs, torus, Backend::Series, fgl, degree)
    }

    fn build(rs: Arc<RootSystem>, torus: Torus, backend: Backend, fgl: FormalGroupLaw, prec: u32) -> Self {
        Ring {
            rs,
            torus,
            backend,
            fgl,
            prec,
            x_cache: Mutex::new(HashMap::new()),
            unit_cache: Mutex::new(HashMap::new()),
            unimod_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn additive(rs: Arc<RootSystem>, torus: Torus) -> Self {
        Self::new(rs, torus, FormalGroupLaw::additive())
    }

    pub fn multiplicative(rs: Arc<RootSystem>, torus: Torus) -> Self {
        Self::new(rs, torus, FormalGroupLaw::multiplicative())
    }

    pub fn connective(rs: Arc<RootSystem>, torus: Torus) -> Self {
        Self::new(rs, torus, FormalGroupLaw::connective())
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.rs.clone()
    }

    pub fn torus(&self) -> Torus {
        self.torus
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn fgl(&self) -> &FormalGroupLaw {
        &self.fgl
    }

    /// Working precision (`INF` on exact backends).
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.backend != Backend::Series
    }

    /// Rank of the character lattice.
    pub fn dim(&self) -> usize {
        match self.torus {
            Torus::Big => self.rs.rank() + 1,
            Torus::Small => self.rs.rank(),
        }
    }

    /// The same backend on the other torus.
    pub fn with_torus(&self, torus: Torus) -> Ring {
        Self::build(self.rs.clone(), torus, self.backend, self.fgl.clone(), self.prec)
    }

    pub fn make(&self, poly: Poly, prec: u32) -> Series {
        if self.backend == Backend::Series {
            Series::new(poly, prec.min(self.prec))
        } else {
            Series::exact(poly)
        }
    }

    pub fn zero(&self) -> Series {
        Series::exact(Poly::zero())
    }

    pub fn one(&self) -> Series {
        Series::exact(Poly::one())
    }

    /// A coefficient-ring scalar (a polynomial in `c`, `a`).
    pub fn scalar(&self, p: Poly) -> Series {
        Series::exact(p)
    }

    /// `𝔠 = -a_11`, the parameter of the connective part of the law.
    pub fn c_param(&self) -> Series {
        self.scalar(self.fgl.c_parameter())
    }

    pub fn is_positive_root(&self, v: &LVec) -> bool {
        let n = self.rs.rank();
        match self.torus {
            Torus::Small => is_positive(&v[..n]),
            Torus::Big => v[n] > 0 || (v[n] == 0 && is_positive(&v[..n])),
        }
    }

    fn check_lattice(&self, mu: &LVec) -> Result<()> {
        if mu[self.dim()..].iter().any(|&x| x != 0) {
            return Err(Error::LatticeMismatch(format!("{:?} is not in the lattice of rank {}", mu, self.dim())));
        }
        Ok(())
    }

    /// `x_μ`.
    pub fn x(&self, mu: &LVec) -> Series {
        self.try_x(mu).expect("vector outside the character lattice")
    }

    pub fn try_x(&self, mu: &LVec) -> Result<Series> {
        self.check_lattice(mu)?;
        let d = self.dim();
        let mut neg = ZERO_EXP;
        for j in 0..d {
            neg[j] = -(mu[j] as i16);
        }
        Ok(match self.backend {
            Backend::Additive => {
                let mut p = Poly::zero();
                for j in 0..d {
                    let mut e = ZERO_EXP;
                    e[j] = 1;
                    p.add_term(e, mu[j] as i128);
                }
                Series::exact(p)
            }
            Backend::Multiplicative => {
                let mut p = Poly::one();
                p.add_term(neg, -1);
                Series::exact(p)
            }
            Backend::Connective => {
                let mut p = Poly::one();
                p.add_term(neg, -1);
                let mut cinv = ZERO_EXP;
                cinv[VAR_C] = -1;
                Series::exact(p.shift(&cinv))
            }
            Backend::Series => {
                if let Some(s) = self.x_cache.lock().unwrap().get(mu) {
                    return Ok(s.clone());
                }
                let mut acc = Series::new(Poly::zero(), self.prec);
                for j in 0..d {
                    if mu[j] == 0 {
                        continue;
                    }
                    let xj = Series::new(Poly::var(j), self.prec);
                    let m = self.fgl.multiple(mu[j], &xj)?;
                    acc = self.fgl.add(&acc, &m)?;
                }
                let acc = Series::new(acc.poly, self.prec);
                self.x_cache.lock().unwrap().insert(*mu, acc.clone());
                acc
            }
        })
    }

    pub fn add(&self, a: &Series, b: &Series) -> Series {
        self.make(&a.poly + &b.poly, a.prec.min(b.prec))
    }

    pub fn sub(&self, a: &Series, b: &Series) -> Series {
        self.make(&a.poly - &b.poly, a.prec.min(b.prec))
    }

    pub fn neg(&self, a: &Series) -> Series {
        Series { poly: -&a.poly, prec: a.prec }
    }

    pub fn mul(&self, a: &Series, b: &Series) -> Series {
        if self.backend != Backend::Series {
            return Series::exact(&a.poly * &b.poly);
        }
        let va = a.poly.valuation().map(|v| v as u32).unwrap_or(sat_add(a.prec, 1));
        let vb = b.poly.valuation().map(|v| v as u32).unwrap_or(sat_add(b.prec, 1));
        let prec = sat_add(a.prec, vb).min(sat_add(b.prec, va)).min(self.prec);
        Series::new(a.poly.mul_trunc(&b.poly, Some(prec as i32)), prec)
    }

    pub fn pow(&self, a: &Series, k: u32) -> Series {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn is_zero(&self, a: &Series) -> bool {
        a.poly.is_zero()
    }

    /// The ring automorphism `x_μ ↦ x_{Mμ}`, with `M` given by the images of
    /// the basis vectors.
    pub fn automorphism(&self, f: &Series, cols: &[LVec]) -> Series {
        let d = self.dim();
        if self.backend.is_group_ring() {
            let poly = f.poly.map_exps(|e| {
                let mut out = *e;
                for slot in out.iter_mut().take(d) {
                    *slot = 0;
                }
                for j in 0..d {
                    if e[j] != 0 {
                        for k in 0..d {
                            out[k] += e[j] * cols[j][k] as i16;
                        }
                    }
                }
                out
            });
            return Series::exact(poly);
        }
        let images: Vec<Poly> = cols.iter().take(d).map(|c| self.x(c).poly).collect();
        let t = if self.backend == Backend::Series { Some(f.prec.min(self.prec) as i32) } else { None };
        self.make(f.poly.substitute(&images, t), f.prec)
    }

    fn action_cols(&self, x: &AffElem) -> Vec<LVec> {
        (0..self.dim())
            .map(|j| {
                let mut e = [0; LAT];
                e[j] = 1;
                match self.torus {
                    Torus::Big => self.rs.act(x, &e),
                    Torus::Small => self.rs.act_small(x, &e),
                }
            })
            .collect()
    }

    /// `x(f)` for `x ∈ W_a`; on the small torus only the finite part acts.
    pub fn act(&self, x: &AffElem, f: &Series) -> Series {
        if x.w == 0 && (self.torus == Torus::Small || x.lam.iter().all(|&l| l == 0)) {
            return f.clone();
        }
        self.automorphism(f, &self.action_cols(x))
    }

    /// Image of a lattice vector under `x`.
    pub fn act_vec(&self, x: &AffElem, v: &LVec) -> LVec {
        match self.torus {
            Torus::Big => self.rs.act(x, v),
            Torus::Small => self.rs.act_small(x, v),
        }
    }

    /// `𝔭`: sets the `δ` direction to zero. `self` is the big-torus ring.
    pub fn project_delta(&self, f: &Series) -> Series {
        assert_eq!(self.torus, Torus::Big, "projection starts on the big torus");
        let n = self.rs.rank();
        let poly = if self.backend.is_group_ring() {
            f.poly.map_exps(|e| {
                let mut out = *e;
                out[n] = 0;
                out
            })
        } else {
            f.poly.filter(|e| e[n] == 0)
        };
        Series { poly, prec: f.prec }
    }

    fn unimod(&self, beta: &LVec) -> Arc<Unimod> {
        if let Some(u) = self.unimod_cache.lock().unwrap().get(beta) {
            return u.clone();
        }
        let d = self.dim();
        let mut v: Vec<i64> = beta[..d].iter().map(|&x| x as i64).collect();
        let mut u = vec![vec![0i64; d]; d];
        let mut uinv = vec![vec![0i64; d]; d];
        for i in 0..d {
            u[i][i] = 1;
            uinv[i][i] = 1;
        }
        let k = loop {
            let nz: Vec<usize> = (0..d).filter(|&i| v[i] != 0).collect();
            assert!(!nz.is_empty(), "division by x_0");
            let i = *nz.iter().min_by_key(|&&i| v[i].abs()).unwrap();
            if nz.len() == 1 {
                assert_eq!(v[i].abs(), 1, "{beta:?} is not primitive");
                if v[i] < 0 {
                    v[i] = 1;
                    for c in 0..d {
                        u[i][c] = -u[i][c];
                        uinv[c][i] = -uinv[c][i];
                    }
                }
                break i;
            }
            for &j in &nz {
                if j == i {
                    continue;
                }
                let q = v[j] / v[i];
                v[j] -= q * v[i];
                for c in 0..d {
                    u[j][c] -= q * u[i][c];
                    uinv[c][i] += q * uinv[c][j];
                }
            }
        };
        let col = |m: &Vec<Vec<i64>>, j: usize| {
            let mut out = [0; LAT];
            for r in 0..d {
                out[r] = m[r][j] as i32;
            }
            out
        };
        let res = Arc::new(Unimod {
            k,
            cols: (0..d).map(|j| col(&u, j)).collect(),
            inv_cols: (0..d).map(|j| col(&uinv, j)).collect(),
        });
        self.unimod_cache.lock().unwrap().insert(*beta, res.clone());
        res
    }

    // exact division by x_{e_k}
    fn divide_basis(&self, f: &Series, k: usize) -> Option<Series> {
        match self.backend {
            Backend::Additive | Backend::Series => {
                if f.poly.terms().any(|(e, _)| e[k] < 1) {
                    return None;
                }
                let mut s = ZERO_EXP;
                s[k] = -1;
                let prec = if f.prec == INF { INF } else { f.prec.checked_sub(1)? };
                Some(Series { poly: f.poly.shift(&s), prec })
            }
            Backend::Multiplicative | Backend::Connective => {
                let parts = f.poly.split_by_var(k);
                let (lo, hi) = match (parts.keys().next(), parts.keys().next_back()) {
                    (Some(&lo), Some(&hi)) => (lo, hi),
                    _ => return Some(self.zero()),
                };
                let mut acc = Poly::zero();
                let mut out = Poly::zero();
                for m in (lo + 1..=hi).rev() {
                    if let Some(p) = parts.get(&m) {
                        acc.add_assign_ref(p);
                    }
                    let mut e = ZERO_EXP;
                    e[k] = m;
                    out.add_assign_ref(&acc.shift(&e));
                }
                acc.add_assign_ref(&parts[&lo]);
                if !acc.is_zero() {
                    return None;
                }
                if self.backend == Backend::Connective {
                    let mut c = ZERO_EXP;
                    c[VAR_C] = 1;
                    out = out.shift(&c);
                }
                Some(Series::exact(out))
            }
        }
    }

    /// `f / x_β` if `x_β` divides `f` (to the available precision on the
    /// series backend).
    pub fn divide_x(&self, f: &Series, beta: &LVec) -> Option<Series> {
        if f.poly.is_zero() {
            let prec = if f.prec == INF { INF } else { f.prec.checked_sub(1)? };
            return Some(Series { poly: Poly::zero(), prec });
        }
        let d = self.dim();
        let basis = (0..d).find(|&k| beta[k] == 1 && (0..d).all(|j| j == k || beta[j] == 0));
        if let Some(k) = basis {
            return self.divide_basis(f, k);
        }
        let u = self.unimod(beta);
        let g = self.automorphism(f, &u.cols);
        let q = self.divide_basis(&g, u.k)?;
        Some(self.automorphism(&q, &u.inv_cols))
    }

    /// `(true, g)` with `f = x_β^d g`, or `(false, _)`.
    pub fn divides(&self, f: &Series, beta: &LVec, d: u32) -> Result<Option<Series>> {
        if self.backend == Backend::Series && f.prec != INF && f.prec < d + 2 {
            return Err(Error::PrecisionUnderflow(format!(
                "divisibility by x^{d} needs precision {} but only {} is available",
                d + 2,
                f.prec
            )));
        }
        let mut g = f.clone();
        for _ in 0..d {
            match self.divide_x(&g, beta) {
                Some(q) => g = q,
                None => return Ok(None),
            }
        }
        Ok(Some(g))
    }

    /// `u_β^{-1}` where `x_{-β} = u_β x_β`.
    pub fn unit_inv(&self, beta: &LVec) -> Series {
        let d = self.dim();
        match self.backend {
            Backend::Additive => Series::exact(Poly::constant(-1)),
            Backend::Multiplicative | Backend::Connective => {
                let mut e = ZERO_EXP;
                for j in 0..d {
                    e[j] = -(beta[j] as i16);
                }
                Series::exact(Poly::monomial(e, -1))
            }
            Backend::Series => {
                if let Some(s) = self.unit_cache.lock().unwrap().get(beta) {
                    return s.clone();
                }
                let n = self.prec;
                let b = self.fgl.inverse_coefficients(n + 1);
                let xb = self.x(beta);
                // u = Σ_{k≥1} b_k x_β^{k-1}
                let mut u = Poly::zero();
                let mut power = Poly::one();
                for bk in b.iter().skip(1) {
                    u.add_assign_ref(&power.mul_trunc(bk, Some(n as i32)));
                    power = power.mul_trunc(&xb.poly, Some(n as i32));
                }
                // u = -(1 - r)  =>  u^{-1} = -Σ r^k
                let r = &u + &Poly::one();
                let mut inv = Poly::zero();
                let mut power = Poly::one();
                for _ in 0..=n {
                    inv.sub_assign_ref(&power);
                    power = power.mul_trunc(&r, Some(n as i32));
                }
                let s = Series::new(inv, n);
                self.unit_cache.lock().unwrap().insert(*beta, s.clone());
                s
            }
        }
    }

    /// Evaluates the parameter `c` at an integer.
    pub fn specialize_c(&self, f: &Series, value: i128) -> Series {
        Series { poly: f.poly.eval_var(VAR_C, value), prec: f.prec }
    }

    /// Terms grouped by lattice exponent, sorted graded-lex.
    pub fn grouped_terms(&self, f: &Series) -> Vec<(Vec<i32>, Poly)> {
        let d = self.dim();
        let mut groups: BTreeMap<(i32, Vec<i32>), Poly> = BTreeMap::new();
        for (e, c) in f.poly.terms() {
            let key: Vec<i32> = e[..d].iter().map(|&x| x as i32).collect();
            let mut s: Exp = ZERO_EXP;
            s[LAT..].copy_from_slice(&e[LAT..]);
            groups.entry((lattice_degree(e), key)).or_default().add_term(s, *c);
        }
        groups.into_iter().map(|((_, k), p)| (k, p)).collect()
    }

    pub fn to_json(&self, f: &Series) -> Value {
        let terms: Vec<Value> =
            self.grouped_terms(f).into_iter().map(|(k, p)| json!([k, p.scalar_string()])).collect();
        let mut v = json!({ "backend": self.backend.name(), "terms": terms });
        if f.prec != INF {
            v["precision"] = json!(f.prec);
        }
        v
    }

    pub fn default_degree() -> u32 {
        DEFAULT_DEGREE
    }
}

/// A lattice vector with the given leading coordinates.
pub fn lvec(v: &[i32]) -> LVec {
    let mut out = [0; LAT];
    out[..v.len()].copy_from_slice(v);
    out
}
