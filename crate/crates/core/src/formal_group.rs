//! One-dimensional formal group laws over `Z[c, a]` and truncated series
//! arithmetic with them.
//!
//! A series is a [`Poly`] whose lattice slots hold series variables and whose
//! parameter slots hold the coefficient ring. `prec` records the degree
//! through which the series is known; [`INF`] marks exact polynomials.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Exp, Poly, VAR_A, VAR_C, ZERO_EXP};

pub const INF: u32 = u32::MAX;

/// Default truncation degree for series-backed laws.
pub const DEFAULT_DEGREE: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FglKind {
    Additive,
    Multiplicative,
    Connective,
    Hyperbolic,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub poly: Poly,
    pub prec: u32,
}

impl Series {
    pub fn exact(poly: Poly) -> Self {
        Series { poly, prec: INF }
    }

    pub fn new(poly: Poly, prec: u32) -> Self {
        let poly = if prec == INF { poly } else { poly.truncate(prec as i32) };
        Series { poly, prec }
    }

    pub fn zero() -> Self {
        Series::exact(Poly::zero())
    }

    /// The series variable in lattice slot `i`.
    pub fn variable(i: usize) -> Self {
        Series::exact(Poly::var(i))
    }
}

fn trunc_opt(prec: u32) -> Option<i32> {
    if prec == INF {
        None
    } else {
        Some(prec as i32)
    }
}

fn param(slot: usize, k: i16) -> Poly {
    Poly::var_pow(slot, k)
}

/// `F(x, y) = sum a_ij x^i y^j`, with `a_ij` polynomials in the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalGroupLaw {
    kind: FglKind,
    degree: u32,
    coeffs: BTreeMap<(u32, u32), Poly>,
}

impl FormalGroupLaw {
    pub fn additive() -> Self {
        Self::connective_like(FglKind::Additive, Poly::zero(), DEFAULT_DEGREE)
    }

    pub fn multiplicative() -> Self {
        Self::connective_like(FglKind::Multiplicative, Poly::one(), DEFAULT_DEGREE)
    }

    /// `x + y - c xy` with `c` a formal parameter.
    pub fn connective() -> Self {
        Self::connective_like(FglKind::Connective, param(VAR_C, 1), DEFAULT_DEGREE)
    }

    fn connective_like(kind: FglKind, c: Poly, degree: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((1, 0), Poly::one());
        coeffs.insert((0, 1), Poly::one());
        if !c.is_zero() {
            coeffs.insert((1, 1), -&c);
        }
        FormalGroupLaw { kind, degree, coeffs }
    }

    /// `(x + y - c xy) / (1 + a xy)` expanded through total degree `degree`.
    pub fn hyperbolic(degree: u32) -> Self {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let xy = &x * &y;
        let numerator = &(&x + &y) - &(&xy * &param(VAR_C, 1));
        let mut inv = Poly::zero();
        let step = &xy * &param(VAR_A, 1).scale(-1);
        let mut power = Poly::one();
        for _ in 0..=degree / 2 {
            inv.add_assign_ref(&power);
            power = power.mul_trunc(&step, Some(degree as i32));
        }
        let f = numerator.mul_trunc(&inv, Some(degree as i32));
        let mut coeffs: BTreeMap<(u32, u32), Poly> = BTreeMap::new();
        for (e, c) in f.terms() {
            let mut scalar_exp = ZERO_EXP;
            scalar_exp[VAR_C] = e[VAR_C];
            scalar_exp[VAR_A] = e[VAR_A];
            coeffs
                .entry((e[0] as u32, e[1] as u32))
                .or_default()
                .add_term(scalar_exp, *c);
        }
        coeffs.retain(|_, p| !p.is_zero());
        FormalGroupLaw { kind: FglKind::Hyperbolic, degree, coeffs }
    }

    /// A law given by an explicit coefficient table, validated for the unit,
    /// commutativity and associativity axioms through `degree`.
    pub fn custom(degree: u32, table: &[(u32, u32, Poly)]) -> Result<Self> {
        let mut coeffs: BTreeMap<(u32, u32), Poly> = BTreeMap::new();
        for (i, j, c) in table {
            if i + j > degree {
                return Err(Error::Config(format!("coefficient ({i},{j}) beyond degree {degree}")));
            }
            coeffs.entry((*i, *j)).or_default().add_assign_ref(c);
        }
        coeffs.retain(|_, p| !p.is_zero());
        let f = FormalGroupLaw { kind: FglKind::Custom, degree, coeffs };
        f.check_unit().map_err(Error::Config)?;
        f.check_commutative().map_err(Error::Config)?;
        f.check_associative(degree).map_err(Error::Config)?;
        Ok(f)
    }

    pub fn with_degree(mut self, degree: u32) -> Self {
        if self.kind == FglKind::Hyperbolic {
            return Self::hyperbolic(degree);
        }
        if self.kind == FglKind::Custom {
            self.coeffs.retain(|(i, j), _| i + j <= degree);
        }
        self.degree = degree;
        self
    }

    pub fn kind(&self) -> FglKind {
        self.kind
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coefficient(&self, i: u32, j: u32) -> Poly {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn coefficients(&self) -> &BTreeMap<(u32, u32), Poly> {
        &self.coeffs
    }

    /// Laws whose series `F(x, y)` is a polynomial, known exactly.
    pub fn is_polynomial(&self) -> bool {
        matches!(self.kind, FglKind::Additive | FglKind::Multiplicative | FglKind::Connective)
    }

    /// The parameter `c` when `F = x + y - c xy + (higher terms)`; i.e.
    /// `-a_11`.
    pub fn c_parameter(&self) -> Poly {
        -&self.coefficient(1, 1)
    }

    pub fn check_unit(&self) -> std::result::Result<(), String> {
        for (&(i, j), c) in &self.coeffs {
            let ok = match (i, j) {
                (1, 0) | (0, 1) => *c == Poly::one(),
                (0, _) | (_, 0) => false,
                _ => true,
            };
            if !ok {
                return Err(format!("unit axiom fails at a_({i},{j}) = {}", c.scalar_string()));
            }
        }
        if self.coefficient(1, 0) != Poly::one() || self.coefficient(0, 1) != Poly::one() {
            return Err("a_10 and a_01 must be 1".into());
        }
        Ok(())
    }

    pub fn check_commutative(&self) -> std::result::Result<(), String> {
        for (&(i, j), c) in &self.coeffs {
            if self.coefficient(j, i) != *c {
                return Err(format!("a_({i},{j}) != a_({j},{i})"));
            }
        }
        Ok(())
    }

    /// `F(F(x,y),z) = F(x,F(y,z))` through total degree `n`.
    pub fn check_associative(&self, n: u32) -> std::result::Result<(), String> {
        let law = if self.kind == FglKind::Custom { self.clone() } else { self.clone().with_degree(n.max(1)) };
        let x = Series::new(Poly::var(0), n);
        let y = Series::new(Poly::var(1), n);
        let z = Series::new(Poly::var(2), n);
        let lhs = law.add(&law.add(&x, &y).map_err(|e| e.to_string())?, &z).map_err(|e| e.to_string())?;
        let rhs = law.add(&x, &law.add(&y, &z).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let diff = (&lhs.poly - &rhs.poly).truncate(n as i32);
        if diff.is_zero() {
            Ok(())
        } else {
            Err(format!("associativity fails through degree {n}: {diff}"))
        }
    }

    fn working_prec(&self, a: u32, b: u32) -> u32 {
        let p = a.min(b);
        if self.is_polynomial() {
            p
        } else {
            p.min(self.degree)
        }
    }

    /// `F(p, q)`.
    pub fn add(&self, p: &Series, q: &Series) -> Result<Series> {
        let prec = self.working_prec(p.prec, q.prec);
        if prec == 0 {
            return Err(Error::PrecisionUnderflow("formal sum at degree 0".into()));
        }
        let t = trunc_opt(prec);
        if p.poly.is_zero() {
            return Ok(Series::new(q.poly.clone(), prec));
        }
        if q.poly.is_zero() {
            return Ok(Series::new(p.poly.clone(), prec));
        }
        let max_i = self.coeffs.keys().map(|k| k.0).max().unwrap_or(1);
        let max_j = self.coeffs.keys().map(|k| k.1).max().unwrap_or(1);
        let mut pp = vec![Poly::one()];
        for k in 1..=max_i as usize {
            let next = pp[k - 1].mul_trunc(&p.poly, t);
            pp.push(next);
        }
        let mut qp = vec![Poly::one()];
        for k in 1..=max_j as usize {
            let next = qp[k - 1].mul_trunc(&q.poly, t);
            qp.push(next);
        }
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.coeffs {
            let term = pp[i as usize].mul_trunc(&qp[j as usize], t).mul_trunc(c, t);
            out.add_assign_ref(&term);
        }
        Ok(Series::new(out, prec))
    }

    /// Coefficients `b_k` (parameter polynomials) of the inverse series
    /// `i(x) = sum b_k x^k` with `F(x, i(x)) = 0`, through degree `n`.
    pub fn inverse_coefficients(&self, n: u32) -> Vec<Poly> {
        // fixed point i <- i - F(x, i) gains one correct degree per step
        let x = Series::new(Poly::var(0), n);
        let mut inv = Series::new(Poly::var(0).scale(-1), n);
        let law = FormalGroupLaw { degree: self.degree.max(n), ..self.clone() };
        for _ in 0..n {
            let f = law.add(&x, &inv).expect("positive precision");
            inv = Series::new(&inv.poly - &f.poly, n);
        }
        let mut out = vec![Poly::zero(); n as usize + 1];
        for (e, c) in inv.poly.terms() {
            let mut s: Exp = ZERO_EXP;
            s[VAR_C] = e[VAR_C];
            s[VAR_A] = e[VAR_A];
            out[e[0] as usize].add_term(s, *c);
        }
        out
    }

    /// The formal inverse `i(p)` with `F(p, i(p)) = 0`.
    pub fn inverse(&self, p: &Series) -> Result<Series> {
        if p.poly.constant_term() != 0 || p.poly.terms().any(|(e, _)| crate::poly::lattice_degree(e) == 0) {
            return Err(Error::PrecisionUnderflow("inverse needs zero constant term".into()));
        }
        if self.kind == FglKind::Additive {
            return Ok(Series::new(-&p.poly, p.prec));
        }
        let prec = if self.is_polynomial() && p.prec != INF {
            p.prec
        } else {
            p.prec.min(self.degree)
        };
        if prec == 0 {
            return Err(Error::PrecisionUnderflow("inverse at degree 0".into()));
        }
        let b = self.inverse_coefficients(prec);
        Ok(Series::new(compose(&b, &p.poly, prec), prec))
    }

    /// `[m](p)`: the formal sum of `m` copies of `p` (negative `m` uses the
    /// inverse).
    pub fn multiple(&self, m: i32, p: &Series) -> Result<Series> {
        if m == 0 {
            return Ok(Series::zero());
        }
        let base = if m < 0 { self.inverse(p)? } else { p.clone() };
        let mut acc = base.clone();
        for _ in 1..m.unsigned_abs() {
            acc = self.add(&acc, &base)?;
        }
        Ok(acc)
    }

    /// Specializes the parameter `c` to an integer.
    pub fn specialize_c(&self, value: i128) -> FormalGroupLaw {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| (*k, c.eval_var(VAR_C, value)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let kind = match (self.kind, value) {
            (FglKind::Connective, 0) => FglKind::Additive,
            (FglKind::Connective, 1) => FglKind::Multiplicative,
            (k, _) => k,
        };
        FormalGroupLaw { kind, degree: self.degree, coeffs }
    }
}

/// `sum b_k p^k` truncated at `prec`.
pub fn compose(b: &[Poly], p: &Poly, prec: u32) -> Poly {
    let t = Some(prec as i32);
    let mut out = Poly::zero();
    let mut power = Poly::one();
    for (k, bk) in b.iter().enumerate() {
        if k > 0 {
            power = power.mul_trunc(p, t);
        }
        if !bk.is_zero() {
            out.add_assign_ref(&power.mul_trunc(bk, t));
        }
    }
    out
}
