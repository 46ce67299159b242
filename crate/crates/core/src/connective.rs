//! The connective law `F_c(x, y) = x + y - cxy`: word independence of both
//! families, `Y_{w0}`, the `X`/`Y` change of basis, the recursions for the
//! `b` coefficients and the Hecke action on the dual bases.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::fada::{Expansion, Fada, Family, TElem};
use crate::formal_group::{FglKind, Series};
use crate::loc::Loc;
use crate::poly::{Poly, VAR_C};
use crate::root_system::{AffElem, LVec};

/// Outcome of comparing a computed object with its closed form.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub checked: usize,
    pub failed: Vec<String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failed.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed.push(what());
        }
    }

    fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failed.extend(other.failed);
    }
}

pub struct Connective {
    fada: Arc<Fada>,
    window: u32,
    x_table: Expansion,
    y_table: Expansion,
}

fn neg_lvec(v: &LVec) -> LVec {
    let mut out = *v;
    for x in out.iter_mut() {
        *x = -*x;
    }
    out
}

fn sign(len: u32) -> i128 {
    if len % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Connective {
    /// Fails with `UnsupportedTheory` unless the law is `F_c` or one of its
    /// specializations `c = 0, 1`.
    pub fn new(fada: Arc<Fada>, window: u32) -> Result<Self> {
        match fada.ring().fgl().kind() {
            FglKind::Connective | FglKind::Additive | FglKind::Multiplicative => {}
            k => return Err(Error::UnsupportedTheory(format!("{k:?} is not a connective law"))),
        }
        let x_table = fada.eta_in_basis(Family::X, window)?;
        let y_table = fada.eta_in_basis(Family::Y, window)?;
        Ok(Connective { fada, window, x_table, y_table })
    }

    pub fn fada(&self) -> &Fada {
        &self.fada
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn table(&self, family: Family) -> &Expansion {
        match family {
            Family::X => &self.x_table,
            Family::Y => &self.y_table,
        }
    }

    fn c(&self) -> Series {
        self.fada.ring().c_param()
    }

    /// `𝔠^k` for `k ≥ 0`.
    fn c_pow(&self, k: u32) -> Series {
        let r = self.fada.ring();
        r.pow(&self.c(), k)
    }

    fn signed_c_pow(&self, eps: i128, k: u32) -> Loc {
        let r = self.fada.ring();
        let s = self.c_pow(k);
        r.loc(if eps < 0 { r.neg(&s) } else { s })
    }

    pub fn y_op(&self, i: usize) -> TElem {
        self.fada.y_elem(i)
    }

    pub fn y_word(&self, word: &[u8]) -> Result<Arc<TElem>> {
        self.fada.family_word(Family::Y, word)
    }

    /// Products along every reduced word of each `w` in the window agree.
    pub fn word_independence(&self, family: Family) -> Result<CheckReport> {
        let rs = self.fada.rs();
        let mut rep = CheckReport::default();
        for w in rs.elements_up_to(self.window) {
            let words = rs.all_reduced_words(&w);
            let first = self.fada.family_word(family, &words[0])?;
            for word in &words[1..] {
                let other = self.fada.family_word(family, word)?;
                rep.record(self.fada.equal(&first, &other), || format!("{:?} vs {word:?}", words[0]));
            }
        }
        Ok(rep)
    }

    /// `X_i^2 = κX_i` and `Y_i^2 = 𝔠Y_i` for every affine index.
    pub fn quadratic_relations(&self) -> CheckReport {
        let f = &self.fada;
        let r = f.ring();
        let c = r.loc(self.c());
        let mut rep = CheckReport::default();
        for i in 0..=f.rs().rank() {
            let y = self.y_op(i);
            rep.record(f.equal(&f.mul(&y, &y), &f.lscale(&c, &y)), || format!("Y_{i}^2"));
            let x = f.demazure(i);
            rep.record(f.equal(&f.mul(&x, &x), &f.lscale(&c, &x)), || format!("X_{i}^2"));
        }
        rep
    }

    /// `Y_{w0}` as the product along a reduced word of `w0`.
    pub fn y_w0(&self) -> Arc<TElem> {
        let rs = self.fada.rs();
        let w0 = rs.finite(rs.w0());
        self.fada.basis(Family::Y, &w0)
    }

    /// `Σ_{w ∈ W} η_w (1/x_Φ)` with `x_Φ = Π_{α<0} x_α`.
    pub fn y_w0_sum(&self) -> TElem {
        let f = &self.fada;
        let r = f.ring();
        let rs = f.rs();
        let n = rs.rank();
        let mut inv = r.loc_one();
        for a in rs.positive_roots() {
            let mut v = [0; crate::poly::LAT];
            v[..n].copy_from_slice(&a[..n]);
            inv = r.lmul(&inv, &r.inv_x(&neg_lvec(&v)));
        }
        let mut out = f.zero();
        for w in rs.finite_elements() {
            let x = rs.finite(w);
            out = f.add(&out, &f.mul(&f.eta(&x), &f.scalar(inv.clone())));
        }
        out
    }

    /// `X_w Y_{w0} = 0` for `e ≠ w ∈ W`.
    pub fn annihilates_y_w0(&self) -> CheckReport {
        let f = &self.fada;
        let rs = f.rs();
        let y = self.y_w0();
        let mut rep = CheckReport::default();
        for w in rs.finite_elements() {
            let x = rs.finite(w);
            if rs.length(&x) == 0 {
                continue;
            }
            let z = f.mul(&f.basis(Family::X, &x), &y);
            rep.record(z.is_zero(), || format!("X_{:?} Y_w0", f.word_of(&x)));
        }
        rep
    }

    /// `X_w = Σ_{v ≤ w} ε_v 𝔠^{ℓ(w)-ℓ(v)} Y_v` for `w` in the window.
    pub fn x_to_y(&self, w: &AffElem) -> TElem {
        let f = &self.fada;
        let rs = f.rs();
        let lw = rs.length(w);
        let mut out = f.zero();
        for v in rs.elements_up_to(lw) {
            if !rs.bruhat_le(&v, w) {
                continue;
            }
            let lv = rs.length(&v);
            let k = self.signed_c_pow(sign(lv), lw - lv);
            out = f.add(&out, &f.lscale(&k, &f.basis(Family::Y, &v)));
        }
        out
    }

    pub fn change_of_basis_check(&self) -> CheckReport {
        let f = &self.fada;
        let mut rep = CheckReport::default();
        for w in f.rs().elements_up_to(self.window) {
            let ok = f.equal(&f.basis(Family::X, &w), &self.x_to_y(&w));
            rep.record(ok, || format!("X_{:?}", f.word_of(&w)));
        }
        rep
    }
}

impl Connective {
    /// `b_{s_i u, v}` from the row of `u`, for `s_i u > u`.
    pub fn recursion_step(&self, family: Family, i: usize, row: &BTreeMap<AffElem, Series>) -> BTreeMap<AffElem, Series> {
        let f = &self.fada;
        let r = f.ring();
        let rs = f.rs();
        let si = rs.simple(i);
        let xi = r.x(&f.gamma(i));
        let cxi = r.sub(&r.one(), &r.mul(&self.c(), &xi));
        let zero = r.zero();
        let mut cands: Vec<AffElem> = Vec::new();
        for v in row.keys() {
            cands.push(*v);
            cands.push(rs.mul(&si, v));
        }
        cands.sort();
        cands.dedup();
        let mut out = BTreeMap::new();
        for v in cands {
            let sv = rs.mul(&si, &v);
            let b = r.act(&si, row.get(&v).unwrap_or(&zero));
            let up = rs.length(&sv) > rs.length(&v);
            let val = match (family, up) {
                (Family::X, true) => b,
                (Family::X, false) => {
                    let bs = r.act(&si, row.get(&sv).unwrap_or(&zero));
                    r.sub(&r.mul(&cxi, &b), &r.mul(&xi, &bs))
                }
                (Family::Y, true) => r.mul(&cxi, &b),
                (Family::Y, false) => {
                    let bs = r.act(&si, row.get(&sv).unwrap_or(&zero));
                    r.add(&b, &r.mul(&xi, &bs))
                }
            };
            if !val.poly.is_zero() {
                out.insert(v, val);
            }
        }
        out
    }

    /// The `b` table built from `b_{e,v} = δ_{e,v}` by the recursion alone.
    pub fn recursion_table(&self, family: Family) -> Expansion {
        let f = &self.fada;
        let r = f.ring();
        let rs = f.rs();
        let mut rows: BTreeMap<AffElem, BTreeMap<AffElem, Series>> = BTreeMap::new();
        for w in rs.elements_up_to(self.window) {
            let row = match (1..=rs.rank()).chain(0..1).find(|&i| rs.is_left_descent(i, &w)) {
                None => BTreeMap::from([(w, r.one())]),
                Some(i) => {
                    let u = rs.mul(&rs.simple(i), &w);
                    self.recursion_step(family, i, &rows[&u])
                }
            };
            rows.insert(w, row);
        }
        Expansion { window: self.window, rows }
    }

    /// The recursion against the triangular solve, row by row.
    pub fn recursion_check(&self, family: Family) -> CheckReport {
        let f = &self.fada;
        let r = f.ring();
        let rec = self.recursion_table(family);
        let solved = self.table(family);
        let zero = r.zero();
        let mut rep = CheckReport::default();
        for (w, row) in &solved.rows {
            let other = &rec.rows[w];
            let ok = row.keys().chain(other.keys()).all(|v| {
                let a = r.loc(row.get(v).unwrap_or(&zero).clone());
                let b = r.loc(other.get(v).unwrap_or(&zero).clone());
                r.leq(&a, &b)
            });
            rep.record(ok, || format!("{family:?} row {:?}", f.word_of(w)));
        }
        rep
    }

    /// `X_{-i} = (1/x_{-γ_i})(1 - η_{s_i})`.
    pub fn x_minus(&self, i: usize) -> TElem {
        let f = &self.fada;
        let r = f.ring();
        let d = f.sub(&f.one(), &f.eta(&f.rs().simple(i)));
        f.lscale(&r.inv_x(&neg_lvec(&f.gamma(i))), &d)
    }

    /// `Y_{-i} = 1/x_{γ_i} + (1/x_{-γ_i})η_{s_i}`.
    pub fn y_minus(&self, i: usize) -> TElem {
        let f = &self.fada;
        let r = f.ring();
        let g = f.gamma(i);
        let a = f.scalar(r.inv_x(&g));
        let b = f.scalar_eta(r.inv_x(&neg_lvec(&g)), &f.rs().simple(i));
        f.add(&a, &b)
    }

    pub fn minus_op(&self, family: Family, i: usize) -> TElem {
        match family {
            Family::X => self.x_minus(i),
            Family::Y => self.y_minus(i),
        }
    }

    /// `X*_v` (or `Y*_v`) on the full window.
    pub fn dual_basis(&self, family: Family, v: &AffElem) -> Dual {
        self.fada.dual_x(v, self.table(family))
    }

    /// `0` if `s_i v > v`, else `𝔠 g_v + g_{s_i v}`.
    fn hecke_rhs(&self, i: usize, v: &AffElem, g: impl Fn(&AffElem) -> Dual, window: u32) -> Dual {
        let f = &self.fada;
        let rs = f.rs();
        let sv = rs.mul(&rs.simple(i), v);
        if rs.length(&sv) > rs.length(v) {
            return f.dual_zero(window);
        }
        let c = f.ring().loc(self.c());
        f.dual_add(&f.dual_scale(&c, &g(v)), &g(&sv))
    }

    /// `X_{-i} ⊙ X*_v` (or `Y_{-i} ⊙ Y*_v`) against the closed form.
    pub fn hecke_check(&self, family: Family) -> Result<CheckReport> {
        let f = &self.fada;
        let mut rep = CheckReport::default();
        for i in 0..=f.rs().rank() {
            let op = self.minus_op(family, i);
            for v in f.rs().elements_up_to(self.window) {
                let lhs = f.odot(&op, &self.dual_basis(family, &v))?;
                let rhs = self.hecke_rhs(i, &v, |u| self.dual_basis(family, u), lhs.window);
                rep.record(f.dual_eq(&lhs, &rhs), || format!("{family:?}_-{i} on {:?}", f.word_of(&v)));
            }
        }
        Ok(rep)
    }

    /// `Y_{-i} ⊙ (Y_{w0} • Y*_v)` for minimal `v`.
    pub fn hecke_invariant_check(&self) -> Result<CheckReport> {
        let f = &self.fada;
        let rs = f.rs();
        let mut rep = CheckReport::default();
        let img = |u: &AffElem| self.bullet_y_w0(&self.dual_basis(Family::Y, u));
        for i in 0..=rs.rank() {
            let op = self.y_minus(i);
            for v in rs.elements_up_to(self.window).into_iter().filter(|v| rs.is_minimal(v)) {
                let lhs = f.odot(&op, &img(&v)?)?;
                let sv = rs.mul(&rs.simple(i), &v);
                let rhs = if rs.length(&sv) > rs.length(&v) {
                    f.dual_zero(lhs.window)
                } else {
                    let c = f.ring().loc(self.c());
                    f.dual_add(&f.dual_scale(&c, &img(&v)?), &img(&sv)?)
                };
                rep.record(f.dual_eq(&lhs, &rhs), || format!("Y_-{i} on Y_w0•Y*_{:?}", f.word_of(&v)));
            }
        }
        Ok(rep)
    }

    pub fn bullet_y_w0(&self, g: &Dual) -> Result<Dual> {
        self.fada.bullet(&self.y_w0(), g)
    }
}

/// Dense coefficients in `𝔠` of a scalar, if it is a polynomial in `𝔠` alone.
fn dense_in_c(p: &Poly) -> Option<Vec<i128>> {
    let mut out = Vec::new();
    for (e, &k) in p.terms() {
        if e.iter().enumerate().any(|(j, &x)| j != VAR_C && x != 0) || e[VAR_C] < 0 {
            return None;
        }
        let d = e[VAR_C] as usize;
        if out.len() <= d {
            out.resize(d + 1, 0);
        }
        out[d] += k;
    }
    trim(&mut out);
    Some(out)
}

fn trim(p: &mut Vec<i128>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn dense_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn dense_sub(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn dense_div_exact(a: &[i128], b: &[i128]) -> Option<Vec<i128>> {
    let mut rem = a.to_vec();
    if rem.is_empty() {
        return Some(Vec::new());
    }
    if b.len() > rem.len() {
        return None;
    }
    let lead = *b.last()?;
    let mut q = vec![0i128; rem.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let top = rem[k + b.len() - 1];
        if top % lead != 0 {
            return None;
        }
        let t = top / lead;
        q[k] = t;
        for (j, y) in b.iter().enumerate() {
            rem[k + j] -= t * y;
        }
    }
    if rem.iter().any(|&x| x != 0) {
        return None;
    }
    trim(&mut q);
    Some(q)
}

/// Fraction-free elimination over `Z[𝔠]`.
pub fn determinant_in_c(m: &[Vec<Vec<i128>>]) -> Vec<i128> {
    let n = m.len();
    if n == 0 {
        return vec![1];
    }
    let mut a = m.to_vec();
    let mut prev = vec![1i128];
    let mut neg = false;
    for k in 0..n {
        if a[k][k].is_empty() {
            match (k + 1..n).find(|&i| !a[i][k].is_empty()) {
                Some(i) => {
                    a.swap(k, i);
                    neg = !neg;
                }
                None => return Vec::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = dense_sub(&dense_mul(&a[i][j], &a[k][k]), &dense_mul(&a[i][k], &a[k][j]));
                a[i][j] = dense_div_exact(&t, &prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let mut d = a[n - 1][n - 1].clone();
    if neg {
        d.iter_mut().for_each(|x| *x = -*x);
    }
    d
}

/// Determinant of the transition matrix from `{X*_v}` to the images of the
/// dual basis under `Y_{w0} •`, both indexed by minimal elements.
#[derive(Clone, Debug, Serialize)]
pub struct Transition {
    pub family: String,
    pub size: usize,
    /// Coefficients of the determinant in increasing powers of `𝔠`.
    pub determinant: Vec<i128>,
    /// `Some((sign, k))` when the determinant is `±𝔠^k`.
    pub monomial: Option<(i128, usize)>,
}

impl Connective {
    fn w0_len(&self) -> u32 {
        let rs = self.fada.rs();
        rs.w_len(rs.w0())
    }

    /// `ε_{u2} 𝔠^{ℓ(w0)-ℓ(u2)} X*_{u1}` for `u = u1 u2`.
    pub fn bullet_x_closed(&self, u: &AffElem) -> Dual {
        let f = &self.fada;
        let rs = f.rs();
        let (u1, u2) = rs.coset_decompose(u);
        let l2 = rs.w_len(u2);
        let k = self.signed_c_pow(sign(l2), self.w0_len() - l2);
        let mut out = f.dual_scale(&k, &self.dual_basis(Family::X, &u1));
        out.window = self.window - self.w0_len();
        out
    }

    /// `Σ_{v1 v2 ≥ w} ε_w ε_{v2} 𝔠^{ℓ(v1)+ℓ(w0)-ℓ(w)} X*_{v1}`.
    pub fn bullet_y_closed(&self, w: &AffElem) -> Dual {
        let f = &self.fada;
        let rs = f.rs();
        let window = self.window - self.w0_len();
        let lw = rs.length(w);
        let mut out = f.dual_zero(window);
        for v1 in rs.elements_up_to(window).into_iter().filter(|v| rs.is_minimal(v)) {
            let mut total: i128 = 0;
            for v2 in rs.finite_elements() {
                if rs.bruhat_le(w, &rs.mul(&v1, &rs.finite(v2))) {
                    total += sign(rs.w_len(v2));
                }
            }
            if total == 0 {
                continue;
            }
            let l1 = rs.length(&v1);
            let r = f.ring();
            let s = r.mul(&r.scalar(Poly::constant(total * sign(lw))), &self.c_pow(l1 + self.w0_len() - lw));
            out = f.dual_add(&out, &f.dual_scale(&r.loc(s), &self.dual_basis(Family::X, &v1)));
            out.window = window;
        }
        out
    }

    /// `Y_{w0} • X*_u` and `Y_{w0} • Y*_w` against their closed forms, and
    /// `W`-invariance of every image.
    pub fn bullet_check(&self) -> Result<CheckReport> {
        let f = &self.fada;
        let rs = f.rs();
        let mut rep = CheckReport::default();
        for u in rs.elements_up_to(self.window) {
            let lhs = self.bullet_y_w0(&self.dual_basis(Family::X, &u))?;
            rep.record(f.dual_eq(&lhs, &self.bullet_x_closed(&u)), || format!("Y_w0•X*_{:?}", f.word_of(&u)));
            rep.record(f.is_w_invariant(&lhs), || format!("Y_w0•X*_{:?} invariant", f.word_of(&u)));
            let lhs = self.bullet_y_w0(&self.dual_basis(Family::Y, &u))?;
            rep.record(f.dual_eq(&lhs, &self.bullet_y_closed(&u)), || format!("Y_w0•Y*_{:?}", f.word_of(&u)));
            rep.record(f.is_w_invariant(&lhs), || format!("Y_w0•Y*_{:?} invariant", f.word_of(&u)));
        }
        Ok(rep)
    }

    /// Coefficients of `Y_{w0} • g_w` on `X*_v`, for minimal `v, w` with
    /// `ℓ ≤ window - ℓ(w0)`.
    pub fn transition(&self, family: Family) -> Result<Transition> {
        let f = &self.fada;
        let rs = f.rs();
        let window = self.window - self.w0_len();
        let mins: Vec<AffElem> = rs.elements_up_to(window).into_iter().filter(|v| rs.is_minimal(v)).collect();
        let mut m = Vec::new();
        for w in &mins {
            let img = self.bullet_y_w0(&self.dual_basis(family, w))?;
            let mut row = Vec::new();
            for v in &mins {
                let e = f.evaluate(&img, &f.basis(Family::X, v))?;
                let s = f.ring().in_s(&e).and_then(|s| dense_in_c(&s.poly)).ok_or_else(|| {
                    Error::ShapeViolation(format!("transition entry at {:?} is not a polynomial in c", f.word_of(v)))
                })?;
                row.push(s);
            }
            m.push(row);
        }
        let det = determinant_in_c(&m);
        let nz: Vec<(usize, i128)> = det.iter().copied().enumerate().filter(|(_, x)| *x != 0).collect();
        let monomial = match nz.as_slice() {
            [(k, s)] if s.abs() == 1 => Some((*s, *k)),
            _ => None,
        };
        Ok(Transition { family: format!("{family:?}"), size: mins.len(), determinant: det, monomial })
    }

    /// Every check of the module at once.
    pub fn full_check(&self) -> Result<CheckReport> {
        let mut rep = CheckReport::default();
        rep.merge(self.word_independence(Family::X)?);
        rep.merge(self.word_independence(Family::Y)?);
        rep.merge(self.quadratic_relations());
        rep.merge(self.annihilates_y_w0());
        rep.merge(self.change_of_basis_check());
        rep.merge(self.recursion_check(Family::X));
        rep.merge(self.recursion_check(Family::Y));
        rep.merge(self.hecke_check(Family::X)?);
        rep.merge(self.hecke_check(Family::Y)?);
        rep.merge(self.hecke_invariant_check()?);
        rep.merge(self.bullet_check()?);
        let f = &self.fada;
        rep.record(f.equal(&self.y_w0(), &self.y_w0_sum()), || "Y_w0 sum".into());
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fga::{Ring, Torus};
    use crate::formal_group::FormalGroupLaw;
    use crate::root_system::RootSystem;

    fn conn(ty: &str, torus: Torus, fgl: FormalGroupLaw, window: u32) -> Connective {
        let rs = Arc::new(RootSystem::from_type(ty).unwrap());
        let ring = Arc::new(Ring::new(rs, torus, fgl));
        Connective::new(Arc::new(Fada::new(ring)), window).unwrap()
    }

    fn a1(fgl: FormalGroupLaw, window: u32) -> Connective {
        conn("A1", Torus::Small, fgl, window)
    }

    #[test]
    fn other_laws_are_rejected() {
        let rs = Arc::new(RootSystem::from_type("A1").unwrap());
        let ring = Arc::new(Ring::new(rs, Torus::Small, FormalGroupLaw::hyperbolic(6)));
        let err = Connective::new(Arc::new(Fada::new(ring)), 2).err().unwrap();
        assert!(matches!(err, Error::UnsupportedTheory(_)));
    }

    #[test]
    fn first_recursion_step() {
        let c = a1(FormalGroupLaw::connective(), 2);
        let f = c.fada();
        let r = f.ring();
        let rs = f.rs();
        let e = rs.identity();
        let s1 = rs.simple(1);
        let x1 = r.x(&f.gamma(1));
        let start = BTreeMap::from([(e, r.one())]);
        let row = c.recursion_step(Family::X, 1, &start);
        assert_eq!(row[&e], r.one());
        assert_eq!(row[&s1], r.neg(&x1));
        let row = c.recursion_step(Family::Y, 1, &start);
        assert_eq!(row[&e], r.sub(&r.one(), &r.mul(&r.c_param(), &x1)));
        assert_eq!(row[&s1], x1);
    }

    #[test]
    fn everything_holds_on_small_windows() {
        for (ty, torus, w) in [("A1", Torus::Small, 6), ("A1", Torus::Big, 4), ("A2", Torus::Small, 4)] {
            for fgl in [FormalGroupLaw::connective(), FormalGroupLaw::additive(), FormalGroupLaw::multiplicative()] {
                let c = conn(ty, torus, fgl, w);
                let rep = c.full_check().unwrap();
                assert!(rep.ok(), "{ty} {torus:?}: {:?}", rep.failed);
            }
        }
    }

    #[test]
    fn bullet_on_s1_is_minus_x_star_e() {
        let c = a1(FormalGroupLaw::connective(), 4);
        let f = c.fada();
        let rs = f.rs();
        let lhs = c.bullet_y_w0(&c.dual_basis(Family::X, &rs.simple(1))).unwrap();
        let want = f.dual_scale(&f.ring().loc(f.ring().scalar(Poly::constant(-1))), &c.dual_basis(Family::X, &rs.identity()));
        assert!(f.dual_eq(&lhs, &want));
        let u = rs.simple(0);
        let lhs = c.bullet_y_w0(&c.dual_basis(Family::X, &u)).unwrap();
        let want = f.dual_scale(&f.ring().loc(f.ring().c_param()), &c.dual_basis(Family::X, &u));
        assert!(f.dual_eq(&lhs, &want));
    }

    #[test]
    fn additive_hecke_action_moves_down() {
        let c = a1(FormalGroupLaw::additive(), 5);
        let f = c.fada();
        let rs = f.rs();
        let v = rs.from_word(&[1, 0, 1]);
        let lhs = f.odot(&c.x_minus(1), &c.dual_basis(Family::X, &v)).unwrap();
        assert!(f.dual_eq(&lhs, &c.dual_basis(Family::X, &rs.from_word(&[0, 1]))));
    }

    #[test]
    fn x_minus_is_conjugate_by_w0() {
        for ty in ["A1", "A2"] {
            let c = conn(ty, Torus::Small, FormalGroupLaw::connective(), 1);
            let f = c.fada();
            let rs = f.rs();
            let w0 = f.eta(&rs.finite(rs.w0()));
            for i in 1..=rs.rank() {
                let conj = f.mul(&f.mul(&w0, &f.demazure(i)), &w0);
                let istar = (1..=rs.rank()).find(|&j| rs.w_root(rs.w0(), &rs.simple_root(i)) == crate::root_system::negate(&rs.simple_root(j))).unwrap();
                assert!(f.equal(&conj, &c.x_minus(istar)), "{ty} {i}");
            }
        }
    }

    #[test]
    fn x_star_images_form_a_basis_iff_c_is_a_unit() {
        for (ty, w) in [("A1", 6), ("A2", 5)] {
            let c = conn(ty, Torus::Small, FormalGroupLaw::connective(), w);
            let t = c.transition(Family::X).unwrap();
            let rs = c.fada().rs();
            let k = t.size * rs.w_len(rs.w0()) as usize;
            assert_eq!(t.monomial, Some((1, k)), "{ty}");
        }
    }

    #[test]
    fn y_star_images_vanish_on_minimal_elements() {
        for (ty, w) in [("A1", 6), ("A2", 5)] {
            let c = conn(ty, Torus::Small, FormalGroupLaw::connective(), w);
            let f = c.fada();
            let rs = f.rs();
            for u in rs.elements_up_to(w - rs.w_len(rs.w0())).into_iter().filter(|u| rs.is_minimal(u)) {
                let img = c.bullet_y_w0(&c.dual_basis(Family::Y, &u)).unwrap();
                assert!(img.coeffs.is_empty(), "{ty} {:?}", f.word_of(&u));
                assert!(c.bullet_y_closed(&u).coeffs.is_empty());
            }
            assert!(c.transition(Family::Y).unwrap().determinant.is_empty());
        }
    }

    #[test]
    fn determinant_of_small_matrices() {
        let m = vec![vec![vec![0, 1], vec![1]], vec![vec![2], vec![0, 0, 1]]];
        assert_eq!(determinant_in_c(&m), vec![-2, 0, 0, 1]);
        let m = vec![vec![vec![], vec![1]], vec![vec![1], vec![]]];
        assert_eq!(determinant_in_c(&m), vec![-1]);
    }
}
